"""The BWP indicator field of non-fallback DCI, end to end.

The field width and meaning depend only on how many RRC-configured BWPs
exist besides the initial one. With four, BWP #0 loses its codepoint.
"""

from bwpsim import (
    IndicatorContext,
    InvalidCodepoint,
    Unaddressable,
    decode_indicator,
    encode_indicator,
    indicator_bitwidth,
)

print("extra BWPs | width | codepoint -> BWP id")
print("-----------+-------+---------------------")
for n in range(5):
    ctx = IndicatorContext(n)
    width = indicator_bitwidth(ctx)
    mapping = []
    for k in range(2**width):
        bits = format(k, f"0{width}b") if width else ""
        try:
            mapping.append(f"{bits or '(absent)'}->{decode_indicator(bits, ctx)}")
        except InvalidCodepoint:
            mapping.append(f"{bits}->reserved")
    print(f"{n:>10} | {width:>5} | {', '.join(mapping)}")

print()
print("Round trips:")
for n in range(5):
    ctx = IndicatorContext(n)
    ids = []
    for target in range(5):
        try:
            bits = encode_indicator(target, ctx)
        except Unaddressable:
            continue
        assert decode_indicator(bits, ctx) == target
        ids.append(target)
    print(f"  {n} extra BWPs: addressable ids {ids}")

print()
print("With four extra BWPs the initial BWP is unreachable by DCI:")
try:
    encode_indicator(0, IndicatorContext(4))
except Unaddressable as exc:
    print("  Unaddressable:", exc)
