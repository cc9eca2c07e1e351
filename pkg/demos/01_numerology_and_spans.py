"""Walk through the frequency-domain building blocks.

Numerologies, resource-block spans anchored at Point A, center-frequency
pairing for unpaired spectrum, and frequency-range classification.
"""

from bwpsim import BwpGeometry, Numerology, classify_frequency, tdd_pair_compatible

print("=== Numerologies ===")
for mu in range(5):
    n = Numerology(mu)
    print(f"mu={mu}: SCS {n.scs_khz:>3} kHz, slot {str(n.slot_length_ms):>4} ms, "
          f"RB width {n.rb_width_hz/1e3:.0f} kHz")

print()
print("=== BWP spans above Point A (3.4 GHz carrier) ===")
point_a = 3_400_000_000
for label, geom in [
    ("initial 24 RB @ 15 kHz", BwpGeometry(0, 24, Numerology(0))),
    ("wide   270 RB @ 15 kHz", BwpGeometry(0, 270, Numerology(0))),
    ("narrow  52 RB @ 30 kHz, offset 10 RB", BwpGeometry(10, 52, Numerology(1))),
]:
    span = geom.span(point_a)
    print(f"{label}: [{span.low_hz/1e6:.3f}, {span.high_hz/1e6:.3f}] MHz, "
          f"width {span.width_hz/1e6:.3f} MHz, center {float(geom.center_hz(point_a))/1e6:.4f} MHz")

print()
print("=== TDD pairing: same center, any width ===")
wide = BwpGeometry(0, 100, Numerology(1))
nested = BwpGeometry(25, 50, Numerology(1))
shifted = BwpGeometry(0, 50, Numerology(1))
print("100 RB vs symmetric 50 RB:", tdd_pair_compatible(point_a, wide, nested))
print("100 RB vs same-start 50 RB:", tdd_pair_compatible(point_a, wide, shifted))

print()
print("=== Frequency ranges ===")
for mhz in (700, 3500, 10000, 28000, 60000):
    print(f"{mhz:>6} MHz -> {classify_frequency(mhz).value}")
