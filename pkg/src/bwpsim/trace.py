"""Trace records: the observable output of a simulation run.

One record per line when serialized (JSON objects with sorted keys), so
golden traces can be diffed byte-for-byte. Timestamps are exact rationals
rendered as minimal decimal strings; every time on the simulation clock
has a power-of-two denominator, so the rendering is always finite and
round-trips exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from typing import Any, Iterable, TextIO

# Record kinds
RUN_START = "RunStart"
RUN_END = "RunEnd"
STATE_CHANGE = "StateChange"
WINDOW_OPEN = "WindowOpen"
WINDOW_CLOSE = "WindowClose"
TIMER_START = "TimerStart"
TIMER_RESTART = "TimerRestart"
TIMER_EXPIRY = "TimerExpiry"
EVENT_REJECTED = "EventRejected"
DATA_SERVED = "DataServed"


class MalformedTrace(Exception):
    """A trace that violates ordering or is missing structural records."""


def ms_str(value: Fraction | int) -> str:
    """Render a millisecond value as a minimal exact decimal string."""
    frac = Fraction(value)
    num, den = frac.numerator, frac.denominator
    digits = 0
    d = den
    while d % 2 == 0:
        d //= 2
        digits += 1
    fives = 0
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        raise ValueError(f"{frac} has no finite decimal representation")
    digits = max(digits, fives)
    if digits == 0:
        return str(num)
    scaled = num * 10**digits // den
    sign = "-" if scaled < 0 else ""
    scaled = abs(scaled)
    whole, part = divmod(scaled, 10**digits)
    text = f"{sign}{whole}.{str(part).zfill(digits)}".rstrip("0").rstrip(".")
    return text if text not in ("", "-") else "0"


def parse_ms(value: Any) -> Fraction:
    """Parse a millisecond value from JSON (int, decimal float, or string).

    Floats go through their decimal repr so '0.3' means exactly 3/10 and
    can be checked against the tick grid rather than silently rounded.
    """
    if isinstance(value, bool):
        raise ValueError(f"not a time value: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(Decimal(repr(value)))
    if isinstance(value, str):
        return Fraction(Decimal(value))
    if isinstance(value, Fraction):
        return value
    raise ValueError(f"not a time value: {value!r}")


@dataclass
class TraceRecord:
    at_ms: Fraction
    cell: str
    record: str
    fields: dict[str, Any] = field(default_factory=dict)

    def to_obj(self) -> dict[str, Any]:
        obj: dict[str, Any] = {"at_ms": ms_str(self.at_ms), "cell": self.cell, "record": self.record}
        obj.update(self.fields)
        return obj

    def to_json(self) -> str:
        return json.dumps(self.to_obj(), sort_keys=True, separators=(", ", ": "))

    @classmethod
    def from_obj(cls, obj: dict[str, Any]) -> "TraceRecord":
        try:
            at_ms = parse_ms(obj["at_ms"])
            cell = obj["cell"]
            record = obj["record"]
        except (KeyError, ValueError) as exc:
            raise MalformedTrace(f"bad trace record {obj!r}: {exc}") from exc
        fields = {k: v for k, v in obj.items() if k not in ("at_ms", "cell", "record")}
        return cls(at_ms, cell, record, fields)


def write_trace(records: Iterable[TraceRecord], out: TextIO) -> None:
    for rec in records:
        out.write(rec.to_json())
        out.write("\n")


def read_trace(lines: Iterable[str]) -> list[TraceRecord]:
    records = []
    for lineno, line in enumerate(lines, 1):
        line = line.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise MalformedTrace(f"line {lineno}: not valid JSON: {exc}") from exc
        if not isinstance(obj, dict):
            raise MalformedTrace(f"line {lineno}: expected an object")
        records.append(TraceRecord.from_obj(obj))
    return records
