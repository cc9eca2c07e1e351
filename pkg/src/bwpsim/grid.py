"""Numerology and resource-block frequency arithmetic for NR carriers.

Everything here is a pure function over immutable values. Absolute
frequencies are kept in integer Hz, and span midpoints are exact rationals
(denominator at most 2), so center-frequency equality checks are exact and
never depend on floating-point rounding.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

SUBCARRIERS_PER_RB = 12

# Configuration floor/ceiling for a bandwidth part, in resource blocks.
MIN_BWP_RBS = 1
MAX_BWP_RBS = 275


class CyclicPrefix(Enum):
    NORMAL = "normal"
    EXTENDED = "extended"


class FrequencyRange(Enum):
    """NR frequency ranges. UNASSIGNED covers spectrum outside FR1/FR2."""

    FR1 = "FR1"
    FR2 = "FR2"
    UNASSIGNED = "Unassigned"

    @property
    def bounds_mhz(self) -> tuple[float, float]:
        if self is FrequencyRange.FR1:
            return (410.0, 7125.0)
        if self is FrequencyRange.FR2:
            return (24250.0, 52600.0)
        raise ValueError("unassigned spectrum has no defined bounds")

    @property
    def tick_ms(self) -> Fraction:
        """Timer granularity: one subframe for FR1, half a subframe for FR2."""
        if self is FrequencyRange.FR1:
            return Fraction(1)
        if self is FrequencyRange.FR2:
            return Fraction(1, 2)
        raise ValueError("unassigned spectrum has no timer granularity")


@dataclass(frozen=True)
class Numerology:
    """Subcarrier-spacing index mu; SCS is 15 * 2**mu kHz."""

    mu: int

    def __post_init__(self) -> None:
        if not isinstance(self.mu, int) or not 0 <= self.mu <= 4:
            raise ValueError(f"mu must be an integer in [0, 4], got {self.mu!r}")

    @property
    def scs_khz(self) -> int:
        return 15 * 2**self.mu

    @property
    def scs_hz(self) -> int:
        return 15_000 * 2**self.mu

    @property
    def slot_length_ms(self) -> Fraction:
        return Fraction(1, 2**self.mu)

    @property
    def rb_width_hz(self) -> int:
        return SUBCARRIERS_PER_RB * self.scs_hz


@dataclass(frozen=True)
class HzSpan:
    """Half-open-free frequency interval [low_hz, high_hz] in integer Hz."""

    low_hz: int
    high_hz: int

    def __post_init__(self) -> None:
        if self.low_hz >= self.high_hz:
            raise ValueError(f"span must have low < high, got [{self.low_hz}, {self.high_hz}]")

    @property
    def width_hz(self) -> int:
        return self.high_hz - self.low_hz

    def contains(self, inner: "HzSpan") -> bool:
        return self.low_hz <= inner.low_hz and inner.high_hz <= self.high_hz

    @property
    def midpoint_hz(self) -> Fraction:
        return Fraction(self.low_hz + self.high_hz, 2)


@dataclass(frozen=True)
class BwpGeometry:
    """Frequency-domain shape of a bandwidth part.

    start_rb is the offset from Point A counted in this geometry's own RB
    width (12 subcarriers of its numerology). The upper RB-count bound
    (MAX_BWP_RBS) is a configuration rule and is checked by the validator,
    not here, so that over-sized configurations can still be loaded and
    reported on.
    """

    start_rb: int
    n_rbs: int
    numerology: Numerology
    cyclic_prefix: CyclicPrefix = CyclicPrefix.NORMAL

    def __post_init__(self) -> None:
        if self.start_rb < 0:
            raise ValueError(f"start_rb must be >= 0, got {self.start_rb}")
        if self.n_rbs < MIN_BWP_RBS:
            raise ValueError(f"n_rbs must be >= {MIN_BWP_RBS}, got {self.n_rbs}")
        if self.cyclic_prefix is CyclicPrefix.EXTENDED and self.numerology.mu != 2:
            raise ValueError("extended cyclic prefix is only defined for 60 kHz (mu=2)")

    def span(self, point_a_hz: int) -> HzSpan:
        low = point_a_hz + self.start_rb * self.numerology.rb_width_hz
        return HzSpan(low, low + self.n_rbs * self.numerology.rb_width_hz)

    def center_hz(self, point_a_hz: int) -> Fraction:
        return self.span(point_a_hz).midpoint_hz


def tdd_pair_compatible(point_a_hz: int, dl: BwpGeometry, ul: BwpGeometry) -> bool:
    """Whether a DL/UL geometry pair may share a BWP index on a TDD carrier.

    Index-linked TDD BWPs must sit on exactly the same center frequency;
    their bandwidths may differ. Compared as exact rationals.
    """
    return dl.center_hz(point_a_hz) == ul.center_hz(point_a_hz)


def classify_frequency(f_mhz: float) -> FrequencyRange:
    """Map a frequency in MHz to FR1, FR2, or UNASSIGNED (the gap between)."""
    if f_mhz < 0:
        raise ValueError(f"frequency must be >= 0 MHz, got {f_mhz}")
    for fr in (FrequencyRange.FR1, FrequencyRange.FR2):
        low, high = fr.bounds_mhz
        if low <= f_mhz <= high:
            return fr
    return FrequencyRange.UNASSIGNED
