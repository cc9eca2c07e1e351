"""Per-serving-cell UE state machine for bandwidth-part switching.

One machine owns the runtime state of one cell: the active DL/UL BWP ids,
the inactivity timer, the random-access interlock, and at most one open
switch window at a time. Triggers are RRC (re-)configuration, SCell
activation, non-fallback DCI, timer expiry, and random-access initiation.

Timing semantics:

* A switch is not instantaneous. Each trigger opens a window whose length
  is the slot budget from the delay-requirement table (TS 38.133 style),
  taken at the smaller of the two subcarrier spacings involved; RRC adds
  the configured RRC processing delay on top. The new ids commit when the
  window ends, and the commit records carry the exact end time even when
  the driving tick lands later (the clock is exact rational milliseconds,
  so a 2.25 ms window commits at exactly 2.25 ms after it opened).
* While a window is open the UE neither transmits nor receives on the
  cell: every arriving event is rejected and traced, never queued.
* The inactivity timer decrements at subframe ends (1 ms) on FR1 and
  half-subframe ends (0.5 ms) on FR2, counting only whole periods since
  it was armed. It never runs on the default DL BWP or during random
  access; random access clears it and completion re-arms it. If it hits
  zero while a window is open, the switch to the default BWP is deferred
  to the window commit.
* 240 kHz BWPs take part in frequency math but have no switch-delay
  requirement, so any switch involving one is rejected.

Ties at one timestamp resolve in a fixed order (tick commits, then RRC,
then RACH, then DCI, then data), which the engine enforces; every method
here is synchronous and the whole machine is single-owner mutable state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional

from .config import (
    CellConfig,
    CellRole,
    DelayType,
    Duplex,
    UeCapability,
    dci_switch_available,
    effective_default_dl,
)
from .dci import DciEvent, Direction, IndicatorContext, IndicatorError, decode_indicator
from .grid import BwpGeometry
from .trace import (
    DATA_SERVED,
    EVENT_REJECTED,
    STATE_CHANGE,
    TIMER_EXPIRY,
    TIMER_RESTART,
    TIMER_START,
    WINDOW_CLOSE,
    WINDOW_OPEN,
    TraceRecord,
    ms_str,
)


class UnsupportedScs(Exception):
    """No switch-delay requirement exists for this subcarrier spacing."""


class EventRejection(Exception):
    """An event the machine refuses; the engine traces it and moves on."""

    def __init__(self, reason: str, detail: str = ""):
        self.reason = reason
        self.detail = detail
        super().__init__(f"{reason}: {detail}" if detail else reason)


class SwitchCause(Enum):
    RRC_RECONFIG = "RrcReconfig"
    FIRST_ACTIVE_ON_SCELL_ACTIVATION = "FirstActiveOnScellActivation"
    DCI = "Dci"
    TIMER_EXPIRY = "TimerExpiry"
    RACH_INITIATED = "RachInitiated"


# Switch delay requirement in slots of the governing SCS, per delay type.
SWITCH_DELAY_SLOTS: dict[int, dict[DelayType, int]] = {
    15: {DelayType.TYPE1: 1, DelayType.TYPE2: 3},
    30: {DelayType.TYPE1: 2, DelayType.TYPE2: 5},
    60: {DelayType.TYPE1: 3, DelayType.TYPE2: 9},
    120: {DelayType.TYPE1: 6, DelayType.TYPE2: 18},
}

_MU_BY_SCS = {15: 0, 30: 1, 60: 2, 120: 3}


@dataclass(frozen=True)
class SwitchDelaySpec:
    delay_type: DelayType
    slots: int
    duration_ms: Fraction


def _delay_for_scs(scs_khz_values: tuple[int, ...], delay_type: DelayType) -> SwitchDelaySpec:
    for scs in scs_khz_values:
        if scs not in SWITCH_DELAY_SLOTS:
            raise UnsupportedScs(f"no switch delay requirement for {scs} kHz")
    governing = min(scs_khz_values)
    slots = SWITCH_DELAY_SLOTS[governing][delay_type]
    slot_ms = Fraction(1, 2 ** _MU_BY_SCS[governing])
    return SwitchDelaySpec(delay_type, slots, slots * slot_ms)


def switch_delay(from_g: BwpGeometry, to_g: BwpGeometry, delay_type: DelayType) -> SwitchDelaySpec:
    """Delay budget for switching between two geometries.

    The requirement of the smaller SCS governs when the two differ.
    Raises UnsupportedScs when either side is 240 kHz.
    """
    return _delay_for_scs(
        (from_g.numerology.scs_khz, to_g.numerology.scs_khz), delay_type
    )


def switch_delay_khz(from_scs_khz: int, to_scs_khz: int, delay_type: DelayType) -> SwitchDelaySpec:
    """switch_delay on bare SCS values, for tooling."""
    return _delay_for_scs((from_scs_khz, to_scs_khz), delay_type)


@dataclass
class SwitchWindow:
    start_ms: Fraction
    end_ms: Fraction
    target_dl: Optional[int]
    target_ul: Optional[int]
    cause: SwitchCause


@dataclass
class BwpState:
    active_dl: int
    active_ul: Optional[int]
    timer_remaining_ms: Optional[Fraction] = None
    switch_window: Optional[SwitchWindow] = None
    rach_in_progress: bool = False


class CellStateMachine:
    """Mutable BWP state of one serving cell, advanced by the engine.

    Every handler returns the trace records it produced. Handlers that
    reject their event raise EventRejection before touching any state.
    """

    def __init__(self, cell: str, cfg: CellConfig, cap: UeCapability):
        self.cell = cell
        self.cfg = cfg
        self.cap = cap
        self.state = BwpState(active_dl=0, active_ul=0 if cfg.has_uplink else None)
        self._expiry_pending = False
        self._timer_next_decrement: Optional[Fraction] = None

    # ------------------------------------------------------------------
    # event handlers

    def on_rrc_reconfig(
        self,
        now: Fraction,
        first_active_dl: Optional[int] = None,
        first_active_ul: Optional[int] = None,
        *,
        scell_activation: bool = False,
    ) -> list[TraceRecord]:
        """Apply an RRC (re-)configuration or an SCell activation.

        SCell activation reads the first-active ids from the cell config;
        a reconfiguration carries them itself. Without any first-active id
        there is no switch. The window spans the RRC processing delay plus
        the switch delay budget.
        """
        st = self.state
        if st.switch_window is not None:
            raise EventRejection("EventDuringSwitchWindow", "RRC during an open switch window")
        if scell_activation:
            first_active_dl = self.cfg.first_active_dl
            first_active_ul = self.cfg.first_active_ul if self.cfg.has_uplink else None
        if first_active_dl is None and first_active_ul is None:
            return []
        if self.cfg.duplex is Duplex.TDD and self.cfg.has_uplink:
            ids = {x for x in (first_active_dl, first_active_ul) if x is not None}
            if len(ids) > 1:
                raise EventRejection("InvalidTarget", "TDD first-active ids must pair up")
            paired = ids.pop()
            first_active_dl = paired
            first_active_ul = paired
        if first_active_ul is not None and not self.cfg.has_uplink:
            raise EventRejection("InvalidTarget", "first-active UL on a cell without UL BWPs")
        if first_active_dl is not None and not self.cfg.has_dl_bwp(first_active_dl):
            raise EventRejection("InvalidTarget", f"first-active DL BWP #{first_active_dl} not configured")
        if first_active_ul is not None and not self.cfg.has_ul_bwp(first_active_ul):
            raise EventRejection("InvalidTarget", f"first-active UL BWP #{first_active_ul} not configured")

        scs: list[int] = []
        if first_active_dl is not None:
            scs += [self._dl_geom(st.active_dl).numerology.scs_khz,
                    self._dl_geom(first_active_dl).numerology.scs_khz]
        if first_active_ul is not None:
            scs += [self._ul_geom(st.active_ul).numerology.scs_khz,
                    self._ul_geom(first_active_ul).numerology.scs_khz]
        spec = self._delay_or_reject(tuple(scs))
        end = now + Fraction(self.cfg.rrc_processing_delay_ms) + spec.duration_ms
        cause = (
            SwitchCause.FIRST_ACTIVE_ON_SCELL_ACTIVATION
            if scell_activation
            else SwitchCause.RRC_RECONFIG
        )
        records: list[TraceRecord] = []
        self._open_window(now, end, first_active_dl, first_active_ul, cause, records)
        return records

    def on_dci(self, now: Fraction, dci: DciEvent) -> list[TraceRecord]:
        """Process one DCI: possibly a switch, possibly a timer restart.

        Fallback formats never switch. A non-fallback DCI whose indicator
        names the current BWP is plain scheduling. Timer restart rules:
        on paired spectrum only a DL assignment for the active DL BWP
        restarts; on unpaired spectrum either direction does; any accepted
        switching DCI starts/restarts the timer at reception.
        """
        st = self.state
        if st.switch_window is not None:
            raise EventRejection("DciDuringSwitchWindow", "no reception during a switch window")
        records: list[TraceRecord] = []
        if dci.is_fallback:
            self._timer_on_scheduling(now, dci.direction, records)
            return records
        if not dci_switch_available(self.cfg, st.active_dl):
            raise EventRejection(
                "NonFallbackOnOption1Initial",
                "BWP #0 without dedicated parameters only supports fallback DCI",
            )
        to_ul = dci.direction is Direction.UL_GRANT
        if to_ul and not self.cfg.has_uplink:
            raise EventRejection("NoUplinkConfigured", "UL grant on a DL-only cell")
        bwps = self.cfg.ul_bwps if to_ul else self.cfg.dl_bwps
        ctx = IndicatorContext(sum(1 for b in bwps if b.id != 0))
        try:
            target = decode_indicator(dci.bwp_indicator_bits or "", ctx)
        except IndicatorError as exc:
            raise EventRejection(type(exc).__name__, str(exc)) from exc
        current = st.active_ul if to_ul else st.active_dl
        if target == current:
            self._timer_on_scheduling(now, dci.direction, records)
            return records

        paired_tdd = self.cfg.duplex is Duplex.TDD and self.cfg.has_uplink
        if paired_tdd:
            if not (self.cfg.has_dl_bwp(target) and self.cfg.has_ul_bwp(target)):
                raise EventRejection("TargetNotConfigured", f"BWP pair #{target} not configured")
            target_dl: Optional[int] = target
            target_ul: Optional[int] = target
            scs = (
                self._dl_geom(st.active_dl).numerology.scs_khz,
                self._dl_geom(target).numerology.scs_khz,
                self._ul_geom(st.active_ul).numerology.scs_khz,
                self._ul_geom(target).numerology.scs_khz,
            )
        elif to_ul:
            if not self.cfg.has_ul_bwp(target):
                raise EventRejection("TargetNotConfigured", f"UL BWP #{target} not configured")
            target_dl, target_ul = None, target
            scs = (
                self._ul_geom(st.active_ul).numerology.scs_khz,
                self._ul_geom(target).numerology.scs_khz,
            )
        else:
            if not self.cfg.has_dl_bwp(target):
                raise EventRejection("TargetNotConfigured", f"DL BWP #{target} not configured")
            target_dl, target_ul = target, None
            scs = (
                self._dl_geom(st.active_dl).numerology.scs_khz,
                self._dl_geom(target).numerology.scs_khz,
            )
        spec = self._delay_or_reject(scs)
        self._open_window(now, now + spec.duration_ms, target_dl, target_ul, SwitchCause.DCI, records)
        self._try_arm_timer(now, records)
        return records

    def on_tick(self, now: Fraction) -> list[TraceRecord]:
        """Advance to a tick boundary: commit due windows, run the timer."""
        records: list[TraceRecord] = []
        self._close_due_windows(now, records)
        st = self.state
        if (
            st.timer_remaining_ms is not None
            and not st.rach_in_progress
            and self._timer_next_decrement is not None
            and now >= self._timer_next_decrement
        ):
            st.timer_remaining_ms -= self.cfg.tick_ms
            self._timer_next_decrement += self.cfg.tick_ms
            if st.timer_remaining_ms <= 0:
                st.timer_remaining_ms = None
                self._timer_next_decrement = None
                records.append(self._rec(now, TIMER_EXPIRY))
                if st.switch_window is not None:
                    self._expiry_pending = True
                else:
                    self._open_expiry_window(now, records)
        return records

    def on_rach_start(self, now: Fraction) -> list[TraceRecord]:
        """Begin random access: clear the timer, move to a PRACH-capable UL.

        The UL BWP falls back to #0 unless the active one has PRACH
        occasions. On unpaired spectrum the pair moves together; on paired
        spectrum an SpCell additionally aligns its DL BWP with the UL
        index, while an SCell leaves DL alone.
        """
        st = self.state
        if st.switch_window is not None:
            raise EventRejection("EventDuringSwitchWindow", "RACH start during a switch window")
        if not self.cfg.has_uplink:
            raise EventRejection("NoUplinkConfigured", "random access needs an UL BWP")

        target_ul: Optional[int] = None
        if st.active_ul not in self.cfg.prach_configured_on:
            target_ul = 0
        new_ul = target_ul if target_ul is not None else st.active_ul
        target_dl: Optional[int] = None
        if self.cfg.duplex is Duplex.TDD:
            if target_ul is not None:
                target_dl = target_ul
        elif self.cfg.cell_role.is_spcell and st.active_dl != new_ul:
            target_dl = new_ul
        if target_dl is not None and not self.cfg.has_dl_bwp(target_dl):
            raise EventRejection("InvalidTarget", f"no DL BWP #{target_dl} to align with the UL BWP")

        scs: list[int] = []
        if target_ul is not None:
            scs += [self._ul_geom(st.active_ul).numerology.scs_khz,
                    self._ul_geom(target_ul).numerology.scs_khz]
        if target_dl is not None:
            scs += [self._dl_geom(st.active_dl).numerology.scs_khz,
                    self._dl_geom(target_dl).numerology.scs_khz]
        spec = self._delay_or_reject(tuple(scs)) if scs else None

        records: list[TraceRecord] = []
        st.rach_in_progress = True
        st.timer_remaining_ms = None
        self._timer_next_decrement = None
        self._expiry_pending = False
        if spec is not None:
            self._open_window(
                now, now + spec.duration_ms, target_dl, target_ul, SwitchCause.RACH_INITIATED, records
            )
        return records

    def on_rach_complete(self, now: Fraction) -> list[TraceRecord]:
        """Finish random access; re-arm the timer if off the default BWP."""
        st = self.state
        if st.switch_window is not None:
            raise EventRejection("EventDuringSwitchWindow", "RACH completion during a switch window")
        if not st.rach_in_progress:
            raise EventRejection("NotInRach", "no random-access procedure in progress")
        records: list[TraceRecord] = []
        st.rach_in_progress = False
        self._try_arm_timer(now, records)
        return records

    def on_data(self, now: Fraction, direction: Direction) -> list[TraceRecord]:
        """Serve a scheduled data burst on the active BWP of that direction."""
        st = self.state
        if st.switch_window is not None:
            raise EventRejection("DataDuringSwitchWindow", "no data service during a switch window")
        if direction is Direction.UL_GRANT:
            if not self.cfg.has_uplink:
                raise EventRejection("NoUplinkConfigured", "UL data on a DL-only cell")
            n_rbs = self._ul_geom(st.active_ul).n_rbs
            tag = "ul"
        else:
            n_rbs = self._dl_geom(st.active_dl).n_rbs
            tag = "dl"
        return [self._rec(now, DATA_SERVED, direction=tag, n_rbs=n_rbs)]

    def flush_windows(self, now: Fraction) -> list[TraceRecord]:
        """Commit any window whose end time has been reached by `now`."""
        records: list[TraceRecord] = []
        self._close_due_windows(now, records)
        return records

    # ------------------------------------------------------------------
    # internals

    def _dl_geom(self, bwp_id: int) -> BwpGeometry:
        return self.cfg.dl_bwp(bwp_id).geometry

    def _ul_geom(self, bwp_id: Optional[int]) -> BwpGeometry:
        if bwp_id is None:
            raise EventRejection("NoUplinkConfigured", "no active UL BWP")
        return self.cfg.ul_bwp(bwp_id).geometry

    def _default_dl(self) -> int:
        return effective_default_dl(self.cfg)

    def _rec(self, at_ms: Fraction, kind: str, **fields) -> TraceRecord:
        return TraceRecord(at_ms, self.cell, kind, fields)

    def _delay_or_reject(self, scs: tuple[int, ...]) -> SwitchDelaySpec:
        try:
            return _delay_for_scs(scs, self.cap.switch_delay_type)
        except UnsupportedScs as exc:
            raise EventRejection("UnsupportedScs", str(exc)) from exc

    def _open_window(
        self,
        start: Fraction,
        end: Fraction,
        target_dl: Optional[int],
        target_ul: Optional[int],
        cause: SwitchCause,
        records: list[TraceRecord],
    ) -> None:
        self.state.switch_window = SwitchWindow(start, end, target_dl, target_ul, cause)
        records.append(
            self._rec(
                start,
                WINDOW_OPEN,
                end_ms=ms_str(end),
                target_dl=target_dl,
                target_ul=target_ul,
                cause=cause.value,
            )
        )

    def _close_due_windows(self, now: Fraction, records: list[TraceRecord]) -> None:
        st = self.state
        while st.switch_window is not None and st.switch_window.end_ms <= now:
            w = st.switch_window
            t = w.end_ms
            old_dl, old_ul = st.active_dl, st.active_ul
            if w.target_dl is not None:
                st.active_dl = w.target_dl
            if w.target_ul is not None:
                st.active_ul = w.target_ul
            st.switch_window = None
            records.append(self._rec(t, WINDOW_CLOSE, cause=w.cause.value))
            if (st.active_dl, st.active_ul) != (old_dl, old_ul):
                records.append(
                    self._rec(
                        t,
                        STATE_CHANGE,
                        old_dl=old_dl,
                        old_ul=old_ul,
                        new_dl=st.active_dl,
                        new_ul=st.active_ul,
                        cause=w.cause.value,
                        new_dl_rbs=self._dl_geom(st.active_dl).n_rbs,
                    )
                )
            default = self._default_dl()
            if st.active_dl == default:
                # the default BWP carries no inactivity tracking
                st.timer_remaining_ms = None
                self._timer_next_decrement = None
                self._expiry_pending = False
                continue
            if self._expiry_pending:
                self._expiry_pending = False
                self._open_expiry_window(t, records)
                continue
            if self.cfg.inactivity_timer_ms is None or st.rach_in_progress:
                continue
            if st.timer_remaining_ms is None:
                self._arm_timer(t, records)
            elif w.cause is not SwitchCause.DCI:
                # activation of a non-default BWP restarts the timer; for a
                # DCI-driven switch the restart at reception already governs
                self._arm_timer(t, records)

    def _open_expiry_window(self, now: Fraction, records: list[TraceRecord]) -> None:
        st = self.state
        default = self._default_dl()
        target_ul = default if (self.cfg.duplex is Duplex.TDD and self.cfg.has_uplink) else None
        scs = [
            self._dl_geom(st.active_dl).numerology.scs_khz,
            self._dl_geom(default).numerology.scs_khz,
        ]
        if target_ul is not None:
            scs += [
                self._ul_geom(st.active_ul).numerology.scs_khz,
                self._ul_geom(target_ul).numerology.scs_khz,
            ]
        try:
            spec = _delay_for_scs(tuple(scs), self.cap.switch_delay_type)
        except UnsupportedScs as exc:
            # a 240 kHz BWP cannot be switched; record the stuck expiry
            records.append(
                self._rec(now, EVENT_REJECTED, event_kind="TimerExpiry", reason="UnsupportedScs",
                          detail=str(exc))
            )
            return
        self._open_window(now, now + spec.duration_ms, default, target_ul,
                          SwitchCause.TIMER_EXPIRY, records)

    def _timer_on_scheduling(self, now: Fraction, direction: Direction, records: list[TraceRecord]) -> None:
        if self.cfg.duplex is Duplex.FDD and direction is not Direction.DL_ASSIGNMENT:
            return
        self._try_arm_timer(now, records)

    def _try_arm_timer(self, now: Fraction, records: list[TraceRecord]) -> None:
        if self.cfg.inactivity_timer_ms is None:
            return
        if self.state.rach_in_progress:
            return
        if self.state.active_dl == self._default_dl():
            return
        self._arm_timer(now, records)

    def _arm_timer(self, now: Fraction, records: list[TraceRecord]) -> None:
        was_running = self.state.timer_remaining_ms is not None
        value = self.cfg.inactivity_timer_ms
        assert value is not None
        self.state.timer_remaining_ms = Fraction(value)
        tick = self.cfg.tick_ms
        # first decrement at the first tick boundary a whole period after arming
        self._timer_next_decrement = math.ceil((now + tick) / tick) * tick
        records.append(
            self._rec(now, TIMER_RESTART if was_running else TIMER_START, value_ms=value)
        )
