"""Deterministic tick-driven driver for scripted BWP scenarios.

The engine owns the clock. It visits every subframe (FR1) or half-subframe
(FR2) boundary of every cell up to the horizon, delivers the scripted
events, and collects the trace. Ties at one timestamp resolve in a fixed
total order: tick commits first, then RRC events, then RACH events, then
DCI, then data; within one class, input order. Running the same scenario
twice produces byte-identical traces.

Metrics are computed twice on purpose: once online while the run emits
records, and once by `replay_metrics` walking a finished trace. The two
must agree, which pins the trace as a complete account of the run.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Optional

from .config import CellConfig, UeCapability, validate
from .dci import DciEvent, Direction
from .fsm import CellStateMachine, EventRejection, SwitchCause
from .trace import (
    DATA_SERVED,
    EVENT_REJECTED,
    RUN_END,
    RUN_START,
    STATE_CHANGE,
    MalformedTrace,
    TraceRecord,
)


class ScenarioInvalid(Exception):
    """The scenario cannot run; carries validation reports when relevant."""

    def __init__(self, message: str, reports: Optional[dict] = None):
        self.reports = reports or {}
        super().__init__(message)


class EventMisaligned(ScenarioInvalid):
    """An event timestamp is off the cell's tick grid."""


class EventKind(Enum):
    RRC_RECONFIG = "RrcReconfig"
    SCELL_ACTIVATE = "ScellActivate"
    DCI = "Dci"
    RACH_START = "RachStart"
    RACH_COMPLETE = "RachComplete"
    DATA_DL_ASSIGNMENT = "DataDlAssignment"
    DATA_UL_GRANT = "DataUlGrant"


# Same-timestamp delivery order (ticks run before all of these).
_PHASE = {
    EventKind.RRC_RECONFIG: 1,
    EventKind.SCELL_ACTIVATE: 1,
    EventKind.RACH_START: 2,
    EventKind.RACH_COMPLETE: 2,
    EventKind.DCI: 3,
    EventKind.DATA_DL_ASSIGNMENT: 4,
    EventKind.DATA_UL_GRANT: 4,
}


@dataclass(frozen=True)
class SimEvent:
    at_ms: Fraction
    cell: str
    kind: EventKind
    dci: Optional[DciEvent] = None
    first_active_dl: Optional[int] = None
    first_active_ul: Optional[int] = None

    def __post_init__(self) -> None:
        if self.kind is EventKind.DCI and self.dci is None:
            raise ValueError("DCI events need a DciEvent payload")


@dataclass
class Scenario:
    cells: dict[str, CellConfig]
    capability: UeCapability
    events: list[SimEvent]
    horizon_ms: Optional[Fraction]


@dataclass(frozen=True)
class CellMetrics:
    switch_count_by_cause: dict[str, int]
    rejected_event_count: int
    bandwidth_time_proxy_rb_ms: Fraction
    time_on_default_ms: Fraction

    def to_obj(self) -> dict:
        from .trace import ms_str

        return {
            "switch_count_by_cause": dict(sorted(self.switch_count_by_cause.items())),
            "rejected_event_count": self.rejected_event_count,
            "bandwidth_time_proxy_rb_ms": ms_str(self.bandwidth_time_proxy_rb_ms),
            "time_on_default_ms": ms_str(self.time_on_default_ms),
        }


@dataclass(frozen=True)
class RunMetrics:
    total_time_ms: Fraction
    cells: dict[str, CellMetrics]

    def to_obj(self) -> dict:
        from .trace import ms_str

        return {
            "total_time_ms": ms_str(self.total_time_ms),
            "cells": {cid: m.to_obj() for cid, m in sorted(self.cells.items())},
        }


class _CellTally:
    """Streaming integrator for one cell's metrics.

    The proxy integrates the active DL BWP width over time (RB * ms); a
    switch takes effect at the commit timestamp carried by the record,
    which can sit between tick boundaries.
    """

    def __init__(self, default_dl: int, active_dl: int, dl_rbs: int):
        self.default_dl = default_dl
        self.active_dl = active_dl
        self.dl_rbs = dl_rbs
        self.last_t = Fraction(0)
        self.proxy = Fraction(0)
        self.on_default = Fraction(0)
        self.switches: dict[str, int] = {c.value: 0 for c in SwitchCause}
        self.rejected = 0
        self.ended = False

    def integrate_to(self, t: Fraction) -> None:
        dt = t - self.last_t
        if dt < 0:
            raise MalformedTrace("cell records run backwards")
        self.proxy += self.dl_rbs * dt
        if self.active_dl == self.default_dl:
            self.on_default += dt
        self.last_t = t

    def state_change(self, t: Fraction, new_dl: int, new_dl_rbs: int, cause: str) -> None:
        self.integrate_to(t)
        self.active_dl = new_dl
        self.dl_rbs = new_dl_rbs
        self.switches[cause] = self.switches.get(cause, 0) + 1

    def finish(self, t: Fraction) -> CellMetrics:
        self.integrate_to(t)
        self.ended = True
        return CellMetrics(
            switch_count_by_cause=self.switches,
            rejected_event_count=self.rejected,
            bandwidth_time_proxy_rb_ms=self.proxy,
            time_on_default_ms=self.on_default,
        )


def run(scenario: Scenario) -> tuple[list[TraceRecord], RunMetrics]:
    """Execute a scenario; returns the full trace and its metrics.

    Raises ScenarioInvalid when any cell fails validation with errors, an
    event references an unknown cell, or the horizon does not cover all
    events; EventMisaligned when an event is off its cell's tick grid.
    """
    from .config import effective_default_dl

    if scenario.horizon_ms is None:
        raise ScenarioInvalid("scenario has no horizon_ms and cannot run")
    reports = {cid: validate(cfg, scenario.capability) for cid, cfg in scenario.cells.items()}
    bad = {cid: rep for cid, rep in reports.items() if rep.has_errors}
    if bad:
        raise ScenarioInvalid(
            "configuration errors in cells: " + ", ".join(sorted(bad)), reports=reports
        )
    horizon = Fraction(scenario.horizon_ms)
    if horizon < 0:
        raise ScenarioInvalid("horizon must be >= 0 ms")
    for ev in scenario.events:
        if ev.cell not in scenario.cells:
            raise ScenarioInvalid(f"event references unknown cell {ev.cell!r}")
        if ev.at_ms < 0 or ev.at_ms > horizon:
            raise ScenarioInvalid(f"event at {ev.at_ms} ms outside [0, {horizon}] ms")
        tick = scenario.cells[ev.cell].tick_ms
        if ev.at_ms % tick != 0:
            raise EventMisaligned(
                f"event at {ev.at_ms} ms is off the {tick} ms grid of cell {ev.cell!r}"
            )

    cell_order = list(scenario.cells)
    machines = {
        cid: CellStateMachine(cid, scenario.cells[cid], scenario.capability)
        for cid in cell_order
    }

    trace: list[TraceRecord] = []
    tallies: dict[str, _CellTally] = {}
    for cid in cell_order:
        m = machines[cid]
        cfg = scenario.cells[cid]
        dl_rbs = cfg.dl_bwp(m.state.active_dl).geometry.n_rbs
        default = effective_default_dl(cfg)
        trace.append(
            TraceRecord(
                Fraction(0),
                cid,
                RUN_START,
                {
                    "active_dl": m.state.active_dl,
                    "active_ul": m.state.active_ul,
                    "dl_rbs": dl_rbs,
                    "default_dl": default,
                },
            )
        )
        tallies[cid] = _CellTally(default, m.state.active_dl, dl_rbs)

    def emit(records: Iterable[TraceRecord]) -> None:
        for rec in records:
            trace.append(rec)
            tally = tallies[rec.cell]
            if rec.record == STATE_CHANGE:
                tally.state_change(
                    rec.at_ms, rec.fields["new_dl"], rec.fields["new_dl_rbs"], rec.fields["cause"]
                )
            elif rec.record == EVENT_REJECTED:
                tally.rejected += 1

    events_at: dict[Fraction, list[tuple[int, int, SimEvent]]] = {}
    for seq, ev in enumerate(scenario.events):
        events_at.setdefault(ev.at_ms, []).append((_PHASE[ev.kind], seq, ev))

    tick_times: set[Fraction] = set()
    for cid in cell_order:
        tick = scenario.cells[cid].tick_ms
        n = int(horizon / tick)
        tick_times.update(tick * k for k in range(1, n + 1))

    for t in sorted(tick_times | set(events_at)):
        for cid in cell_order:
            if t > 0 and t % scenario.cells[cid].tick_ms == 0:
                emit(machines[cid].on_tick(t))
        for _phase, _seq, ev in sorted(events_at.get(t, ()), key=lambda x: (x[0], x[1])):
            emit(_dispatch(machines[ev.cell], ev))

    for cid in cell_order:
        emit(machines[cid].flush_windows(horizon))

    cell_metrics = {}
    for cid in cell_order:
        cell_metrics[cid] = tallies[cid].finish(horizon)
        trace.append(TraceRecord(horizon, cid, RUN_END, {}))

    trace.sort(key=lambda rec: rec.at_ms)  # stable: same-time order is preserved
    metrics = RunMetrics(total_time_ms=horizon, cells=cell_metrics)
    return trace, metrics


def _dispatch(machine: CellStateMachine, ev: SimEvent) -> list[TraceRecord]:
    try:
        if ev.kind is EventKind.RRC_RECONFIG:
            return machine.on_rrc_reconfig(ev.at_ms, ev.first_active_dl, ev.first_active_ul)
        if ev.kind is EventKind.SCELL_ACTIVATE:
            return machine.on_rrc_reconfig(ev.at_ms, scell_activation=True)
        if ev.kind is EventKind.DCI:
            assert ev.dci is not None
            return machine.on_dci(ev.at_ms, ev.dci)
        if ev.kind is EventKind.RACH_START:
            return machine.on_rach_start(ev.at_ms)
        if ev.kind is EventKind.RACH_COMPLETE:
            return machine.on_rach_complete(ev.at_ms)
        if ev.kind is EventKind.DATA_DL_ASSIGNMENT:
            return machine.on_data(ev.at_ms, Direction.DL_ASSIGNMENT)
        if ev.kind is EventKind.DATA_UL_GRANT:
            return machine.on_data(ev.at_ms, Direction.UL_GRANT)
        raise AssertionError(f"unhandled event kind {ev.kind}")
    except EventRejection as rej:
        return [
            TraceRecord(
                ev.at_ms,
                ev.cell,
                EVENT_REJECTED,
                {"event_kind": ev.kind.value, "reason": rej.reason, "detail": rej.detail},
            )
        ]


def replay_metrics(trace: Iterable[TraceRecord]) -> RunMetrics:
    """Recompute RunMetrics from a trace alone.

    Independent of the engine's own bookkeeping: only the records are
    consulted. Raises MalformedTrace on out-of-order timestamps, records
    for unknown cells, or a missing RunStart/RunEnd bracket.
    """
    tallies: dict[str, _CellTally] = {}
    horizon: Optional[Fraction] = None
    last_t: Optional[Fraction] = None
    for rec in trace:
        if last_t is not None and rec.at_ms < last_t:
            raise MalformedTrace(
                f"timestamps decrease at {rec.at_ms} ms (after {last_t} ms)"
            )
        last_t = rec.at_ms
        if rec.record == RUN_START:
            if rec.cell in tallies:
                raise MalformedTrace(f"duplicate RunStart for cell {rec.cell!r}")
            try:
                tallies[rec.cell] = _CellTally(
                    rec.fields["default_dl"], rec.fields["active_dl"], rec.fields["dl_rbs"]
                )
            except KeyError as exc:
                raise MalformedTrace(f"RunStart missing field {exc}") from exc
            continue
        tally = tallies.get(rec.cell)
        if tally is None:
            raise MalformedTrace(f"record for cell {rec.cell!r} before its RunStart")
        if tally.ended:
            raise MalformedTrace(f"record for cell {rec.cell!r} after its RunEnd")
        if rec.record == STATE_CHANGE:
            try:
                tally.state_change(
                    rec.at_ms, rec.fields["new_dl"], rec.fields["new_dl_rbs"], rec.fields["cause"]
                )
            except KeyError as exc:
                raise MalformedTrace(f"StateChange missing field {exc}") from exc
        elif rec.record == EVENT_REJECTED:
            tally.rejected += 1
        elif rec.record == RUN_END:
            tally.finish(rec.at_ms)
            if horizon is None:
                horizon = rec.at_ms
            elif horizon != rec.at_ms:
                raise MalformedTrace("cells end at different horizons")
    if not tallies:
        raise MalformedTrace("empty trace")
    unfinished = [cid for cid, t in tallies.items() if not t.ended]
    if unfinished:
        raise MalformedTrace(f"missing RunEnd for cells: {', '.join(sorted(unfinished))}")
    assert horizon is not None
    return RunMetrics(
        total_time_ms=horizon,
        cells={
            cid: CellMetrics(
                switch_count_by_cause=t.switches,
                rejected_event_count=t.rejected,
                bandwidth_time_proxy_rb_ms=t.proxy,
                time_on_default_ms=t.on_default,
            )
            for cid, t in tallies.items()
        },
    )
