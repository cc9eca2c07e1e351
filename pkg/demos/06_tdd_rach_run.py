"""Unpaired spectrum: index-linked pair switching and the RACH interlock.

Runs the committed TDD fixture. Watch the pair move together on every
switch, the timer freeze across random access, and random access drag
the pair back to BWP #0 because only the initial UL BWP has PRACH.
"""

from pathlib import Path

from bwpsim import load_scenario, run

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

trace, metrics = run(load_scenario(FIXTURES / "tdd_scenario.json"))

print("=== What happened, record by record ===")
for rec in trace:
    f = rec.fields
    if rec.record == "StateChange":
        print(f"{str(rec.at_ms):>5} ms  pair #{f['old_dl']}/#{f['old_ul']} -> "
              f"#{f['new_dl']}/#{f['new_ul']}  ({f['cause']}, now {f['new_dl_rbs']} RBs)")
    elif rec.record == "WindowOpen":
        print(f"{str(rec.at_ms):>5} ms  switch window opens until {f['end_ms']} ms "
              f"({f['cause']})")
    elif rec.record in ("TimerStart", "TimerRestart"):
        print(f"{str(rec.at_ms):>5} ms  inactivity timer {rec.record[5:].lower()}ed "
              f"at {f['value_ms']} ms")
    elif rec.record == "TimerExpiry":
        print(f"{str(rec.at_ms):>5} ms  inactivity timer expired")

print()
cm = metrics.cells["tdd0"]
print(f"switches: { {k: v for k, v in cm.switch_count_by_cause.items() if v} }")
print(f"bandwidth-time proxy: {cm.bandwidth_time_proxy_rb_ms} RB*ms over "
      f"{metrics.total_time_ms} ms")
