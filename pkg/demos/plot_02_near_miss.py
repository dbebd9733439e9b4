"""
Near-miss detection on the side button
=======================================

Presses close together form a burst. A 2- or 3-press burst whose widest gap
is too slow for the current click-speed setting, yet within the slowest
setting, is a near miss: the user probably needs the next slower speed.
"""

from needsense.detectors import detect_near_miss, press_bursts
from needsense.rules_config import default_rules
from needsense.signals import ButtonPress, SignalEvent, Trace

(rule,) = default_rules().near_miss
print("ladder", rule.ladder, "current", rule.current_level, "->", rule.current_threshold, "s")

# %%
# Three double clicks with different gaps.

for gap in (0.20, 0.40, 0.70):
    presses = [10.0, 10.0 + gap]
    bursts = press_bursts(presses, rule.slowest)
    trace = Trace(tuple(SignalEvent(t, ButtonPress("side")) for t in presses))
    fired = detect_near_miss(trace, rule)
    print(f"gap {gap:.2f}s: bursts={bursts} firings={[f.t for f in fired]}")

# %%
# Requiring repeated evidence: with ``min_count=2`` only every second near
# miss fires.

from dataclasses import replace

patient = replace(rule, min_count=2)
presses = [t for start in (0, 5, 10, 15) for t in (start, start + 0.4)]
trace = Trace(tuple(SignalEvent(float(t), ButtonPress("side")) for t in presses))
print("min_count=2 ->", [f.t for f in detect_near_miss(trace, patient)])
