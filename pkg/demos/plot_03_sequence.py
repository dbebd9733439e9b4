"""
Action sequences: the camera-as-magnifier workaround
=====================================================

Taking a photo, opening it and pinching to zoom, in order and in quick
succession, suggests the built-in magnifier would help.
"""

from needsense.detectors import detect_sequence
from needsense.rules_config import default_rules
from needsense.signals import SignalEvent, Trace, UIAction

(pattern,) = default_rules().sequences
print(pattern.name, [(s.action, s.within) for s in pattern.steps], "window", pattern.window)


def run(steps):
    trace = Trace(tuple(SignalEvent(t, UIAction(a)) for a, t in steps))
    return [(f.t, f.evidence["matched_step_times"]) for f in detect_sequence(trace, pattern)]


# %%
# The workaround, with unrelated taps in between.

print("match      ", run([("photo_captured", 0.0), ("app_open", 3.0),
                           ("photo_opened", 10.0), ("pinch_zoom", 15.0)]))

# %%
# Out of order, or with a step arriving too late, nothing fires.

print("reordered  ", run([("photo_opened", 0.0), ("photo_captured", 10.0), ("pinch_zoom", 15.0)]))
print("too slow   ", run([("photo_captured", 0.0), ("photo_opened", 70.0), ("pinch_zoom", 75.0)]))

# %%
# A late step resets the match but can start a new one.

print("restart    ", run([("photo_captured", 0.0), ("photo_captured", 100.0),
                           ("photo_opened", 110.0), ("pinch_zoom", 120.0)]))
