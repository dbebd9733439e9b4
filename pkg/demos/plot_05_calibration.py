"""
Calibration from synthetic users
================================

Baselines can be computed from any set of traces. Here a synthetic
population stands in for a study, and the resulting baseline is checked for
false positives against fresh users drawn from the same distribution.
"""

import numpy as np

from needsense import calibrate
from needsense.detectors import detect_statistical
from needsense.rules_config import default_rules
from needsense.tracegen import DistanceProfile, GenSpec, UserProfile, generate

rng = np.random.default_rng(0)
population = [
    generate(GenSpec(UserProfile(distance=DistanceProfile(float(m), 0.03)), seed, 120.0))
    for seed, m in enumerate(rng.normal(0.36, 0.04, 10))
]
baselines = calibrate(population)
b = baselines.viewing_distance
print(f"calibrated: mean={b.mean:.4f} stddev={b.stddev:.4f} n={b.n}")

# %%
# Fresh users from the same distribution rarely trip the rule.

font = next(r for r in default_rules().statistical if r.signal == "viewing_distance")
fresh = UserProfile(distance=DistanceProfile(b.mean, b.stddev))
hits = sum(bool(detect_statistical(generate(GenSpec(fresh, 100 + s, 600.0)), font, baselines)) for s in range(100))
print(f"false positives: {hits}/100")

# %%
# A user who sits much further away does.

far = UserProfile(distance=DistanceProfile(b.mean + 3 * b.stddev, b.stddev))
hits = sum(bool(detect_statistical(generate(GenSpec(far, 200 + s, 600.0)), font, baselines)) for s in range(100))
print(f"true positives:  {hits}/100")
