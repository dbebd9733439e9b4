"""
Statistical detection: viewing distance and audio volume
=========================================================

A running mean over the user's samples is compared with a population
baseline. Once enough samples are in, the rule fires the first time the
mean leaves ``mean +/- k * stddev``.
"""

import numpy as np

from needsense import published_defaults
from needsense.detectors import detect_statistical
from needsense.rules_config import default_rules
from needsense.signals import AudioSnapshot, SignalEvent, Trace, ViewingDistance

baselines = published_defaults()
rules = {r.name: r for r in default_rules().statistical}
font, subtitles = rules["font_size"], rules["subtitles"]

vd = baselines.viewing_distance
print(f"viewing distance band: {vd.mean - 2 * vd.stddev:.3f} .. {vd.mean + 2 * vd.stddev:.3f} m")

# %%
# A user who holds the phone at half a metre trips the rule once the
# 30-sample gate opens; one at 0.40 m stays inside the band.

for meters in (0.50, 0.40):
    trace = Trace(tuple(SignalEvent(float(t), ViewingDistance(meters)) for t in range(60)))
    fired = detect_statistical(trace, font, baselines)
    print(f"{meters:.2f} m -> {[(f.t, round(f.evidence['user_mean'], 3)) for f in fired]}")

# %%
# Noisy samples: the running mean still settles near the true mean.

rng = np.random.default_rng(7)
noisy = rng.normal(0.52, 0.08, 120)
trace = Trace(tuple(SignalEvent(float(t), ViewingDistance(float(m))) for t, m in enumerate(noisy)))
print("noisy 0.52 m ->", [f.t for f in detect_statistical(trace, font, baselines)])

# %%
# Volume counts only while media is playing.

for playing in (True, False):
    trace = Trace(tuple(SignalEvent(float(t), AudioSnapshot(playing, 0.85)) for t in range(60)))
    print(f"volume 0.85, playing={playing} ->", len(detect_statistical(trace, subtitles, baselines)), "firing(s)")
