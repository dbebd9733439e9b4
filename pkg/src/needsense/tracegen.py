"""Seeded synthetic traces from simple user profiles.

Traces come out deterministic per seed (numpy's PCG64), which is enough for
reproducible scenarios; stored fixtures remain the reference for acceptance.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any

import numpy as np

from .catalog import is_feature_id
from .signals import (
    AudioSnapshot,
    ButtonPress,
    SettingChange,
    SignalEvent,
    Trace,
    UIAction,
    ViewingDistance,
)

MIN_DISTANCE = 0.01
MIN_CLICK_GAP = 1e-3
MAGNIFIER_STEP_GAP = 10.0

# tie-break for events sharing a timestamp
_KIND_ORDER = {"setting": 0, "viewing_distance": 1, "audio": 2, "button": 3, "ui_action": 4}


def _check_spread(mean: float, stddev: float, what: str) -> None:
    if not (math.isfinite(mean) and math.isfinite(stddev)) or stddev < 0:
        raise ValueError(f"{what}: mean must be finite and stddev non-negative")


@dataclass(frozen=True)
class DistanceProfile:
    mean: float
    stddev: float

    def __post_init__(self):
        _check_spread(self.mean, self.stddev, "distance")


@dataclass(frozen=True)
class VolumeProfile:
    mean: float
    stddev: float
    playing_prob: float = 1.0

    def __post_init__(self):
        _check_spread(self.mean, self.stddev, "volume")
        if not 0.0 <= self.playing_prob <= 1.0:
            raise ValueError(f"playing_prob must be in [0,1], got {self.playing_prob!r}")


@dataclass(frozen=True)
class ClickProfile:
    mean: float
    stddev: float
    attempts: int = 0

    def __post_init__(self):
        _check_spread(self.mean, self.stddev, "click_gap")
        if isinstance(self.attempts, bool) or not isinstance(self.attempts, int) or self.attempts < 0:
            raise ValueError(f"attempts must be a non-negative integer, got {self.attempts!r}")


@dataclass(frozen=True)
class UserProfile:
    """Behavior to simulate. Any of the three signal blocks may be omitted."""

    distance: DistanceProfile | None = None
    volume: VolumeProfile | None = None
    click_gap: ClickProfile | None = None
    magnifier_workaround: bool = False
    enable_events: tuple[tuple[float, str], ...] = ()

    def __post_init__(self):
        events = []
        for t, feature in self.enable_events:
            if isinstance(t, bool) or not isinstance(t, (int, float)) or not math.isfinite(t) or t < 0:
                raise ValueError(f"enable event time must be a non-negative number, got {t!r}")
            if not isinstance(feature, str) or not is_feature_id(feature):
                raise ValueError(f"invalid feature id {feature!r}")
            events.append((float(t), feature))
        object.__setattr__(self, "enable_events", tuple(events))

    @classmethod
    def from_dict(cls, doc: dict[str, Any]) -> "UserProfile":
        if not isinstance(doc, dict):
            raise ValueError("profile must be a JSON object")
        known = {"distance", "volume", "click_gap", "magnifier_workaround", "enable_events"}
        extra = sorted(set(doc) - known)
        if extra:
            raise ValueError(f"unknown profile field(s): {', '.join(extra)}")
        blocks = {"distance": DistanceProfile, "volume": VolumeProfile, "click_gap": ClickProfile}
        kwargs: dict[str, Any] = {}
        for key, klass in blocks.items():
            if doc.get(key) is not None:
                if not isinstance(doc[key], dict):
                    raise ValueError(f"{key} must be an object")
                try:
                    kwargs[key] = klass(**doc[key])
                except TypeError as exc:
                    raise ValueError(f"{key}: {exc}") from None
        magnifier = doc.get("magnifier_workaround", False)
        if not isinstance(magnifier, bool):
            raise ValueError("magnifier_workaround must be a boolean")
        kwargs["magnifier_workaround"] = magnifier
        events = doc.get("enable_events", [])
        if not isinstance(events, list) or not all(isinstance(e, list) and len(e) == 2 for e in events):
            raise ValueError("enable_events must be a list of [t, feature] pairs")
        kwargs["enable_events"] = tuple((t, f) for t, f in events)
        return cls(**kwargs)

    def to_dict(self) -> dict[str, Any]:
        doc = asdict(self)
        doc["enable_events"] = [list(e) for e in self.enable_events]
        return doc


def load_profile(path: str | Path) -> UserProfile:
    return UserProfile.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


@dataclass(frozen=True)
class GenSpec:
    profile: UserProfile
    seed: int
    duration: float
    sample_interval: float = 1.0

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if not math.isfinite(self.duration) or self.duration < 0:
            raise ValueError("duration must be >= 0")
        if not math.isfinite(self.sample_interval) or self.sample_interval <= 0:
            raise ValueError("sample_interval must be > 0")


def _sample_times(duration: float, interval: float) -> np.ndarray:
    n = math.ceil(duration / interval)
    times = np.arange(n, dtype=float) * interval
    return times[times < duration]


def generate(spec: GenSpec) -> Trace:
    """Draw a trace for ``spec``.

    Distance and audio snapshots are taken every ``sample_interval`` seconds
    over ``[0, duration)``; click attempts and the magnifier workaround start
    at uniform random times in that span. Enable events later than
    ``duration`` are dropped. Draws happen in a fixed order so a seed always
    gives the same trace.
    """
    rng = np.random.default_rng(spec.seed)
    profile = spec.profile
    events: list[SignalEvent] = []
    times = _sample_times(spec.duration, spec.sample_interval)

    if profile.distance is not None and len(times):
        d = profile.distance
        meters = np.maximum(rng.normal(d.mean, d.stddev, len(times)), MIN_DISTANCE)
        events += [SignalEvent(float(t), ViewingDistance(float(m))) for t, m in zip(times, meters)]

    if profile.volume is not None and len(times):
        v = profile.volume
        playing = rng.random(len(times)) < v.playing_prob
        volume = np.clip(rng.normal(v.mean, v.stddev, len(times)), 0.0, 1.0)
        events += [
            SignalEvent(float(t), AudioSnapshot(bool(p), float(x), "speaker"))
            for t, p, x in zip(times, playing, volume)
        ]

    if profile.click_gap is not None and profile.click_gap.attempts and spec.duration > 0:
        c = profile.click_gap
        starts = np.sort(rng.uniform(0.0, spec.duration, c.attempts))
        gaps = np.maximum(rng.normal(c.mean, c.stddev, c.attempts), MIN_CLICK_GAP)
        for start, gap in zip(starts, gaps):
            events.append(SignalEvent(float(start), ButtonPress("side")))
            events.append(SignalEvent(float(start + gap), ButtonPress("side")))

    if profile.magnifier_workaround and spec.duration > 0:
        start = float(rng.uniform(0.0, max(spec.duration - 2 * MAGNIFIER_STEP_GAP, 0.0)))
        steps = (("photo_captured", "Camera"), ("photo_opened", "Photos"), ("pinch_zoom", "Photos"))
        for i, (action, app) in enumerate(steps):
            events.append(SignalEvent(start + i * MAGNIFIER_STEP_GAP, UIAction(action, app)))

    events += [
        SignalEvent(t, SettingChange(f, True)) for t, f in profile.enable_events if t <= spec.duration
    ]

    # stable sort keeps generation order among identical keys
    events.sort(key=lambda e: (e.t, _KIND_ORDER[e.kind]))
    return Trace(tuple(events))
