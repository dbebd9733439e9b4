"""Population baselines for the statistically monitored signals."""

from __future__ import annotations

import json
import math
import statistics
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping

from .errors import BaselineError, CalibrationError, MissingBaselineError
from .signals import AudioSnapshot, Trace, ViewingDistance

SIGNALS = ("viewing_distance", "audio_volume")


@dataclass(frozen=True)
class Baseline:
    """Mean and sample standard deviation of one signal.

    Distances are in meters, volumes are fractions in [0, 1].
    """

    signal: str
    mean: float
    stddev: float
    n: int

    def __post_init__(self):
        if self.signal not in SIGNALS:
            raise ValueError(f"unknown signal {self.signal!r}")
        if not math.isfinite(self.mean):
            raise ValueError("mean must be finite")
        if not math.isfinite(self.stddev) or self.stddev < 0:
            raise ValueError(f"stddev must be non-negative, got {self.stddev!r}")
        if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        if self.n == 1 and self.stddev != 0:
            raise ValueError("stddev must be 0 when n == 1")
        object.__setattr__(self, "mean", float(self.mean))
        object.__setattr__(self, "stddev", float(self.stddev))


@dataclass(frozen=True)
class BaselineSet:
    entries: Mapping[str, Baseline] = field(default_factory=dict)

    def __post_init__(self):
        entries = dict(self.entries)
        for key, base in entries.items():
            if key != base.signal:
                raise ValueError(f"baseline for {base.signal!r} filed under {key!r}")
        object.__setattr__(self, "entries", MappingProxyType(entries))

    @classmethod
    def of(cls, *baselines: Baseline) -> "BaselineSet":
        entries: dict[str, Baseline] = {}
        for b in baselines:
            if b.signal in entries:
                raise ValueError(f"duplicate baseline for {b.signal!r}")
            entries[b.signal] = b
        return cls(entries)

    def __contains__(self, signal: object) -> bool:
        return signal in self.entries

    def __getitem__(self, signal: str) -> Baseline:
        try:
            return self.entries[signal]
        except KeyError:
            raise MissingBaselineError(signal) from None

    def __len__(self) -> int:
        return len(self.entries)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BaselineSet):
            return NotImplemented
        return dict(self.entries) == dict(other.entries)

    def __hash__(self) -> int:
        return hash(frozenset(self.entries.items()))

    def get(self, signal: str) -> Baseline | None:
        return self.entries.get(signal)

    @property
    def viewing_distance(self) -> Baseline | None:
        return self.entries.get("viewing_distance")

    @property
    def audio_volume(self) -> Baseline | None:
        return self.entries.get("audio_volume")


def signal_samples(trace: Trace, signal: str) -> list[tuple[float, float]]:
    """(t, value) samples of a calibratable signal.

    Volume snapshots count only while audio is playing.
    """
    if signal == "viewing_distance":
        return [(ev.t, ev.payload.meters) for ev in trace.events if isinstance(ev.payload, ViewingDistance)]
    if signal == "audio_volume":
        return [
            (ev.t, ev.payload.volume)
            for ev in trace.events
            if isinstance(ev.payload, AudioSnapshot) and ev.payload.playing
        ]
    raise ValueError(f"unknown signal {signal!r}")


def _summarize(signal: str, values: list[float]) -> Baseline:
    # statistics.mean/stdev are exactly rounded, so the result does not depend on sample order
    mean = statistics.mean(values)
    stddev = statistics.stdev(values) if len(values) > 1 else 0.0
    return Baseline(signal, mean, stddev, len(values))


def calibrate(traces: Iterable[Trace]) -> BaselineSet:
    """Pool every sample across ``traces`` into one baseline per signal.

    Raises:
        CalibrationError: if no trace holds a calibratable sample.
    """
    pooled: dict[str, list[float]] = {s: [] for s in SIGNALS}
    for trace in traces:
        for signal in SIGNALS:
            pooled[signal].extend(v for _, v in signal_samples(trace, signal))
    entries = {s: _summarize(s, vals) for s, vals in pooled.items() if vals}
    if not entries:
        raise CalibrationError("empty calibration")
    return BaselineSet(entries)


def published_defaults() -> BaselineSet:
    """Baselines measured in the original baseline data collection."""
    return BaselineSet.of(
        Baseline("viewing_distance", 0.36, 0.049, 10),
        Baseline("audio_volume", 0.471, 0.163, 10),
    )


def save_baselines(baselines: BaselineSet) -> str:
    doc = {
        signal: {"mean": b.mean, "stddev": b.stddev, "n": b.n}
        for signal, b in sorted(baselines.entries.items())
    }
    # json writes floats with repr(), the shortest string that round-trips exactly
    return json.dumps(doc, indent=2) + "\n"


def load_baselines(document: str | bytes) -> BaselineSet:
    """Parse a baseline document.

    Raises:
        BaselineError: with a ``line:col`` location for JSON syntax errors,
            or the offending key path for schema errors.
    """
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise BaselineError(exc.msg, f"{exc.lineno}:{exc.colno}") from None
    except UnicodeDecodeError as exc:
        raise BaselineError(f"not UTF-8: {exc.reason}") from None
    if not isinstance(doc, dict):
        raise BaselineError("expected a JSON object", "$")
    entries = {}
    for signal, body in doc.items():
        if signal not in SIGNALS:
            raise BaselineError(f"unknown signal {signal!r}", signal)
        if not isinstance(body, dict):
            raise BaselineError("expected an object", signal)
        for key in ("mean", "stddev", "n"):
            if key not in body:
                raise BaselineError(f"missing field {key!r}", signal)
        extra = sorted(set(body) - {"mean", "stddev", "n"})
        if extra:
            raise BaselineError(f"unexpected field {extra[0]!r}", signal)
        for key in ("mean", "stddev"):
            v = body[key]
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise BaselineError(f"{key} must be a number", f"{signal}.{key}")
        try:
            entries[signal] = Baseline(signal, body["mean"], body["stddev"], body["n"])
        except ValueError as exc:
            raise BaselineError(str(exc), signal) from None
    return BaselineSet(entries)
