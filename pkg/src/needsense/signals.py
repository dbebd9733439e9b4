"""Signal events, traces, and the line-delimited JSON trace format.

One JSON object per line::

    {"t":0.0,"kind":"viewing_distance","m":0.36}
    {"t":1.5,"kind":"audio","playing":true,"volume":0.4,"output":"speaker"}

An optional first line ``{"meta":{...}}`` carries ``user_id``,
``session_id`` and ``initial_settings``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, ClassVar, Union

from .catalog import is_feature_id
from .errors import TraceParseError

BUTTONS = ("side", "home", "volume_up", "volume_down")
ACTIONS = ("app_open", "screenshot", "photo_captured", "photo_opened", "pinch_zoom", "other")
OUTPUTS = ("speaker", "headphones", "other")
KINDS = ("viewing_distance", "audio", "button", "ui_action", "setting")


def _finite_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool) and math.isfinite(value)


@dataclass(frozen=True)
class ViewingDistance:
    meters: float
    kind: ClassVar[str] = "viewing_distance"

    def __post_init__(self):
        if not _finite_number(self.meters) or self.meters <= 0:
            raise ValueError(f"distance must be a positive number, got {self.meters!r}")
        object.__setattr__(self, "meters", float(self.meters))


@dataclass(frozen=True)
class AudioSnapshot:
    playing: bool
    volume: float
    output: str = "speaker"
    kind: ClassVar[str] = "audio"

    def __post_init__(self):
        if not isinstance(self.playing, bool):
            raise ValueError(f"playing must be a boolean, got {self.playing!r}")
        if not _finite_number(self.volume) or not 0.0 <= self.volume <= 1.0:
            raise ValueError(f"volume outside [0,1]: {self.volume!r}")
        if self.output not in OUTPUTS:
            raise ValueError(f"unknown audio output {self.output!r}")
        object.__setattr__(self, "volume", float(self.volume))


@dataclass(frozen=True)
class ButtonPress:
    button: str
    kind: ClassVar[str] = "button"

    def __post_init__(self):
        if self.button not in BUTTONS:
            raise ValueError(f"unknown button {self.button!r}")


@dataclass(frozen=True)
class UIAction:
    action: str
    app: str | None = None
    kind: ClassVar[str] = "ui_action"

    def __post_init__(self):
        if self.action not in ACTIONS:
            raise ValueError(f"unknown action {self.action!r}")
        if self.app is not None and not isinstance(self.app, str):
            raise ValueError(f"app must be a string, got {self.app!r}")


@dataclass(frozen=True)
class SettingChange:
    feature: str
    enabled: bool
    kind: ClassVar[str] = "setting"

    def __post_init__(self):
        if not isinstance(self.feature, str) or not is_feature_id(self.feature):
            raise ValueError(f"invalid feature id {self.feature!r}")
        if not isinstance(self.enabled, bool):
            raise ValueError(f"enabled must be a boolean, got {self.enabled!r}")


Payload = Union[ViewingDistance, AudioSnapshot, ButtonPress, UIAction, SettingChange]


@dataclass(frozen=True)
class SignalEvent:
    t: float
    payload: Payload

    def __post_init__(self):
        if not _finite_number(self.t) or self.t < 0:
            raise ValueError(f"timestamp must be a non-negative number, got {self.t!r}")
        object.__setattr__(self, "t", float(self.t))

    @property
    def kind(self) -> str:
        return self.payload.kind


@dataclass(frozen=True)
class TraceMeta:
    user_id: str | None = None
    session_id: str | None = None
    initial_settings: tuple[str, ...] = ()

    def __post_init__(self):
        for name in ("user_id", "session_id"):
            value = getattr(self, name)
            if value is not None and not isinstance(value, str):
                raise ValueError(f"{name} must be a string")
        settings = tuple(self.initial_settings)
        for fid in settings:
            if not isinstance(fid, str) or not is_feature_id(fid):
                raise ValueError(f"invalid feature id {fid!r} in initial_settings")
        object.__setattr__(self, "initial_settings", settings)


@dataclass(frozen=True)
class Trace:
    """Time-ordered, immutable sequence of signal events."""

    events: tuple[SignalEvent, ...] = ()
    meta: TraceMeta | None = None

    def __post_init__(self):
        events = tuple(self.events)
        for i in range(1, len(events)):
            if events[i].t < events[i - 1].t:
                raise ValueError(f"non-monotone timestamp at event {i}")
        object.__setattr__(self, "events", events)

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self):
        return iter(self.events)

    @property
    def initial_settings(self) -> tuple[str, ...]:
        return self.meta.initial_settings if self.meta is not None else ()

    @property
    def time_range(self) -> tuple[float, float] | None:
        if not self.events:
            return None
        return self.events[0].t, self.events[-1].t


def filter_signal(trace: Trace, kind: str) -> list[tuple[float, Payload]]:
    """Project the trace onto one signal kind, preserving order and timestamps."""
    return [(ev.t, ev.payload) for ev in trace.events if ev.payload.kind == kind]


# -- wire format -------------------------------------------------------------

_FIELDS: dict[str, dict[str, tuple[str, bool]]] = {
    # record field -> (payload attribute, required)
    "viewing_distance": {"m": ("meters", True)},
    "audio": {"playing": ("playing", True), "volume": ("volume", True), "output": ("output", True)},
    "button": {"button": ("button", True)},
    "ui_action": {"action": ("action", True), "app": ("app", False)},
    "setting": {"feature": ("feature", True), "enabled": ("enabled", True)},
}
_PAYLOADS = {cls.kind: cls for cls in (ViewingDistance, AudioSnapshot, ButtonPress, UIAction, SettingChange)}
_META_FIELDS = ("user_id", "session_id", "initial_settings")


def event_to_record(event: SignalEvent) -> dict[str, Any]:
    record: dict[str, Any] = {"t": event.t, "kind": event.kind}
    for key, (attr, required) in _FIELDS[event.kind].items():
        value = getattr(event.payload, attr)
        if required or value is not None:
            record[key] = value
    return record


def record_to_event(record: dict[str, Any], *, lenient: bool = False) -> SignalEvent:
    """Build an event from one decoded record; raises ValueError on bad input."""
    if not isinstance(record, dict):
        raise ValueError("record is not a JSON object")
    if "t" not in record:
        raise ValueError("missing field 't'")
    if "kind" not in record:
        raise ValueError("missing field 'kind'")
    kind = record["kind"]
    if kind not in _FIELDS:
        raise ValueError(f"unknown kind {kind!r}")
    spec = _FIELDS[kind]
    extra = sorted(set(record) - {"t", "kind"} - set(spec))
    if extra and not lenient:
        raise ValueError(f"unexpected field(s) {', '.join(extra)} for kind {kind!r}")
    kwargs = {}
    for key, (attr, required) in spec.items():
        if key in record:
            kwargs[attr] = record[key]
        elif required:
            raise ValueError(f"missing field {key!r} for kind {kind!r}")
    if kind == "viewing_distance" and not _finite_number(kwargs["meters"]):
        raise ValueError(f"distance must be a number, got {kwargs['meters']!r}")
    if not _finite_number(record["t"]):
        raise ValueError(f"timestamp must be a number, got {record['t']!r}")
    return SignalEvent(record["t"], _PAYLOADS[kind](**kwargs))


def _parse_meta(value: Any, lenient: bool) -> TraceMeta:
    if not isinstance(value, dict):
        raise ValueError("meta must be a JSON object")
    extra = sorted(set(value) - set(_META_FIELDS))
    if extra and not lenient:
        raise ValueError(f"unexpected meta field(s) {', '.join(extra)}")
    settings = value.get("initial_settings", [])
    if not isinstance(settings, list):
        raise ValueError("initial_settings must be a list")
    return TraceMeta(value.get("user_id"), value.get("session_id"), tuple(settings))


def _reject_constant(name: str):
    raise ValueError(f"non-finite number {name}")


def parse_trace(source: str | bytes, *, lenient: bool = False) -> Trace:
    """Parse a line-delimited JSON trace document.

    Blank lines are skipped. With ``lenient``, unknown extra fields are
    ignored instead of rejected.

    Raises:
        TraceParseError: with the 1-based line number of the first bad record.
    """
    if isinstance(source, bytes):
        try:
            source = source.decode("utf-8")
        except UnicodeDecodeError as exc:
            line = source[: exc.start].count(b"\n") + 1
            raise TraceParseError("invalid UTF-8", line) from None
    events: list[SignalEvent] = []
    meta: TraceMeta | None = None
    seen_record = False
    for lineno, raw in enumerate(source.splitlines(), start=1):
        if not raw.strip():
            continue
        try:
            record = json.loads(raw, parse_constant=_reject_constant)
        except ValueError as exc:
            raise TraceParseError(f"invalid JSON ({exc})", lineno) from None
        if isinstance(record, dict) and set(record) == {"meta"}:
            if seen_record:
                raise TraceParseError("meta record must be the first line", lineno)
            try:
                meta = _parse_meta(record["meta"], lenient)
            except ValueError as exc:
                raise TraceParseError(str(exc), lineno) from None
            seen_record = True
            continue
        seen_record = True
        try:
            event = record_to_event(record, lenient=lenient)
        except ValueError as exc:
            raise TraceParseError(str(exc), lineno) from None
        if events and event.t < events[-1].t:
            raise TraceParseError("non-monotone timestamp", lineno)
        events.append(event)
    return Trace(tuple(events), meta)


def serialize_trace(trace: Trace) -> str:
    """Canonical text form; ``parse_trace(serialize_trace(t)) == t``."""
    lines = []
    if trace.meta is not None:
        meta: dict[str, Any] = {}
        if trace.meta.user_id is not None:
            meta["user_id"] = trace.meta.user_id
        if trace.meta.session_id is not None:
            meta["session_id"] = trace.meta.session_id
        meta["initial_settings"] = list(trace.meta.initial_settings)
        lines.append(json.dumps({"meta": meta}, separators=(",", ":")))
    for event in trace.events:
        lines.append(json.dumps(event_to_record(event), separators=(",", ":")))
    return "".join(line + "\n" for line in lines)


def read_trace(path: str | Path, *, lenient: bool = False) -> Trace:
    return parse_trace(Path(path).read_bytes(), lenient=lenient)


def write_trace(trace: Trace, path: str | Path) -> None:
    Path(path).write_text(serialize_trace(trace), encoding="utf-8")
