"""Turn raw firings into user-facing recommendations."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Any, Mapping

from .detectors import Firing
from .signals import SettingChange, Trace

FORBIDDEN_WORDS = re.compile(r"impair|disab|trouble|condition", re.IGNORECASE)


@dataclass(frozen=True)
class PolicyConfig:
    """Surfacing limits. ``max_per_trace=None`` means unlimited."""

    cooldown: float = 86400.0
    max_per_trace: int | None = 3
    suppress_enabled: bool = True

    def __post_init__(self):
        if not self.cooldown >= 0:
            raise ValueError(f"cooldown must be >= 0, got {self.cooldown!r}")
        if self.max_per_trace is not None and self.max_per_trace < 1:
            raise ValueError(f"max_per_trace must be >= 1, got {self.max_per_trace!r}")


@dataclass(frozen=True)
class Recommendation:
    feature: str
    t: float
    message: str
    rule: str
    evidence: Mapping[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "feature": self.feature,
            "t": self.t,
            "message": self.message,
            "rule": self.rule,
            "evidence": dict(self.evidence),
        }


def parse_templates(text: str) -> dict[str, str]:
    """Read ``feature_id = message`` lines; ``#`` lines and blanks are skipped."""
    templates = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, message = line.partition("=")
        key, message = key.strip(), message.strip()
        if not sep or not key or not message:
            raise ValueError(f"line {lineno}: expected 'feature_id = message'")
        if key in templates:
            raise ValueError(f"line {lineno}: duplicate template for {key!r}")
        templates[key] = message
    return templates


def default_templates() -> dict[str, str]:
    text = resources.files(__package__).joinpath("data/templates.txt").read_text(encoding="utf-8")
    return parse_templates(text)


def lint_template(message: str) -> list[str]:
    """Words in ``message`` that tie a feature to a condition or ability."""
    return FORBIDDEN_WORDS.findall(message)


def message_for(feature: str, templates: Mapping[str, str]) -> str:
    if feature in templates:
        return templates[feature]
    return f"Did you know about {feature.replace('_', ' ')}?"


def surface(
    firings: list[Firing],
    trace: Trace,
    cfg: PolicyConfig | None = None,
    templates: Mapping[str, str] | None = None,
) -> list[Recommendation]:
    """Filter time-sorted firings into recommendations.

    A firing is dropped when its feature is already on at that time (if
    ``suppress_enabled``), when the same feature was recommended less than
    ``cooldown`` seconds earlier, or once ``max_per_trace`` is reached.
    """
    cfg = cfg or PolicyConfig()
    templates = default_templates() if templates is None else templates
    settings = [(ev.t, ev.payload) for ev in trace.events if isinstance(ev.payload, SettingChange)]
    enabled = set(trace.initial_settings)
    applied = 0
    last_shown: dict[str, float] = {}
    out: list[Recommendation] = []
    for f in firings:
        while applied < len(settings) and settings[applied][0] <= f.t:
            change = settings[applied][1]
            if change.enabled:
                enabled.add(change.feature)
            else:
                enabled.discard(change.feature)
            applied += 1
        if cfg.suppress_enabled and f.feature in enabled:
            continue
        if f.feature in last_shown and f.t - last_shown[f.feature] < cfg.cooldown:
            continue
        if cfg.max_per_trace is not None and len(out) >= cfg.max_per_trace:
            continue
        last_shown[f.feature] = f.t
        out.append(Recommendation(f.feature, f.t, message_for(f.feature, templates), f.rule, f.evidence))
    return out
