"""The four detection strategies: statistical, near-miss, action sequence, grouped.

Every detector is a pure function of a trace and its rule, returning
:class:`Firing` records in time order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping

from .baseline import SIGNALS, BaselineSet, signal_samples
from .catalog import FeatureCatalog, GroupRule, is_feature_id
from .errors import UnknownFeatureError
from .signals import ACTIONS, BUTTONS, ButtonPress, SettingChange, Trace, UIAction

SIDES = ("above", "below", "both")
LEVELS = ("default", "slow", "slowest")


def _check_feature(feature: str) -> None:
    if not isinstance(feature, str) or not is_feature_id(feature):
        raise ValueError(f"invalid feature id {feature!r}")


def _check_name(name: str) -> None:
    if not isinstance(name, str) or not name.isidentifier():
        raise ValueError(f"invalid rule name {name!r}")


def _positive(value: float, what: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not value > 0 or value == float("inf"):
        raise ValueError(f"{what} must be a positive number, got {value!r}")
    return float(value)


def _positive_int(value: int, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ValueError(f"{what} must be a positive integer, got {value!r}")
    return value


@dataclass(frozen=True)
class StatisticalRule:
    """Fire when the user's running mean drifts ``k_sigma`` baseline deviations away."""

    name: str
    signal: str
    sides: str
    recommend: str
    k_sigma: float = 2.0
    min_samples: int = 30

    def __post_init__(self):
        _check_name(self.name)
        if self.signal not in SIGNALS:
            raise ValueError(f"unknown signal {self.signal!r}")
        if self.sides not in SIDES:
            raise ValueError(f"sides must be one of {SIDES}, got {self.sides!r}")
        _check_feature(self.recommend)
        object.__setattr__(self, "k_sigma", _positive(self.k_sigma, "k"))
        _positive_int(self.min_samples, "min_samples")


@dataclass(frozen=True)
class NearMissRule:
    """Click attempts that fail the current speed but pass a slower one.

    ``ladder`` holds the (default, slow, slowest) inter-press limits in seconds.
    """

    name: str
    button: str
    recommend: str
    ladder: tuple[float, float, float] = (0.25, 0.35, 0.50)
    current_level: str = "default"
    min_count: int = 1

    def __post_init__(self):
        _check_name(self.name)
        if self.button not in BUTTONS:
            raise ValueError(f"unknown button {self.button!r}")
        _check_feature(self.recommend)
        ladder = tuple(self.ladder)
        if len(ladder) != 3:
            raise ValueError("ladder needs exactly three thresholds")
        ladder = tuple(_positive(v, "ladder threshold") for v in ladder)
        if not ladder[0] < ladder[1] < ladder[2]:
            raise ValueError("ladder must be strictly increasing")
        object.__setattr__(self, "ladder", ladder)
        if self.current_level not in LEVELS:
            raise ValueError(f"level must be one of {LEVELS}, got {self.current_level!r}")
        _positive_int(self.min_count, "min_count")

    @property
    def current_threshold(self) -> float:
        return self.ladder[LEVELS.index(self.current_level)]

    @property
    def slowest(self) -> float:
        return self.ladder[2]


@dataclass(frozen=True)
class SequenceStep:
    action: str
    within: float | None = None  # max gap after the previous step; None on the first step

    def __post_init__(self):
        if self.action not in ACTIONS:
            raise ValueError(f"unknown action {self.action!r}")
        if self.within is not None:
            object.__setattr__(self, "within", _positive(self.within, "within"))


DEFAULT_STEP_WITHIN = 60.0
DEFAULT_WINDOW = 120.0


@dataclass(frozen=True)
class SequencePattern:
    name: str
    steps: tuple[SequenceStep, ...]
    recommend: str
    window: float = DEFAULT_WINDOW

    def __post_init__(self):
        _check_name(self.name)
        _check_feature(self.recommend)
        object.__setattr__(self, "window", _positive(self.window, "window"))
        steps = []
        for i, step in enumerate(self.steps):
            if isinstance(step, str):
                step = SequenceStep(step)
            if i == 0 and step.within is not None:
                raise ValueError("the first step cannot carry a 'within' limit")
            if i > 0 and step.within is None:
                step = SequenceStep(step.action, DEFAULT_STEP_WITHIN)
            if i > 0 and step.within > self.window:
                raise ValueError(f"step {i + 1} within {step.within} exceeds window {self.window}")
            steps.append(step)
        if len(steps) < 2:
            raise ValueError("a sequence needs at least two steps")
        object.__setattr__(self, "steps", tuple(steps))

    @classmethod
    def simple(cls, name: str, actions: list[str], recommend: str, within: float = DEFAULT_STEP_WITHIN,
               window: float = DEFAULT_WINDOW) -> "SequencePattern":
        steps = [SequenceStep(actions[0])] + [SequenceStep(a, within) for a in actions[1:]]
        return cls(name, tuple(steps), recommend, window)


@dataclass(frozen=True)
class RuleSet:
    """All configured rules. Lists are kept sorted by name so equality ignores source order."""

    statistical: tuple[StatisticalRule, ...] = ()
    near_miss: tuple[NearMissRule, ...] = ()
    sequences: tuple[SequencePattern, ...] = ()
    groups: tuple[GroupRule, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "statistical", tuple(sorted(self.statistical, key=lambda r: r.name)))
        object.__setattr__(self, "near_miss", tuple(sorted(self.near_miss, key=lambda r: r.name)))
        object.__setattr__(self, "sequences", tuple(sorted(self.sequences, key=lambda r: r.name)))
        object.__setattr__(self, "groups", tuple(sorted(self.groups)))
        seen: set[str] = set()
        for name in self.names():
            if name in seen:
                raise ValueError(f"duplicate rule name {name!r}")
            seen.add(name)

    def names(self) -> list[str]:
        rules = [*self.statistical, *self.near_miss, *self.sequences, *self.groups]
        return [r.name for r in rules]

    def features(self) -> set[str]:
        """Every feature id any rule refers to."""
        out = {r.recommend for r in (*self.statistical, *self.near_miss, *self.sequences)}
        for g in self.groups:
            out.update((g.antecedent, g.consequent))
        return out

    def __len__(self) -> int:
        return len(self.statistical) + len(self.near_miss) + len(self.sequences) + len(self.groups)


@dataclass(frozen=True)
class Firing:
    """Raw evidence that ``feature`` may help, first established at time ``t``."""

    feature: str
    t: float
    rule: str
    strategy: str
    evidence: Mapping[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "feature": self.feature,
            "t": self.t,
            "rule": self.rule,
            "strategy": self.strategy,
            "evidence": dict(self.evidence),
        }


# -- statistical -------------------------------------------------------------

def _deviates(user_mean: float, mean: float, stddev: float, k: float, sides: str) -> bool:
    if stddev == 0:
        if sides == "above":
            return user_mean > mean
        if sides == "below":
            return user_mean < mean
        return user_mean != mean
    limit = k * stddev
    if sides == "above":
        return user_mean - mean >= limit
    if sides == "below":
        return mean - user_mean >= limit
    return abs(user_mean - mean) >= limit


def detect_statistical(trace: Trace, rule: StatisticalRule, baselines: BaselineSet) -> list[Firing]:
    """Compare the running mean of the rule's signal against the baseline.

    The comparison starts once ``min_samples`` samples are in, and the rule
    fires at most once, at the first sample where the deviation reaches
    ``k_sigma`` standard deviations on the configured side(s).

    Raises:
        MissingBaselineError: if ``baselines`` lacks the rule's signal.
    """
    base = baselines[rule.signal]
    total = 0.0
    for i, (t, x) in enumerate(signal_samples(trace, rule.signal), start=1):
        total += x
        if i < rule.min_samples:
            continue
        user_mean = total / i
        if _deviates(user_mean, base.mean, base.stddev, rule.k_sigma, rule.sides):
            evidence = {
                "user_mean": user_mean,
                "baseline_mean": base.mean,
                "baseline_stddev": base.stddev,
                "n": i,
            }
            return [Firing(rule.recommend, t, rule.name, "statistical", evidence)]
    return []


# -- near-miss ---------------------------------------------------------------

def press_bursts(press_times: list[float], slowest: float) -> list[list[float]]:
    """Split press times into maximal runs whose consecutive gaps are all <= ``slowest``."""
    bursts: list[list[float]] = []
    for t in press_times:
        if bursts and t - bursts[-1][-1] <= slowest:
            bursts[-1].append(t)
        else:
            bursts.append([t])
    return bursts


def detect_near_miss(trace: Trace, rule: NearMissRule) -> list[Firing]:
    """Count double/triple-click attempts that were too slow for the current level.

    A burst of two or three presses is an attempt; its largest gap decides
    success (within the current threshold) or near-miss (beyond it but within
    the slowest one). Every ``min_count`` near-misses produce one firing at the
    last press of the attempt that completed the count.
    """
    presses = [
        ev.t for ev in trace.events
        if isinstance(ev.payload, ButtonPress) and ev.payload.button == rule.button
    ]
    current = rule.current_threshold
    firings = []
    count = 0
    for burst in press_bursts(presses, rule.slowest):
        if len(burst) not in (2, 3):
            continue
        gap = max(b - a for a, b in zip(burst, burst[1:]))
        if gap <= current:
            continue
        count += 1
        if count >= rule.min_count:
            evidence = {"press_times": list(burst), "max_gap": gap, "click_count": len(burst)}
            firings.append(Firing(rule.recommend, burst[-1], rule.name, "near_miss", evidence))
            count = 0
    return firings


# -- action sequences ----------------------------------------------------------

def detect_sequence(trace: Trace, pattern: SequencePattern) -> list[Firing]:
    """Greedy, non-overlapping scan for the pattern's actions in order.

    Unrelated actions between steps are ignored. Whenever an action arrives
    after the next step's ``within`` or the overall window has lapsed, the
    partial match is dropped and that action may begin a new one.
    """
    steps = pattern.steps
    matched: list[float] = []
    firings = []
    for ev in trace.events:
        if not isinstance(ev.payload, UIAction):
            continue
        t = ev.t
        if matched:
            nxt = steps[len(matched)]
            if t - matched[-1] > nxt.within or t - matched[0] > pattern.window:
                matched = []
        expected = steps[len(matched)].action
        if ev.payload.action != expected:
            continue
        matched.append(t)
        if len(matched) == len(steps):
            firings.append(Firing(pattern.recommend, t, pattern.name, "sequence",
                                  {"matched_step_times": matched}))
            matched = []
    return firings


# -- grouped ---------------------------------------------------------------------

def detect_grouped(trace: Trace, rules: list[GroupRule] | tuple[GroupRule, ...]) -> list[Firing]:
    """Recommend a rule's consequent when the user turns on its antecedent.

    The enabled set starts from the trace's ``initial_settings`` and follows
    its setting changes. A rule fires at most once per trace, and not while
    its consequent is already on.
    """
    enabled = set(trace.initial_settings)
    fired: set[GroupRule] = set()
    firings = []
    for ev in trace.events:
        if not isinstance(ev.payload, SettingChange):
            continue
        feature = ev.payload.feature
        if not ev.payload.enabled:
            enabled.discard(feature)
            continue
        if feature in enabled:
            continue
        enabled.add(feature)
        for rule in rules:
            if rule.antecedent != feature or rule in fired or rule.consequent in enabled:
                continue
            fired.add(rule)
            firings.append(Firing(rule.consequent, ev.t, rule.name, "group", {"antecedent": feature}))
    return firings


# -- all together ------------------------------------------------------------------

def validate_features(rules: RuleSet, catalog: FeatureCatalog) -> None:
    """Ensure every rule targets a recommendable catalog feature.

    Raises:
        UnknownFeatureError: naming the first offending feature.
    """
    targets = [r.recommend for r in (*rules.statistical, *rules.near_miss, *rules.sequences)]
    targets += [g.consequent for g in rules.groups]
    for fid in sorted(rules.features()):
        if fid not in catalog:
            raise UnknownFeatureError(fid)
    for fid in sorted(set(targets)):
        if not catalog.is_recommendable(fid):
            raise UnknownFeatureError(fid, "tagged required-only, cannot be recommended")


def detect_all(trace: Trace, rules: RuleSet, baselines: BaselineSet, catalog: FeatureCatalog) -> list[Firing]:
    """Run every rule and return all firings ordered by (t, rule name)."""
    validate_features(rules, catalog)
    firings: list[Firing] = []
    for rule in rules.statistical:
        firings.extend(detect_statistical(trace, rule, baselines))
    for rule in rules.near_miss:
        firings.extend(detect_near_miss(trace, rule))
    for pattern in rules.sequences:
        firings.extend(detect_sequence(trace, pattern))
    firings.extend(detect_grouped(trace, rules.groups))
    firings.sort(key=lambda f: (f.t, f.rule))
    return firings


def rule_stats(trace: Trace, rules: RuleSet, firings: list[Firing]) -> dict[str, dict[str, Any]]:
    """Per-rule summary: whether the trace held enough input to evaluate it, and how often it fired."""
    counts: dict[str, int] = {}
    for f in firings:
        counts[f.rule] = counts.get(f.rule, 0) + 1
    stats: dict[str, dict[str, Any]] = {}
    for rule in rules.statistical:
        evaluated = len(signal_samples(trace, rule.signal)) >= rule.min_samples
        stats[rule.name] = {"evaluated": evaluated, "fired": counts.get(rule.name, 0)}
    for rule in rules.near_miss:
        evaluated = any(isinstance(e.payload, ButtonPress) and e.payload.button == rule.button for e in trace)
        stats[rule.name] = {"evaluated": evaluated, "fired": counts.get(rule.name, 0)}
    has_actions = any(isinstance(e.payload, UIAction) for e in trace)
    for pattern in rules.sequences:
        stats[pattern.name] = {"evaluated": has_actions, "fired": counts.get(pattern.name, 0)}
    has_settings = any(isinstance(e.payload, SettingChange) for e in trace)
    for g in rules.groups:
        stats[g.name] = {"evaluated": has_settings, "fired": counts.get(g.name, 0)}
    return stats
