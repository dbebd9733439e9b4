"""Accessibility feature catalog and group implications.

The catalog document is line oriented::

    # comment
    feature larger_text category=vision strategies=statistical,grouping group=3
    group bold_text => larger_text
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from types import MappingProxyType
from typing import Iterator, Mapping

from .errors import CatalogError

CATEGORIES = frozenset({"vision", "hearing", "physical_motor", "general"})
STRATEGIES = frozenset({"required", "statistical", "near_miss", "sequence", "grouping"})

FEATURE_ID = re.compile(r"[a-z][a-z0-9_]*\Z")


def is_feature_id(token: str) -> bool:
    return bool(FEATURE_ID.match(token))


@dataclass(frozen=True)
class FeatureEntry:
    feature: str
    category: str
    strategies: frozenset[str]
    group: int | None = None

    def __post_init__(self):
        if not is_feature_id(self.feature):
            raise ValueError(f"invalid feature id {self.feature!r}")
        if self.category not in CATEGORIES:
            raise ValueError(f"unknown category {self.category!r}")
        if not self.strategies:
            raise ValueError(f"feature {self.feature!r} has no strategies")
        unknown = set(self.strategies) - STRATEGIES
        if unknown:
            raise ValueError(f"unknown strategies {sorted(unknown)}")
        object.__setattr__(self, "strategies", frozenset(self.strategies))

    @property
    def recommendable(self) -> bool:
        """False for features tagged only ``required``; detectors never target those."""
        return bool(self.strategies - {"required"})


@dataclass(frozen=True, order=True)
class GroupRule:
    antecedent: str
    consequent: str

    def __post_init__(self):
        if self.antecedent == self.consequent:
            raise ValueError(f"self-implication {self.antecedent} => {self.consequent}")

    @property
    def name(self) -> str:
        return f"{self.antecedent}=>{self.consequent}"


@dataclass(frozen=True)
class FeatureCatalog:
    """Immutable set of feature entries plus directional group rules."""

    entries: Mapping[str, FeatureEntry] = field(default_factory=dict)
    group_rules: tuple[GroupRule, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "entries", MappingProxyType(dict(self.entries)))
        object.__setattr__(self, "group_rules", tuple(self.group_rules))
        for rule in self.group_rules:
            for fid in (rule.antecedent, rule.consequent):
                if fid not in self.entries:
                    raise CatalogError(f"group rule {rule.name} references unknown feature {fid!r}")
        dupes = [r for r, c in Counter(self.group_rules).items() if c > 1]
        if dupes:
            raise CatalogError(f"duplicate group rule {dupes[0].name}")
        groups = Counter(e.group for e in self.entries.values() if e.group is not None)
        lonely = sorted(g for g, c in groups.items() if c < 2)
        if lonely:
            raise CatalogError(f"group {lonely[0]} has only one member")

    def __contains__(self, feature: object) -> bool:
        return feature in self.entries

    def __getitem__(self, feature: str) -> FeatureEntry:
        return self.entries[feature]

    def __iter__(self) -> Iterator[str]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FeatureCatalog):
            return NotImplemented
        return dict(self.entries) == dict(other.entries) and self.group_rules == other.group_rules

    def __hash__(self) -> int:
        return hash((frozenset(self.entries.items()), self.group_rules))

    def is_recommendable(self, feature: str) -> bool:
        entry = self.entries.get(feature)
        return entry is not None and entry.recommendable

    def members(self, group: int) -> list[str]:
        return [fid for fid, e in self.entries.items() if e.group == group]


def _parse_feature_line(tokens: list[str], lineno: int) -> FeatureEntry:
    if len(tokens) < 2:
        raise CatalogError("feature line needs an id", lineno)
    fid = tokens[1]
    if not is_feature_id(fid):
        raise CatalogError(f"invalid feature id {fid!r}", lineno)
    attrs: dict[str, str] = {}
    for tok in tokens[2:]:
        key, sep, value = tok.partition("=")
        if not sep or not value:
            raise CatalogError(f"expected key=value, got {tok!r}", lineno)
        if key not in ("category", "strategies", "group"):
            raise CatalogError(f"unknown attribute {key!r}", lineno)
        if key in attrs:
            raise CatalogError(f"repeated attribute {key!r}", lineno)
        attrs[key] = value
    for required in ("category", "strategies"):
        if required not in attrs:
            raise CatalogError(f"feature {fid!r} missing {required}=", lineno)
    group = None
    if "group" in attrs:
        if not attrs["group"].isdigit():
            raise CatalogError(f"group must be a non-negative integer, got {attrs['group']!r}", lineno)
        group = int(attrs["group"])
    try:
        return FeatureEntry(fid, attrs["category"], frozenset(attrs["strategies"].split(",")), group)
    except ValueError as exc:
        raise CatalogError(str(exc), lineno) from None


def load_catalog(source: str | bytes) -> FeatureCatalog:
    """Parse a catalog document.

    Raises:
        CatalogError: on malformed lines, duplicate feature ids, self- or
            duplicate implications, or rules naming unknown features.
    """
    if isinstance(source, bytes):
        try:
            source = source.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise CatalogError(f"not UTF-8: {exc.reason}") from None
    entries: dict[str, FeatureEntry] = {}
    rules: list[tuple[GroupRule, int]] = []
    for lineno, raw in enumerate(source.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if tokens[0] == "feature":
            entry = _parse_feature_line(tokens, lineno)
            if entry.feature in entries:
                raise CatalogError(f"duplicate feature id {entry.feature!r}", lineno)
            entries[entry.feature] = entry
        elif tokens[0] == "group":
            if len(tokens) != 4 or tokens[2] != "=>":
                raise CatalogError("expected 'group <antecedent> => <consequent>'", lineno)
            try:
                rule = GroupRule(tokens[1], tokens[3])
            except ValueError as exc:
                raise CatalogError(str(exc), lineno) from None
            if any(rule == r for r, _ in rules):
                raise CatalogError(f"duplicate group rule {rule.name}", lineno)
            rules.append((rule, lineno))
        else:
            raise CatalogError(f"unknown statement {tokens[0]!r}", lineno)
    for rule, lineno in rules:
        for fid in (rule.antecedent, rule.consequent):
            if fid not in entries:
                raise CatalogError(f"group rule {rule.name} references unknown feature {fid!r}", lineno)
    return FeatureCatalog(entries, tuple(r for r, _ in rules))


def default_group_rules() -> list[GroupRule]:
    """The three implications implemented by the grouped prototype."""
    return [
        GroupRule("assistive_touch", "side_button"),
        GroupRule("closed_captioning", "type_to_siri"),
        GroupRule("bold_text", "larger_text"),
    ]


def default_catalog() -> FeatureCatalog:
    text = resources.files(__package__).joinpath("data/catalog.txt").read_text(encoding="utf-8")
    return load_catalog(text)
