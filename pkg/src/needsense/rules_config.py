"""Parser and canonical printer for the line-oriented rules language.

One statement per line, tokens separated by whitespace, ``#`` starts a
comment::

    statistical font_size signal viewing_distance sides both k 2.0 min_samples 30 recommend larger_text
    nearmiss side_click button side ladder 0.25 0.35 0.5 level default min_count 1 recommend side_button_click_speed
    sequence magnifier: photo_captured -> photo_opened within 60 -> pinch_zoom within 60 window 120 recommend magnifier
    group bold_text => larger_text
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from importlib import resources

from .baseline import SIGNALS
from .catalog import FeatureCatalog, GroupRule
from .detectors import (
    LEVELS,
    SIDES,
    NearMissRule,
    RuleSet,
    SequencePattern,
    SequenceStep,
    StatisticalRule,
)
from .errors import RuleFeatureError, RuleParseError, RuleSemanticError
from .signals import ACTIONS, BUTTONS

KEYWORDS = ("statistical", "nearmiss", "sequence", "group")

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_FEATURE = re.compile(r"[a-z][a-z0-9_]*\Z")
_NUM = re.compile(r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?\Z")
_INT = re.compile(r"\d+\Z")
_TOKEN = re.compile(r":|[^\s:]+")


@dataclass(frozen=True)
class Token:
    text: str
    line: int
    col: int


class _Line:
    """Cursor over the tokens of one statement line."""

    def __init__(self, tokens: list[Token], line: int, end_col: int):
        self.tokens = tokens
        self.pos = 0
        self.line = line
        self.end_col = end_col

    def peek(self) -> Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def _fail(self, message: str, expected: tuple[str, ...]) -> RuleParseError:
        tok = self.peek()
        if tok is None:
            return RuleParseError(f"{message}, found end of line", self.line, self.end_col, expected)
        return RuleParseError(f"{message}, found {tok.text!r}", tok.line, tok.col, expected)

    def next(self, what: str, expected: tuple[str, ...] = ()) -> Token:
        tok = self.peek()
        if tok is None:
            raise self._fail(f"expected {what}", expected or (what,))
        self.pos += 1
        return tok

    def keyword(self, word: str) -> Token:
        tok = self.peek()
        if tok is None or tok.text != word:
            raise self._fail(f"expected {word!r}", (word,))
        self.pos += 1
        return tok

    def accept(self, word: str) -> bool:
        tok = self.peek()
        if tok is not None and tok.text == word:
            self.pos += 1
            return True
        return False

    def match(self, pattern: re.Pattern, what: str) -> Token:
        tok = self.peek()
        if tok is None or not pattern.match(tok.text):
            raise self._fail(f"expected {what}", (what,))
        self.pos += 1
        return tok

    def choice(self, options: tuple[str, ...], what: str) -> Token:
        tok = self.peek()
        if tok is None or tok.text not in options:
            raise self._fail(f"expected {what}", options)
        self.pos += 1
        return tok

    def number(self, what: str = "NUM") -> tuple[float, Token]:
        tok = self.match(_NUM, what)
        value = float(tok.text)
        if not math.isfinite(value):
            raise RuleSemanticError(f"{what} {tok.text!r} is not finite", tok.line, tok.col)
        return value, tok

    def integer(self, what: str = "INT") -> tuple[int, Token]:
        tok = self.match(_INT, what)
        return int(tok.text), tok

    def end(self) -> None:
        if self.peek() is not None:
            raise self._fail("expected end of line", ("end of line",))


def _tokenize(text: str) -> list[_Line]:
    lines = []
    for lineno, raw in enumerate(text.split("\n"), start=1):
        raw = raw.rstrip("\r")
        code = raw.split("#", 1)[0]
        tokens = [Token(m.group(), lineno, m.start() + 1) for m in _TOKEN.finditer(code)]
        if tokens:
            lines.append(_Line(tokens, lineno, len(code.rstrip()) + 1))
    return lines


def _build(factory, head: Token, *args, **kwargs):
    try:
        return factory(*args, **kwargs)
    except ValueError as exc:
        raise RuleSemanticError(str(exc), head.line, head.col) from None


def _signal(cur: _Line) -> str:
    tok = cur.next("SIGNAL", SIGNALS)
    if tok.text not in SIGNALS:
        raise RuleSemanticError(f"unknown signal {tok.text!r}", tok.line, tok.col, SIGNALS)
    return tok.text


def _parse_statistical(cur: _Line, head: Token) -> StatisticalRule:
    name = cur.match(_NAME, "NAME").text
    cur.keyword("signal")
    signal = _signal(cur)
    cur.keyword("sides")
    sides = cur.choice(SIDES, "SIDES").text
    cur.keyword("k")
    k, k_tok = cur.number("k")
    if k <= 0:
        raise RuleSemanticError("k must be positive", k_tok.line, k_tok.col)
    cur.keyword("min_samples")
    min_samples, ms_tok = cur.integer("min_samples")
    if min_samples < 1:
        raise RuleSemanticError("min_samples must be at least 1", ms_tok.line, ms_tok.col)
    cur.keyword("recommend")
    feature = cur.match(_FEATURE, "FEATURE")
    return _build(StatisticalRule, head, name, signal, sides, feature.text, k, min_samples)


def _parse_nearmiss(cur: _Line, head: Token) -> NearMissRule:
    name = cur.match(_NAME, "NAME").text
    cur.keyword("button")
    button = cur.choice(BUTTONS, "BUTTON").text
    ladder_tok = cur.keyword("ladder")
    ladder = tuple(cur.number("ladder threshold")[0] for _ in range(3))
    if not all(v > 0 for v in ladder):
        raise RuleSemanticError("ladder thresholds must be positive", ladder_tok.line, ladder_tok.col)
    if not ladder[0] < ladder[1] < ladder[2]:
        raise RuleSemanticError("ladder must be strictly increasing", ladder_tok.line, ladder_tok.col)
    level = "default"
    if cur.accept("level"):
        level = cur.choice(LEVELS, "LEVEL").text
    min_count = 1
    if cur.accept("min_count"):
        min_count, mc_tok = cur.integer("min_count")
        if min_count < 1:
            raise RuleSemanticError("min_count must be at least 1", mc_tok.line, mc_tok.col)
    cur.keyword("recommend")
    feature = cur.match(_FEATURE, "FEATURE")
    return _build(NearMissRule, head, name, button, feature.text, ladder, level, min_count)


def _parse_sequence(cur: _Line, head: Token) -> SequencePattern:
    name = cur.match(_NAME, "NAME").text
    cur.keyword(":")
    steps = []
    while True:
        action = cur.choice(ACTIONS, "ACTION")
        within = None
        if cur.accept("within"):
            within, w_tok = cur.number("within")
            if not steps:
                raise RuleSemanticError("the first step cannot carry a 'within' limit", w_tok.line, w_tok.col)
            if within <= 0:
                raise RuleSemanticError("within must be positive", w_tok.line, w_tok.col)
        steps.append(SequenceStep(action.text, within))
        if not cur.accept("->"):
            break
    if len(steps) < 2:
        raise cur._fail("expected '->'", ("->", "within"))
    cur.keyword("window")
    window, win_tok = cur.number("window")
    if window <= 0:
        raise RuleSemanticError("window must be positive", win_tok.line, win_tok.col)
    cur.keyword("recommend")
    feature = cur.match(_FEATURE, "FEATURE")
    return _build(SequencePattern, head, name, tuple(steps), feature.text, window)


def _parse_group(cur: _Line, head: Token) -> GroupRule:
    antecedent = cur.match(_FEATURE, "FEATURE").text
    cur.keyword("=>")
    consequent = cur.match(_FEATURE, "FEATURE").text
    return _build(GroupRule, head, antecedent, consequent)


_PARSERS = {
    "statistical": _parse_statistical,
    "nearmiss": _parse_nearmiss,
    "sequence": _parse_sequence,
    "group": _parse_group,
}


def parse_rules(source: str | bytes, catalog: FeatureCatalog | None = None) -> RuleSet:
    """Parse a rules document into a :class:`RuleSet`.

    If ``catalog`` is given, every referenced feature must be in it.

    Raises:
        RuleParseError: syntax errors, with 1-based line/column and the
            expected tokens.
        RuleSemanticError: invariant violations (ladder order, duplicate
            names, unknown signals, ...), also positioned.
        RuleFeatureError: a feature missing from ``catalog``.
    """
    if isinstance(source, bytes):
        try:
            source = source.decode("utf-8")
        except UnicodeDecodeError as exc:
            prefix = source[: exc.start]
            line = prefix.count(b"\n") + 1
            col = exc.start - (prefix.rfind(b"\n") + 1) + 1
            raise RuleParseError(f"invalid UTF-8 ({exc.reason})", line, col) from None
    by_kind: dict[str, list] = {k: [] for k in KEYWORDS}
    names: dict[str, Token] = {}
    features: list[tuple[str, Token]] = []
    for cur in _tokenize(source):
        head = cur.choice(KEYWORDS, "statement keyword")
        rule = _PARSERS[head.text](cur, head)
        cur.end()
        if rule.name in names:
            prev = names[rule.name]
            raise RuleSemanticError(
                f"duplicate rule name {rule.name!r} (first defined at line {prev.line})", head.line, head.col
            )
        names[rule.name] = head
        by_kind[head.text].append(rule)
        if isinstance(rule, GroupRule):
            features += [(rule.antecedent, head), (rule.consequent, head)]
        else:
            features.append((rule.recommend, head))
    if catalog is not None:
        for fid, tok in features:
            if fid not in catalog:
                raise RuleFeatureError(f"unknown feature {fid!r}", tok.line, tok.col)
    return RuleSet(
        statistical=tuple(by_kind["statistical"]),
        near_miss=tuple(by_kind["nearmiss"]),
        sequences=tuple(by_kind["sequence"]),
        groups=tuple(by_kind["group"]),
    )


def _num(value: float) -> str:
    return repr(float(value))


def print_rules(rules: RuleSet) -> str:
    """Canonical text: statements grouped by kind, sorted by name, every clause explicit."""
    lines = []
    for r in rules.statistical:
        lines.append(
            f"statistical {r.name} signal {r.signal} sides {r.sides} k {_num(r.k_sigma)} "
            f"min_samples {r.min_samples} recommend {r.recommend}"
        )
    for r in rules.near_miss:
        ladder = " ".join(_num(v) for v in r.ladder)
        lines.append(
            f"nearmiss {r.name} button {r.button} ladder {ladder} level {r.current_level} "
            f"min_count {r.min_count} recommend {r.recommend}"
        )
    for p in rules.sequences:
        steps = [p.steps[0].action] + [f"{s.action} within {_num(s.within)}" for s in p.steps[1:]]
        lines.append(f"sequence {p.name}: {' -> '.join(steps)} window {_num(p.window)} recommend {p.recommend}")
    for g in rules.groups:
        lines.append(f"group {g.antecedent} => {g.consequent}")
    return "".join(line + "\n" for line in lines)


def default_rules() -> RuleSet:
    """The four prototype recommenders plus the three group implications."""
    text = resources.files(__package__).joinpath("data/default.a11yrules").read_text(encoding="utf-8")
    return parse_rules(text)
