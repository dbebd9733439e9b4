import random

import pytest
from hypothesis import given, settings, strategies as st

from needsense.catalog import default_catalog, default_group_rules
from needsense.detectors import RuleSet
from needsense.errors import RuleFeatureError, RuleParseError, RuleSemanticError
from needsense.rules_config import default_rules, parse_rules, print_rules

from gen_rules import random_rules_text


def test_statistical_statement():
    rules = parse_rules(
        "statistical font signal viewing_distance sides both k 2.0 min_samples 30 recommend larger_text"
    )
    (rule,) = rules.statistical
    assert (rule.name, rule.signal, rule.sides, rule.k_sigma, rule.min_samples, rule.recommend) == (
        "font", "viewing_distance", "both", 2.0, 30, "larger_text"
    )


def test_group_statement():
    rules = parse_rules("group bold_text => larger_text")
    assert [(g.antecedent, g.consequent) for g in rules.groups] == [("bold_text", "larger_text")]


def test_decreasing_ladder():
    text = "nearmiss side_click button side ladder 0.5 0.35 0.25 min_count 1 recommend side_button_click_speed"
    with pytest.raises(RuleSemanticError, match="ladder must be strictly increasing") as exc:
        parse_rules(text)
    assert (exc.value.line, exc.value.col) == (1, 33)


def test_sequence_statement():
    text = ("sequence magnifier: photo_captured -> photo_opened within 60 -> pinch_zoom within 60 "
            "window 120 recommend magnifier")
    (pattern,) = parse_rules(text).sequences
    assert [s.action for s in pattern.steps] == ["photo_captured", "photo_opened", "pinch_zoom"]
    assert [s.within for s in pattern.steps] == [None, 60.0, 60.0]
    assert pattern.window == 120.0


def test_optional_clauses_default():
    (rule,) = parse_rules("nearmiss c button side ladder 0.25 0.35 0.5 recommend side_button_click_speed").near_miss
    assert (rule.current_level, rule.min_count) == ("default", 1)
    (pattern,) = parse_rules("sequence m : photo_captured -> pinch_zoom window 120 recommend magnifier").sequences
    assert pattern.steps[1].within == 60.0


def test_comments_and_blank_lines():
    text = "# leading\n\n   group bold_text => larger_text   # why not\n"
    assert len(parse_rules(text).groups) == 1


@pytest.mark.parametrize("text, line, col, expected", [
    ("statistical", 1, 12, ("NAME",)),
    ("group bold_text -> larger_text", 1, 17, ("=>",)),
    ("\n\n  frobnicate x", 3, 3, ("statistical", "nearmiss", "sequence", "group")),
    ("statistical s signal viewing_distance sides up k 2 min_samples 3 recommend zoom", 1, 45,
     ("above", "below", "both")),
    ("statistical s signal viewing_distance sides both k two min_samples 3 recommend zoom", 1, 52, ("k",)),
    ("statistical s signal viewing_distance sides both k 2 min_samples 3.5 recommend zoom", 1, 66, ("min_samples",)),
    ("group a => b extra", 1, 14, ("end of line",)),
    ("sequence m: photo_captured window 3 recommend magnifier", 1, 28, ("->", "within")),
])
def test_syntax_errors_are_positioned(text, line, col, expected):
    with pytest.raises(RuleParseError) as exc:
        parse_rules(text)
    assert (exc.value.line, exc.value.col) == (line, col)
    assert exc.value.expected == expected
    assert str(exc.value).startswith(f"{line}:{col}:")


@pytest.mark.parametrize("text, match", [
    ("statistical s signal brightness sides both k 2 min_samples 3 recommend zoom", "unknown signal"),
    ("statistical s signal viewing_distance sides both k 0 min_samples 3 recommend zoom", "k must be positive"),
    ("statistical s signal viewing_distance sides both k 2 min_samples 0 recommend zoom", "min_samples"),
    ("statistical s signal viewing_distance sides both k 1e999 min_samples 3 recommend zoom", "not finite"),
    ("group zoom => zoom", "self-implication"),
    ("group zoom => magnifier\ngroup zoom => magnifier", "duplicate rule name"),
    ("sequence m: photo_captured -> pinch_zoom within 200 window 120 recommend magnifier", "exceeds window"),
    ("sequence m: photo_captured within 5 -> pinch_zoom window 120 recommend magnifier", "first step"),
    ("group a => b\nstatistical a signal audio_volume sides above k 2 min_samples 1 recommend b\n"
     "nearmiss a button side ladder 1 2 3 recommend b", "duplicate rule name 'a'"),
])
def test_semantic_errors(text, match):
    with pytest.raises(RuleSemanticError, match=match) as exc:
        parse_rules(text)
    assert exc.value.line >= 1 and exc.value.col >= 1


def test_unknown_feature_against_catalog():
    text = "group bold_text => larger_text\ngroup bold_text => sparkles\n"
    parse_rules(text)
    with pytest.raises(RuleFeatureError, match="sparkles") as exc:
        parse_rules(text, default_catalog())
    assert exc.value.line == 2


def test_invalid_utf8_positioned():
    with pytest.raises(RuleParseError) as exc:
        parse_rules(b"group a => b\ngroup \xff => b\n")
    assert (exc.value.line, exc.value.col) == (2, 7)


def test_empty_ruleset_prints_empty():
    assert print_rules(RuleSet()) == ""
    assert parse_rules("") == RuleSet()


def test_default_rules():
    rules = default_rules()
    assert len(rules.statistical) == 2
    assert len(rules.near_miss) == 1
    assert [p.recommend for p in rules.sequences] == ["magnifier"]
    assert sorted(rules.groups) == sorted(default_group_rules())
    subs = [r for r in rules.statistical if r.recommend == "subtitles_captions"]
    assert [(r.signal, r.sides, r.k_sigma) for r in subs] == [("audio_volume", "above", 2.0)]
    font = [r for r in rules.statistical if r.recommend == "larger_text"]
    assert [(r.signal, r.sides, r.k_sigma) for r in font] == [("viewing_distance", "both", 2.0)]
    (click,) = rules.near_miss
    assert click.ladder == (0.25, 0.35, 0.5)


def test_default_rules_print_seven_lines():
    text = print_rules(default_rules())
    assert len(text.splitlines()) == 7
    assert parse_rules(text) == default_rules()


def test_canonical_order_and_numbers():
    text = ("group zoom => magnifier\n"
            "statistical b signal audio_volume sides above k 2 min_samples 3 recommend zoom\n"
            "statistical a signal audio_volume sides above k 0.1 min_samples 3 recommend zoom\n")
    assert print_rules(parse_rules(text)).splitlines() == [
        "statistical a signal audio_volume sides above k 0.1 min_samples 3 recommend zoom",
        "statistical b signal audio_volume sides above k 2.0 min_samples 3 recommend zoom",
        "group zoom => magnifier",
    ]


@given(st.randoms(use_true_random=False))
def test_round_trip_random_documents(rnd):
    text = random_rules_text(random.Random(rnd.random()))
    rules = parse_rules(text)
    printed = print_rules(rules)
    assert parse_rules(printed) == rules
    assert print_rules(parse_rules(printed)) == printed


@given(st.binary(max_size=200))
def test_random_bytes_never_crash(data):
    try:
        parse_rules(data)
    except RuleParseError as exc:
        assert exc.line >= 1 and exc.col >= 1


@settings(max_examples=300)
@given(st.text(alphabet=st.sampled_from(list("abn:=->#0123456789. \n\tgroupwithin")), max_size=80))
def test_random_text_never_crash(text):
    try:
        parse_rules(text)
    except RuleParseError as exc:
        assert exc.line >= 1 and exc.col >= 1
