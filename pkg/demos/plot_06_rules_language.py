"""
The rules language
==================

Detectors are configured in a small line-oriented language. Documents parse
into a ``RuleSet`` and print back in a canonical form.
"""

from needsense.catalog import default_catalog
from needsense.errors import RuleParseError
from needsense.rules_config import parse_rules, print_rules

source = """
# tighter font rule, plus one grouping
statistical font_close signal viewing_distance sides below k 1.5 min_samples 20 recommend larger_text
nearmiss slow_click button side ladder 0.25 0.35 0.5 recommend side_button_click_speed
group bold_text => larger_text
"""
rules = parse_rules(source, default_catalog())
print(print_rules(rules))
assert parse_rules(print_rules(rules)) == rules

# %%
# Errors point at the offending token and list what was expected.

broken = [
    "statistical font signal distance sides both k 2 min_samples 30 recommend larger_text",
    "nearmiss c button side ladder 0.5 0.35 0.25 recommend side_button_click_speed",
    "sequence m: photo_captured -> recommend magnifier",
    "group zoom => telepathy",
]
for text in broken:
    try:
        parse_rules(text, default_catalog())
    except RuleParseError as exc:
        print(exc)
