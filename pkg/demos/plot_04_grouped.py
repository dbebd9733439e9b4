"""
Grouped features
================

Features that tend to be used together are linked by implications. When a
user turns on the antecedent, the consequent is suggested, unless it is
already on.
"""

from needsense.catalog import default_catalog
from needsense.detectors import detect_grouped
from needsense.rules_config import default_rules
from needsense.signals import SettingChange, SignalEvent, Trace, TraceMeta

catalog = default_catalog()
groups = default_rules().groups
for g in groups:
    print(f"{g.antecedent:<18} => {g.consequent:<14} (group {catalog[g.antecedent].group})")

# %%
# Turning on bold text suggests larger text.

trace = Trace((SignalEvent(5.0, SettingChange("bold_text", True)),))
print([(f.feature, f.t) for f in detect_grouped(trace, groups)])

# %%
# Already using larger text (from the session's initial settings): silence.

meta = TraceMeta(initial_settings={"larger_text": True})
trace = Trace((SignalEvent(5.0, SettingChange("bold_text", True)),), meta)
print([(f.feature, f.t) for f in detect_grouped(trace, groups)])
