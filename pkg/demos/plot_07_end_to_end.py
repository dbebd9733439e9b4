"""
End to end: traces in, recommendations out
==========================================

The ``Engine`` bundles rules, baselines, catalog, policy and message
templates. Policy drops repeats within the cooldown, features already on,
and anything beyond the per-trace cap.
"""

from needsense import published_defaults
from needsense.catalog import default_catalog
from needsense.cli import Engine
from needsense.policy import PolicyConfig, default_templates
from needsense.rules_config import default_rules
from needsense.signals import serialize_trace
from needsense.tracegen import (
    ClickProfile,
    DistanceProfile,
    GenSpec,
    UserProfile,
    VolumeProfile,
    generate,
)

engine = Engine(default_rules(), published_defaults(), default_catalog(), PolicyConfig(), default_templates())

profile = UserProfile(
    distance=DistanceProfile(0.52, 0.05),
    volume=VolumeProfile(0.9, 0.05, playing_prob=0.5),
    click_gap=ClickProfile(0.42, 0.03, attempts=4),
    magnifier_workaround=True,
    enable_events=((30.0, "assistive_touch"),),
)
trace = generate(GenSpec(profile, seed=11, duration=300.0))
print(len(trace), "events;", serialize_trace(trace).count("\n"), "lines of JSON")

report = engine.run(trace, "demo")
for f in report.firings:
    print(f"fired  {f.t:8.2f}  {f.rule:<28} {f.feature}")
for r in report.recommendations:
    print(f"shown  {r.t:8.2f}  {r.message}")

# %%
# Without the cap every distinct feature is shown once.

engine.policy = PolicyConfig(max_per_trace=None)
print(len(engine.run(trace, "demo").recommendations), "recommendation(s) uncapped")
