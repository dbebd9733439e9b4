"""Detect latent accessibility needs in device-usage traces and recommend features."""

from .baseline import Baseline, BaselineSet, calibrate, load_baselines, published_defaults, save_baselines
from .catalog import FeatureCatalog, FeatureEntry, GroupRule, default_catalog, default_group_rules, load_catalog
from .detectors import (
    Firing,
    NearMissRule,
    RuleSet,
    SequencePattern,
    SequenceStep,
    StatisticalRule,
    detect_all,
    detect_grouped,
    detect_near_miss,
    detect_sequence,
    detect_statistical,
)
from .policy import PolicyConfig, Recommendation, default_templates, surface
from .rules_config import default_rules, parse_rules, print_rules
from .signals import (
    AudioSnapshot,
    ButtonPress,
    SettingChange,
    SignalEvent,
    Trace,
    TraceMeta,
    UIAction,
    ViewingDistance,
    filter_signal,
    parse_trace,
    serialize_trace,
)
from .tracegen import GenSpec, UserProfile, generate

__version__ = "0.1.0"
