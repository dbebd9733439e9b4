"""Command-line front end: calibrate, detect, simulate, report.

Exit codes: 0 success, 2 input or parse error, 3 empty calibration,
4 rules naming an unknown or non-recommendable feature.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .baseline import BaselineSet, calibrate, load_baselines, published_defaults, save_baselines
from .catalog import FeatureCatalog, default_catalog, load_catalog
from .detectors import Firing, RuleSet, detect_all, rule_stats
from .errors import (
    CalibrationError,
    MissingBaselineError,
    NeedsenseError,
    RuleFeatureError,
    UnknownFeatureError,
)
from .policy import PolicyConfig, Recommendation, default_templates, parse_templates, surface
from .rules_config import default_rules, parse_rules
from .signals import KINDS, Trace, read_trace, serialize_trace
from .tracegen import GenSpec, generate, load_profile

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_EMPTY_CALIBRATION = 3
EXIT_RULE_FEATURE = 4

RULES_ENV = "NEEDSENSE_RULES"


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INPUT):
        super().__init__(message)
        self.code = code


@dataclass
class Report:
    trace_id: str
    firings: list[Firing]
    recommendations: list[Recommendation]
    rule_stats: dict[str, dict[str, Any]] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "trace_id": self.trace_id,
            "firings": [f.to_dict() for f in self.firings],
            "recommendations": [r.to_dict() for r in self.recommendations],
            "rule_stats": self.rule_stats,
        }


@dataclass
class Engine:
    """Everything needed to turn a trace into a report."""

    rules: RuleSet
    baselines: BaselineSet
    catalog: FeatureCatalog
    policy: PolicyConfig
    templates: dict[str, str]

    def run(self, trace: Trace, trace_id: str) -> Report:
        firings = detect_all(trace, self.rules, self.baselines, self.catalog)
        recs = surface(firings, trace, self.policy, self.templates)
        return Report(trace_id, firings, recs, rule_stats(trace, self.rules, firings))


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise CliError(f"cannot read {path}: {exc}") from None


def _load_trace(path: str, lenient: bool) -> Trace:
    try:
        return read_trace(path, lenient=lenient)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from None
    except NeedsenseError as exc:
        raise CliError(f"{path}: {exc}") from None


def _trace_id(trace: Trace, path: str) -> str:
    if trace.meta is not None and trace.meta.session_id:
        return trace.meta.session_id
    return Path(path).stem


def _build_engine(args: argparse.Namespace) -> Engine:
    if args.catalog:
        try:
            catalog = load_catalog(_read_text(args.catalog))
        except NeedsenseError as exc:
            raise CliError(f"{args.catalog}: {exc}") from None
    else:
        catalog = default_catalog()

    rules_path = args.rules or os.environ.get(RULES_ENV)
    if rules_path:
        try:
            rules = parse_rules(_read_text(rules_path), catalog)
        except RuleFeatureError as exc:
            raise CliError(f"{rules_path}:{exc}", EXIT_RULE_FEATURE) from None
        except NeedsenseError as exc:
            raise CliError(f"{rules_path}:{exc}") from None
    else:
        rules = default_rules()

    if args.baseline:
        try:
            baselines = load_baselines(_read_text(args.baseline))
        except NeedsenseError as exc:
            raise CliError(f"{args.baseline}: {exc}") from None
    else:
        baselines = published_defaults()

    if args.templates:
        try:
            templates = parse_templates(_read_text(args.templates))
        except ValueError as exc:
            raise CliError(f"{args.templates}: {exc}") from None
    else:
        templates = default_templates()

    try:
        policy = PolicyConfig(args.cooldown, args.max_per_trace, not args.no_suppress)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    return Engine(rules, baselines, catalog, policy, templates)


def _run(engine: Engine, trace: Trace, trace_id: str) -> Report:
    try:
        return engine.run(trace, trace_id)
    except UnknownFeatureError as exc:
        raise CliError(str(exc), EXIT_RULE_FEATURE) from None
    except MissingBaselineError as exc:
        raise CliError(str(exc)) from None


def _dump_json(doc: Any) -> str:
    return json.dumps(doc, separators=(",", ":"), allow_nan=False)


def _fmt_t(t: float) -> str:
    return f"{t:10.3f}"


def _print_report(report: Report) -> None:
    print(f"trace {report.trace_id}: {len(report.firings)} firing(s), "
          f"{len(report.recommendations)} recommendation(s)")
    if report.firings:
        print("  firings:")
        print(f"  {'t':>10}  {'rule':<36} {'strategy':<12} feature")
        for f in report.firings:
            print(f"  {_fmt_t(f.t)}  {f.rule:<36} {f.strategy:<12} {f.feature}")
    if report.recommendations:
        print("  recommendations:")
        for r in report.recommendations:
            print(f"  {_fmt_t(r.t)}  {r.feature:<24} {r.message}")


# -- commands --------------------------------------------------------------------

def cmd_calibrate(args: argparse.Namespace) -> int:
    traces = [_load_trace(p, args.lenient) for p in args.traces]
    try:
        baselines = calibrate(traces)
    except CalibrationError as exc:
        raise CliError(str(exc), EXIT_EMPTY_CALIBRATION) from None
    Path(args.out).write_text(save_baselines(baselines), encoding="utf-8")
    print(f"{'signal':<18} {'mean':>12} {'stddev':>12} {'n':>8}")
    for signal, b in sorted(baselines.entries.items()):
        print(f"{signal:<18} {b.mean:12.6g} {b.stddev:12.6g} {b.n:8d}")
    print(f"wrote {args.out}")
    return EXIT_OK


def cmd_detect(args: argparse.Namespace) -> int:
    engine = _build_engine(args)
    trace = _load_trace(args.trace, args.lenient)
    report = _run(engine, trace, _trace_id(trace, args.trace))
    if args.json:
        print(_dump_json(report.to_dict()), flush=True)
    else:
        _print_report(report)
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    engine = _build_engine(args)
    traces = [_load_trace(p, args.lenient) for p in args.traces]

    def work(item: tuple[str, Trace]) -> Report:
        path, trace = item
        return _run(engine, trace, _trace_id(trace, path))

    with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
        reports = list(pool.map(work, zip(args.traces, traces)))

    fired = Counter(f.rule for r in reports for f in r.firings)
    recommended = Counter(rec.feature for r in reports for rec in r.recommendations)
    totals = {
        "traces": len(reports),
        "firings_by_rule": dict(sorted(fired.items())),
        "recommendations_by_feature": dict(sorted(recommended.items())),
    }
    if args.json:
        print(_dump_json({"reports": [r.to_dict() for r in reports], "totals": totals}), flush=True)
        return EXIT_OK
    for r in reports:
        _print_report(r)
    print(f"{len(reports)} trace(s)")
    print("firings by rule:")
    for rule in engine.rules.names():
        print(f"  {rule:<36} {fired.get(rule, 0):6d}")
    print("recommendations by feature:")
    for feature, n in sorted(recommended.items()):
        print(f"  {feature:<36} {n:6d}")
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    try:
        profile = load_profile(args.profile)
    except OSError as exc:
        raise CliError(f"cannot read {args.profile}: {exc}") from None
    except ValueError as exc:
        raise CliError(f"{args.profile}: invalid profile: {exc}") from None
    try:
        spec = GenSpec(profile, args.seed, args.duration, args.sample_interval)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    trace = generate(spec)
    Path(args.out).write_text(serialize_trace(trace), encoding="utf-8")
    counts = Counter(ev.kind for ev in trace.events)
    for kind in KINDS:
        print(f"{kind:<18} {counts.get(kind, 0):8d}")
    print(f"wrote {len(trace)} event(s) to {args.out}")
    return EXIT_OK


def _engine_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--rules", help=f"rules file (default: ${RULES_ENV} or the built-in rules)")
    p.add_argument("--baseline", help="baseline JSON (default: published baselines)")
    p.add_argument("--catalog", help="feature catalog (default: built-in)")
    p.add_argument("--templates", help="message templates (default: built-in)")
    p.add_argument("--cooldown", type=float, default=86400.0, help="seconds between repeats of a feature")
    p.add_argument("--max-per-trace", type=int, default=3)
    p.add_argument("--no-suppress", action="store_true", help="keep firings for features already enabled")
    p.add_argument("--lenient", action="store_true", help="ignore unknown fields in trace records")
    p.add_argument("--json", action="store_true", help="emit one JSON document on stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="needsense", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("calibrate", help="compute baselines from calibration traces")
    p.add_argument("traces", nargs="+", metavar="TRACE")
    p.add_argument("-o", "--out", default="baseline.json")
    p.add_argument("--lenient", action="store_true")
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("detect", help="run detectors and policy over one trace")
    p.add_argument("--trace", required=True)
    _engine_options(p)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("report", help="detect over many traces and aggregate counts")
    p.add_argument("traces", nargs="+", metavar="TRACE")
    p.add_argument("--jobs", type=int, default=4)
    _engine_options(p)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("simulate", help="generate a synthetic trace from a profile")
    p.add_argument("--profile", required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--duration", type=float, required=True)
    p.add_argument("--sample-interval", type=float, default=1.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"needsense: error: {exc}", file=sys.stderr)
        return exc.code
    except OSError as exc:
        print(f"needsense: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
