"""Batch CLI: bound tables, verification suites, experiments, report emission.

Exit code 0 iff every check in the produced report passed.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from .bounds import (
    c2,
    classical_fclt_bound,
    cor1_bound,
    kp_lower,
    maximal_ineq_bound,
    pi_bar_bound,
    thm1_b22_bound,
    thm1_bound,
    thm2_bound,
)
from .harness import (
    ExperimentConfig,
    emit_report,
    run_classical_fclt_experiment,
    run_thm1_experiment,
    run_verify_lemmas,
)
from .prokhorov import deficiency, one_sided_prokhorov, prokhorov_distance, read_atoms_csv
from .report import ExperimentReport
from .scenarios import gamma_p_sup, moment_envelope, parse_family


def _load_config(args) -> ExperimentConfig:
    try:
        cfg = ExperimentConfig.from_ini(args.config) if args.config else ExperimentConfig()
    except (OSError, ValueError, KeyError) as exc:
        raise SystemExit(f"robustclt: cannot load config {args.config!r}: {exc}")
    overrides = {}
    if getattr(args, "seed", None) is not None:
        overrides["seed"] = args.seed
    if getattr(args, "out", None) is not None:
        overrides["out_dir"] = args.out
    if getattr(args, "workers", None) is not None:
        overrides["workers"] = args.workers
    if getattr(args, "grid_size", None) is not None:
        overrides["grid_size"] = args.grid_size
    if getattr(args, "eta", None):
        overrides["eta"] = tuple(args.eta)
    return cfg.override(**overrides)


def _finish(report, config) -> int:
    paths = emit_report(report, config.formats, config.out_dir)
    for path in paths:
        print(f"wrote {path}")
    failures = report.failures
    print(f"{report.kind}: {len(report.rows) - len(failures)}/{len(report.rows)} checks passed")
    for row in failures:
        print(f"  FAIL {row.get('check')} [{row.get('case', '')}]")
    return 0 if report.all_passed else 1


def _add_common(sub):
    sub.add_argument("--config", help="INI config file")
    sub.add_argument("--seed", type=int, help="master seed override")
    sub.add_argument("--out", help="output directory override")
    sub.add_argument("--workers", type=int, help="worker count override")
    sub.add_argument("--grid-size", type=int, dest="grid_size", help="DP grid points override")
    sub.add_argument("--eta", type=float, nargs="*", help="majorant ramp schedule override")


def _cmd_bounds(args) -> int:
    config = _load_config(args)
    family = parse_family(list(args.law) if args.law else list(config.family_laws))
    env = moment_envelope(family)
    n, eps, p = args.n, args.eps, args.p
    g_trunc = gamma_p_sup(family, eps * math.sqrt(n), p, envelope=env)
    g_sqrtn = gamma_p_sup(family, math.sqrt(n), p, envelope=env)
    g3 = gamma_p_sup(family, math.inf, 3.0, envelope=env)
    rows = [
        ("gamma_p(eps*sqrt(n))", g_trunc),
        ("gamma_p(sqrt(n))", g_sqrtn),
        ("gamma_3", g3),
        ("c2(p)", c2(p)),
        ("functional_gap_bound", thm2_bound(n, eps, p, g_trunc)),
        ("functional_prokhorov_bound", cor1_bound(n, p, g_sqrtn)),
        ("onedim_gap_bound_c4", thm1_bound(n, eps, p, g_trunc)),
        ("onedim_gap_bound_c5", thm1_b22_bound(n, eps, g3)),
        ("onedim_prokhorov_bound", pi_bar_bound(n, g3)),
        ("kp_lower(eps*sqrt(n))", kp_lower(eps * math.sqrt(n), p)),
        ("bridge_tail_bound(b=eps)", maximal_ineq_bound(n, eps, p)),
        ("classical_fclt_bound(gamma)", classical_fclt_bound(n, p, g_trunc)),
    ]
    if args.format == "json":
        print(json.dumps({k: v for k, v in rows}, indent=2, sort_keys=True))
    else:
        print("quantity,value")
        for k, v in rows:
            print(f"{k},{v!r}")
    return 0


def _cmd_verify_lemmas(args) -> int:
    config = _load_config(args)
    report = run_verify_lemmas(config)
    return _finish(report, config)


def _cmd_thm1(args) -> int:
    config = _load_config(args)
    report = run_thm1_experiment(config, include_negative_control=args.negative_control)
    return _finish(report, config)


def _cmd_fclt(args) -> int:
    config = _load_config(args)
    report = run_classical_fclt_experiment(config)
    return _finish(report, config)


def _cmd_prokhorov(args) -> int:
    P = read_atoms_csv(args.p_atoms)
    Q = read_atoms_csv(args.q_atoms)
    out = {
        "distance": prokhorov_distance(P, Q),
        "one_sided": one_sided_prokhorov(P, Q),
    }
    if args.eps is not None:
        rep = deficiency(P, Q, args.eps)
        out["deficiency"] = json.loads(rep.to_json())
    print(json.dumps(out, indent=2, sort_keys=True))
    return 0


def _cmd_report(args) -> int:
    report = ExperimentReport.from_json(args.input)
    for path in emit_report(report, args.format, args.out):
        print(f"wrote {path}")
    return 0 if report.all_passed else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="robustclt",
        description="Worst-case CLT rate-bound verification harness",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_bounds = sub.add_parser("bounds", help="print every bound value for (n, eps, p, family)")
    _add_common(p_bounds)
    p_bounds.add_argument("-n", type=int, required=True)
    p_bounds.add_argument("--eps", type=float, required=True)
    p_bounds.add_argument("-p", type=float, default=3.0)
    p_bounds.add_argument("--law", action="append", help="law record, repeatable")
    p_bounds.add_argument("--format", choices=["csv", "json"], default="csv")
    p_bounds.set_defaults(func=_cmd_bounds)

    p_lemmas = sub.add_parser("verify-lemmas", help="run every lemma-verification suite")
    _add_common(p_lemmas)
    p_lemmas.set_defaults(func=_cmd_verify_lemmas)

    p_thm1 = sub.add_parser("thm1", help="worst-case CLT desk-scale experiment")
    _add_common(p_thm1)
    p_thm1.add_argument(
        "--negative-control",
        action="store_true",
        help="also demand a failure under the tenfold-shrunk constant",
    )
    p_thm1.set_defaults(func=_cmd_thm1)

    p_fclt = sub.add_parser("fclt-classical", help="classical functional-CLT experiment")
    _add_common(p_fclt)
    p_fclt.set_defaults(func=_cmd_fclt)

    p_prok = sub.add_parser("prokhorov", help="distance between two CSV atom files")
    p_prok.add_argument("p_atoms")
    p_prok.add_argument("q_atoms")
    p_prok.add_argument("--eps", type=float, help="also report the deficiency at this radius")
    p_prok.set_defaults(func=_cmd_prokhorov)

    p_report = sub.add_parser("report", help="re-emit a JSON report as csv/json/svg")
    p_report.add_argument("--input", required=True)
    p_report.add_argument("--format", choices=["csv", "json", "svg"], default="csv")
    p_report.add_argument("--out", default="reports")
    p_report.set_defaults(func=_cmd_report)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
