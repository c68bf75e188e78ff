"""Command-line front end: dataset ingestion, subcommand dispatch, and
machine-readable reports.

Exit codes: 0 success, 1 usage error, 2 data error, 3 mathematical
nonexistence (e.g. sceptical prior undefined).
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import sys

from . import __version__
from .errors import DataError, NonexistenceError
from .model import EffectEstimate, NormalPrior, PriorRole, Study
from .meta import failsafe_n, pool
from .ancred import (advocacy_prior, credibility_ratio, equivalent_trial,
                     intrinsic_credibility, p_intrinsic, p_rep,
                     sceptical_analysis)
from .bf import (advocacy_for_gamma, advocacy_prior_interval_or,
                 bf12_sceptical_vs_optimistic, bf_intrinsic, min_bf_els,
                 min_bf_local, sceptical_g_for_gamma, z_gamma)
from .fpr import (CalibrationKind, min_bf, prior_bound_fpr_equals_p,
                  prior_prob_for_fpr)

_COUNT_HEADER = ["id", "events_t", "n_t", "events_c", "n_c"]
_ESTIMATE_HEADER = ["id", "estimate", "se"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 1 on usage errors, not argparse's 2
        raise UsageError(message)


def read_study_table(path: str) -> list[Study]:
    """Parse a study CSV; the header selects the counts or estimate schema."""
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise DataError(f"{path}: empty file (header row required)")
    header = [h.strip() for h in rows[0]]
    studies: list[Study] = []
    if header == _COUNT_HEADER:
        for lineno, row in enumerate(rows[1:], start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 5:
                raise DataError(f"{path}:{lineno}: expected 5 columns, got {len(row)}")
            try:
                counts = [int(c) for c in row[1:]]
            except ValueError as exc:
                raise DataError(f"{path}:{lineno}: non-integer count: {exc}") from exc
            studies.append(Study(row[0].strip(), *counts))
    elif header == _ESTIMATE_HEADER:
        for lineno, row in enumerate(rows[1:], start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 3:
                raise DataError(f"{path}:{lineno}: expected 3 columns, got {len(row)}")
            try:
                est, se = float(row[1]), float(row[2])
            except ValueError as exc:
                raise DataError(f"{path}:{lineno}: non-numeric value: {exc}") from exc
            studies.append(Study(row[0].strip(), estimate=est, se=se))
    else:
        raise DataError(f"{path}: unrecognized header {header!r}; expected "
                        f"{_COUNT_HEADER} or {_ESTIMATE_HEADER}")
    if not studies:
        raise DataError(f"{path}: no data rows")
    ids = [s.id for s in studies]
    if len(set(ids)) != len(ids):
        raise DataError(f"{path}: duplicate study ids")
    return studies


def _digest_file(path: str) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def _digest_args(args: dict) -> str:
    canon = json.dumps(args, sort_keys=True)
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _fmt_bf(bf: float) -> str:
    if bf < 1.0:
        return f"1/{1.0 / bf:.3g}"
    return f"{bf:.3g}"


def _estimate_payload(est: EffectEstimate, level: float) -> dict:
    lo, hi = est.ci(level)
    return {
        "log_or": est.theta_hat, "se": est.se, "z": est.z, "p": est.p_value,
        "ci_log": [lo, hi], "or": math.exp(est.theta_hat),
        "ci_or": [math.exp(lo), math.exp(hi)], "level": level,
    }


# ---------------------------------------------------------------- meta


def cmd_meta(args) -> dict:
    studies = read_study_table(args.file)
    result = pool(studies, args.level)
    fsn = failsafe_n(result, args.level)
    pooled_est = result.pooled.as_estimate()

    per_study = []
    for diag in result.per_study:
        lo, hi = diag.estimate.ci(args.level)
        per_study.append({
            "id": diag.study_id,
            "estimate": _estimate_payload(diag.estimate, args.level),
            "leave_one_out_prior": (None if diag.leave_one_out_prior is None else {
                "mean": diag.leave_one_out_prior.mean,
                "precision": diag.leave_one_out_prior.precision,
            }),
            "t_box": None if math.isnan(diag.t_box) else diag.t_box,
            "p_box": None if math.isnan(diag.p_box) else diag.p_box,
            "forest_row": [diag.study_id, diag.estimate.theta_hat, lo, hi,
                           diag.estimate.p_value,
                           None if math.isnan(diag.p_box) else diag.p_box],
        })

    report = {
        "command": "meta",
        "input_digest": _digest_file(args.file),
        "results": {
            "pooled": _estimate_payload(pooled_est, args.level),
            "pooled_precision": result.pooled.precision,
            "n_studies": result.n_studies,
            "fail_safe_n": {"n_exact": fsn.n_exact, "n_integer": fsn.n_integer,
                            "significant": fsn.significant, "reason": fsn.reason},
            "per_study": per_study,
        },
        "warnings": ([] if result.n_studies > 1 else
                     ["single-study table: fail-safe N refers to n=1"]),
    }
    return report


def _print_meta(report: dict, scale: str) -> None:
    res = report["results"]
    pooled = res["pooled"]
    if scale == "or":
        lo, hi = pooled["ci_or"]
        print(f"pooled OR {pooled['or']:.2f} [{_fmt(lo)}, {_fmt(hi)}]"
              f" at level {pooled['level']:g}")
    else:
        lo, hi = pooled["ci_log"]
        print(f"pooled log OR {_fmt(pooled['log_or'])} [{_fmt(lo)}, {_fmt(hi)}]"
              f" at level {pooled['level']:g}")
    print(f"posterior precision {res['pooled_precision']:.1f}"
          f" from {res['n_studies']} studies")
    print()
    print(f"{'study':<16}{'logOR':>8}{'low':>8}{'high':>8}{'p':>10}"
          f"{'loo mean':>10}{'loo prec':>10}{'t_box':>8}{'p_box':>8}")
    for row in res["per_study"]:
        est = row["estimate"]
        loo = row["leave_one_out_prior"]
        loo_mean = "-" if loo is None else f"{loo['mean']:.2f}"
        loo_prec = "-" if loo is None else f"{loo['precision']:.1f}"
        t_box = "-" if row["t_box"] is None else f"{row['t_box']:.2f}"
        p_box = "-" if row["p_box"] is None else f"{row['p_box']:.2f}"
        print(f"{row['id']:<16}{est['log_or']:>8.2f}{est['ci_log'][0]:>8.2f}"
              f"{est['ci_log'][1]:>8.2f}{est['p']:>10.4f}"
              f"{loo_mean:>10}{loo_prec:>10}"
              f"{t_box:>8}{p_box:>8}")
    fsn = res["fail_safe_n"]
    print()
    if fsn["significant"]:
        print(f"fail-safe N: {fsn['n_exact']:.1f} (round up to {fsn['n_integer']})")
    else:
        print(f"fail-safe N: 0 ({fsn['reason']})")
    for w in report["warnings"]:
        print(f"warning: {w}")


# ---------------------------------------------------------------- ancred


def cmd_ancred(args) -> dict:
    has_est = args.estimate is not None or args.se is not None
    has_ci = args.lower is not None or args.upper is not None
    if has_est == has_ci:
        raise UsageError("supply exactly one of --estimate/--se or --lower/--upper")
    if has_est:
        if args.estimate is None or args.se is None:
            raise UsageError("--estimate and --se must be given together")
        est = EffectEstimate(args.estimate, args.se)
    else:
        if args.lower is None or args.upper is None:
            raise UsageError("--lower and --upper must be given together")
        est = EffectEstimate.from_ci(args.lower, args.upper, args.level)

    alpha = 1.0 - args.level
    results: dict = {"estimate": _estimate_payload(est, args.level)}
    if est.significant(alpha):
        sc = sceptical_analysis(est, alpha)
        lo, hi = est.ci(args.level)
        trial = equivalent_trial(sc.prior(), args.rate)
        results["mode"] = "sceptical"
        results["sceptical"] = {
            "g": sc.g, "tau2": sc.tau2, "scepticism_limit": sc.limit,
            "critical_interval_or": list(sc.critical_interval_or),
            "credibility_ratio": credibility_ratio(lo, hi),
            "intrinsically_credible_prior": bool(
                intrinsic_credibility(est, alpha, "prior_based")),
            "intrinsically_credible_predictive": bool(
                intrinsic_credibility(est, alpha, "predictive_based")),
            "p_intrinsic": p_intrinsic(est.z),
            "p_rep": p_rep(est.z),
            "equivalent_trial": _trial_payload(trial),
        }
    else:
        adv = advocacy_prior(est, alpha)
        trial = equivalent_trial(adv.prior(), args.rate)
        results["mode"] = "advocacy"
        results["advocacy"] = {
            "m": adv.m, "mu": adv.mu, "tau": adv.tau,
            "advocacy_limit": adv.limit,
            "advocacy_limit_or": math.exp(adv.limit),
            "cv": adv.cv,
            "p_intrinsic": p_intrinsic(est.z),
            "p_rep": p_rep(est.z),
            "equivalent_trial": _trial_payload(trial),
        }
    return {
        "command": "ancred",
        "input_digest": _digest_args({"estimate": est.theta_hat, "se": est.se,
                                      "level": args.level, "rate": args.rate}),
        "results": results,
        "warnings": [],
    }


def _trial_payload(trial) -> dict:
    payload = {"events_per_arm": trial.events_per_arm,
               "allocation_ratio": trial.allocation_ratio}
    if trial.patients_per_arm is not None:
        payload["patients_per_arm"] = trial.patients_per_arm
    if trial.per_arm_detail is not None:
        (et, nt), (ec, nc) = trial.per_arm_detail
        payload["treatment_arm"] = {"events": et, "patients": nt}
        payload["control_arm"] = {"events": ec, "patients": nc}
    return payload


def _print_ancred(report: dict, scale: str) -> None:
    res = report["results"]
    est = res["estimate"]
    print(f"estimate log OR {_fmt(est['log_or'])} (se {est['se']:.3f}, "
          f"p {est['p']:.4f})")
    if res["mode"] == "sceptical":
        sc = res["sceptical"]
        lo, hi = sc["critical_interval_or"]
        print(f"sceptical prior: g {sc['g']:.2f}, S {sc['scepticism_limit']:.2f}, "
              f"critical OR interval ({lo:.2f}, {hi:.2f})")
        print(f"credibility ratio {sc['credibility_ratio']:.2f}; intrinsically "
              f"credible (prior) { sc['intrinsically_credible_prior']}, "
              f"(predictive) {sc['intrinsically_credible_predictive']}")
        print(f"p_IC {sc['p_intrinsic']:.4f}, p_rep {sc['p_rep']:.3f}")
        _print_trial(sc["equivalent_trial"])
    else:
        adv = res["advocacy"]
        print(f"advocacy prior: m {adv['m']:.2f}, mu {_fmt(adv['mu'])}, "
              f"tau {adv['tau']:.2f}")
        print(f"advocacy limit {_fmt(adv['advocacy_limit'])} "
              f"(OR {adv['advocacy_limit_or']:.2f})")
        print(f"p_IC {adv['p_intrinsic']:.4f}, p_rep {adv['p_rep']:.3f}")
        _print_trial(adv["equivalent_trial"])


def _print_trial(payload: dict) -> None:
    if "treatment_arm" in payload:
        t, c = payload["treatment_arm"], payload["control_arm"]
        print(f"equivalent trial: {t['events']:.0f} events of {t['patients']:.0f} "
              f"patients (treatment) vs {c['events']:.0f} of {c['patients']:.0f} "
              f"(control)")
    elif "patients_per_arm" in payload:
        print(f"equivalent trial: {payload['events_per_arm']:.0f} events of "
              f"{payload['patients_per_arm']:.0f} patients per arm")
    else:
        print(f"equivalent trial: {payload['events_per_arm']:.0f} events per arm "
              f"(arbitrarily large arms)")


# ---------------------------------------------------------------- bf


def cmd_bf(args) -> dict:
    est = EffectEstimate(args.estimate, args.se)
    z = est.z
    results: dict = {"estimate": _estimate_payload(est, args.level),
                     "min_bf_local": min_bf_local(z),
                     "min_bf_els": min_bf_els(z),
                     "mode": args.mode}
    if args.mode == "sceptical":
        sol = sceptical_g_for_gamma(z, args.gamma, est.se)
        results["sceptical"] = {
            "gamma": sol.gamma,
            "g_small": sol.g_small, "g_large": sol.g_large,
            "prior_interval_or": list(sol.prior_interval_or),
            "bf12_at_g_small": bf12_sceptical_vs_optimistic(z, sol.g_small),
        }
    elif args.mode == "advocacy":
        sol = advocacy_for_gamma(est, args.gamma)
        results["advocacy"] = {
            "gamma": sol.gamma, "z_gamma": z_gamma(args.gamma), "cv": sol.cv,
            "m_small": sol.m_small, "tau_small": sol.tau_small,
            "m_large": sol.m_large, "tau_large": sol.tau_large,
            "recommended_m": sol.recommended_m,
            "prior_interval_or": list(
                advocacy_prior_interval_or(est, sol.m_small, args.gamma)),
        }
    elif args.mode == "ic":
        results["bf_intrinsic"] = bf_intrinsic(est)
    else:
        raise UsageError(f"unknown mode {args.mode!r}")
    return {
        "command": "bf",
        "input_digest": _digest_args({"estimate": est.theta_hat, "se": est.se,
                                      "gamma": args.gamma, "mode": args.mode}),
        "results": results,
        "warnings": [],
    }


def _print_bf(report: dict, scale: str) -> None:
    res = report["results"]
    print(f"z = {res['estimate']['z']:.3f}; minBF local {_fmt_bf(res['min_bf_local'])}, "
          f"ELS bound {_fmt_bf(res['min_bf_els'])}")
    if res["mode"] == "sceptical":
        sc = res["sceptical"]
        lo, hi = sc["prior_interval_or"]
        print(f"gamma {_fmt_bf(sc['gamma'])}: g {sc['g_small']:.2f} (sceptical) "
              f"or {sc['g_large']:.3g} (ignorance)")
        print(f"sceptical prior 95% OR interval ({lo:.2f}, {hi:.2f})")
        print(f"BF12 vs optimistic prior {_fmt_bf(sc['bf12_at_g_small'])}")
    elif res["mode"] == "advocacy":
        adv = res["advocacy"]
        lo, hi = adv["prior_interval_or"]
        print(f"gamma {_fmt_bf(adv['gamma'])}: z(gamma) {adv['z_gamma']:.2f}, "
              f"CV {adv['cv']:.2f}")
        print(f"advocacy m {adv['m_small']:.2f} (tau {adv['tau_small']:.2f}, "
              f"recommended) or m {adv['m_large']:.2f} (tau {adv['tau_large']:.2f})")
        print(f"advocacy prior OR interval ({lo:.2f}, {hi:.2f})")
    else:
        print(f"BF for intrinsic credibility {_fmt_bf(res['bf_intrinsic'])}")


# ---------------------------------------------------------------- fpr


_GRID_KINDS = [CalibrationKind.LOCAL_Z, CalibrationKind.SIMPLE_Z,
               CalibrationKind.E_P_LOG_P, CalibrationKind.E_Q_LOG_Q]


def cmd_fpr(args) -> dict:
    kinds = (list(CalibrationKind) if args.calibration == "all"
             else [CalibrationKind(args.calibration)])
    bounds = {}
    for kind in kinds:
        if args.fpr_equals_p:
            bounds[kind.value] = prior_bound_fpr_equals_p(args.p, kind)
        else:
            bounds[kind.value] = prior_prob_for_fpr(args.p, args.fpr, kind)
    results: dict = {
        "p": args.p,
        "fpr": args.p if args.fpr_equals_p else args.fpr,
        "fpr_equals_p": args.fpr_equals_p,
        "min_bf": {k.value: min_bf(args.p, k) for k in kinds},
        "prior_bound": bounds,
    }
    if args.grid:
        rows = []
        n = 200
        lo, hi = math.log(1e-4), math.log(0.5)
        for i in range(n + 1):
            p = math.exp(lo + (hi - lo) * i / n)
            for kind in _GRID_KINDS:
                if args.fpr_equals_p:
                    value = prior_bound_fpr_equals_p(p, kind)
                else:
                    value = prior_prob_for_fpr(p, args.fpr, kind)
                rows.append((p, kind.value, value))
        results["grid"] = [[p, series, value] for p, series, value in rows]
    return {
        "command": "fpr",
        "input_digest": _digest_args({"p": args.p, "fpr": args.fpr,
                                      "calibration": args.calibration,
                                      "fpr_equals_p": args.fpr_equals_p,
                                      "grid": args.grid}),
        "results": results,
        "warnings": [],
    }


def _print_fpr(report: dict, scale: str) -> None:
    res = report["results"]
    label = ("FPR = p" if res["fpr_equals_p"]
             else f"FPR {res['fpr']:g}")
    print(f"p {res['p']:g}, {label}: upper bound on Pr(H0)")
    for kind, bound in res["prior_bound"].items():
        print(f"  {kind:<16} minBF {_fmt_bf(res['min_bf'][kind])}  "
              f"Pr(H0) <= {100.0 * bound:.1f}%")
    if "grid" in res:
        print("x,series,value")
        for p, series, value in res["grid"]:
            print(f"{p:.6g},{series},{value:.10g}")


# ---------------------------------------------------------------- driver


def build_parser() -> _Parser:
    parser = _Parser(prog="revbayes",
                     description="Reverse-Bayes evidence assessment toolkit")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--level", type=float, default=0.95,
                        help="confidence/credibility level (default 0.95)")
    parser.add_argument("--json", action="store_true",
                        help="emit the deterministic JSON report")
    parser.add_argument("--scale", choices=["log", "or"], default="log",
                        help="display scale for effects (default log)")
    sub = parser.add_subparsers(dest="command", required=True)

    p_meta = sub.add_parser("meta", help="fixed-effect meta-analysis of a study table")
    p_meta.add_argument("file", help="CSV with header id,events_t,n_t,events_c,n_c "
                                     "or id,estimate,se")

    p_ancred = sub.add_parser("ancred", help="Analysis of Credibility")
    p_ancred.add_argument("--estimate", type=float, help="log OR point estimate")
    p_ancred.add_argument("--se", type=float, help="standard error")
    p_ancred.add_argument("--lower", type=float, help="CI lower limit (log OR)")
    p_ancred.add_argument("--upper", type=float, help="CI upper limit (log OR)")
    p_ancred.add_argument("--rate", type=float, default=None,
                          help="event rate for the equivalent prior trial")

    p_bf = sub.add_parser("bf", help="Bayes-factor credibility analysis")
    p_bf.add_argument("--estimate", type=float, required=True)
    p_bf.add_argument("--se", type=float, required=True)
    p_bf.add_argument("--gamma", type=float, default=1.0 / 10.0,
                      help="Bayes factor cut-off (default 1/10)")
    p_bf.add_argument("--mode", choices=["sceptical", "advocacy", "ic"],
                      default="sceptical")

    p_fpr = sub.add_parser("fpr", help="false positive risk bounds")
    p_fpr.add_argument("--p", type=float, required=True, help="two-sided p-value")
    p_fpr.add_argument("--fpr", type=float, default=0.05,
                       help="target false positive risk (default 0.05)")
    p_fpr.add_argument("--calibration", default="all",
                       choices=["all"] + [k.value for k in CalibrationKind])
    p_fpr.add_argument("--fpr-equals-p", action="store_true",
                       help="bound Pr(H0) under the claim FPR = p")
    p_fpr.add_argument("--grid", action="store_true",
                       help="also emit plot data over a log-spaced p grid")
    return parser


_RUNNERS = {"meta": (cmd_meta, _print_meta), "ancred": (cmd_ancred, _print_ancred),
            "bf": (cmd_bf, _print_bf), "fpr": (cmd_fpr, _print_fpr)}


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not (0.0 < args.level < 1.0):
            raise UsageError(f"--level must be in (0,1), got {args.level!r}")
        runner, printer = _RUNNERS[args.command]
        report = runner(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except NonexistenceError as exc:
        print(f"nonexistence: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    if args.json:
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        printer(report, args.scale)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
