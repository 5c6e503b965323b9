"""Command-line interface.

Subcommands: ``fit`` (single estimator on a CSV), ``cv`` (repeated K-fold
cross validation), ``simulate`` (Monte Carlo benchmark on the built-in
designs), ``risk`` (orthonormal-design risk table), and ``choose-d``
(biasing-parameter selection).  All flags are long-form; numbers accept
scientific notation.  With ``--format csv`` the output is byte-identical
across runs and worker counts for a fixed seed.

Exit codes: 0 success, 2 input or validation error, 3 numerical failure or
solver non-convergence (unless ``--allow-nonconverged``).
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from itertools import product

import numpy as np

from .dataset import load_csv, standardize, to_original_scale
from .estimators import (
    fit_enet,
    fit_gen_llasso,
    fit_lasso,
    fit_liu,
    fit_llasso,
    fit_ols,
    fit_ridge,
)
from .exceptions import InputError, NumericError
from .orthonormal import OrthoConfig, mc_risk, risk_bound, risk_closed_form
from .seeding import DEFAULT_SEED, SeedPlan
from .simbench import design_example, run_benchmark
from .tuning import choose_d_closed_form, choose_d_l1, kfold_cv, median_bootstrap_se

CV_SCHEMA = "estimator,median_mse_y,se_mse_y,reps,folds,seed"
FIT_SCHEMA = "variable,coef_standardized,coef_original"
RISK_SCHEMA = ("mean,threshold,d,tail_prob,risk_closed_form,"
               "mc_estimate,mc_se,bound")
SIM_SCHEMA = ("design,estimator,median_mse_y,se_mse_y,"
              "median_mse_beta,se_mse_beta,reps,seed")


@dataclass(frozen=True)
class RunConfig:
    """Common run parameters shared by every subcommand."""

    subcommand: str
    seed: int = DEFAULT_SEED
    reps: int | None = None
    folds: int | None = None
    workers: int = 1
    fmt: str = "table"
    out: str | None = None

    def __post_init__(self):
        if self.fmt not in ("table", "csv"):
            raise InputError(f"unknown output format {self.fmt!r}")
        if self.workers < 1:
            raise InputError("workers must be >= 1")


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _render_table(header, rows) -> str:
    cells = [[str(c) for c in row] for row in rows]
    widths = [max(len(h), *(len(r[i]) for r in cells)) if cells else len(h)
              for i, h in enumerate(header)]
    fmt = "  ".join(f"{{:<{w}}}" for w in widths)
    lines = [fmt.format(*header), fmt.format(*("-" * w for w in widths))]
    lines += [fmt.format(*r) for r in cells]
    return "\n".join(lines) + "\n"


def _float_list(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError:
        raise InputError(f"cannot parse number list {text!r}") from None


def _parse_examples(text: str) -> list[int]:
    ids: list[int] = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        if "-" in tok:
            lo, hi = tok.split("-", 1)
            try:
                ids.extend(range(int(lo), int(hi) + 1))
            except ValueError:
                raise InputError(f"bad example range {tok!r}") from None
        else:
            try:
                ids.append(int(tok))
            except ValueError:
                raise InputError(f"bad example id {tok!r}") from None
    if not ids:
        raise InputError("no example ids given")
    return ids


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_fit(ns, cfg: RunConfig) -> int:
    ds = standardize(load_csv(ns.data, ns.response))
    kind = ns.estimator.replace("-", "_")
    kwargs = {}
    if ns.max_sweeps is not None:
        kwargs["max_sweeps"] = ns.max_sweeps

    def need(flag, value):
        if value is None:
            raise InputError(f"--{flag} is required for {ns.estimator}")
        return value

    if kind == "ols":
        res = fit_ols(ds)
    elif kind == "ridge":
        res = fit_ridge(ds, need("k", ns.k))
    elif kind == "liu":
        res = fit_liu(ds, need("d", ns.d))
    elif kind == "lasso":
        res = fit_lasso(ds, need("lambda", ns.lam), **kwargs)
    elif kind == "llasso":
        res = fit_llasso(ds, need("lambda", ns.lam), need("d", ns.d), **kwargs)
    elif kind == "enet":
        res = fit_enet(ds, need("lambda1", ns.lam1), need("lambda2", ns.lam2),
                       **kwargs)
    elif kind == "gen_llasso":
        D = _float_list(need("d-vector", ns.d_vector))
        res = fit_gen_llasso(ds, need("lambda", ns.lam), D)
    else:
        raise InputError(f"unknown estimator {ns.estimator!r}")

    beta_orig, intercept = to_original_scale(ds, res.beta)
    if cfg.fmt == "csv":
        lines = [FIT_SCHEMA, f"(intercept),0,{intercept:.12g}"]
        lines += [f"{name},{b:.12g},{bo:.12g}"
                  for name, b, bo in zip(ds.column_names, res.beta, beta_orig)]
        _emit("\n".join(lines) + "\n", cfg.out)
    else:
        rows = [["(intercept)", "0", f"{intercept:.6g}"]]
        rows += [[name, f"{b:.6g}", f"{bo:.6g}"]
                 for name, b, bo in zip(ds.column_names, res.beta, beta_orig)]
        text = _render_table(["variable", "coef (standardized)",
                              "coef (original)"], rows)
        text += (f"\nestimator: {ns.estimator}  sweeps: {res.iterations}  "
                 f"converged: {res.converged}  objective: {res.objective:.6g}\n")
        _emit(text, cfg.out)
    if not res.converged and not ns.allow_nonconverged:
        print("solver did not converge (use --allow-nonconverged to accept)",
              file=sys.stderr)
        return 3
    return 0


def cmd_cv(ns, cfg: RunConfig) -> int:
    ds = load_csv(ns.data, ns.response)
    families = [e.strip() for e in ns.estimators.split(",") if e.strip()]
    plan = SeedPlan(cfg.seed)
    rows = []
    for fam in families:
        _, per_repeat = kfold_cv(ds, fam, K=cfg.folds, repeats=cfg.reps,
                                 seed=cfg.seed, workers=cfg.workers)
        med, se = median_bootstrap_se(per_repeat,
                                      seed=plan.stream(0, f"cv-boot:{fam}"))
        rows.append((fam, med, se))
    if cfg.fmt == "csv":
        lines = [CV_SCHEMA]
        lines += [f"{fam},{med:.12g},{se:.12g},{cfg.reps},{cfg.folds},{cfg.seed}"
                  for fam, med, se in rows]
        _emit("\n".join(lines) + "\n", cfg.out)
    else:
        _emit(_render_table(
            ["estimator", "median MSE_y", "(se)"],
            [[fam, f"{med:.5f}", f"{se:.5f}"] for fam, med, se in rows]),
            cfg.out)
    return 0


def cmd_simulate(ns, cfg: RunConfig) -> int:
    ids = _parse_examples(ns.examples)
    designs = [design_example(k) for k in ids]
    families = tuple(e.strip() for e in ns.estimators.split(",") if e.strip())
    report = run_benchmark(designs, families, reps=cfg.reps, seed=cfg.seed,
                           workers=cfg.workers)
    if ns.raw_out:
        with open(ns.raw_out, "w") as fh:
            fh.write(report.to_raw_csv())
    _emit(report.to_csv() if cfg.fmt == "csv" else report.to_table(), cfg.out)
    return 0


def cmd_risk(ns, cfg: RunConfig) -> int:
    means = _float_list(ns.means)
    thresholds = _float_list(ns.thresholds)
    d_values = _float_list(ns.d)
    tail_probs = _float_list(ns.tail_prob)
    for tp in tail_probs:
        if not (0.0 < tp <= 0.5):
            raise InputError(f"tail probability {tp} outside (0, 1/2]")
    plan = SeedPlan(cfg.seed)
    rows = []
    for i, (mean, thr, d, tp) in enumerate(
            product(means, thresholds, d_values, tail_probs)):
        ocfg = OrthoConfig(means=np.array([mean]), threshold=thr, d=d,
                           tail_prob=tp)
        cf = risk_closed_form(ocfg)
        est, se = mc_risk(ocfg, ns.draws, seed=plan.stream(i, "risk-mc"))
        bound = float(risk_bound(ocfg)[0])
        rows.append((mean, thr, d, tp, cf, est, se, bound))
    if cfg.fmt == "csv":
        lines = [RISK_SCHEMA]
        lines += [",".join(f"{v:.12g}" for v in row) for row in rows]
        _emit("\n".join(lines) + "\n", cfg.out)
    else:
        _emit(_render_table(
            ["mean", "thr", "d", "tail_p", "closed form", "MC est", "MC se",
             "bound"],
            [[f"{v:.5g}" for v in row] for row in rows]), cfg.out)
    return 0


def cmd_choose_d(ns, cfg: RunConfig) -> int:
    ds = standardize(load_csv(ns.data, ns.response))
    beta_ols = fit_ols(ds).beta
    if ns.method == "closed-form":
        if ns.lam1 is None or ns.lam2 is None:
            raise InputError("--lambda1 and --lambda2 are required for "
                             "closed-form selection")
        beta_en = fit_enet(ds, ns.lam1, ns.lam2).beta
        choice = choose_d_closed_form(beta_ols, beta_en, ds, ns.lam1, ns.lam2)
        rows = [("closed-form", choice.d, int(choice.used_l1_fallback))]
    elif ns.method == "l1":
        if ns.lam is not None:
            target = fit_lasso(ds, ns.lam).beta
        elif ns.lam1 is not None and ns.lam2 is not None:
            target = fit_enet(ds, ns.lam1, ns.lam2).beta
        else:
            raise InputError("l1 selection needs --lambda (LASSO target) or "
                             "--lambda1/--lambda2 (elastic-net target)")
        rows = [("l1", choose_d_l1(beta_ols, target), 0)]
    else:
        raise InputError(f"unknown method {ns.method!r}")
    if cfg.fmt == "csv":
        lines = ["method,d,used_l1_fallback"]
        lines += [f"{m},{d:.12g},{fb}" for m, d, fb in rows]
        _emit("\n".join(lines) + "\n", cfg.out)
    else:
        _emit(_render_table(["method", "d", "used_l1_fallback"],
                            [[m, f"{d:.6g}", str(bool(fb))] for m, d, fb in rows]),
              cfg.out)
    return 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="llasso",
        description="Liu-rescaled LASSO toolkit: fitting, tuning, risk "
                    "tables, and Monte Carlo benchmarks.",
        epilog=f"CSV schemas -- fit: {FIT_SCHEMA}; cv: {CV_SCHEMA}; "
               f"simulate: {SIM_SCHEMA}; risk: {RISK_SCHEMA}.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(sp):
        sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
        sp.add_argument("--format", dest="fmt", choices=("table", "csv"),
                        default="table")
        sp.add_argument("--out", default=None, help="output file (default stdout)")
        sp.add_argument("--workers", type=int, default=1)

    p_fit = sub.add_parser("fit", help="fit one estimator to a CSV dataset")
    p_fit.add_argument("--data", required=True)
    p_fit.add_argument("--response", required=True)
    p_fit.add_argument("--estimator", required=True)
    p_fit.add_argument("--lambda", dest="lam", type=float, default=None)
    p_fit.add_argument("--lambda1", dest="lam1", type=float, default=None)
    p_fit.add_argument("--lambda2", dest="lam2", type=float, default=None)
    p_fit.add_argument("--k", type=float, default=None)
    p_fit.add_argument("--d", type=float, default=None)
    p_fit.add_argument("--d-vector", default=None,
                       help="comma-separated per-coordinate biasing values")
    p_fit.add_argument("--max-sweeps", type=int, default=None)
    p_fit.add_argument("--allow-nonconverged", action="store_true")
    common(p_fit)
    p_fit.set_defaults(func=cmd_fit)

    p_cv = sub.add_parser("cv", help="repeated K-fold cross validation on a CSV")
    p_cv.add_argument("--data", required=True)
    p_cv.add_argument("--response", required=True)
    p_cv.add_argument("--estimators",
                      default="ols,ridge,liu,lasso,llasso,enet")
    p_cv.add_argument("--folds", type=int, default=10)
    p_cv.add_argument("--reps", type=int, default=250)
    common(p_cv)
    p_cv.set_defaults(func=cmd_cv)

    p_sim = sub.add_parser("simulate", help="Monte Carlo benchmark")
    p_sim.add_argument("--examples", required=True,
                       help="example ids, e.g. '1', '1,3', or '1-5'")
    p_sim.add_argument("--estimators",
                       default="ols,ridge,liu,lasso,llasso,enet")
    p_sim.add_argument("--reps", type=int, default=250)
    p_sim.add_argument("--raw-out", default=None,
                       help="also write per-replication results to this CSV")
    common(p_sim)
    p_sim.set_defaults(func=cmd_simulate)

    p_risk = sub.add_parser("risk", help="orthonormal-design risk table")
    p_risk.add_argument("--means", default="0,1,2")
    p_risk.add_argument("--thresholds", default="0,0.5,1")
    p_risk.add_argument("--d", default="0.5,1")
    p_risk.add_argument("--tail-prob", default="0.1")
    p_risk.add_argument("--draws", type=int, default=100_000)
    common(p_risk)
    p_risk.set_defaults(func=cmd_risk)

    p_d = sub.add_parser("choose-d", help="biasing-parameter selection")
    p_d.add_argument("--data", required=True)
    p_d.add_argument("--response", required=True)
    p_d.add_argument("--method", choices=("closed-form", "l1"),
                     default="closed-form")
    p_d.add_argument("--lambda", dest="lam", type=float, default=None)
    p_d.add_argument("--lambda1", dest="lam1", type=float, default=None)
    p_d.add_argument("--lambda2", dest="lam2", type=float, default=None)
    common(p_d)
    p_d.set_defaults(func=cmd_choose_d)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = RunConfig(subcommand=ns.subcommand, seed=ns.seed,
                        reps=getattr(ns, "reps", None),
                        folds=getattr(ns, "folds", None),
                        workers=ns.workers, fmt=ns.fmt, out=ns.out)
        return ns.func(ns, cfg)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
