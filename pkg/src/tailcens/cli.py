"""Command-line front end: ``tailcens {simulate,estimate,kselect,survival,oracle}``.

Results go to stdout (or the named output files), diagnostics to stderr.
Exit codes: 0 success, 1 oracle tolerance failure, 2 usage or data error.
"""

import argparse
import csv
import json
import math
import sys

import numpy as np

from . import censoring, distributions, estimators, limit_oracle, montecarlo, selection, survival
from .exceptions import TailcensError

IDENTITY_PARETO_TOL = 1e-8
IDENTITY_LIMIT_RTOL = 0.02
GAUSSIAN_RTOL = 0.03


class UsageError(Exception):
    pass


def _g6(x):
    return format(x, ".6g")


def _g17(x):
    return format(x, ".17g")


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", newline="", encoding="utf-8"), True


def _write_rows(path, header, rows):
    fh, close = _open_out(path)
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    finally:
        if close:
            fh.close()


def _add_estimator_args(p, default="na_tr"):
    p.add_argument("--estimator", default=default, choices=estimators.ESTIMATORS)
    p.add_argument("--beta", type=float, default=1.01)
    p.add_argument("--mn", default="loglog", help="loglog, power:RHO or fixed:M")
    p.add_argument("--natr-exponent", default="a", choices=("a", "a-1"))


def _add_selection_args(p):
    p.add_argument("--nu", type=float, default=0.3)
    p.add_argument("--k-min", type=int, default=2)
    p.add_argument("--k-max", type=int, default=None)
    p.add_argument("--min-window", type=int, default=1)


def build_parser():
    parser = argparse.ArgumentParser(prog="tailcens", description="Tail-index estimation under random right censoring.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="Monte Carlo bias/MSE study")
    p.add_argument("--config", help="file of 'key = value' lines; flags override it")
    p.add_argument("--family", choices=("burr", "frechet", "loggamma", "pareto"))
    p.add_argument("--gamma1", type=float)
    p.add_argument("--p", type=float)
    p.add_argument("--n", type=int)
    p.add_argument("--reps", type=int)
    p.add_argument("--beta", action="append", help="repeatable or comma separated")
    p.add_argument("--k-grid", help="start:stop:step or comma list")
    p.add_argument("--mn", dest="mn_rule")
    p.add_argument("--estimators", help="comma list")
    p.add_argument("--seed", type=int)
    p.add_argument("--eta", type=float)
    p.add_argument("--loggamma-fixed-scale", action="store_true", default=None)
    p.add_argument("--natr-exponent", choices=("a", "a-1"))
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default="-", help="results CSV (default stdout)")
    p.add_argument("--manifest", help="run manifest JSON (default OUT.manifest.json)")

    p = sub.add_parser("estimate", help="tail index from a data file")
    p.add_argument("data")
    _add_estimator_args(p)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--k", type=int)
    g.add_argument("--auto-k", action="store_true")
    _add_selection_args(p)
    p.add_argument("--se-p", type=float, help="p for the normal-approximation standard error")
    p.add_argument("--se-gamma1", type=float, help="gamma1 for the standard error")

    p = sub.add_parser("kselect", help="Reiss-Thomas threshold selection")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("data", nargs="?")
    src.add_argument("--trace-in", help="trace CSV k,estimate,defined_flag")
    _add_estimator_args(p, default="phat")
    _add_selection_args(p)
    p.add_argument("--trace-out", help="write the trace CSV here ('-' for stdout)")

    p = sub.add_parser("survival", help="log-log Nelson-Aalen survival curve")
    p.add_argument("data")
    p.add_argument("--out", default="-")

    p = sub.add_parser("oracle", help="numerical checks of the limit theory")
    p.add_argument("--which", required=True)
    p.add_argument("--family", default="pareto", choices=("burr", "frechet", "pareto"))
    p.add_argument("--gamma1", type=float, default=0.7)
    p.add_argument("--eta", type=float, default=0.25)
    p.add_argument("--beta", type=float, default=1.5)
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--t", type=float, default=None, help="threshold (default 1 for pareto, 1e6 otherwise)")
    p.add_argument("--T", type=float, default=1e3, help="u_t / t")
    p.add_argument("--paths", type=int, default=100_000)
    p.add_argument("--grid", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    return parser


def _sorted_from(path):
    return censoring.sort_with_concomitants(censoring.load_csv(path))


def _mn(spec):
    return montecarlo.parse_mn_rule(spec)


def _trace(s, args, k_min, k_max):
    if args.estimator == "na_tr" and not args.beta > 1:
        raise UsageError("beta must exceed 1")
    ks = np.arange(k_min, k_max + 1)
    if args.estimator == "na_tr":
        return estimators.trace(s, "na_tr", ks, beta=args.beta, m_n=_mn(args.mn), exponent=args.natr_exponent)
    return estimators.trace(s, args.estimator, ks)


def _selection_cfg(args):
    return selection.SelectionConfig(nu=args.nu, k_min=args.k_min, k_max=args.k_max, min_window=args.min_window)


def cmd_simulate(args):
    values = montecarlo.read_config_file(args.config) if args.config else {}
    flag_map = {
        "family": args.family, "gamma1": args.gamma1, "p": args.p, "n": args.n,
        "reps": args.reps, "k_grid": args.k_grid, "mn_rule": args.mn_rule,
        "estimators": args.estimators, "master_seed": args.seed, "eta": args.eta,
        "loggamma_fixed_scale": args.loggamma_fixed_scale,
        "natr_exponent": args.natr_exponent,
    }
    if args.beta:
        flag_map["betas"] = ",".join(args.beta)
    for key, val in flag_map.items():
        if val is not None:
            values[key] = val if isinstance(val, (str, bool)) else str(val)
    for required in ("family", "gamma1", "p"):
        if required not in values:
            raise UsageError(f"missing required setting --{required}")
    cfg = montecarlo.config_from_mapping(values)
    result = montecarlo.run_study(cfg, workers=args.workers)
    montecarlo.export_csv(result, sys.stdout if args.out == "-" else args.out)
    manifest = args.manifest or (None if args.out == "-" else args.out + ".manifest.json")
    if manifest:
        with open(manifest, "w", encoding="utf-8") as fh:
            json.dump({"command": "simulate", "config": montecarlo.config_to_dict(cfg)}, fh, indent=2, sort_keys=True)
            fh.write("\n")
    print(f"simulated {cfg.reps} replications", file=sys.stderr)
    return 0


def cmd_estimate(args):
    s = _sorted_from(args.data)
    if args.estimator == "na_tr" and not args.beta > 1:
        raise UsageError("beta must exceed 1")
    if args.auto_k:
        k_max = args.k_max if args.k_max is not None else s.n - 1
        tr = _trace(s, args, args.k_min, k_max)
        k = selection.kopt_reiss_thomas(tr, _selection_cfg(args))
    else:
        k = args.k
    if args.estimator == "na_tr":
        rule = _mn(args.mn)
        m_n = rule(k) if callable(rule) else rule
        est = estimators.na_tr(s, k, args.beta, m_n, exponent=args.natr_exponent)
    else:
        est = getattr(estimators, args.estimator)(s, k)
    lines = [f"estimator={args.estimator}", f"k={k}", f"estimate={_g6(est)}",
             f"phat={_g6(estimators.phat(s, k))}"]
    if args.estimator == "na_tr":
        lines.insert(1, f"beta={_g6(args.beta)}")
    if args.se_p is not None and args.se_gamma1 is not None:
        lp = estimators.LimitParams(p=args.se_p, beta=args.beta, gamma1=args.se_gamma1)
        _, sigma2 = estimators.asymptotic_mean_var(lp)
        lines.append(f"std_error={_g6(math.sqrt(sigma2 / k))}")
    print("\n".join(lines))
    return 0


def _read_trace(path):
    ks, xs, ok = [], [], []
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    for lineno, row in enumerate(rows, start=1):
        if lineno == 1 and row and row[0].strip() == "k":
            continue
        if not row:
            continue
        try:
            k, x, flag = int(row[0]), float(row[1]) if row[1].strip() else math.nan, row[2].strip()
        except (ValueError, IndexError):
            raise UsageError(f"{path}: line {lineno}: expected k,estimate,defined_flag") from None
        ks.append(k)
        xs.append(x)
        ok.append(flag == "1")
    ok = np.array(ok, dtype=bool) & np.isfinite(xs)
    return estimators.EstimatorTrace(ks, np.where(ok, xs, np.nan), "external", ok, np.zeros(len(ks), bool))


def _trace_rows(tr):
    for k, x, ok in zip(tr.k_values, tr.estimates, tr.defined):
        yield int(k), (_g17(float(x)) if ok else ""), int(ok)


def cmd_kselect(args):
    cfg = _selection_cfg(args)
    if args.trace_in:
        tr = _read_trace(args.trace_in)
    else:
        s = _sorted_from(args.data)
        k_max = args.k_max if args.k_max is not None else s.n - 1
        tr = _trace(s, args, args.k_min, k_max)
    k = selection.kopt_reiss_thomas(tr, cfg)
    if args.trace_out:
        _write_rows(args.trace_out, ["k", "estimate", "defined_flag"], _trace_rows(tr))
    print(f"kopt={k}")
    print(f"estimate={_g6(tr.at(k))}")
    return 0


def cmd_survival(args):
    s = _sorted_from(args.data)
    lz, ls = survival.loglog_curve(s)
    _write_rows(args.out, ["log_value", "log_survival"], ((_g17(a), _g17(b)) for a, b in zip(lz, ls)))
    return 0


def cmd_oracle(args):
    if args.which == "identity":
        spec = distributions.make(args.family, args.gamma1, eta=args.eta)
        t = args.t if args.t is not None else (1.0 if args.family == "pareto" else 1e6)
        numeric = limit_oracle.numeric_identity(spec, args.beta, args.p, t, t * args.T)
        if args.family == "pareto":
            formula = limit_oracle.pareto_identity_closed_form(args.beta, args.p, args.gamma1, args.T)
            ok = abs(numeric - formula) <= IDENTITY_PARETO_TOL
        else:
            formula = args.gamma1
            ok = abs(numeric - formula) <= IDENTITY_LIMIT_RTOL * formula
    elif args.which == "gaussian":
        cfg = limit_oracle.GaussianFunctionalConfig(args.p, args.beta, paths=args.paths,
                                                    grid_points=args.grid, seed=args.seed)
        formula = limit_oracle.gaussian_functional_variance_formula(args.p, args.beta)
        numeric = limit_oracle.gaussian_functional_variance_mc(cfg).variance
        ok = abs(numeric - formula) <= GAUSSIAN_RTOL * formula
    else:
        raise UsageError(f"unknown --which {args.which!r}; use identity or gaussian")
    print(f"formula={_g6(formula)}")
    print(f"numeric={_g6(numeric)}")
    print(f"rel_error={_g6(abs(numeric - formula) / abs(formula) if formula else abs(numeric))}")
    return 0 if ok else 1


COMMANDS = {
    "simulate": cmd_simulate,
    "estimate": cmd_estimate,
    "kselect": cmd_kselect,
    "survival": cmd_survival,
    "oracle": cmd_oracle,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except BrokenPipeError:
        sys.stdout = None
        return 0
    except (UsageError, TailcensError, OSError) as exc:
        print(f"tailcens {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
