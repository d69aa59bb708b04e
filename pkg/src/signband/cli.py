"""Command-line interface.

Subcommands: band (compute a confidence band for a CSV of x,y pairs),
calibrate (critical values), coverage (simulation study), width-scaling
(width ratio between two sample sizes). Exit codes: 0 success, 2 infeasible
band, 1 usage or I/O error.
"""

import argparse
import json
import sys
import time

import numpy as np

from .approx import band_approx
from .calibration import (
    DEFAULT_N_SIMS,
    KappaRequest,
    KappaTable,
    get_kappa,
    interpolated_kappa,
)
from .exact import BandResult, band_exact
from .experiments import SimConfig, coverage_study, width_scaling_study
from .geometry import SortedDataset

__all__ = ["main", "build_parser"]

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INFEASIBLE = 2


class CliError(Exception):
    pass


def read_xy_csv(path):
    """Parse a two-column x,y file; an optional x,y header line is skipped."""
    xs, ys = [], []
    try:
        fh = open(path)
    except OSError as exc:
        raise CliError(f"cannot open {path}: {exc.strerror}") from exc
    with fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise CliError(f"{path}:{lineno}: expected two comma-separated values")
            if lineno == 1 and not _is_number(parts[0]):
                continue
            try:
                xs.append(float(parts[0]))
                ys.append(float(parts[1]))
            except ValueError:
                raise CliError(f"{path}:{lineno}: could not parse {line!r}") from None
    if not xs:
        raise CliError(f"{path}: no data rows")
    return np.asarray(xs), np.asarray(ys)


def _is_number(s):
    try:
        float(s)
        return True
    except ValueError:
        return False


def write_band_csv(path, x, lower, upper):
    with open(path, "w") as fh:
        fh.write("x,lower,upper\n")
        for i in range(x.size):
            lo = lower[i] if lower is not None else -np.inf
            fh.write(f"{x[i]:.6g},{lo:.6g},{upper[i]:.6g}\n")


def _resolve_kappa(args, n):
    table = KappaTable(args.kappa_table)
    req = KappaRequest(n, args.alpha, n_sims=args.mc_sims, seed=args.seed)
    if getattr(args, "interpolate_kappa", False):
        return interpolated_kappa(table, req)
    return get_kappa(table, req)


def concave_reduction(data: SortedDataset, alpha, kappa, mode, m, seed):
    """Band for a concave median: negate, solve the convex problem, negate."""
    neg = SortedDataset(data.x, -data.y)
    res = _compute_band(neg, alpha, kappa, mode, m, seed)
    lower = -res.upper
    upper = -res.lower if res.lower is not None else np.full(data.n, np.inf)
    return BandResult(lower=lower, upper=upper, kappa=res.kappa, alpha=res.alpha,
                      feasible=res.feasible, x_min=res.x_min, x_max=res.x_max,
                      mode=res.mode)


def _compute_band(data, alpha, kappa, mode, m, seed):
    if mode == "exact":
        return band_exact(data, alpha, kappa)
    result, _ = band_approx(data, alpha, kappa, m=m, seed=seed)
    return result


def cmd_band(args):
    x, y = read_xy_csv(args.input)
    data = SortedDataset.from_unsorted(x, y)
    t0 = time.perf_counter()
    kappa = args.kappa if args.kappa is not None else _resolve_kappa(args, data.n)
    if args.shape == "concave":
        result = concave_reduction(data, args.alpha, kappa, args.mode,
                                   args.slopes, args.seed)
    else:
        result = _compute_band(data, args.alpha, kappa, args.mode,
                               args.slopes, args.seed)
    runtime_ms = (time.perf_counter() - t0) * 1000.0
    write_band_csv(args.out, data.x, result.lower, result.upper)
    if args.report:
        report = {
            "n": data.n,
            "alpha": args.alpha,
            "kappa": result.kappa,
            "mode": result.mode,
            "shape": args.shape,
            "feasible": result.feasible,
            "x_min": _json_num(result.x_min),
            "x_max": _json_num(result.x_max),
            "runtime_ms": runtime_ms,
        }
        with open(args.report, "w") as fh:
            json.dump(report, fh, indent=2)
            fh.write("\n")
    if args.plot:
        from .plotting import save_band_figure

        save_band_figure(args.plot, data.x, data.y, result.lower, result.upper,
                         title=f"{int((1 - args.alpha) * 100)}% band "
                               f"({args.shape}, {result.mode})")
    if not result.feasible:
        print("band is infeasible: the assumed shape is not plausible "
              "at this confidence level", file=sys.stderr)
        return EXIT_INFEASIBLE
    return EXIT_OK


def _json_num(v):
    if v == np.inf:
        return "inf"
    if v == -np.inf:
        return "-inf"
    return float(v)


def cmd_calibrate(args):
    table = KappaTable(args.kappa_table)
    req = KappaRequest(args.n, args.alpha, n_sims=args.mc_sims, seed=args.seed)
    kappa = get_kappa(table, req)
    print(f"n={args.n} alpha={args.alpha} kappa={kappa:.6f} "
          f"(sims={args.mc_sims}, seed={args.seed})")
    return EXIT_OK


def cmd_coverage(args):
    cfg = SimConfig(n=args.n, alpha=args.alpha, mode=args.mode,
                    replications=args.replications, seed=args.seed,
                    error_dist=args.errors, n_sims=args.mc_sims)
    table = KappaTable(args.kappa_table)
    report = coverage_study(cfg, table=table)
    out = {
        "n": cfg.n,
        "alpha": cfg.alpha,
        "mode": cfg.mode,
        "errors": args.errors,
        "replications": report.replications,
        "hits": report.hits,
        "infeasible": report.infeasible,
        "coverage": report.coverage,
        "kappa": report.kappa,
    }
    print(json.dumps(out, indent=2))
    if args.plot:
        from .plotting import save_width_figure

        x = (np.arange(1, cfg.n + 1) - 0.5) / cfg.n
        save_width_figure(args.plot, x, report.mean_width,
                          title=f"mean band width, n={cfg.n}")
    return EXIT_OK


def cmd_width_scaling(args):
    table = KappaTable(args.kappa_table)
    out = width_scaling_study(args.n_small, args.n_large, alpha=args.alpha,
                              replications=args.replications, seed=args.seed,
                              table=table, n_sims=args.mc_sims)
    print(json.dumps(out, indent=2))
    return EXIT_OK


def _add_common(p):
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--mc-sims", type=int, default=DEFAULT_N_SIMS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--kappa-table", default=None,
                   help="path to a critical-value cache file")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="signband",
        description="Simultaneous confidence bands for convex or concave "
                    "median curves via multiscale sign tests.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("band", help="compute a band for a CSV of x,y pairs")
    p.add_argument("input", help="CSV file with two columns x,y")
    p.add_argument("--out", required=True, help="output CSV x,lower,upper")
    p.add_argument("--shape", choices=["convex", "concave"], default="convex")
    p.add_argument("--mode", choices=["exact", "approximate"],
                   default="approximate")
    p.add_argument("--slopes", type=int, default=100,
                   help="slope grid size for the approximate mode")
    p.add_argument("--kappa", type=float, default=None,
                   help="use this critical value instead of simulating")
    p.add_argument("--interpolate-kappa", action="store_true",
                   help="interpolate kappa in log n from cached values")
    p.add_argument("--report", default=None, help="write a JSON run report")
    p.add_argument("--plot", default=None, help="render the band to this file")
    _add_common(p)
    p.set_defaults(func=cmd_band)

    p = sub.add_parser("calibrate", help="simulate a critical value")
    p.add_argument("--n", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("coverage", help="empirical coverage study")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=["exact", "approximate"],
                   default="approximate")
    p.add_argument("--errors", choices=["student_t", "gaussian"],
                   default="student_t")
    p.add_argument("--replications", type=int, default=200)
    p.add_argument("--plot", default=None,
                   help="render the mean width profile to this file")
    _add_common(p)
    p.set_defaults(func=cmd_coverage)

    p = sub.add_parser("width-scaling", help="central width ratio study")
    p.add_argument("--n-small", type=int, default=300)
    p.add_argument("--n-large", type=int, default=1200)
    p.add_argument("--replications", type=int, default=50)
    _add_common(p)
    p.set_defaults(func=cmd_width_scaling)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
