"""Command-line front end.

Subcommands:
  dist        exact distribution values by the enumeration / tableaux /
              series routes (exact rationals, printed as p/q)
  crosscheck  run the cross-route validation suite, write a JSON report,
              exit nonzero if anything fails
  painleve    normalized determinants e^{-kt} D_n(t) from the sigma-form
              ODE, optionally compared against the Toeplitz route
  laguerre    smallest-eigenvalue probabilities (Fredholm / quadrature)
  limits      f0, gue, f2, thm4, fklim tables

Output is CSV (columns route, which, n, k, N_or_t_or_s, value, err_bar,
exact_flag; UTF-8, LF line endings) or JSON with the same fields.  Exact
rational values are printed as "p/q" strings, floats with 17 significant
digits, so files are byte-reproducible for a fixed configuration and seed.
MONOWORD_THREADS sets the worker count for sweeps (default 1); results are
gathered in parameter order, so the output does not depend on scheduling.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np

from . import combinatorics, laguerre, limits, painleve, series, toeplitz
from .errors import BudgetExceededError, IntegrationError, PrecisionNotReachedError

COLUMNS = ["route", "which", "n", "k", "N_or_t_or_s", "value", "err_bar", "exact_flag"]


def _max_workers() -> int:
    try:
        return max(1, int(os.environ.get("MONOWORD_THREADS", "1")))
    except ValueError:
        return 1


def _parallel_map(fn, items):
    items = list(items)
    workers = _max_workers()
    if workers == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _fmt(value) -> str:
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def _parse_floats(text: str):
    """Comma list "0.5,1,2" or linspace "lo:hi:count"."""
    if ":" in text:
        lo, hi, count = text.split(":")
        return [float(v) for v in np.linspace(float(lo), float(hi), int(count))]
    return [float(v) for v in text.split(",")]


def _parse_ints(text: str):
    return [int(v) for v in text.split(",")]


def _row(route, which, n, k, x, value, err_bar="", exact=False):
    return {
        "route": route,
        "which": which,
        "n": n,
        "k": k,
        "N_or_t_or_s": x,
        "value": value,
        "err_bar": err_bar,
        "exact_flag": exact,
    }


def _write_rows(rows, fmt: str, out_path):
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(COLUMNS)
        for r in rows:
            writer.writerow(
                [
                    r["route"], r["which"], r["n"], r["k"],
                    _fmt(r["N_or_t_or_s"]) if r["N_or_t_or_s"] != "" else "",
                    _fmt(r["value"]),
                    _fmt(r["err_bar"]) if r["err_bar"] != "" else "",
                    "true" if r["exact_flag"] else "false",
                ]
            )
        text = buf.getvalue()
    else:
        payload = []
        for r in rows:
            entry = dict(r)
            if isinstance(entry["value"], Fraction):
                entry["value"] = _fmt(entry["value"])
            if isinstance(entry["N_or_t_or_s"], Fraction):
                entry["N_or_t_or_s"] = _fmt(entry["N_or_t_or_s"])
            payload.append(entry)
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# dist
# ---------------------------------------------------------------------------

def _cmd_dist(args) -> int:
    n_values = (
        [args.n]
        if args.n is not None
        else list(range(1, (args.n_max if args.n_max else max(args.N, 1)) + 1))
    )
    rows = []
    if args.route == "enum":
        table = combinatorics.exact_distribution_enumeration(
            args.k, args.N, args.which, budget=args.enum_budget
        )
        for n in n_values:
            rows.append(
                _row("enumeration", args.which, n, args.k, args.N,
                     table.value(n, args.k, args.N), exact=True)
            )
    elif args.route == "tableaux":
        values = _parallel_map(
            lambda n: combinatorics.distribution_via_tableaux(
                n, args.k, args.N, args.which
            ),
            n_values,
        )
        for n, v in zip(n_values, values):
            rows.append(_row("tableaux", args.which, n, args.k, args.N, v, exact=True))
    else:
        values = _parallel_map(
            lambda n: series.extract_distribution(n, args.k, args.which, args.N),
            n_values,
        )
        for n, v in zip(n_values, values):
            rows.append(_row("series", args.which, n, args.k, args.N, v, exact=True))
    _write_rows(rows, args.format, args.out)
    return 0


# ---------------------------------------------------------------------------
# crosscheck
# ---------------------------------------------------------------------------

def _check(name, max_residual, tolerance):
    return {
        "name": name,
        "max_residual": max_residual,
        "tolerance": tolerance,
        "passed": bool(max_residual <= tolerance),
    }


def crosscheck_report(
    seed: int = 0,
    points: int = 40,
    tol_identity: float = 1e-6,
    tol_fd: float = 1e-4,
    tol_route: float = 1e-6,
    perturb_det: float = 0.0,
) -> dict:
    """Cross-route validation: exact generating-function equality, the
    identity sweeps, and the sigma-form and Fredholm route comparisons.

    Deterministic for a fixed seed; perturb_det multiplies the Toeplitz
    determinants used in the route comparisons (a fault-injection hook for
    testing that failures surface by name).
    """
    rng = np.random.default_rng(seed)
    checks = []

    # exact generating function vs enumeration (identical rationals)
    mismatches = 0
    cases = 0
    for kind in ("I", "D"):
        for k in (1, 2):
            for n in (1, 2, 3):
                det = series.toeplitz_det_series(n, kind, order=6, k=k)
                for N in range(7):
                    want = combinatorics.exact_distribution_enumeration(
                        k, N, kind
                    ).value(n, k, N)
                    got = series.extract_distribution(n, k, kind, N, det=det)
                    cases += 1
                    if got != want:
                        mismatches += 1
    checks.append(
        {
            "name": "generating_function_exact",
            "cases": cases,
            "mismatches": mismatches,
            "passed": mismatches == 0,
        }
    )

    # identity sweeps
    sweep = [
        (int(rng.integers(2, 9)), int(rng.integers(1, 6)),
         float(rng.uniform(0.05, 5.0)))
        for _ in range(points)
    ]

    def residuals_at(point):
        n, k, t = point
        out = dict(toeplitz.universal_identity_residuals(n, k, t, "I"))
        out.update(toeplitz.nonuniversal_identity_residuals(n, k, t))
        return out

    worst: dict = {}
    for res in _parallel_map(residuals_at, sweep):
        for name, val in res.items():
            worst[name] = max(worst.get(name, 0.0), val)
    for name in sorted(worst):
        checks.append(_check(f"identity:{name}", worst[name], tol_identity))

    fd_sweep = sweep[: max(points // 4, 3)]
    worst_fd: dict = {}
    for res in _parallel_map(
        lambda p: toeplitz.differentiation_residuals(*p), fd_sweep
    ):
        for name, val in res.items():
            worst_fd[name] = max(worst_fd.get(name, 0.0), val)
    for name in sorted(worst_fd):
        checks.append(_check(f"derivative:{name}", worst_fd[name], tol_fd))

    # sigma-form route vs Toeplitz route
    scale = 1.0 + perturb_det
    gap = 0.0
    for n, k in ((1, 1), (2, 3), (3, 2)):
        trajectory = painleve.integrate_sigma(n, k, 2.0)
        for t in (0.5, 2.0):
            direct = math.exp(-k * t) * toeplitz.toeplitz_det(n, k, t, "I") * scale
            gap = max(gap, abs(trajectory.normalized_determinant(t) - direct))
    checks.append(_check("painleve_route", gap, tol_route))

    # Fredholm route vs Toeplitz route (note the role swap: size k, weight n)
    gap = 0.0
    for k, n in ((1, 3), (2, 2), (3, 1), (4, 5)):
        for t in (0.5, 2.0):
            direct = math.exp(-k * t) * toeplitz.toeplitz_det(n, k, t, "I") * scale
            gap = max(
                gap, abs(laguerre.smallest_eigenvalue_prob_fredholm(k, n, t) - direct)
            )
    checks.append(_check("fredholm_route", gap, tol_route))

    return {
        "seed": seed,
        "points": points,
        "tolerances": {
            "identity": tol_identity,
            "finite_difference": tol_fd,
            "route": tol_route,
        },
        "perturb_det": perturb_det,
        "checks": checks,
        "passed": all(c["passed"] for c in checks),
    }


def _cmd_crosscheck(args) -> int:
    report = crosscheck_report(
        seed=args.seed,
        points=args.points,
        tol_identity=args.tol_identity,
        tol_fd=args.tol_fd,
        tol_route=args.tol_route,
        perturb_det=args.perturb_det,
    )
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if not report["passed"]:
        failed = [c["name"] for c in report["checks"] if not c["passed"]]
        print(f"FAILED checks: {', '.join(failed)}", file=sys.stderr)
        return 1
    return 0


# ---------------------------------------------------------------------------
# painleve / laguerre / limits
# ---------------------------------------------------------------------------

def _cmd_painleve(args) -> int:
    ts = sorted(_parse_floats(args.t))
    trajectory = painleve.integrate_sigma(
        args.n, args.k, max(ts), tol=args.tol, kind=args.kind
    )
    rows = [
        _row("painleve-sigma", args.kind, args.n, args.k, t,
             trajectory.normalized_determinant(t))
        for t in ts
    ]
    if args.compare:
        for t in ts:
            rows.append(
                _row("toeplitz", args.kind, args.n, args.k, t,
                     math.exp(-args.k * t)
                     * toeplitz.toeplitz_det(args.n, args.k, t, args.kind))
            )
    _write_rows(rows, args.format, args.out)
    return 0


def _cmd_laguerre(args) -> int:
    ts = _parse_floats(args.t)
    rows = []
    for t in ts:
        if args.route in ("fredholm", "both"):
            rows.append(
                _row("laguerre-fredholm", "I", args.n, args.k, t,
                     laguerre.smallest_eigenvalue_prob_fredholm(
                         args.k, args.n, t, args.m_nodes
                     ))
            )
        if args.route in ("quadrature", "both"):
            rows.append(
                _row("laguerre-quadrature", "I", args.n, args.k, t,
                     laguerre.smallest_eigenvalue_prob_quadrature(args.k, args.n, t))
            )
    _write_rows(rows, args.format, args.out)
    return 0


def _cmd_limits(args) -> int:
    rows = []
    if args.what == "f0":
        for s in _parse_floats(args.s):
            if args.method == "montecarlo":
                mc = limits.f0(s, args.k, method="montecarlo",
                               samples=args.samples, seed=args.seed)
                rows.append(_row("f0-montecarlo", "", "", args.k, s,
                                 mc.value, err_bar=mc.standard_error))
            else:
                rows.append(_row("f0-quadrature", "", "", args.k, s,
                                 limits.f0(s, args.k)))
    elif args.what == "gue":
        for s in _parse_floats(args.s):
            rows.append(
                _row(f"gue-{args.route}", "", "", args.k, s,
                     limits.gue_F(s, args.k, route=args.route))
            )
    elif args.what == "f2":
        grid = _parse_floats(args.s)
        vals = limits.f2(grid)
        for s, v in zip(grid, vals):
            rows.append(_row("f2", "", "", "", s, float(v)))
    elif args.what == "thm4":
        report = limits.theorem4_convergence(
            args.k, _parse_ints(args.N),
            continuity_correction=args.midpoint,
        )
        route = "thm4-midpoint" if args.midpoint else "thm4"
        for N, err in zip(report.N_list, report.sup_errors):
            rows.append(_row(route, "I", N, args.k, "", err))
    elif args.what == "fklim":
        report = limits.fklim_check(_parse_ints(args.k_list),
                                    _parse_floats(args.s))
        for k in report.k_list:
            rows.append(_row("fklim", "", "", k, "", report.errors[k]))
    _write_rows(rows, args.format, args.out)
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_output_options(p):
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None, help="output path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="monoword",
        description="Longest monotone subsequence distributions in random "
                    "words, by five cross-validating routes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dist", help="exact distribution tables")
    p.add_argument("--which", choices=("I", "D"), required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--n-max", dest="n_max", type=int, default=None)
    p.add_argument("--route", choices=("enum", "tableaux", "series"),
                   default="series")
    p.add_argument("--enum-budget", type=int,
                   default=combinatorics.DEFAULT_ENUMERATION_BUDGET)
    _add_output_options(p)
    p.set_defaults(func=_cmd_dist)

    p = sub.add_parser("crosscheck", help="run the validation suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--points", type=int, default=40)
    p.add_argument("--tol-identity", type=float, default=1e-6)
    p.add_argument("--tol-fd", type=float, default=1e-4)
    p.add_argument("--tol-route", type=float, default=1e-6)
    p.add_argument("--perturb-det", type=float, default=0.0,
                   help="fault-injection hook: scales determinants in the "
                        "route comparisons by (1 + eps)")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_crosscheck)

    p = sub.add_parser("painleve", help="sigma-form route determinants")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--t", required=True, help='grid: "0.5,1,2" or "lo:hi:count"')
    p.add_argument("--kind", choices=("I", "D"), default="I")
    p.add_argument("--tol", type=float, default=painleve.DEFAULT_TOL)
    p.add_argument("--compare", action="store_true",
                   help="also emit the Toeplitz-route values")
    _add_output_options(p)
    p.set_defaults(func=_cmd_painleve)

    p = sub.add_parser("laguerre", help="smallest-eigenvalue probabilities")
    p.add_argument("--k", type=int, required=True, help="matrix size")
    p.add_argument("--n", type=int, required=True, help="weight exponent")
    p.add_argument("--t", required=True)
    p.add_argument("--route", choices=("fredholm", "quadrature", "both"),
                   default="fredholm")
    p.add_argument("--m-nodes", dest="m_nodes", type=int,
                   default=laguerre.DEFAULT_NODES)
    _add_output_options(p)
    p.set_defaults(func=_cmd_laguerre)

    p = sub.add_parser("limits", help="limit-law tables")
    p.add_argument("what", choices=("f0", "gue", "f2", "thm4", "fklim"))
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--k-list", dest="k_list", default="2,3,4")
    p.add_argument("--s", default="-2:2:9")
    p.add_argument("--N", default="50,100,200")
    p.add_argument("--method", choices=("quadrature", "montecarlo"),
                   default="quadrature")
    p.add_argument("--route", choices=("convolution", "direct"),
                   default="convolution")
    p.add_argument("--samples", type=int, default=200_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--midpoint", action="store_true",
                   help="continuity-corrected thm4 comparison")
    _add_output_options(p)
    p.set_defaults(func=_cmd_limits)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (BudgetExceededError, PrecisionNotReachedError, IntegrationError) as exc:
        print(str(exc), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
