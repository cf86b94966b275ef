"""Command-line surface: point values, curve sweeps to CSV, crossover angles,
and Monte Carlo validation runs.

Angles are degrees at this boundary and radians everywhere inside.  Output
CSV uses '\\n' line endings, '.' decimals, and '#'-prefixed comment lines;
data values are printed with 17 significant digits so re-parsing reproduces
the floats bit for bit.  Exit codes: 0 success, 2 argument error, 3
numerical or bracketing failure, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable

import numpy as np

from . import __version__
from . import coherent, mcsim, twoshot
from .capacities import Ensemble, c1, c_infinity
from .errors import BracketingError, CompletenessError, ConditioningError
from .statespace import Angle, two_shot_alphabet
from .sweeps import SweepTable

EXIT_OK = 0
EXIT_ARGS = 2
EXIT_NUMERIC = 3
EXIT_IO = 4

THREADS_ENV = "SUPERADD_THREADS"

POINT_CHOICES = ("c1", "cinf", "r2", "r2gen", "r2trunc")
SWEEP_COLUMNS = ("c1", "cinf", "ratio", "r2", "diff", "r2_over_c1",
                 "r2trunc", "r2trunc_reused", "r2gen")

CROSSOVER_SETUPS: dict[str, tuple[Callable[[Angle], float], float, float]] = {
    "ansatz": (lambda g: twoshot.optimize_r2(g).bits_per_transmission, 15.0, 25.0),
    "truncated": (lambda g: coherent.optimize_r2_truncated(g).bits_per_transmission, 14.0, 20.0),
}


def _thread_count() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"{THREADS_ENV} must be an integer, got {raw!r}")
    return max(1, n)


def _angle(gamma_deg: float, open_interval: bool) -> Angle:
    if open_interval and not 0.0 < gamma_deg < 90.0:
        raise ValueError(f"gamma must lie strictly inside (0, 90) deg, got {gamma_deg}")
    if not 0.0 <= gamma_deg <= 90.0:
        raise ValueError(f"gamma must lie in [0, 90] deg, got {gamma_deg}")
    return Angle.from_degrees(gamma_deg)


def cmd_point(gamma_deg: float, which: str, seed: int = 0) -> int:
    """Print one requested quantity, then the optimizing parameters if any."""
    needs_open = which not in ("c1", "cinf")
    gamma = _angle(gamma_deg, open_interval=needs_open)
    params: dict[str, float] = {}
    if which == "c1":
        value = c1(gamma)
    elif which == "cinf":
        value = c_infinity(gamma)
    elif which == "r2":
        result = twoshot.optimize_r2(gamma)
        value, params = result.bits_per_transmission, result.params
    elif which == "r2trunc":
        result = coherent.optimize_r2_truncated(gamma)
        value, params = result.bits_per_transmission, result.params
    elif which == "r2gen":
        result = twoshot.optimize_general(gamma, seed=seed)
        value, params = result.bits_per_transmission, result.params
        print(f"{value:.10f}")
        print("# lower-bound probe over all four-outcome measurements")
        for name, v in params.items():
            print(f"{name} = {v:.10g}")
        return EXIT_OK
    else:
        raise ValueError(f"unknown quantity {which!r}")
    print(f"{value:.10f}")
    for name, v in params.items():
        print(f"{name} = {v:.10g}")
    return EXIT_OK


def _column_values(column: str, gamma: Angle, cache: dict[str, float], seed: int) -> float:
    if column in cache:
        return cache[column]
    if column == "c1":
        value = c1(gamma)
    elif column == "cinf":
        value = c_infinity(gamma)
    elif column == "ratio":
        value = _column_values("cinf", gamma, cache, seed) / _column_values("c1", gamma, cache, seed)
    elif column == "r2":
        value = twoshot.optimize_r2(gamma).bits_per_transmission
    elif column == "diff":
        value = _column_values("r2", gamma, cache, seed) - _column_values("c1", gamma, cache, seed)
    elif column == "r2_over_c1":
        value = _column_values("r2", gamma, cache, seed) / _column_values("c1", gamma, cache, seed)
    elif column == "r2trunc":
        value = coherent.optimize_r2_truncated(gamma).bits_per_transmission
    elif column == "r2trunc_reused":
        value = coherent.optimize_r2_truncated_reused(gamma).bits_per_transmission
    elif column == "r2gen":
        value = twoshot.optimize_general(gamma, seed=seed).bits_per_transmission
    else:
        raise ValueError(f"unknown column {column!r}")
    cache[column] = value
    return value


def sweep_table(from_deg: float, to_deg: float, steps: int, columns: Iterable[str],
                seed: int = 0) -> SweepTable:
    """Evaluate the requested columns over an inclusive degree grid."""
    columns = list(columns)
    if steps < 2:
        raise ValueError("steps must be at least 2")
    if not 0.0 < from_deg < to_deg < 90.0:
        raise ValueError("need 0 < from < to < 90 degrees")
    unknown = [c for c in columns if c not in SWEEP_COLUMNS]
    if unknown:
        raise ValueError(f"unknown sweep columns: {unknown}")
    grid = np.linspace(from_deg, to_deg, steps)

    def row(deg: float) -> list[float]:
        gamma = Angle.from_degrees(deg)
        cache: dict[str, float] = {}
        return [_column_values(c, gamma, cache, seed) for c in columns]

    threads = _thread_count()
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(row, grid))
    else:
        rows = [row(deg) for deg in grid]
    data = np.array(rows)
    search = twoshot.DEFAULT_ANSATZ_SEARCH
    provenance = (
        f"superadd sweep from={from_deg:g} to={to_deg:g} steps={steps} "
        f"columns={','.join(columns)} seed={seed} eta_points={search.eta_points} "
        f"p_points={search.p_points} nm_fatol={search.nm_fatol:g} "
        f"threads={threads} version={__version__}"
    )
    return SweepTable(
        gamma_deg=grid,
        columns={name: data[:, k] for k, name in enumerate(columns)},
        provenance=provenance,
    )


def write_csv(table: SweepTable, stream) -> None:
    if table.provenance:
        stream.write(f"# {table.provenance}\n")
    stream.write(",".join(("gamma_deg",) + table.column_names) + "\n")
    for i in range(len(table)):
        stream.write(",".join(f"{v:.17g}" for v in table.row(i)) + "\n")


def read_csv(path) -> SweepTable:
    provenance = ""
    header: list[str] = []
    rows: list[list[float]] = []
    with open(path, "r", encoding="utf-8") as stream:
        for line in stream:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                provenance = line[1:].strip()
                continue
            if not header:
                header = line.split(",")
                continue
            rows.append([float(tok) for tok in line.split(",")])
    data = np.array(rows)
    return SweepTable(
        gamma_deg=data[:, 0],
        columns={name: data[:, k + 1] for k, name in enumerate(header[1:])},
        provenance=provenance,
    )


def cmd_sweep(from_deg: float, to_deg: float, steps: int, columns: Iterable[str],
              out: str, seed: int = 0) -> int:
    table = sweep_table(from_deg, to_deg, steps, columns, seed=seed)
    with open(out, "w", encoding="utf-8", newline="") as stream:
        write_csv(table, stream)
    return EXIT_OK


def cmd_crossover(which: str) -> int:
    """Locate where the chosen rate curve crosses the one-shot capacity."""
    rate_fn, lo, hi = CROSSOVER_SETUPS[which]
    try:
        angle = twoshot.crossover_angle(rate_fn, Angle.from_degrees(lo), Angle.from_degrees(hi))
    except BracketingError as exc:
        lo_angle, hi_angle = Angle.from_degrees(lo), Angle.from_degrees(hi)
        print(f"bracketing failed: {exc}", file=sys.stderr)
        print(f"rate-c1 at {lo} deg: {rate_fn(lo_angle) - c1(lo_angle):.6e}", file=sys.stderr)
        print(f"rate-c1 at {hi} deg: {rate_fn(hi_angle) - c1(hi_angle):.6e}", file=sys.stderr)
        raise
    print(f"{angle.degrees:.2f}")
    return EXIT_OK


def cmd_mc(gamma_deg: float, samples: int, seed: int) -> int:
    """Monte Carlo check of the optimal two-shot rate at one angle."""
    if samples < 1:
        raise ValueError("samples must be positive")
    gamma = _angle(gamma_deg, open_interval=True)
    result = twoshot.optimize_r2(gamma)
    eta, p = result.params["eta"], result.params["p"]
    a, b, c, _ = two_shot_alphabet(gamma)
    ensemble = Ensemble(((p, a), (p, b), (1.0 - 2.0 * p, c)))
    basis = twoshot.ansatz_basis(eta, gamma)
    config = mcsim.SimConfig(samples=samples, seed=seed, ensemble=ensemble, basis=basis)
    counts = mcsim.simulate(config)
    analytic = 2.0 * result.bits_per_transmission
    empirical = mcsim.empirical_mi(counts)
    se = mcsim.bootstrap_standard_error(counts, resamples=100, seed=seed + 1)
    z = (empirical - analytic) / se if se > 0 else float("inf")
    print(f"analytic_mi_bits = {analytic:.10f}")
    print(f"empirical_mi_bits = {empirical:.10f}")
    print(f"bootstrap_se = {se:.4e}")
    print(f"z = {z:+.3f}")
    print(f"RESULT: {'PASS' if abs(z) <= 3.0 else 'FAIL'} (3 sigma)")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="superadd",
        description="Communication rates for a two-state alphabet under collective decoding.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_point = sub.add_parser("point", help="print one capacity or rate value")
    p_point.add_argument("--gamma", type=float, required=True, help="overlap angle, degrees")
    p_point.add_argument("--which", choices=POINT_CHOICES, required=True)
    p_point.add_argument("--seed", type=int, default=0, help="seed for r2gen")

    p_sweep = sub.add_parser("sweep", help="write a CSV of curves over an angle grid")
    p_sweep.add_argument("--from", dest="from_deg", type=float, required=True)
    p_sweep.add_argument("--to", dest="to_deg", type=float, required=True)
    p_sweep.add_argument("--steps", type=int, required=True)
    p_sweep.add_argument("--columns", type=str, required=True,
                         help=f"comma separated, from: {','.join(SWEEP_COLUMNS)}")
    p_sweep.add_argument("--out", type=str, required=True)
    p_sweep.add_argument("--seed", type=int, default=0)

    p_cross = sub.add_parser("crossover", help="angle where a rate curve meets c1")
    p_cross.add_argument("--which", choices=tuple(CROSSOVER_SETUPS), required=True)

    p_mc = sub.add_parser("mc", help="Monte Carlo consistency check at one angle")
    p_mc.add_argument("--gamma", type=float, required=True)
    p_mc.add_argument("--samples", type=int, required=True)
    p_mc.add_argument("--seed", type=int, default=0)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "point":
            return cmd_point(args.gamma, args.which, seed=args.seed)
        if args.command == "sweep":
            columns = [c.strip() for c in args.columns.split(",") if c.strip()]
            return cmd_sweep(args.from_deg, args.to_deg, args.steps, columns, args.out,
                             seed=args.seed)
        if args.command == "crossover":
            return cmd_crossover(args.which)
        if args.command == "mc":
            return cmd_mc(args.gamma, args.samples, args.seed)
        parser.error(f"unknown command {args.command!r}")
    except (BracketingError, CompletenessError, ConditioningError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ARGS
    except OSError as exc:
        print(f"i/o failure: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
