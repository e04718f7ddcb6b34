"""Command-line front end.

Subcommands write CSV (header row, comma separated, reals with 12
significant digits).  Output is assembled in memory and written in one go,
to a temporary file renamed into place when ``--out`` is given, so a failed
run never leaves a partial table behind.

Exit codes: 0 ok, 2 invalid input, 3 unparsable state file, 4 numerical
failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import logging
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager

import numpy as np

from . import bounds, states, thermal
from . import random as rnd
from .errors import (
    ConvergenceError,
    DimensionError,
    DomainError,
    NumericalConsistencyError,
    QdmParseError,
    ValidationError,
)

log = logging.getLogger("entbound")

EXIT_OK, EXIT_VALIDATION, EXIT_PARSE, EXIT_NUMERIC = 0, 2, 3, 4

RANDOM_COLUMNS = ("index", "d1", "d2", "purity", "negativity", "q1", "q2", "delta1", "delta2")
PC_COLUMNS = ("d", "d_m", "p_c", "p_min")
REPORT_COLUMNS = bounds.BoundsReport.FIELDS
THERMAL_COLUMNS = thermal.SweepRow.COLUMNS

RANDOM_PRESETS = {
    "fig2": dict(n=1000, dm_min=2, dm_max=10, offset=None),
    "fig3": dict(n=1000, dm_min=2, dm_max=14, offset=60),
    "fig4": dict(n=1000, dm_min=2, dm_max=5, offset=70),
}
PC_PRESETS = {"fig1": dict(d_min=4, d_max=1000, dm_min=2, dm_max=25)}
THERMAL_PRESETS = {
    "fig5": dict(omega=1.0, tau=3.0, gamma=0.0, k=1.0, kbt=2.0, var="gamma", lo=-5.0, hi=5.0, steps=201),
    "fig6": dict(omega=1.0, tau=3.0, gamma=0.0, k=1.0, kbt=2.0, var="gamma", lo=-5.0, hi=5.0, steps=201),
    "fig7": dict(omega=1.0, tau=3.0, gamma=1.0, k=0.0, kbt=10.0, var="k", lo=-10.0, hi=10.0, steps=201),
    "fig8": dict(omega=1.0, tau=4.0, gamma=1.0, k=5.0, kbt=1.0, var="T", lo=0.05, hi=10.0, steps=200),
}


class UsageError(Exception):
    pass


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".12g")


def render_csv(columns, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([fmt(row[c]) if isinstance(row, dict) else fmt(getattr(row, c)) for c in columns])
    return buf.getvalue()


def emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    directory = os.path.dirname(os.path.abspath(out))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".entbound-", suffix=".csv")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, out)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def thread_count() -> int:
    raw = os.environ.get("ENTBOUND_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError as exc:
        raise UsageError(f"ENTBOUND_THREADS must be an integer, got {raw!r}") from exc
    if n < 0:
        raise UsageError("ENTBOUND_THREADS must be >= 0")
    return n or (os.cpu_count() or 1)


@contextmanager
def ordered_mapper(threads: int):
    """A ``map`` that keeps input order, threaded when ``threads > 1``."""
    if threads <= 1:
        yield map
        return
    with ThreadPoolExecutor(max_workers=threads) as pool:
        yield pool.map


# --- row producers (also used directly by tests) -----------------------------

def random_row(index: int, seed: int, dm_min: int, dm_max: int, offset: int | None) -> dict:
    stream = rnd.SampleStream(seed, index)
    d_m = int(stream.rng(rnd.TAG_DIMS).integers(dm_min, dm_max + 1))
    d_big = d_m if offset is None else d_m + offset
    rho = rnd.random_density_hs(states.Bipartition(d_m, d_big), stream)
    p = states.purity(rho)
    n = states.negativity(rho)
    d = d_m * d_big
    q1 = bounds.q1_bound(p, d, d_m)
    q2 = bounds.q2_bound(p, d, d_m)
    return dict(index=index, d1=d_m, d2=d_big, purity=p, negativity=n,
                q1=q1, q2=q2, delta1=q1 - n, delta2=q2 - n)


def random_sweep_rows(n: int, dm_min: int, dm_max: int, offset: int | None, seed: int, mapper=map) -> list[dict]:
    if n < 1:
        raise UsageError("--n must be >= 1")
    if not 2 <= dm_min <= dm_max:
        raise UsageError("need 2 <= dm-min <= dm-max")
    if offset is not None and offset < 0:
        raise UsageError("--offset must be >= 0")
    if not 0 <= seed < 2**64:
        raise UsageError("--seed must be a 64-bit unsigned integer")
    return list(mapper(lambda i: random_row(i, seed, dm_min, dm_max, offset), range(n)))


def pc_surface_rows(d_min: int, d_max: int, dm_min: int, dm_max: int) -> list[dict]:
    if not 2 <= dm_min <= dm_max:
        raise UsageError("need 2 <= dm-min <= dm-max")
    if not 4 <= d_min <= d_max:
        raise UsageError("need 4 <= d-min <= d-max")
    rows = []
    for d in range(d_min, d_max + 1):
        for d_m in range(dm_min, dm_max + 1):
            if d_m * d_m > d:
                break
            rows.append(dict(d=d, d_m=d_m, p_c=bounds.p_critical(d, d_m), p_min=1.0 / d))
    return rows


# --- subcommands ---------------------------------------------------------------

def cmd_report(args) -> int:
    try:
        mat, part = states.read_qdm(args.file)
    except (QdmParseError, OSError, UnicodeDecodeError) as exc:
        print(f"error: cannot parse {args.file}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        rho = states.validate(mat, part)
    except (ValidationError, DimensionError) as exc:
        print(f"error: invalid state: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    rep = bounds.bounds_report(rho)
    emit(render_csv(REPORT_COLUMNS, [rep]), args.out)
    print(
        f"{part.d1}x{part.d2} state: purity {rep.purity:.6g}, S_L {rep.s_linear:.6g}, "
        f"N {rep.negativity:.6g}; Q1 {rep.q1:.6g}, Q2 {rep.q2:.6g}, Q3 {rep.q3}, "
        f"Q {rep.q:.6g}, P_c {rep.p_critical:.6g}; N <= Q: {'yes' if rep.satisfied else 'NO'}",
        file=sys.stderr,
    )
    return EXIT_OK


def _apply_preset(args, presets):
    chosen = [name for name in presets if getattr(args, name, False)]
    if len(chosen) > 1:
        raise UsageError(f"choose at most one preset, got {', '.join('--' + c for c in chosen)}")
    if chosen:
        for key, value in presets[chosen[0]].items():
            if getattr(args, key, None) is None:
                setattr(args, key, value)


def cmd_random_sweep(args) -> int:
    _apply_preset(args, RANDOM_PRESETS)
    if args.balanced:
        args.offset = None
    for key in ("n", "dm_min", "dm_max"):
        if getattr(args, key) is None:
            raise UsageError(f"--{key.replace('_', '-')} is required without a preset")
    if not args.balanced and args.offset is None and not any(getattr(args, f) for f in RANDOM_PRESETS):
        raise UsageError("give --balanced or --offset")
    with ordered_mapper(thread_count()) as mapper:
        rows = random_sweep_rows(args.n, args.dm_min, args.dm_max, args.offset, args.seed, mapper)
    emit(render_csv(RANDOM_COLUMNS, rows), args.out)
    return EXIT_OK


def cmd_pc_surface(args) -> int:
    _apply_preset(args, PC_PRESETS)
    for key in ("d_min", "d_max", "dm_min", "dm_max"):
        if getattr(args, key) is None:
            raise UsageError(f"--{key.replace('_', '-')} is required without a preset")
    emit(render_csv(PC_COLUMNS, pc_surface_rows(args.d_min, args.d_max, args.dm_min, args.dm_max)), args.out)
    return EXIT_OK


def cmd_thermal_sweep(args) -> int:
    _apply_preset(args, THERMAL_PRESETS)
    defaults = dict(omega=1.0, tau=0.0, gamma=0.0, k=0.0, kbt=1.0)
    for key, value in defaults.items():
        if getattr(args, key) is None:
            setattr(args, key, value)
    for key in ("var", "lo", "hi", "steps"):
        if getattr(args, key) is None:
            flag = {"lo": "from", "hi": "to"}.get(key, key)
            raise UsageError(f"--{flag} is required without a preset")
    if args.steps < 2:
        raise UsageError("--steps must be >= 2")
    if not args.lo < args.hi:
        raise UsageError("--from must be smaller than --to")
    if args.var == "T" and args.lo <= 0.0:
        raise UsageError("temperatures must be positive")
    if args.kbt <= 0.0:
        raise UsageError("--kbt must be positive")
    base = thermal.ThermalParams.at_temperature(args.kbt, omega=args.omega, tau=args.tau, gamma=args.gamma, k=args.k)
    grid = np.linspace(args.lo, args.hi, args.steps)
    try:
        with ordered_mapper(thread_count()) as mapper:
            rows = thermal.thermal_sweep(base, args.var, grid, args.bounds_from, mapper)
    except (ConvergenceError, NumericalConsistencyError, ValidationError) as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    bad = [r for r in rows if not r.within_bounds]
    if bad and not args.no_check:
        print(
            f"error: {len(bad)} of {len(rows)} rows have N > min(Q1, Q2, Q3) "
            f"(first at {args.var} = {bad[0].sweep_value:.6g}: N = {bad[0].negativity:.6g}, "
            f"Q1 = {bad[0].q1:.6g}, Q2 = {bad[0].q2:.6g}); rerun with --no-check to write them anyway",
            file=sys.stderr,
        )
        return EXIT_NUMERIC
    emit(render_csv(THERMAL_COLUMNS, rows), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="entbound", description="Purity-based bounds on bipartite negativity.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress and warnings")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("report", help="bounds for one QDM state file")
    p.add_argument("file")
    p.add_argument("--out")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("random-sweep", help="Q1/Q2 versus N on Hilbert-Schmidt random states")
    p.add_argument("--n", type=int)
    p.add_argument("--dm-min", type=int)
    p.add_argument("--dm-max", type=int)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--balanced", action="store_true", help="d_M = d_m")
    mode.add_argument("--offset", type=int, help="d_M = d_m + OFFSET")
    p.add_argument("--seed", type=int, default=0)
    for name in RANDOM_PRESETS:
        p.add_argument(f"--{name}", action="store_true", help=f"parameters of {name}")
    p.add_argument("--out")
    p.set_defaults(func=cmd_random_sweep)

    p = sub.add_parser("pc-surface", help="crossover purity over (d, d_m)")
    p.add_argument("--d-min", type=int)
    p.add_argument("--d-max", type=int)
    p.add_argument("--dm-min", type=int)
    p.add_argument("--dm-max", type=int)
    for name in PC_PRESETS:
        p.add_argument(f"--{name}", action="store_true", help=f"parameters of {name}")
    p.add_argument("--out")
    p.set_defaults(func=cmd_pc_surface)

    p = sub.add_parser("thermal-sweep", help="three-qutrit Gibbs state sweeps")
    for name in ("omega", "tau", "gamma", "k", "kbt"):
        p.add_argument(f"--{name}", type=float)
    p.add_argument("--var", choices=thermal.SWEEP_VARS)
    p.add_argument("--from", dest="lo", type=float)
    p.add_argument("--to", dest="hi", type=float)
    p.add_argument("--steps", type=int)
    p.add_argument("--bounds-from", choices=thermal.BOUND_SOURCES, default="gibbs",
                   help="purity used for Q1-Q3: full Gibbs state (default) or the reduced pair")
    p.add_argument("--no-check", action="store_true", help="write rows even if N exceeds a bound")
    for name in THERMAL_PRESETS:
        p.add_argument(f"--{name}", action="store_true", help=f"parameters of {name}")
    p.add_argument("--out")
    p.set_defaults(func=cmd_thermal_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, DomainError, ValidationError, DimensionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (ConvergenceError, NumericalConsistencyError) as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
