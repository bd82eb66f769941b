"""Command-line interface.

Five subcommands cover the pipelines end to end:

* ``forward``   step-line table file + free parameter -> grid and marginals
* ``inverse``   r marginal table files -> grid (and step-line table for r=2)
* ``roundtrip`` marginals -> grid -> step-line -> grid -> marginals, with the
  discrepancy reported (always exactly zero unless something is broken)
* ``bessel``    print the classical test family's marginal table
* ``verify``    cross-check the recursion pipelines against the moment-based
  construction on generated (or supplied) discrete measure systems

Exit codes: 0 success, 1 verification failure or unexpected error, 2 bad
arguments or malformed input, 3 a genuine singularity in the data (vanishing
normality denominator, singular sweep site, non-normal index), 4 an input
that does not cover the requested index range.  The MOPREC_DIGITS environment
variable sets the default decimal rendering precision.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction
from pathlib import Path

from .errors import (
    DomainError,
    InitError,
    MoprecError,
    NonNormalIndexError,
    NormalityError,
    ParseError,
    RangeError,
    SeedMismatch,
    SingularSweepError,
)
from .inverse_problem import (
    nn_from_marginals_general,
    nn_from_marginals_r2,
    pd_residuals_general,
    pd_residuals_r2,
    stepline_from_nn,
)
from .measures_catalog import bessel_stepline, random_system
from .nearest_neighbor import marginal_mu1, marginal_mu2, nn_from_shifts
from .numerics import DEFAULT_DIGITS, sqrt_real, to_decimal
from .polynomial_oracle import MomentTable, marginal_oracle, nn_oracle, stepline_oracle
from .stepline import build_family_e1, build_family_e2, seed_c00
from .tableio import (
    fraction_str,
    parse_fraction,
    read_marginal,
    read_measures,
    read_stepline,
    write_marginal,
    write_nn_grid,
    write_stepline,
)

EXIT_FAIL = 1
EXIT_PARSE = 2
EXIT_SINGULAR = 3
EXIT_RANGE = 4

SINGULAR_ERRORS = (
    NormalityError,
    InitError,
    SingularSweepError,
    SeedMismatch,
    NonNormalIndexError,
)


def _default_digits() -> int:
    raw = os.environ.get("MOPREC_DIGITS")
    if raw is None:
        return DEFAULT_DIGITS
    try:
        digits = int(raw)
    except ValueError:
        raise DomainError(f"MOPREC_DIGITS must be an integer, found {raw!r}") from None
    if digits < 1:
        raise DomainError("MOPREC_DIGITS must be >= 1")
    return digits


def _fraction_arg(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from None


def _out_path(args, name: str) -> Path:
    directory = Path(args.out_dir)
    directory.mkdir(parents=True, exist_ok=True)
    return directory / f"{name}.{args.format}"


def _emit(path: Path) -> None:
    print(f"wrote {path}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="moprec",
        description="Convert between step-line, nearest-neighbor, and marginal "
        "recurrence coefficients of type II multiple orthogonal polynomials.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    fwd = sub.add_parser(
        "forward",
        help="step-line table + free parameter -> nearest-neighbor grid and marginals",
    )
    fwd.add_argument("--stepline", required=True, help="level-0 step-line table (.json/.csv)")
    fwd.add_argument("--depth", type=int, required=True, help="largest multi-index length")
    group = fwd.add_mutually_exclusive_group(required=True)
    group.add_argument("--c00", type=_fraction_arg, help="free parameter value, as p/q")
    group.add_argument(
        "--mu2-moments",
        metavar="M0,M1",
        help="second measure's first two moments, fixing the free parameter",
    )
    fwd.add_argument("--format", choices=("json", "csv"), default="json")
    fwd.add_argument("--out-dir", default=".", help="directory for output files")
    fwd.add_argument("--digits", type=int, default=None, help="decimal digits in derived columns")

    inv = sub.add_parser(
        "inverse",
        help="r marginal tables -> nearest-neighbor grid (and step-line table for r=2)",
    )
    inv.add_argument(
        "--marginal",
        action="append",
        required=True,
        metavar="FILE",
        help="marginal table (.json/.csv); pass once per measure, in order",
    )
    inv.add_argument("--depth", type=int, required=True, help="largest multi-index length")
    inv.add_argument("--format", choices=("json", "csv"), default="json")
    inv.add_argument("--out-dir", default=".")

    rt = sub.add_parser(
        "roundtrip",
        help="both directions back to back; reports the (exactly zero) discrepancy",
    )
    src = rt.add_mutually_exclusive_group(required=True)
    src.add_argument("--measures", help="measure system file (.json)")
    src.add_argument("--seed", type=int, help="generate a two-measure system from this seed")
    rt.add_argument("--size", type=int, default=None, help="support size for --seed")
    rt.add_argument("--depth", type=int, required=True, help="marginal depth compared after the loop")
    rt.add_argument("--format", choices=("json", "csv"), default="json")
    rt.add_argument("--out-dir", default=None, help="also write the intermediate tables here")

    bes = sub.add_parser(
        "bessel", help="print the classical family's marginal three-term table"
    )
    bes.add_argument("--alpha", type=_fraction_arg, default=Fraction(0))
    bes.add_argument("--nu", type=_fraction_arg, default=Fraction(0))
    bes.add_argument("--rows", type=int, default=10, help="last row index (table runs n = 0 .. rows)")
    bes.add_argument("--digits", type=int, default=None, help="printed significant digits")

    ver = sub.add_parser(
        "verify",
        help="cross-check recursion pipelines against the moment-based construction",
    )
    what = ver.add_mutually_exclusive_group()
    what.add_argument("--measures", help="verify this measure system file (.json)")
    what.add_argument("--seeds", help="comma-separated seeds for generated systems")
    ver.add_argument("--count", type=int, default=5, help="number of consecutive seeds")
    ver.add_argument("--start-seed", type=int, default=1)
    ver.add_argument("--r", type=int, default=2, help="measures per generated system")
    ver.add_argument("--depth", type=int, default=4, help="largest multi-index length checked")
    ver.add_argument("--size", type=int, default=None, help="support size of generated measures")
    return parser


# ----------------------------------------------------------------- commands


def _resolve_seed(args, beta0: Fraction) -> Fraction:
    if args.c00 is not None:
        return args.c00
    parts = args.mu2_moments.split(",")
    if len(parts) != 2:
        raise DomainError("--mu2-moments needs exactly two comma-separated rationals")
    m0 = parse_fraction(parts[0])
    m1 = parse_fraction(parts[1])
    return seed_c00(m0, m1, beta0)


def cmd_forward(args) -> int:
    digits = args.digits if args.digits is not None else _default_digits()
    if digits < 1:
        raise DomainError("--digits must be >= 1")
    if args.depth < 0:
        raise DomainError("--depth must be >= 0")
    table0 = read_stepline(args.stepline)
    if table0.level != 0:
        raise DomainError("forward starts from a level-0 step-line table")
    seed = _resolve_seed(args, table0.beta[0])
    grid = nn_from_shifts(table0, seed, args.depth)
    fam1 = build_family_e1(table0, args.depth, args.depth)
    fam2 = build_family_e2(table0, args.depth, args.depth, seed)
    marg1 = marginal_mu1(fam1, args.depth)
    marg2 = marginal_mu2(fam2, args.depth)
    path = _out_path(args, "nn_grid")
    write_nn_grid(grid, path)
    _emit(path)
    for name, marg in (("marginal_mu1", marg1), ("marginal_mu2", marg2)):
        path = _out_path(args, name)
        write_marginal(marg, path, digits)
        _emit(path)
    print(f"forward: depth {args.depth}, free parameter {fraction_str(seed)}")
    return 0


def cmd_inverse(args) -> int:
    if args.depth < 0:
        raise DomainError("--depth must be >= 0")
    margs = tuple(read_marginal(p) for p in args.marginal)
    r = len(margs)
    if r < 2:
        raise DomainError("inverse needs at least two marginal tables")
    if r == 2:
        grid = nn_from_marginals_r2(margs[0], margs[1], args.depth)
        path = _out_path(args, "nn_grid")
        write_nn_grid(grid, path)
        _emit(path)
        table = stepline_from_nn(grid, args.depth)
        path = _out_path(args, "stepline")
        write_stepline(table, path)
        _emit(path)
    else:
        grid = nn_from_marginals_general(margs, args.depth)
        path = _out_path(args, "nn_grid")
        write_nn_grid(grid, path)
        _emit(path)
        print("note: step-line output is defined for two measures; grid only")
    print(f"inverse: r={r}, depth {args.depth}")
    return 0


def cmd_roundtrip(args) -> int:
    if args.depth < 0:
        raise DomainError("--depth must be >= 0")
    depth = args.depth
    if args.measures is not None:
        measures = read_measures(args.measures)
        if len(measures) != 2:
            raise DomainError("roundtrip works on two-measure systems")
    else:
        size = args.size if args.size is not None else 2 * depth + 2
        measures = random_system(args.seed, r=2, size=size)
    wide = 2 * depth + 1  # marginal depth needed so the step-line reaches 2*depth+1
    mt = MomentTable.from_measures(measures, 2 * wide + 1)
    marg1 = marginal_oracle(mt.rows[0], wide)
    marg2 = marginal_oracle(mt.rows[1], wide)

    grid = nn_from_marginals_r2(marg1, marg2, wide)
    table0 = stepline_from_nn(grid, wide)
    seed = seed_c00(measures[1].moment(0), measures[1].moment(1), table0.beta[0])
    grid_back = nn_from_shifts(table0, seed, depth)
    back1 = marginal_mu1(build_family_e1(table0, depth, depth), depth)
    back2 = marginal_mu2(build_family_e2(table0, depth, depth, seed), depth)

    diffs = []
    for n in range(depth + 1):
        diffs.append(abs(back1.b[n] - marg1.b[n]))
        diffs.append(abs(back2.b[n] - marg2.b[n]))
        diffs.append(abs(back1.a_sq[n] - marg1.a_sq[n]))
        diffs.append(abs(back2.a_sq[n] - marg2.a_sq[n]))
    for n, m in grid_back.indices():
        fwd_entry = grid_back.entry(n, m)
        inv_entry = grid.entry(n, m)
        diffs.extend(abs(x - y) for x, y in zip(fwd_entry, inv_entry))
    worst = max(diffs)
    print(f"roundtrip: depth {depth}, {len(diffs)} compared values")
    print(f"max discrepancy: {fraction_str(worst)}")
    if args.out_dir is not None:
        path = _out_path(args, "stepline")
        write_stepline(table0, path)
        _emit(path)
        path = _out_path(args, "nn_grid")
        write_nn_grid(grid_back, path)
        _emit(path)
        for name, marg in (("marginal_mu1", back1), ("marginal_mu2", back2)):
            path = _out_path(args, name)
            write_marginal(marg, path, _default_digits())
            _emit(path)
    return 0 if worst == 0 else EXIT_FAIL


def cmd_bessel(args) -> int:
    digits = args.digits if args.digits is not None else min(_default_digits(), 20)
    if digits < 1:
        raise DomainError("--digits must be >= 1")
    if args.rows < 0:
        raise DomainError("--rows must be >= 0")
    depth = args.rows
    table0 = bessel_stepline(args.alpha, args.nu, 2 * depth + 2)
    family = build_family_e1(table0, depth, depth)
    marg = marginal_mu1(family, depth)
    width = digits + 8
    print(f"{'n':>3}  {'a_n':>{width}}  {'b_n':>{width}}")
    for n in range(depth + 1):
        a_text = "--" if n == 0 else to_decimal(sqrt_real(marg.a_sq[n], digits), digits)
        b_text = to_decimal(marg.b[n], digits)
        print(f"{n:>3}  {a_text:>{width}}  {b_text:>{width}}")
    return 0


def _verify_one(label: str, measures, depth: int) -> tuple[bool, str]:
    """Cross-check one system; returns (passed, report line)."""
    r = len(measures)
    # moments to 4*depth + 3: the moment-side step-line table reaches index
    # 2*depth + 1, whose peeling touches polynomials of degree 2*depth + 2
    mt = MomentTable.from_measures(measures, 4 * depth + 3)
    try:
        margs = tuple(marginal_oracle(mt.rows[i], depth) for i in range(r))
        if r == 2:
            grid = nn_from_marginals_r2(margs[0], margs[1], depth)
            entries = {
                (nvec, i): val
                for nvec in [(n, m) for n, m in grid.indices()]
                for i, val in ((0, (grid.a(*nvec), grid.c(*nvec))),
                               (1, (grid.b(*nvec), grid.d(*nvec))))
            }
            residual_ok = all(v == 0 for _, _, v in pd_residuals_r2(grid))
        else:
            gridr = nn_from_marginals_general(margs, depth, check_choices=True)
            entries = {
                (nvec, i): (gridr.a(nvec, i), gridr.b(nvec, i))
                for nvec in gridr.multi_indices()
                for i in range(r)
            }
            residual_ok = all(v == 0 for _, _, v in pd_residuals_general(gridr))
    except SINGULAR_ERRORS as exc:
        return True, f"{label}: SINGULAR ({exc}); skipped"
    checked = 0
    for (nvec, i), (a_val, b_val) in sorted(entries.items()):
        avec, bvec = nn_oracle(mt, nvec)
        if avec[i] != a_val or bvec[i] != b_val:
            return False, f"{label}: MISMATCH against moments at index {nvec}, direction {i + 1}"
        checked += 1
    if not residual_ok:
        return False, f"{label}: nonzero difference-relation residual"
    if r == 2:
        # forward route from the moment-side step-line table must agree too
        table0 = stepline_oracle(mt, None, 0, 2 * depth + 1)
        seed = seed_c00(measures[1].moment(0), measures[1].moment(1), table0.beta[0])
        try:
            grid_fwd = nn_from_shifts(table0, seed, depth)
        except SINGULAR_ERRORS as exc:
            return True, f"{label}: SINGULAR in forward route ({exc}); skipped"
        for n, m in grid_fwd.indices():
            if grid_fwd.entry(n, m) != (
                entries[(n, m), 0][0],
                entries[(n, m), 1][0],
                entries[(n, m), 0][1],
                entries[(n, m), 1][1],
            ):
                return False, f"{label}: forward and inverse grids differ at ({n}, {m})"
    return True, f"{label}: PASS ({checked} grid values)"


def cmd_verify(args) -> int:
    if args.depth < 0:
        raise DomainError("--depth must be >= 0")
    systems = []
    if args.measures is not None:
        systems.append((f"measures {args.measures}", read_measures(args.measures)))
    else:
        if args.seeds is not None:
            try:
                seeds = [int(s) for s in args.seeds.split(",") if s.strip()]
            except ValueError:
                raise DomainError("--seeds must be comma-separated integers") from None
        else:
            seeds = list(range(args.start_seed, args.start_seed + args.count))
        if args.r < 2:
            raise DomainError("--r must be >= 2")
        size = args.size if args.size is not None else args.depth + 2
        for seed in seeds:
            systems.append((f"seed {seed}", random_system(seed, r=args.r, size=size)))
    all_ok = True
    for label, measures in systems:
        ok, line = _verify_one(label, measures, args.depth)
        print(line)
        all_ok = all_ok and ok
    print("verify: PASS" if all_ok else "verify: FAIL")
    return 0 if all_ok else EXIT_FAIL


# --------------------------------------------------------------- dispatcher


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {
        "forward": cmd_forward,
        "inverse": cmd_inverse,
        "roundtrip": cmd_roundtrip,
        "bessel": cmd_bessel,
        "verify": cmd_verify,
    }[args.command]
    try:
        return handler(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except SINGULAR_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    except RangeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RANGE
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except MoprecError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_FAIL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
