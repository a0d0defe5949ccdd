"""Command-line interface.

Subcommands: ``classify``, ``region-map``, ``dual``, ``verify``,
``check-window``, plus a ``gram-dump`` debug command.  Shift parameters
accept exact rationals as ``p/q`` strings (decimal text is also parsed
exactly), so half-open band boundaries like ``b = 35/36`` are decided
without truncation error.

Exit status: 0 on success/pass, 1 when a verification or membership check
fails, 2 on usage errors (bad flags, malformed numbers, parameters outside
the domain of the requested computation).

Identical configurations produce byte-identical CSV outputs.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import dual as dual_mod
from . import verify as verify_mod
from .errors import GaborSplineError
from .gram import build_gram, gram_to_csv
from .regions import (
    LatticeParams,
    classify,
    region_map,
    region_map_to_csv,
    region_map_to_svg,
    tm_bounds,
)
from .windows import Window, load_window_csv, make_bspline

DEFAULT_SAMPLES = 512
DEFAULT_VERIFY_GRID = 4096
DEFAULT_VERIFY_TOL = 1e-10
DEFAULT_CROSSCHECK_TOL = 1e-12


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError("not a number: %r" % text) from None


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("not an integer: %r" % text) from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1: %r" % text)
    return v


def _add_window_args(sub, csv_allowed: bool = True) -> None:
    grp = sub.add_mutually_exclusive_group(required=True)
    grp.add_argument("--bspline", type=_positive_int, metavar="N",
                     help="use the B-spline window of order N")
    if csv_allowed:
        grp.add_argument("--window-csv", metavar="PATH",
                         help="tabulated window: two-column CSV (x,value) with "
                              "header, x in [-N/2, 0]; needs --support-length")
        sub.add_argument("--support-length", type=_rational, metavar="N",
                         help="support length N of the CSV window")


def _resolve_window(args) -> Window:
    if args.bspline is not None:
        return make_bspline(args.bspline)
    if args.support_length is None:
        raise GaborSplineError("--window-csv requires --support-length")
    return load_window_csv(args.window_csv, args.support_length)


def _params(args, N) -> LatticeParams:
    return LatticeParams(N=N, a=args.a, b=args.b)


def _window_params(args):
    w = _resolve_window(args)
    N = Fraction(args.bspline) if args.bspline is not None else args.support_length
    return w, _params(args, N)


def _cmd_classify(args) -> int:
    N = Fraction(args.bspline) if args.bspline is not None else args.support_length
    if N is None:
        raise GaborSplineError("classify needs --bspline or --support-length")
    p = _params(args, N)
    label = classify(p)
    print(label)
    if label.kind == "t":
        itv = tm_bounds(p.N, p.a, label.m)
        closer = "]" if itv.hi_inclusive else ")"
        print("m = %d" % label.m)
        print("b_interval = (%r, %r%s" % (float(itv.b_lo), float(itv.b_hi), closer))
    return 0


def _cmd_region_map(args) -> int:
    rm = region_map(args.support_length, args.a_max, args.b_max, args.res)
    region_map_to_csv(rm, args.output)
    print("wrote %s" % args.output)
    if args.svg:
        region_map_to_svg(rm, args.svg)
        print("wrote %s" % args.svg)
    return 0


def _cmd_dual(args) -> int:
    w, p = _window_params(args)
    label = classify(p)
    if label.kind != "t":
        raise GaborSplineError(
            "no dual construction outside the T bands; classify gave %s" % label
        )
    d = dual_mod.build_dual(w, p, label.m, samples_per_cell=args.samples)
    dual_mod.dual_to_csv(d, args.output)
    print("wrote %s" % args.output)
    print("m = %d" % d.m)
    print("support = [%r, %r]" % (-d.support_halfwidth, d.support_halfwidth))
    print("first_jump_at = %r" % (float(p.a) / 2.0))
    return 0


def _cmd_verify(args) -> int:
    w, p = _window_params(args)
    label = classify(p)
    if label.kind != "t":
        raise GaborSplineError("verification runs inside the T bands; classify gave %s" % label)
    m = label.m
    d = dual_mod.build_dual(w, p, m, samples_per_cell=args.samples)
    report = verify_mod.duality_residual(
        w, d, p, m,
        grid_size=args.grid,
        tol=args.tol,
        mode="resolve",
        keep_per_x=args.residual_csv is not None,
    )
    cross = verify_mod.oracle_crosscheck(w, p, m, grid_size=args.grid, rel_tol=args.crosscheck_tol)
    min_det = verify_mod.positivity_sweep(w, p, m, grid_size=args.grid)
    text = report.to_text() + cross.to_text() + (
        "kind = positivity\nmin_det = %r\npass = true\n" % min_det
    )
    print(text, end="")
    if args.report:
        with open(args.report, "w", newline="\n") as fh:
            fh.write(text)
    if args.residual_csv:
        import numpy as np

        xs = (np.arange(args.grid) + 0.5) * (float(p.a) / args.grid) - float(p.a) / 2.0
        ells = sorted(report.per_ell_max_residual)
        lines = ["x," + ",".join("res_ell_%d" % e for e in ells)]
        for i in range(args.grid):
            row = report.per_x_residual[i]
            lines.append(",".join([repr(float(xs[i]))] + [repr(float(v)) for v in row]))
        with open(args.residual_csv, "w", newline="\n") as fh:
            fh.write("\n".join(lines))
            fh.write("\n")
    return 0 if (report.passed and cross.passed) else 1


def _cmd_check_window(args) -> int:
    from .windows import check_membership_VNa

    w = _resolve_window(args)
    rep = check_membership_VNa(w, args.a, grid_points=args.grid, tol=args.tol)
    print("a1_pass = %s" % ("true" if rep.a1_pass else "false"))
    print("a2_pass = %s" % ("true" if rep.a2_pass else "false"))
    print("a3_pass = %s" % ("true" if rep.a3_pass else "false"))
    print("pass = %s" % ("true" if rep.passed else "false"))
    print("worst_violation = %r" % rep.worst_violation)
    print("witness_count = %d" % len(rep.witness_points))
    for x in rep.witness_points[:8]:
        print("witness = %r" % x)
    return 0 if rep.passed else 1


def _cmd_gram_dump(args) -> int:
    w, p = _window_params(args)
    G = build_gram(w, p, args.m, args.x)
    gram_to_csv(G, args.output)
    print("wrote %s" % args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="gaborspline",
        description="Lattice classification, dual windows, and duality "
                    "certification for compactly supported spline-type windows.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("classify", help="classify lattice parameters (a, b)")
    _add_window_args(sp)
    sp.add_argument("-a", type=_rational, required=True, help="time shift (accepts p/q)")
    sp.add_argument("-b", type=_rational, required=True, help="frequency shift (accepts p/q)")
    sp.set_defaults(func=_cmd_classify)

    sp = sub.add_parser("region-map", help="classify a grid over (0,a_max] x (0,b_max]")
    sp.add_argument("-N", "--support-length", type=_rational, required=True,
                    help="window support length N")
    sp.add_argument("--a-max", type=_rational, default=Fraction(2))
    sp.add_argument("--b-max", type=_rational, default=Fraction(2))
    sp.add_argument("--res", type=_positive_int, default=200)
    sp.add_argument("-o", "--output", required=True, help="CSV output path")
    sp.add_argument("--svg", help="optional SVG heat map path")
    sp.set_defaults(func=_cmd_region_map)

    sp = sub.add_parser("dual", help="build the compactly supported dual window")
    _add_window_args(sp)
    sp.add_argument("-a", type=_rational, required=True)
    sp.add_argument("-b", type=_rational, required=True)
    sp.add_argument("--samples", type=_positive_int, default=DEFAULT_SAMPLES,
                    help="samples per half-shift cell (default %d)" % DEFAULT_SAMPLES)
    sp.add_argument("-o", "--output", required=True, help="CSV output path")
    sp.set_defaults(func=_cmd_dual)

    sp = sub.add_parser("verify", help="duality residual + determinant certification")
    _add_window_args(sp)
    sp.add_argument("-a", type=_rational, required=True)
    sp.add_argument("-b", type=_rational, required=True)
    sp.add_argument("--samples", type=_positive_int, default=DEFAULT_SAMPLES)
    sp.add_argument("--grid", type=_positive_int, default=DEFAULT_VERIFY_GRID)
    sp.add_argument("--tol", type=float, default=DEFAULT_VERIFY_TOL)
    sp.add_argument("--crosscheck-tol", type=float, default=DEFAULT_CROSSCHECK_TOL)
    sp.add_argument("--report", help="write the text report to this path")
    sp.add_argument("--residual-csv", help="write per-x residuals to this CSV path")
    sp.set_defaults(func=_cmd_verify)

    sp = sub.add_parser("check-window", help="sampled class-membership checks")
    _add_window_args(sp)
    sp.add_argument("-a", type=_rational, required=True)
    sp.add_argument("--grid", type=_positive_int, default=4096)
    sp.add_argument("--tol", type=float, default=1e-12)
    sp.set_defaults(func=_cmd_check_window)

    sp = sub.add_parser("gram-dump", help="debug dump of the sample matrix as CSV")
    _add_window_args(sp)
    sp.add_argument("-a", type=_rational, required=True)
    sp.add_argument("-b", type=_rational, required=True)
    sp.add_argument("-m", type=_positive_int, required=True)
    sp.add_argument("-x", type=float, required=True)
    sp.add_argument("-o", "--output", required=True)
    sp.set_defaults(func=_cmd_gram_dump)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:  # argparse uses 2 for usage errors already
        return int(exc.code or 0)
    try:
        return args.func(args)
    except GaborSplineError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
