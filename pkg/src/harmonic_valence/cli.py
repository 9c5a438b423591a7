"""Command-line interface.

Exit codes: 0 success, 1 verification mismatch or completeness failure,
2 usage / precondition error, 3 structural violation in the ray analysis.
"""

from __future__ import annotations

import argparse
import sys
from contextlib import contextmanager
from pathlib import Path

from . import _output
from .construction import ConstructionParams, build_perturbed, build_standard, perturbation_center
from .figures import im_t_contour_segments, ray_segments
from .planar import (
    CompletenessError,
    DegenerateUnexplainedError,
    MismatchError,
    cross_validate,
    default_region,
    find_zeros,
)
from .rays import StructuralViolation, ray_zero_locations, total_from_rays
from .valence import asymptotic_slope, k_max, predict_count, solve_cos_fixed_point

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_STRUCTURAL = 0, 1, 2, 3
PLANAR_DEFAULT_MAX_N = 24


class UsageError(Exception):
    pass


def _require_n(n: int) -> None:
    if n < 4:
        raise UsageError(f"n must be >= 4: the zero-count formula assumes n >= 4 (got {n})")


def _require_range(lo: int, hi: int) -> None:
    _require_n(lo)
    if hi < lo:
        raise UsageError(f"empty range: --n-from {lo} > --n-to {hi}")


@contextmanager
def _open_out(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def cmd_predict(args) -> int:
    _require_n(args.n)
    rep = predict_count(args.n)
    if args.format == "json":
        _output.write_json(
            sys.stdout,
            "predict",
            {"n": args.n},
            ["n", "count", "kmax", "baseline"],
            [(rep.n, rep.predicted, rep.k_max, rep.baseline)],
        )
    else:
        ties = ",".join(map(str, rep.ties)) or "none"
        print(
            f"n={rep.n} count={rep.predicted} kmax={rep.k_max} "
            f"baseline={rep.baseline} ties={ties}"
        )
    return EXIT_OK


def cmd_table(args) -> int:
    _require_range(args.n_from, args.n_to)
    rows = []
    for n in range(args.n_from, args.n_to + 1):
        rep = predict_count(n)
        rows.append((n, rep.k_max, rep.predicted))
    _output.writer(args.format)(
        sys.stdout,
        "table",
        {"n_from": args.n_from, "n_to": args.n_to},
        ["n", "kmax", "count"],
        rows,
    )
    return EXIT_OK


def cmd_verify(args) -> int:
    _require_range(args.n_from, args.n_to)
    if args.planar and args.n_to > PLANAR_DEFAULT_MAX_N and not args.force:
        raise UsageError(
            f"--planar is limited to n <= {PLANAR_DEFAULT_MAX_N} by default; pass --force"
        )
    columns = ["n", "predicted", "ray_total", "agree"] + (["planar_total"] if args.planar else [])
    rows = []
    all_agree = True
    for n in range(args.n_from, args.n_to + 1):
        predicted = predict_count(n).predicted
        try:
            ray_total = total_from_rays(n)
        except StructuralViolation as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_STRUCTURAL
        agree = ray_total == predicted
        row = [n, predicted, ray_total, agree]
        if args.planar:
            try:
                planar_total = cross_validate(n).verified
            except (CompletenessError, MismatchError, DegenerateUnexplainedError) as exc:
                print(f"n={n}: planar check failed: {exc}", file=sys.stderr)
                planar_total = None
            agree = agree and planar_total == predicted
            row[3] = agree
            row.append(planar_total)
        all_agree &= agree
        rows.append(row)
    _output.writer(args.format)(
        sys.stdout,
        "verify",
        {"n_from": args.n_from, "n_to": args.n_to, "planar": args.planar},
        columns,
        rows,
    )
    return EXIT_OK if all_agree else EXIT_MISMATCH


def cmd_zeros(args) -> int:
    _require_n(args.n)
    if args.perturb_arg == 0:
        zeros = ray_zero_locations(args.n)
    else:
        f = build_perturbed(ConstructionParams(args.n, perturbation_center(args.perturb_arg)))
        try:
            zeros = find_zeros(f, default_region(args.n))
        except (CompletenessError, DegenerateUnexplainedError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_MISMATCH
    zeros = sorted(zeros, key=lambda q: (q.location.real, q.location.imag))
    rows = [
        (float(q.location.real), float(q.location.imag), q.index, q.multiplicity, q.residual)
        for q in zeros
    ]
    with _open_out(args.out) as fh:
        _output.writer(args.format)(
            fh,
            "zeros",
            {"n": args.n, "perturb_arg": float(args.perturb_arg)},
            ["re", "im", "index", "multiplicity", "residual"],
            rows,
        )
    return EXIT_OK


def cmd_plot_data(args) -> int:
    _require_n(args.n)
    if args.resolution < 16:
        raise UsageError(f"--resolution must be >= 16 (got {args.resolution})")
    window = float(args.n + 1) if args.window is None else args.window
    if args.perturb_arg == 0:
        f = build_standard(args.n)
    else:
        f = build_perturbed(ConstructionParams(args.n, perturbation_center(args.perturb_arg)))
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    params = {
        "n": args.n,
        "perturb_arg": float(args.perturb_arg),
        "window": window,
        "resolution": args.resolution,
    }
    ext = "json" if args.format == "json" else "csv"
    write = _output.writer(args.format)
    rays = [(int(r[0]), *map(float, r[1:])) for r in ray_segments(args.n, window)]
    with open(out_dir / f"rays.{ext}", "w", encoding="utf-8", newline="") as fh:
        write(fh, "plot-data", params, ["k", "x1", "y1", "x2", "y2"], rays)
    segs = [tuple(map(float, s)) for s in im_t_contour_segments(f, window, args.resolution)]
    with open(out_dir / f"imT_contour.{ext}", "w", encoding="utf-8", newline="") as fh:
        write(fh, "plot-data", params, ["x1", "y1", "x2", "y2"], segs)
    return EXIT_OK


def cmd_asymptote(args) -> int:
    for n in args.n_list:
        _require_n(n)
    x = solve_cos_fixed_point()
    slope = asymptotic_slope()
    rows = []
    for n in args.n_list:
        km = k_max(n).k_max
        rows.append((n, km, km / n, slope, km - slope * n))
    _output.writer(args.format)(
        sys.stdout,
        "asymptote",
        {"n_list": " ".join(map(str, args.n_list))},
        ["n", "kmax", "kmax_over_n", "slope", "deviation"],
        rows,
        notes=[f"X={x:.14f}", f"slope={slope:.5f}"],
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="harmonic-valence",
        description="Zero counts of the harmonic polynomials p + conj(q) with deg q = deg p - 2.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def fmt_opt(p):
        p.add_argument("--format", choices=["csv", "json"], default="csv")

    p = sub.add_parser("predict", help="closed-form zero count for one n")
    p.add_argument("--n", type=int, required=True)
    fmt_opt(p)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("table", help="closed-form counts for a range of n")
    p.add_argument("--n-from", type=int, default=4)
    p.add_argument("--n-to", type=int, default=35)
    fmt_opt(p)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("verify", help="compare the formula with numerical counts")
    p.add_argument("--n-from", type=int, required=True)
    p.add_argument("--n-to", type=int, required=True)
    p.add_argument("--planar", action="store_true", help="also run the planar Newton oracle")
    p.add_argument("--force", action="store_true", help="allow --planar beyond n=24")
    fmt_opt(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("zeros", help="list every zero")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--perturb-arg", type=float, default=0.0, help="t in a = exp(i t)")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    fmt_opt(p)
    p.set_defaults(func=cmd_zeros)

    p = sub.add_parser("plot-data", help="segment data for the Re S / Im T zero sets")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--perturb-arg", type=float, default=0.0)
    p.add_argument("--window", type=float, default=None, help="half-width (default n+1)")
    p.add_argument("--resolution", type=int, default=800)
    p.add_argument("--out-dir", default=".")
    fmt_opt(p)
    p.set_defaults(func=cmd_plot_data)

    p = sub.add_parser("asymptote", help="kmax(n) against the asymptotic slope")
    p.add_argument("--n-list", type=int, nargs="+", default=[100, 500, 1000, 5000])
    fmt_opt(p)
    p.set_defaults(func=cmd_asymptote)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except StructuralViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STRUCTURAL


if __name__ == "__main__":
    sys.exit(main())
