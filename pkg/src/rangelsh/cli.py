"""Command-line front end.

Every sampler subcommand accepts ``--oracle``, which swaps the fast
range-efficient path for an exhaustive scan while keeping the output format,
so the two can be diffed byte for byte.

Exit status: 0 on success, 1 on invalid input, 2 when inputs are valid but
violate a precondition of the requested operation.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path
from typing import Sequence

from . import area_summary as summ
from .errors import DomainError, PreconditionError
from .field_hash import U64_MASK, LinearHash1D, LinearHash2D, check_prime, derive_seed, next_prime
from .interval_sampler import bottom_k, threshold_sample
from .minwise_lsh import (Histogram, LshFunction, histogram_hash, histogram_hash_scan,
                          polygon_hash, polygon_hash_scan, weighted_jaccard)
from .polygon_geom import (GridPolygon, GridSpec, as_fraction, fuzzy_radius_sq,
                           intersection_count, union_count)
from .rect_sampler import GridRect, zero_set, zero_set_scan


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value <= U64_MASK:
        raise argparse.ArgumentTypeError(f"seed must be a 64-bit unsigned integer, got {text}")
    return value


def _unit(text: str) -> float:
    value = float(text)
    if not 0 < value < 1:
        raise argparse.ArgumentTypeError(f"expected a value in (0, 1), got {text}")
    return value


def _phi(text: str):
    value = as_fraction(text)
    if not 0 < value <= 1:
        raise argparse.ArgumentTypeError(f"phi must lie in (0, 1], got {text}")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _ids(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"ids must be comma-separated integers, got {text!r}") from None


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc.strerror}") from None


def _load_polygon(path: str) -> GridPolygon:
    try:
        return GridPolygon.from_json(_read_text(path))
    except DomainError as exc:
        raise DomainError(f"{path}: {exc}") from None


def _load_histogram(path: str) -> Histogram:
    try:
        return Histogram.from_json(_read_text(path))
    except DomainError as exc:
        raise DomainError(f"{path}: {exc}") from None


# Samplers


def _interval_hash(args) -> LinearHash1D:
    if args.hash:
        h = LinearHash1D.parse(args.hash)
        if h.p != args.p:
            raise DomainError(f"--hash prime {h.p} differs from --p {args.p}")
        return h
    return LinearHash1D.from_seed(args.seed, check_prime(args.p))


def cmd_sample_interval(args, out) -> None:
    h = _interval_hash(args)
    if args.oracle:
        if not 0 <= args.lo <= args.hi < h.p:
            raise DomainError(f"interval [{args.lo}, {args.hi}] is not inside [0, {h.p})")
        ranked = sorted((h(x), x) for x in range(args.lo, args.hi + 1))
        if args.k is not None:
            if args.k < 0:
                raise DomainError(f"k must be non-negative, got {args.k}")
            entries = [(x, r) for r, x in ranked[:args.k]]
        else:
            if not 0 <= args.tau <= h.p:
                raise DomainError(f"tau must lie in [0, {h.p}], got {args.tau}")
            entries = [(x, r) for r, x in ranked if r < args.tau]
    elif args.k is not None:
        entries = bottom_k(h, args.lo, args.hi, args.k).entries
    else:
        entries = threshold_sample(h, args.lo, args.hi, args.tau).entries
    for x, r in entries:
        out.write(f"{x},{r}\n")


def cmd_sample_rect(args, out) -> None:
    if args.hash:
        h = LinearHash2D.parse(args.hash)
        if h.p != args.p:
            raise DomainError(f"--hash prime {h.p} differs from --p {args.p}")
    else:
        h = LinearHash2D.from_seed(args.seed, check_prime(args.p))
    rect = GridRect.parse(args.rect)
    if rect.i2 >= h.p or rect.j2 >= h.p:
        raise DomainError(f"rectangle {args.rect} is not inside [0, {h.p})^2")
    sample = zero_set_scan(h, rect) if args.oracle else zero_set(h, rect)
    for x, y in sample.points:
        out.write(f"{x},{y}\n")


def cmd_hash_histogram(args, out) -> None:
    x = _load_histogram(args.input)
    F = LshFunction.from_seed(args.seed, args.eps, args.prime, expected_weight=args.weight)
    value = histogram_hash_scan(x, F) if args.oracle else histogram_hash(x, F)
    out.write(f"hash={value}\n")


def cmd_hash_polygon(args, out) -> None:
    P = _load_polygon(args.input)
    prime = args.prime if args.prime is not None else next_prime(args.grid)
    F = LshFunction.from_seed(args.seed, args.eps, prime, alpha=args.alpha)
    hasher = polygon_hash_scan if args.oracle else polygon_hash
    out.write(f"hash={hasher(P, F, GridSpec(args.grid), args.phi)}\n")


# Summaries


def cmd_build_summary(args, out) -> None:
    polygons = [_load_polygon(p) for p in args.polygons]
    grid = GridSpec(args.grid) if args.grid else None
    S = summ.build_summary(polygons, args.phi, args.eps, args.delta, args.seed, grid,
                           oracle=args.oracle)
    try:
        with open(args.out, "wb") as fh:
            summ.save_summary(S, fh)
    except OSError as exc:
        raise DomainError(f"cannot write {args.out}: {exc.strerror}") from None
    levels = f"{S.level_min}..{S.level_max}" if S.polygons else "none"
    out.write(f"polygons={len(S.polygons)} levels={levels} samples={S.size}\n")


def _open_summary(path: str) -> summ.AreaSummary:
    try:
        with open(path, "rb") as fh:
            return summ.load_summary(fh)
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc.strerror}") from None


def cmd_query(args, out) -> None:
    S = _open_summary(args.summary)
    query = summ.query_union if args.command == "query-union" else summ.query_intersection
    out.write(f"{query(S, args.ids)}\n")


# Experiments


def _band(center: float, slack: float, sigma: float) -> tuple[float, float]:
    return max(0.0, center - slack - 3 * sigma), min(1.0, center + slack + 3 * sigma)


def _collision_pair(args):
    if args.histograms:
        x, y = (_load_histogram(p) for p in args.histograms)
        if x.total != y.total:
            raise DomainError(f"histogram weights differ ({x.total} vs {y.total})")

        def trial(seed):
            F = LshFunction.from_seed(seed, args.eps, args.prime or 1, expected_weight=x.total)
            return histogram_hash(x, F) == histogram_hash(y, F)
        return weighted_jaccard(x, y), trial
    if args.polygons:
        if args.grid is None:
            raise DomainError("--polygons needs --grid")
        if len(args.polygons) != 2:
            raise DomainError("experiment collision compares exactly two polygons")
        A, B = (_load_polygon(p) for p in args.polygons)
        grid = GridSpec(args.grid)
        radii = [fuzzy_radius_sq(A, args.phi), fuzzy_radius_sq(B, args.phi)]
        inter = intersection_count([A, B], radii, grid)
        union = union_count([A, B], radii, grid)
        prime = args.prime if args.prime is not None else next_prime(args.grid)

        def trial(seed):
            F = LshFunction.from_seed(seed, args.eps, prime, alpha=args.alpha)
            return polygon_hash(A, F, grid, args.phi) == polygon_hash(B, F, grid, args.phi)
        return inter / union, trial
    raise DomainError("experiment collision needs --histograms or --polygons")


def cmd_experiment(args, out) -> None:
    if args.kind == "collision":
        jac, trial = _collision_pair(args)
        hits = 0
        out.write("trial,value\n")
        for t in range(args.trials):
            v = int(trial(derive_seed(args.seed, t)))
            hits += v
            out.write(f"{t},{v}\n")
        rate = hits / args.trials
        sigma = math.sqrt(jac * (1 - jac) / args.trials)
        lo, hi = _band(jac, args.eps, sigma)
        verdict = "PASS" if lo <= rate <= hi else "FAIL"
        out.write(f"# rate={rate:.6f} J={jac:.6f} band=[{lo:.6f},{hi:.6f}] verdict={verdict}\n")
        return

    polygons = [_load_polygon(p) for p in args.polygons]
    grid = GridSpec(args.grid) if args.grid else None
    ids = args.ids if args.ids else list(range(len(polygons)))
    radii = [fuzzy_radius_sq(P, args.phi) for P in polygons]
    chosen = ([polygons[i] for i in ids], [radii[i] for i in ids])
    counter = intersection_count if args.op == "intersection" else union_count
    truth = counter(*chosen, grid)
    query = summ.query_intersection if args.op == "intersection" else summ.query_union
    failures = 0
    out.write("trial,value\n")
    for t in range(args.trials):
        S = summ.build_summary(polygons, args.phi, args.eps, args.delta,
                               derive_seed(args.seed, t), grid)
        est = query(S, ids).estimate
        failures += abs(est - truth) > args.eps * truth
        out.write(f"{t},{est}\n")
    rate = failures / args.trials
    sigma = math.sqrt(args.delta * (1 - args.delta) / args.trials)
    hi = args.delta + 3 * sigma
    verdict = "PASS" if rate <= hi else "FAIL"
    out.write(f"# failure_rate={rate:.6f} truth={truth} band=[0,{hi:.6f}] verdict={verdict}\n")


# Parser


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rangelsh", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def seed(p):
        p.add_argument("--seed", type=_u64, required=True, help="64-bit seed for all hash parameters")

    def oracle(p):
        p.add_argument("--oracle", action="store_true", help="use the exhaustive reference implementation")

    p = sub.add_parser("sample-interval", help="bottom-k or threshold sample of an integer interval")
    seed(p)
    p.add_argument("--p", type=int, required=True, help="field prime")
    p.add_argument("--lo", type=int, required=True, help="first element of the interval")
    p.add_argument("--hi", type=int, required=True, help="last element of the interval")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--k", type=int, help="bottom-k sample size")
    g.add_argument("--tau", type=int, help="exclusive hash threshold")
    p.add_argument("--hash", help="explicit hash 'a,b@p' overriding the seed")
    oracle(p)
    p.set_defaults(func=cmd_sample_interval)

    p = sub.add_parser("sample-rect", help="zero-set sample of a grid rectangle")
    seed(p)
    p.add_argument("--p", type=int, required=True, help="field prime")
    p.add_argument("--rect", required=True, help="rectangle 'i1,i2,j1,j2'")
    p.add_argument("--hash", help="explicit hash 'a,b,c@p' overriding the seed")
    oracle(p)
    p.set_defaults(func=cmd_sample_rect)

    p = sub.add_parser("hash-histogram", help="weighted-Jaccard LSH value of a histogram")
    seed(p)
    p.add_argument("--eps", type=_unit, required=True, help="additive error of the collision rate")
    p.add_argument("--input", required=True, help='histogram JSON {"weights": [...]}')
    p.add_argument("--prime", type=_positive, default=1,
                   help="subsampling prime p* (1 keeps every point; default 1)")
    p.add_argument("--weight", type=int, help="required total weight N")
    oracle(p)
    p.set_defaults(func=cmd_hash_histogram)

    p = sub.add_parser("hash-polygon", help="fuzzy-model LSH value of a lattice polygon")
    seed(p)
    p.add_argument("--eps", type=_unit, required=True, help="additive error of the collision rate")
    p.add_argument("--phi", type=_phi, required=True, help="fuzziness: w = phi * diameter")
    p.add_argument("--grid", type=_positive, required=True, help="grid resolution g (square [0,g-1]^2)")
    p.add_argument("--input", required=True, help='polygon JSON {"vertices": [[x,y], ...]}')
    p.add_argument("--prime", type=_positive, help="sampling prime p* (default: smallest prime >= g)")
    p.add_argument("--alpha", type=_unit, help="minimum set density; enables the grid-size check")
    oracle(p)
    p.set_defaults(func=cmd_hash_polygon)

    p = sub.add_parser("build-summary", help="build a multi-rate polygon summary")
    p.add_argument("--phi", type=_phi, required=True, help="fuzziness: w = phi * diameter")
    p.add_argument("--eps", type=_unit, required=True, help="relative error")
    p.add_argument("--delta", type=_unit, required=True, help="failure probability")
    seed(p)
    p.add_argument("--grid", type=_positive, help="clip regions to the square [0,g-1]^2")
    p.add_argument("--out", required=True, help="output summary file")
    p.add_argument("polygons", nargs="*", help="polygon JSON files; ids follow this order")
    oracle(p)
    p.set_defaults(func=cmd_build_summary)

    for name, text in (("query-union", "estimate the union of dilated polygons"),
                       ("query-intersection", "estimate the intersection of dilated polygons")):
        p = sub.add_parser(name, help=text)
        p.add_argument("--summary", required=True, help="summary file from build-summary")
        p.add_argument("--ids", type=_ids, required=True, help="comma-separated polygon ids")
        p.set_defaults(func=cmd_query)

    p = sub.add_parser("experiment", help="Monte-Carlo checks of the collision and estimator bounds")
    p.add_argument("kind", choices=["collision", "estimator"])
    seed(p)
    p.add_argument("--trials", type=_positive, required=True, help="number of independent trials")
    p.add_argument("--eps", type=_unit, required=True, help="additive (collision) or relative (estimator) error")
    p.add_argument("--delta", type=_unit, default=0.2, help="estimator failure probability")
    p.add_argument("--phi", type=_phi, default=as_fraction("0.2"), help="fuzziness for polygons")
    p.add_argument("--grid", type=_positive, help="grid resolution")
    p.add_argument("--prime", type=_positive, help="sampling prime p*")
    p.add_argument("--alpha", type=_unit, help="minimum set density for the grid-size check")
    p.add_argument("--histograms", nargs=2, metavar="JSON", help="histogram pair (collision)")
    p.add_argument("--polygons", nargs="+", metavar="JSON", help="polygon files")
    p.add_argument("--op", choices=["union", "intersection"], default="union", help="estimator query kind")
    p.add_argument("--ids", type=_ids, help="query ids (default: all polygons)")
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "experiment" and args.kind == "estimator" and not args.polygons:
            raise DomainError("experiment estimator needs --polygons")
        args.func(args, out)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except UsageError as exc:
        err.write(f"error: {exc}\n")
        return 1
    except PreconditionError as exc:
        err.write(f"error: {exc}\n")
        return 2
    except (DomainError, OverflowError) as exc:
        err.write(f"error: {exc}\n")
        return 1
    return 0


run = main


if __name__ == "__main__":
    sys.exit(main())
