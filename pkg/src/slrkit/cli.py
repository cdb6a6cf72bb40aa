"""Command-line interface: ``slrkit <subcommand> ...``.

Exit status is 0 on success, 1 when a verification or case check fails and
2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path

from . import svg
from .cases import LABEL_NOTE, verify_all_cases
from .certificates import best_chain, certificate_from_json, verify_certificate
from .curves import CATALOG_NAMES, SelfSimilarCurveSpec, catalog, load_spec, point, vertices
from .errors import DomainError, NoWitnessError, SpecError, UnderSampledError
from .geometry import antipode_pair_find, circle_containment_check, square_boundary
from .lattice import DEFAULT_BUDGET, optimal_ordering
from .rational import approx, fmt, to_rational
from .slr import slr_bounds

log = logging.getLogger("slrkit")

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _rational_arg(text: str) -> Fraction:
    try:
        return to_rational(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive_int(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def resolve_curve(source: str) -> SelfSimilarCurveSpec:
    if source in CATALOG_NAMES:
        return catalog(source)
    path = Path(source)
    if not path.is_file():
        raise InputError(f"no such curve spec file: {path} (catalog curves: {', '.join(CATALOG_NAMES)})")
    return load_spec(path)


def threads(args) -> int:
    if getattr(args, "threads", None):
        return args.threads
    env = os.environ.get("SLR_THREADS")
    return int(env) if env and env.isdigit() and int(env) > 0 else 1


def default_depth(spec: SelfSimilarCurveSpec, max_vertices: int = 4096) -> int:
    d = 1
    while spec.n_cells ** (d + 1) <= max_vertices:
        d += 1
    return d


def emit(report: dict, args) -> None:
    if not args.no_timestamp:
        report = {**report, "generated_at": datetime.now(timezone.utc).isoformat(timespec="seconds")}
    text = json.dumps(report, indent=2, ensure_ascii=False)
    if args.json:
        Path(args.json).write_text(text + "\n")
    else:
        print(text)


def cmd_bounds(args) -> int:
    spec = resolve_curve(args.curve)
    depth = args.max_depth or default_depth(spec)
    res = slr_bounds(spec, args.gap, max_depth=depth, budget=args.budget)
    report = res.to_json()
    emit(report, args)
    if args.plot:
        pts = vertices(spec, args.plot_depth or min(depth, 6)).points
        w = res.witness
        svg.write(svg.curve_svg(pts, [w.p1, w.p2], title=f"{spec.name} witness"), args.plot)
    print(f"{spec.name}: {approx(res.lower.value)} <= kappa <= {approx(res.upper.value)} "
          f"(converged={res.converged})", file=sys.stderr)
    return EXIT_OK


def cmd_certify(args) -> int:
    spec = resolve_curve(args.curve)
    if args.verify:
        path = Path(args.verify)
        if not path.is_file():
            raise InputError(f"no such certificate file: {path}")
        try:
            cert = certificate_from_json(json.loads(path.read_text()))
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: {exc}") from exc
        result = verify_certificate(cert, spec, args.depth)
        emit({"curve": spec.name, "depth": args.depth, **result.to_json()}, args)
        for line in result.failures:
            print(f"FAIL {line}", file=sys.stderr)
        return EXIT_OK if result.ok else EXIT_FAIL
    curve = vertices(spec, args.depth)
    cert = best_chain(curve, args.max_nodes, mode=args.mode)
    report = {"curve": spec.name, "depth": args.depth, "max_nodes": args.max_nodes,
              **cert.to_json(), "approx": approx(cert.value)}
    emit(report, args)
    if args.plot:
        markers = [n.p for n in cert.chain.nodes]
        svg.write(svg.curve_svg(curve.points, markers, title=f"{spec.name} certificate"), args.plot)
    return EXIT_OK


def cmd_cases(args) -> int:
    try:
        results = verify_all_cases(args.only)
    except LookupError as exc:
        raise InputError(str(exc)) from exc
    ok = all(r.passed for r in results)
    if args.json:
        payload = {"note": LABEL_NOTE, "all_pass": ok, "cases": [r.to_json() for r in results]}
        if not args.no_timestamp:
            payload["generated_at"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
        Path(args.json).write_text(json.dumps(payload, indent=2, ensure_ascii=False) + "\n")
    header = f"{'case':<8}{'chain':<10}{'argmin':<16}{'min':>8}{'expected':>11}  result"
    print(header)
    for r in results:
        c = r.case
        arg = f"({r.argmin[0]}, {r.argmin[1]})"
        expected = ("≥" if c.lower_bound_only else "") + str(c.expected_min)
        print(f"{c.name:<8}{c.letters:<10}{arg:<16}{str(r.minimum):>8}{expected:>11}  "
              f"{'pass' if r.passed else 'FAIL'}")
        for f in r.failures:
            print(f"    {f}")
    print(f"note: {LABEL_NOTE}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_lattice(args) -> int:
    if args.rows * args.cols < 2:
        raise InputError("the lattice needs at least two points")
    res = optimal_ordering(args.rows, args.cols, budget=args.budget, moves=args.moves,
                           workers=threads(args))
    emit(res.to_json(), args)
    if args.plot:
        i, j = res.best.witness
        order = res.ordering.order
        svg.write(svg.lattice_svg(args.rows, args.cols, order, [order[i], order[j]]), args.plot)
    return EXIT_OK


def cmd_antipode(args) -> int:
    spec = resolve_curve(args.curve)
    curve = vertices(spec, args.depth)
    try:
        w = antipode_pair_find(curve, square_boundary(args.steps), point(Fraction(1, 2), Fraction(1, 2)),
                               args.tol)
    except (UnderSampledError, NoWitnessError) as exc:
        emit({"curve": spec.name, "depth": args.depth, "witness": None, "error": str(exc)}, args)
        return EXIT_FAIL
    emit({"curve": spec.name, "depth": args.depth, "witness": w.to_json()}, args)
    return EXIT_OK


def cmd_circle(args) -> int:
    spec = resolve_curve(args.curve)
    curve = vertices(spec, args.depth)
    report = circle_containment_check(curve, args.a, args.b)
    emit({"curve": spec.name, "depth": args.depth, "a": args.a, "b": args.b, **report.to_json()}, args)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", "-o", metavar="PATH", help="write the JSON report here (default stdout)")
    common.add_argument("--no-timestamp", action="store_true", help="omit generated_at from reports")
    common.add_argument("--threads", type=_positive_int, help="worker cap (overrides SLR_THREADS)")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="slrkit", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bounds", parents=[common], help="bracket the ratio of a curve")
    b.add_argument("--curve", required=True, help="catalog name or spec JSON path")
    b.add_argument("--gap", type=_rational_arg, default=Fraction(1, 10))
    b.add_argument("--max-depth", type=_positive_int)
    b.add_argument("--budget", type=_positive_int, default=200_000)
    b.add_argument("--plot", metavar="SVG")
    b.add_argument("--plot-depth", type=_positive_int)
    b.set_defaults(func=cmd_bounds)

    c = sub.add_parser("certify", parents=[common], help="search or verify a chain certificate")
    c.add_argument("--curve", required=True)
    c.add_argument("--depth", type=_positive_int, default=4)
    c.add_argument("--max-nodes", type=_positive_int, default=8)
    c.add_argument("--mode", choices=("auto", "full", "pairs"), default="auto")
    c.add_argument("--verify", metavar="CERT", help="re-check a certificate JSON file")
    c.add_argument("--plot", metavar="SVG")
    c.set_defaults(func=cmd_certify)

    k = sub.add_parser("cases", parents=[common], help="verify the built-in chain cases")
    k.add_argument("--only", action="append", metavar="NAME")
    k.set_defaults(func=cmd_cases)

    lt = sub.add_parser("lattice", parents=[common], help="optimal lattice ordering")
    lt.add_argument("--rows", type=_positive_int, required=True)
    lt.add_argument("--cols", type=_positive_int, required=True)
    lt.add_argument("--budget", type=_positive_int, default=DEFAULT_BUDGET)
    lt.add_argument("--moves", choices=("king", "rook"))
    lt.add_argument("--plot", metavar="SVG")
    lt.set_defaults(func=cmd_lattice)

    a = sub.add_parser("antipode", parents=[common], help="antipodal visit witness on a sampled curve")
    a.add_argument("--curve", required=True)
    a.add_argument("--depth", type=_positive_int, default=4)
    a.add_argument("--steps", type=_positive_int, default=16, help="boundary points per side")
    a.add_argument("--tol", type=_rational_arg, default=Fraction(1, 16))
    a.set_defaults(func=cmd_antipode)

    ci = sub.add_parser("circle", parents=[common], help="diameter-disk containment check")
    ci.add_argument("--curve", required=True)
    ci.add_argument("--depth", type=_positive_int, default=3)
    ci.add_argument("--a", type=int, required=True, help="first sample index")
    ci.add_argument("--b", type=int, required=True, help="second sample index")
    ci.set_defaults(func=cmd_circle)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except SpecError as exc:
        print(f"error: invalid curve spec ({exc.invariant}): {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InputError, DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
