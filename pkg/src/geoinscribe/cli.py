"""Command line entry point: ``geoinscribe {verify,inscribe,flow,render}``.

Exit status: 0 on success, 1 when a tolerance or hypothesis is violated,
2 on usage errors (bad flags, malformed input files, invalid angle triples).
Angles are radians; ``pi``, ``pi/2`` and ``2*pi/3`` style literals are accepted.
"""

from __future__ import annotations

import argparse
import re
import sys
import warnings

import numpy as np

from . import __version__, charts
from . import geometry as geo
from .curvespec import bundled_curves, load_bundled, load_curve
from .engine import find_inscriptions, rectangle_search_sphere, validate_inscription
from .errors import (ConvergenceError, DiameterWarning, GeometryError, HypothesisError,
                     SchemaError)
from .flow import PairState, flow_closed_form, flow_ode, hamiltonian
from .geometry import Surface
from .oracle import brute_force_oracle, match_sets
from .pullback import BLOCK_TOL, compute_constants, verify_diagonal, verify_pullback_geometric
from .quad import AngleTriple
from .records import ResultRecord, clean_diagnostics
from .render import render_svg

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

_PI_EXPR = re.compile(r"^\s*(?:([0-9.]+)\s*\*\s*)?pi\s*(?:/\s*([0-9.]+))?\s*$")
_DEGREES = re.compile(r"(deg|degree|degrees|°)\s*$", re.IGNORECASE)


class UsageError(Exception):
    pass


def radians(text):
    """Parse an angle in radians; degree suffixes are refused."""
    if _DEGREES.search(text):
        raise argparse.ArgumentTypeError(f"{text!r}: angles are radians only, degrees are refused")
    m = _PI_EXPR.match(text)
    try:
        if m:
            value = float(m.group(1) or 1.0) * np.pi / float(m.group(2) or 1.0)
        else:
            value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an angle in radians") from None
    if not np.isfinite(value):
        raise argparse.ArgumentTypeError(f"{text!r} is not finite")
    return value


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _add_triple(p, required=True):
    p.add_argument("--theta", type=radians, required=True, help="angle p1 -> p2 (radians)")
    p.add_argument("--phi1", type=radians, required=required, default=None,
                   help="angle p1 -> p3 (radians)")
    p.add_argument("--phi2", type=radians, required=required, default=None,
                   help="angle p2 -> p4 (radians)")


def build_parser():
    parser = _Parser(prog="geoinscribe", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    verify = sub.add_parser("verify", help="numerical checks of the quadrilateral map")
    vsub = verify.add_subparsers(dest="check", required=True, parser_class=_Parser)
    pb = vsub.add_parser("pullback", help="pullback constants a, b, c and their checks")
    _add_triple(pb)
    pb.add_argument("--trials", type=int, default=100, help="random states on the hyperboloid")
    pb.add_argument("--seed", type=int, default=0)
    dg = vsub.add_parser("diagonal", help="differential across the diagonal vs multipliers")
    dg.add_argument("--surface", choices=["hyperbolic", "sphere", "spherical", "euclidean"],
                    default="hyperbolic")
    dg.add_argument("--theta", type=radians)
    dg.add_argument("--phi1", type=radians)
    dg.add_argument("--phi2", type=radians)
    dg.add_argument("--trials", type=int, default=100)
    dg.add_argument("--seed", type=int, default=0)

    ins = sub.add_parser("inscribe", help="search a curve for inscribed quadrilaterals")
    ins.add_argument("--curve", required=True,
                     help="curve file, or bundled:NAME with NAME one of "
                     + ", ".join(bundled_curves()))
    _add_triple(ins, required=False)
    ins.add_argument("--grid", type=int, default=256, help="seed grid size (at least 64)")
    ins.add_argument("--flow", action="store_true",
                     help="spherical rectangles via the rectangle flow (phi1 = phi2 = pi)")
    ins.add_argument("--oracle", action="store_true", help="cross-check with the brute-force oracle")
    ins.add_argument("--oracle-grid", type=int, default=512)
    ins.add_argument("--out", help="write the result record (JSON) here")
    ins.add_argument("--svg", help="write a figure here")

    fl = sub.add_parser("flow", help="rotate a pair of points by the rectangle flow")
    fl.add_argument("--surface", choices=["sphere", "spherical", "hyperbolic"], required=True)
    fl.add_argument("--p", type=float, nargs="+", required=True,
                    help="2 chart coordinates or 3 embedding coordinates")
    fl.add_argument("--q", type=float, nargs="+", required=True)
    fl.add_argument("--theta", type=radians, required=True)
    fl.add_argument("--ode", action="store_true", help="also integrate the flow numerically")
    fl.add_argument("--step", type=float, default=1e-3)

    rd = sub.add_parser("render", help="draw a curve and a result record as SVG")
    rd.add_argument("--curve", required=True)
    rd.add_argument("--results", help="result record from inscribe --out")
    rd.add_argument("--out", required=True)
    return parser


def _curve(ref):
    if ref.startswith("bundled:"):
        return load_bundled(ref.split(":", 1)[1])
    return load_curve(ref)


def _triple(theta, phi1, phi2):
    try:
        return AngleTriple(theta, phi1, phi2)
    except GeometryError as exc:
        raise UsageError(str(exc)) from None


def _fmt_vec(v):
    return "(" + ", ".join(f"{x:.12g}" for x in np.ravel(v)) + ")"


# ---------------------------------------------------------------------------
# subcommands

def _verify(args, argv):
    if args.check == "pullback":
        t = _triple(args.theta, args.phi1, args.phi2)
        c = compute_constants(t)
        print(f"triple  theta={t.theta:.12g} phi1={t.phi1:.12g} phi2={t.phi2:.12g}")
        print(f"a = {c.a:.15g}\nb = {c.b:.15g}\nc = {c.c:.15g}")
        print(f"block residual = {c.residual:.3e} (tol {BLOCK_TOL:g})")
        ok = c.ok
        if args.trials > 0:
            rep = verify_pullback_geometric(t, trials=args.trials, seed=args.seed)
            print(f"geometric check: {rep.trials} states, max relative error "
                  f"{rep.max_rel_error:.3e} (tol {rep.tol:g})")
            ok &= rep.passed
        print("PASS" if ok else "FAIL")
        return EXIT_OK if ok else EXIT_FAIL
    angles = [args.theta, args.phi1, args.phi2]
    if any(a is None for a in angles) and any(a is not None for a in angles):
        raise UsageError("give all of --theta --phi1 --phi2 or none (random triples)")
    triple = _triple(*angles) if angles[0] is not None else None
    rep = verify_diagonal(Surface(args.surface), args.trials, args.seed, triple)
    print(f"diagonal multipliers on {rep.surface.value}: {len(rep.errors)} trials, "
          f"max relative error {rep.max_error:.3e} (tol {rep.tol:g})")
    print("PASS" if rep.passed else "FAIL")
    return EXIT_OK if rep.passed else EXIT_FAIL


def _inscribe(args, argv):
    if args.grid < 64:
        raise UsageError("--grid must be at least 64")
    if args.flow:
        for name in ("phi1", "phi2"):
            val = getattr(args, name)
            if val is not None and abs(val - np.pi) > 1e-12:
                raise UsageError(f"--flow searches rectangles; --{name} must be pi or omitted")
        triple = _triple(args.theta, np.pi, np.pi)
    else:
        if args.phi1 is None or args.phi2 is None:
            raise UsageError("--phi1 and --phi2 are required (or use --flow for rectangles)")
        triple = _triple(args.theta, args.phi1, args.phi2)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", DiameterWarning)
        sc = _curve(args.curve)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    print(f"curve: {sc!r} chart={sc.chart}")
    if args.flow:
        found, stats = rectangle_search_sphere(sc, args.theta, n=args.grid, return_stats=True)
    else:
        found, stats = find_inscriptions(sc, triple, n=args.grid)
    reports = [validate_inscription(f, sc) for f in found]
    valid = [f for f, r in zip(found, reports) if r.passed]
    stats = clean_diagnostics(stats)
    stats["found"] = len(found)
    stats["validated"] = len(valid)
    ok = bool(valid)
    if args.oracle:
        orc = brute_force_oracle(sc, triple, n=args.oracle_grid, flow=args.flow)
        agree, gap = match_sets(valid, orc, 2.0 / args.oracle_grid)
        stats.update(oracle_grid=args.oracle_grid, oracle_count=len(orc),
                     oracle_gap=float(gap) if np.isfinite(gap) else None, oracle_agrees=agree)
        print(f"oracle: {len(orc)} inscriptions at n={args.oracle_grid}, "
              f"max parameter gap {gap:.3e} -> {'agrees' if agree else 'DISAGREES'}")
        ok &= agree
    provenance = {"argv": list(argv), "tool": "geoinscribe", "version": __version__}
    record = ResultRecord.from_results(sc, valid, stats, provenance)
    print(f"triple ({triple.theta:.10g}, {triple.phi1:.10g}, {triple.phi2:.10g}): "
          f"{len(valid)} validated inscription(s) of {len(found)} found")
    for k, ins in enumerate(valid):
        s = " ".join(f"{x:.10f}" for x in ins.s)
        print(f"  [{k}] s = {s}  radius = {float(ins.circle.radius):.10f}  "
              f"residual = {ins.residual:.2e}")
    if args.out:
        record.save(args.out)
        print(f"wrote {args.out}")
    if args.svg:
        render_svg(sc, record, args.svg)
        print(f"wrote {args.svg}")
    return EXIT_OK if ok else EXIT_FAIL


def _point(surface, coords, flag):
    coords = np.asarray(coords, dtype=float)
    if len(coords) == 2:
        chart = charts.DEFAULT_CHART[surface]
        return charts.from_chart(chart, coords)
    if len(coords) == 3:
        geo.check_point(surface, coords, tol=1e-9)
        return geo.project_point(surface, coords)
    raise UsageError(f"--{flag} needs 2 chart or 3 embedding coordinates")


def _flow(args, argv):
    surface = Surface(args.surface)
    state = PairState(surface, _point(surface, args.p, "p"), _point(surface, args.q, "q")).check()
    out = flow_closed_form(state, args.theta)
    h0, h1 = float(hamiltonian(state)), float(hamiltonian(out))
    chart = charts.DEFAULT_CHART[surface]
    print(f"surface {surface.value}, theta = {args.theta:.12g}, distance = {float(state.distance):.12g}")
    print(f"p' = {_fmt_vec(out.p)}  [{chart} {_fmt_vec(charts.to_chart(chart, out.p))}]")
    print(f"q' = {_fmt_vec(out.q)}  [{chart} {_fmt_vec(charts.to_chart(chart, out.q))}]")
    print(f"H = {h0:.15g} -> {h1:.15g}")
    ok = abs(h1 - h0) < 1e-9 * max(1.0, abs(h0))
    if args.ode:
        num = flow_ode(state, args.theta, step=args.step)
        gap = float(max(geo.distance(surface, num.p, out.p), geo.distance(surface, num.q, out.q)))
        drift = abs(float(hamiltonian(num)) - h0)
        print(f"ODE (step {args.step:g}): distance to closed form {gap:.3e}, H drift {drift:.3e}")
        ok &= gap < 1e-9 and drift < 1e-9
    return EXIT_OK if ok else EXIT_FAIL


def _render(args, argv):
    sc = _curve(args.curve)
    record = ResultRecord.load(args.results) if args.results else []
    render_svg(sc, record, args.out)
    print(f"wrote {args.out}")
    return EXIT_OK


_COMMANDS = {"verify": _verify, "inscribe": _inscribe, "flow": _flow, "render": _render}


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args, argv)
    except (UsageError, SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GeometryError, HypothesisError, ConvergenceError) as exc:
        # non-simple curves, antipodal pairs, diameter >= pi
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
