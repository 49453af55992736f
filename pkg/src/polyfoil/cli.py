"""Command-line interface.

Exit codes: 0 success, 1 I/O problem, 2 invalid input (domain or
validation), 3 numerical non-convergence.

Triangles given with ``--triangle X Y Z`` become the length tuple
``(t_1, x_1, t_2) = (X, Y, Z)``: the fan apex is the vertex opposite side Y.
Perimeter and area do not depend on the labelling.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import Any

import numpy as np

from . import __version__
from .calculus import classify_rank, psi
from .errors import ConvergenceError, DomainError, PolyfoilError
from .foliation import EPS_LEAF, default_pair_area, isosceles_equal_pair, phi, trace_leaf
from .inscribable import EPS_CYC, gamma, is_inscribable, solve_cyclic
from .optimize import EPS_OPT, maximize_area_fixed_perimeter, maximize_area_fixed_sides
from .polygon_space import StarPolygon, is_convex, omega_violation, parse_polygon, polygon_to_json
from .render import atlas_svg, polygons_svg, trace_svg


class InputError(Exception):
    """Unreadable input file or unparseable JSON."""


def dumps(obj: Any, indent: int = 2, _level: int = 0) -> str:
    """JSON with floats written to 17 significant digits."""
    pad, inner = " " * (indent * _level), " " * (indent * (_level + 1))
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (float, np.floating)):
        if not math.isfinite(obj):
            raise ValueError("non-finite number in output")
        return format(float(obj), ".17g")
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        if all(isinstance(v, (int, float, np.number)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        items = [inner + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    return int(os.environ.get("POLYFOIL_SEED", "0"))


def _read_json(args) -> Any:
    if getattr(args, "json", None):
        text = args.json
    elif getattr(args, "input", None):
        try:
            if args.input == "-":
                text = sys.stdin.read()
            else:
                with open(args.input, encoding="utf-8") as fh:
                    text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {args.input}: {exc}") from exc
    else:
        return None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from exc


def _polygon_arg(args) -> StarPolygon:
    if getattr(args, "triangle", None):
        return StarPolygon(tuple(args.triangle))
    if getattr(args, "lengths", None):
        return StarPolygon(tuple(args.lengths))
    payload = _read_json(args)
    if payload is None:
        raise DomainError("no polygon given (use --input, --json, --lengths or --triangle)")
    return parse_polygon(payload)


def _write(args, text: str) -> None:
    if getattr(args, "output", None):
        try:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise InputError(f"cannot write {args.output}: {exc}") from exc
    else:
        sys.stdout.write(text)


def _write_svg(path: str, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc}") from exc


def cmd_check(args) -> None:
    p = _polygon_arg(args)
    reason = omega_violation(p)
    if reason:
        raise DomainError(reason)
    convex = is_convex(p)
    g = gamma(p)
    scale = max(p.lengths)
    rank = classify_rank(p)
    pv = psi(p)
    report = {
        "n": p.n,
        "lengths": list(p.lengths),
        "in_omega": True,
        "convex": convex,
        "gamma": [float(v) for v in g],
        "gamma_residual": float(np.max(np.abs(g))) / scale**4 if g.size else 0.0,
        "inscribable": is_inscribable(p, EPS_CYC) if convex else None,
        "rank": rank.rank,
        "singular_values": list(rank.singular_values),
        "regular": rank.is_regular_polygon,
        "perimeter": pv.perimeter,
        "area": pv.area,
    }
    print(
        f"n={p.n} convex={convex} inscribable={report['inscribable']} rank={rank.rank} "
        f"regular={rank.is_regular_polygon} perimeter={pv.perimeter:.12g} area={pv.area:.12g}",
        file=sys.stderr,
    )
    _write(args, dumps(report) + "\n")
    if args.svg:
        _write_svg(args.svg, polygons_svg([p], args.px, args.stroke))


def _sides_arg(args) -> list[float]:
    if args.sides:
        return list(args.sides)
    payload = _read_json(args)
    if isinstance(payload, dict) and "sides" in payload:
        return [float(v) for v in payload["sides"]]
    if isinstance(payload, list):
        return [float(v) for v in payload]
    raise DomainError("no side lengths given (use --sides or a JSON {'sides': [...]})")


def cmd_inscribe(args) -> None:
    sol = solve_cyclic(_sides_arg(args))
    out = {
        "circumradius": sol.circumradius,
        "center_inside": sol.center_inside,
        "diagonals": list(sol.diagonals),
        "polygon": polygon_to_json(sol.polygon),
    }
    print(f"R={sol.circumradius:.12g} center_inside={sol.center_inside}", file=sys.stderr)
    _write(args, dumps(out) + "\n")
    if args.svg:
        _write_svg(args.svg, polygons_svg([sol.polygon], args.px, args.stroke))


def cmd_trace(args) -> None:
    p = _polygon_arg(args)
    trace = trace_leaf(p, args.step, args.max_samples, tol=args.tol_leaf, seed=_seed(args))
    print(f"{len(trace.samples)} samples, stop: {trace.stop_reason}", file=sys.stderr)
    _write(args, trace.to_csv())
    if args.svg:
        _write_svg(args.svg, trace_svg(trace, args.px, args.stroke))


def cmd_atlas(args) -> None:
    text = atlas_svg(args.lam, args.levels, args.grid, args.px, args.stroke)
    _write(args, text)


def cmd_maximize(args) -> None:
    if args.mode == "perimeter":
        payload = _read_json(args) or {}
        n = args.n if args.n is not None else payload.get("n")
        L = args.perimeter if args.perimeter is not None else payload.get("perimeter")
        if n is None or L is None:
            raise DomainError("perimeter mode needs --n and --perimeter")
        res = maximize_area_fixed_perimeter(int(n), float(L), seed=_seed(args), tol=args.tol_opt)
    else:
        res = maximize_area_fixed_sides(_sides_arg(args), seed=_seed(args), tol=args.tol_opt)
    for i, a in enumerate(res.history):
        print(f"iter {i}: area {a:.15g}", file=sys.stderr)
    out = {
        "mode": args.mode,
        "polygon": polygon_to_json(res.polygon),
        "area": res.area,
        "grad_norm": res.grad_norm,
        "iterations": res.iterations,
        "log": res.history,
    }
    _write(args, dumps(out) + "\n")
    if args.svg:
        _write_svg(args.svg, polygons_svg([res.polygon], args.px, args.stroke))


def cmd_pair(args) -> None:
    a0 = args.area if args.area is not None else default_pair_area(args.lam)
    first, second = isosceles_equal_pair(args.lam, a0)
    out = {
        "lambda": args.lam,
        "perimeter": 2.0 * args.lam,
        "area": a0,
        "triangles": [list(first), list(second)],
        "areas": [math.sqrt(phi(first)), math.sqrt(phi(second))],
    }
    _write(args, dumps(out) + "\n")


def _add_polygon_input(sp) -> None:
    sp.add_argument("--input", "-i", help="polygon JSON file ('-' for stdin)")
    sp.add_argument("--json", help="inline polygon JSON")
    sp.add_argument("--lengths", type=float, nargs="+", help="length tuple t1 x1 t2 ... t_{n-1}")
    sp.add_argument(
        "--triangle", type=float, nargs=3, metavar=("X", "Y", "Z"),
        help="triangle sides <x y z>, mapped to (t1, x1, t2) = (X, Y, Z)",
    )


def _add_svg_opts(sp, with_path: bool = True) -> None:
    if with_path:
        sp.add_argument("--svg", help="also write an SVG drawing to this path")
    sp.add_argument("--px", type=float, default=40.0, help="pixels per length unit (default 40)")
    sp.add_argument("--stroke", type=float, default=1.0, help="stroke width in pixels")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polyfoil", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("check", help="membership, convexity, cyclicity and rank of a polygon")
    _add_polygon_input(sp)
    sp.add_argument("--output", "-o")
    _add_svg_opts(sp)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("inscribe", help="cyclic polygon with given sides")
    sp.add_argument("--sides", type=float, nargs="+")
    sp.add_argument("--input", "-i")
    sp.add_argument("--json")
    sp.add_argument("--output", "-o")
    _add_svg_opts(sp)
    sp.set_defaults(func=cmd_inscribe)

    sp = sub.add_parser("trace", help="trace the constant perimeter and area leaf through a polygon (CSV)")
    _add_polygon_input(sp)
    sp.add_argument("--step", type=float, default=0.05)
    sp.add_argument("--max-samples", type=int, default=5000)
    sp.add_argument("--tol-leaf", type=float, default=EPS_LEAF)
    sp.add_argument("--seed", type=int, default=None, help="random seed (falls back to $POLYFOIL_SEED, then 0)")
    sp.add_argument("--output", "-o")
    _add_svg_opts(sp)
    sp.set_defaults(func=cmd_trace)

    sp = sub.add_parser("atlas", help="SVG of the leaves in the plaque of perimeter 2*lambda")
    sp.add_argument("--lambda", dest="lam", type=float, default=1.0)
    sp.add_argument("--levels", type=int, default=8)
    sp.add_argument("--grid", type=int, default=0, help="also plot plaque sample points at this resolution")
    sp.add_argument("--output", "-o")
    _add_svg_opts(sp, with_path=False)
    sp.set_defaults(func=cmd_atlas)

    sp = sub.add_parser("maximize", help="area maximization at fixed perimeter or fixed sides")
    sp.add_argument("mode", choices=["perimeter", "sides"])
    sp.add_argument("--n", type=int)
    sp.add_argument("--perimeter", type=float)
    sp.add_argument("--sides", type=float, nargs="+")
    sp.add_argument("--input", "-i")
    sp.add_argument("--json")
    sp.add_argument("--tol-opt", type=float, default=EPS_OPT)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--output", "-o")
    _add_svg_opts(sp)
    sp.set_defaults(func=cmd_maximize)

    sp = sub.add_parser("pair", help="two non-isometric isosceles triangles with equal perimeter and area")
    sp.add_argument("--lambda", dest="lam", type=float, default=14.0, help="semiperimeter (default 14)")
    sp.add_argument("--area", type=float, default=None, help="common area (default 3*lambda^2/(7*sqrt 7))")
    sp.add_argument("--output", "-o")
    sp.set_defaults(func=cmd_pair)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    for name in ("tol_leaf", "tol_opt", "step"):
        if getattr(args, name, 1.0) <= 0:
            print(f"error: --{name.replace('_', '-')} must be positive", file=sys.stderr)
            return 2
    try:
        args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except PolyfoilError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
