"""Command-line front end.

Subcommands::

    project    one-shot triangle projection (free / fixed-vertex / unsigned)
    toy        single-triangle area-halving comparison of both engines
    mesh-gen   write a synthetic shape mesh as JSON
    bench      run the convergence benchmark and write a CSV

Exit codes: 0 success, 2 usage or validation error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import List, Optional

from . import bench as bench_mod
from .meshfile import load_mesh, save_mesh
from .pbd import make_mesh, relax_lin, relax_opt
from .project_fixed import canonicalize, ottpao_one_fixed, project_two_fixed
from .project_free import ProjectionOutcome, otppa, ottpao
from .trigeom import ProjectionSpec, as_triangle, displacement_cost, signed_area

USAGE_ERROR = 2
IO_ERROR = 3


def _parse_triangle(text: str):
    parts = text.split(",")
    if len(parts) != 6:
        raise argparse.ArgumentTypeError("expected 6 comma-separated coordinates")
    try:
        return as_triangle(float(p) for p in parts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _outcome_dict(out: ProjectionOutcome) -> dict:
    return {
        "optimal": list(out.optimal),
        "cost": out.cost,
        "sqrt_cost": math.sqrt(out.cost),
        "signed_area": out.signed_area,
        "chosen_case": out.chosen_case,
        "orientation": out.orientation,
        "case1": {
            "solutions": [
                {
                    "triangle": list(c.triangle),
                    "multiplier": c.multiplier,
                    "cost": c.cost,
                    "signed_area": c.signed_area,
                    "feasible": c.feasible,
                }
                for c in out.case1.solutions
            ],
            "rejected": [
                {
                    "triangle": list(c.triangle),
                    "multiplier": c.multiplier,
                    "cost": c.cost,
                    "signed_area": c.signed_area,
                    "feasible": c.feasible,
                }
                for c in out.case1.rejected
            ],
        },
        "case2": {
            "triangle": list(out.case2.triangle),
            "basis": list(out.case2.basis),
            "translation": list(out.case2.translation),
            "scale": out.case2.scale,
            "branch": out.case2.branch,
            "cost": out.case2.cost,
            "signed_area": out.case2.signed_area,
            "feasible": out.case2.feasible,
        },
    }


def _print_outcome(out: ProjectionOutcome) -> None:
    print(f"optimal triangle: {['%.6g' % v for v in out.optimal]}")
    print(f"cost: {out.cost:.9g}   sqrt(cost): {math.sqrt(out.cost):.9g}")
    print(f"signed area: {out.signed_area:.9g}   chosen case: {out.chosen_case}")
    print("case I candidates:")
    for c in out.case1.solutions:
        print(f"  kept     lam={c.multiplier: .6g} cost={c.cost:.6g} area={c.signed_area:.6g}")
    for c in out.case1.rejected:
        print(f"  rejected lam={c.multiplier: .6g} cost={c.cost:.6g} area={c.signed_area:.6g}")
    c2 = out.case2
    print(f"case II: cost={c2.cost:.6g} area={c2.signed_area:.6g} scale={c2.scale:.6g}")


def cmd_project(args: argparse.Namespace) -> int:
    tri = args.tri
    spec_tol = args.tolerance
    if args.unsigned and args.fixed:
        print("--unsigned cannot be combined with --fixed", file=sys.stderr)
        return USAGE_ERROR
    if args.unsigned:
        out = otppa(tri, args.area, spec_tol)
    elif args.fixed == "bc":
        spec = ProjectionSpec(args.area, args.orientation, spec_tol)
        v = project_two_fixed(tri, spec)
        if args.json:
            print(json.dumps({
                "optimal": list(v),
                "cost": displacement_cost(v, tri),
                "sqrt_cost": math.sqrt(displacement_cost(v, tri)),
                "signed_area": signed_area(v),
                "chosen_case": "two-fixed",
            }))
        else:
            print(f"optimal triangle: {['%.6g' % x for x in v]}")
            print(f"cost: {displacement_cost(v, tri):.9g}")
            print(f"signed area: {signed_area(v):.9g}")
        return 0
    elif args.fixed in ("a", "b", "c"):
        flags = tuple(args.fixed == name for name in ("a", "b", "c"))
        canonical, pattern = canonicalize(tri, flags)
        spec = ProjectionSpec(args.area, args.orientation, spec_tol)
        out = ottpao_one_fixed(canonical, spec)
        restored = pattern.restore(out.optimal)
        if args.json:
            doc = _outcome_dict(out)
            doc["optimal"] = list(restored)
            print(json.dumps(doc))
        else:
            _print_outcome(out)
            if restored != out.optimal:
                print(f"restored vertex order: {['%.6g' % v for v in restored]}")
        return 0
    else:
        out = ottpao(tri, ProjectionSpec(args.area, args.orientation, spec_tol))
    if args.json:
        print(json.dumps(_outcome_dict(out)))
    else:
        _print_outcome(out)
    return 0


def cmd_toy(args: argparse.Namespace) -> int:
    tri = [[0.0, 0.0], [1.0, 0.0], [0.3, 0.9]]
    base = make_mesh(tri, [[0, 1, 2]])
    base.prescribed_areas = base.prescribed_areas / 2.0
    initial = base.vertices.copy()
    for method, runner in (("opt", relax_opt), ("lin", relax_lin)):
        mesh = base.copy()
        history = []
        for _ in range(args.iters):
            runner(mesh, 0.0, 1)
            cost = float(((mesh.vertices - initial) ** 2).sum())
            area = mesh.signed_areas()[0]
            residual = abs(mesh.orientations[0] * area - mesh.prescribed_areas[0])
            history.append((cost, residual))
        print(f"# {method}")
        print("iter,cost,area_residual")
        for i, (cost, residual) in enumerate(history, start=1):
            print(f"{i},{cost:.9e},{residual:.9e}")
    return 0


def cmd_mesh_gen(args: argparse.Namespace) -> int:
    try:
        mesh = bench_mod.generate_shape_mesh(args.shape, getattr(args, "class"))
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    try:
        save_mesh(mesh, args.out)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return IO_ERROR
    print(f"wrote {args.out}: {len(mesh.vertices)} vertices, {len(mesh.triangles)} triangles")
    return 0


def cmd_bench(args: argparse.Namespace) -> int:
    if args.config:
        try:
            doc = json.loads(open(args.config, "r", encoding="utf-8").read())
        except OSError as exc:
            print(f"error: cannot read {args.config}: {exc}", file=sys.stderr)
            return IO_ERROR
        except json.JSONDecodeError as exc:
            print(f"error: bad config: {exc}", file=sys.stderr)
            return USAGE_ERROR
        doc.setdefault("seed", args.seed)
        kwargs = {k: tuple(v) if isinstance(v, list) else v for k, v in doc.items()}
    else:
        kwargs = dict(
            shapes=tuple(args.shapes.split(",")),
            resolution=getattr(args, "class"),
            deform_fractions=tuple(float(x) for x in args.deform.split(",")),
            thresholds=tuple(float(x) for x in args.thresholds.split(",")),
            runs_per_mesh=args.runs,
            stopping_time=args.stop,
            seed=args.seed,
        )
    try:
        config = bench_mod.BenchConfig(**kwargs)
        for shape in config.shapes:
            if shape not in bench_mod.SHAPES:
                raise ValueError(f"unknown shape {shape!r}")
    except (TypeError, ValueError) as exc:
        print(f"error: invalid config: {exc}", file=sys.stderr)
        return USAGE_ERROR
    records = bench_mod.run_benchmark(config)
    try:
        bench_mod.write_csv(records, args.out)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return IO_ERROR
    try:
        stats = bench_mod.classify_outliers(records, config.stopping_time)
    except ValueError:
        stats = {}  # too few records for quartiles; CSV is still written
    for method in sorted(stats):
        s = stats[method]
        q = ", ".join(f"{x:.1f}" for x in s["quartiles"])
        print(f"{method}: sc={s['sc']} vsc={s['vsc']} quartiles=({q})")
    print(f"wrote {args.out}: {len(records)} records")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="triproject",
                                     description="optimal triangle projection toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("project", help="project one triangle")
    p.add_argument("--tri", type=_parse_triangle, required=True,
                   metavar="xa,ya,xb,yb,xc,yc")
    p.add_argument("--area", type=float, required=True)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--orientation", type=int, choices=(-1, 1), default=1)
    group.add_argument("--unsigned", action="store_true",
                       help="ignore orientation; project to |area| target")
    p.add_argument("--fixed", choices=("a", "b", "c", "bc"),
                   help="hold one vertex (a|b|c) or the pair b,c in place")
    p.add_argument("--tolerance", type=float, default=1e-3)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("toy", help="single-triangle engine comparison")
    p.add_argument("--iters", type=int, default=20)
    p.set_defaults(func=cmd_toy)

    p = sub.add_parser("mesh-gen", help="generate a shape mesh")
    p.add_argument("--shape", choices=bench_mod.SHAPES, required=True)
    p.add_argument("--class", choices=("coarse", "fine"), default="coarse")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_mesh_gen)

    p = sub.add_parser("bench", help="run the convergence benchmark")
    p.add_argument("--config", help="JSON file with BenchConfig fields")
    p.add_argument("--shapes", default="disk,ring,cross,star")
    p.add_argument("--class", choices=("coarse", "fine"), default="coarse")
    p.add_argument("--deform", default="0.05,0.1,0.2")
    p.add_argument("--thresholds", default="0.05,0.025,0.01")
    p.add_argument("--runs", type=int, default=50)
    p.add_argument("--stop", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors already; normalise other codes
        return int(exc.code) if exc.code else 0
    if getattr(args, "area", None) is not None and args.area <= 0:
        print("error: --area must be positive", file=sys.stderr)
        return USAGE_ERROR
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
