"""braidfib command line: analyze, diagram, fibers, singularity.

Exit codes form a contract for shell pipelines:

    0  fibration (no critical points of arg g)
    2  malformed input / not a braid
    3  pseudo-fibration with a finite Morse count
    4  degenerate (plateau of d/dt arg v)
    5  requested phi is a critical argument
    6  loop fails the symmetry/parity requirements

A TOML config file can preload any flag (flags win).  BRAIDFIB_THREADS
caps worker pools.  All angles are radians in [0, 2*pi); file numbers are
written with 17 significant digits, so identical configs give
byte-identical outputs.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

try:
    import tomllib
except ImportError:  # python < 3.11
    import tomli as tomllib

import numpy as np

from . import __version__
from .argmap import DegenerateError, arg_critical_points, is_p_fibered
from .braidwords import parse_word
from .foliations import fiber_band_word, square_diagram
from .meshes import (CriticalPhiError, MeshError, euler_characteristic,
                     level_set, sweep_report, worker_count)
from .mixedpoly import (SymmetryError, minimal_k, newton_data, newton_svg,
                        semiholomorphic, verify_cone)
from .polyloops import PolyLoop, critical_data, from_roots
from .strands import CollisionError, StrandSystem, TangencyError, builtin_52, parametrize

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_PSEUDO = 3
EXIT_DEGENERATE = 4
EXIT_CRITICAL_PHI = 5
EXIT_SYMMETRY = 6


def _report_header(args, tolerances):
    return {
        "tool": "braidfib",
        "version": __version__,
        "config": {k: v for k, v in sorted(vars(args).items())
                   if k != "func" and v is not None},
        "tolerances": tolerances,
        "threads": worker_count(),
    }


def _validate_config(args):
    grid_n = getattr(args, "grid_n", None)
    if grid_n is not None and grid_n < 16:
        raise ValueError("grid sizes must be at least 16")
    grid = getattr(args, "grid", None)
    if grid is not None:
        dims = [int(x) for x in str(grid).split(",")]
        if len(dims) != 3 or min(dims) < 16:
            raise ValueError("grid must be NX,NY,NT with every dimension >= 16")
    count = getattr(args, "phi_count", None)
    if count is not None and count < 1:
        raise ValueError("phi-count must be positive")


def _load_loop(args):
    """Input resolution: builtin, strand JSON, loop JSON, or word text."""
    sources = [s for s in ("builtin", "strands", "loop", "word") if getattr(args, s, None)]
    if len(sources) != 1:
        raise ValueError("provide exactly one of --builtin / --strands / --loop / --word")
    src = sources[0]
    if src == "builtin":
        if args.builtin != "52":
            raise ValueError(f"unknown builtin {args.builtin!r} (available: 52)")
        return from_roots(builtin_52())
    if src == "strands":
        return from_roots(StrandSystem.load(args.strands))
    if src == "loop":
        return PolyLoop.load(args.loop)
    with open(args.word) as f:
        word = parse_word(f.read())
    return from_roots(parametrize(word))


def _write_json(path, payload):
    text = json.dumps(payload, indent=1, sort_keys=True, default=_json_default)
    if path:
        with open(path, "w") as f:
            f.write(text + "\n")
    else:
        print(text)


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    raise TypeError(f"not JSON serializable: {type(obj)}")


def cmd_analyze(args):
    try:
        loop = _load_loop(args)
    except (ValueError, OSError, CollisionError, TangencyError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    tol = {"grid": args.grid_n, "refine_tol": 1e-10, "plateau_tol": 1e-8}
    try:
        cd = critical_data(loop, N=args.grid_n)
        points = arg_critical_points(cd)
        fibered, cert = is_p_fibered(loop, N=args.grid_n, cd=cd)
    except CollisionError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DegenerateError as exc:
        print(f"degenerate: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    degen = [p for p in points if p.kind == "degenerate"]
    report = _report_header(args, tol)
    report.update({
        "count": sum(1 for p in points if p.kind == "sign-change"),
        "degenerate_count": len(degen),
        "p_fibered": bool(fibered),
        "margin": cert.margin,
        "critical_points": [
            {"t": p.t, "strand": p.strand, "arg": p.critical_arg,
             "location": {"re": p.location.real, "im": p.location.imag},
             "kind": p.kind}
            for p in points
        ],
        "flags": cert.flags,
    })
    _write_json(args.out, report)
    if degen:
        return EXIT_DEGENERATE
    return EXIT_OK if fibered else EXIT_PSEUDO


def cmd_diagram(args):
    try:
        loop = _load_loop(args)
    except (ValueError, OSError, CollisionError, TangencyError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    d = square_diagram(loop, N=args.grid_n)
    report = _report_header(args, {"grid": args.grid_n})
    report["diagram"] = d.to_json()
    if args.fiber_word:
        try:
            word, chi = fiber_band_word(d, loop, args.phi)
        except ValueError as exc:
            print(f"critical phi: {exc}", file=sys.stderr)
            return EXIT_CRITICAL_PHI
        report["fiber_word"] = {
            "phi": args.phi,
            "letters": [[list(idx), sign] for idx, sign in word.letters],
            "euler_characteristic": chi,
        }
    _write_json(args.out, report)
    if args.svg:
        d.to_svg().save(args.svg)
    return EXIT_OK


def cmd_fibers(args):
    try:
        loop = _load_loop(args)
    except (ValueError, OSError, CollisionError, TangencyError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    grid = tuple(int(x) for x in args.grid.split(","))
    if len(grid) != 3:
        print("grid must be NX,NY,NT", file=sys.stderr)
        return EXIT_INPUT
    radius = None if args.radius == "auto" else float(args.radius)
    if args.phi is not None:
        phis = [args.phi]
    else:
        phis = [2 * math.pi * k / args.phi_count for k in range(args.phi_count)]
    try:
        rep = sweep_report(loop, phis, grid=grid, radius=radius)
    except CriticalPhiError as exc:
        print(f"critical phi: {exc}", file=sys.stderr)
        return EXIT_CRITICAL_PHI
    except MeshError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report = _report_header(args, {"grid": list(grid)})
    report["sweep"] = rep
    _write_json(args.out, report)
    if args.mesh_dir:
        os.makedirs(args.mesh_dir, exist_ok=True)
        for i, phi in enumerate(phis):
            mesh = level_set(loop, phi, grid=grid, radius=radius,
                             critical_args=rep["critical_args"])
            base = os.path.join(args.mesh_dir, f"fiber_{i:03d}")
            mesh.save_obj(base + ".obj")
            mesh.save_ply(base + ".ply")
    return EXIT_OK


def cmd_singularity(args):
    try:
        loop = _load_loop(args)
    except (ValueError, OSError, CollisionError, TangencyError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        k = args.k if args.k else minimal_k(loop)
        f = semiholomorphic(loop, k)
    except SymmetryError as exc:
        print(f"symmetry failure: {exc}", file=sys.stderr)
        return EXIT_SYMMETRY
    nd = newton_data(f)
    cone = verify_cone(f, loop, k) if loop.degree >= 2 else None
    report = _report_header(args, {"cone_tol": 1e-6})
    report.update({
        "k": k,
        "polynomial": f.to_json(),
        "pretty": f.pretty(),
        "newton": nd.to_json(),
        "cone_check": cone,
    })
    _write_json(args.out, report)
    if args.newton:
        newton_svg(nd).save(args.newton)
    return EXIT_OK


def _add_input_flags(p):
    p.add_argument("--builtin", help="named builtin input (52)")
    p.add_argument("--strands", help="StrandSystem JSON file")
    p.add_argument("--loop", help="PolyLoop JSON file")
    p.add_argument("--word", help="braid word text file (parametrized on the fly)")
    p.add_argument("--out", help="write the JSON report here instead of stdout")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="braidfib",
        description="braids as loops of polynomials: saddle braids, "
                    "pseudo-fibrations, diagrams, fiber meshes, singularity scaffolds",
    )
    ap.add_argument("--version", action="version", version=f"braidfib {__version__}")
    ap.add_argument("--config", help="TOML file preloading any flag (flags win)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="critical points of arg(g) and P-fiberedness")
    _add_input_flags(p)
    p.add_argument("--grid-n", type=int, default=2048, help="time samples")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("diagram", help="square / Rampichini diagram (SVG + JSON)")
    _add_input_flags(p)
    p.add_argument("--grid-n", type=int, default=1024)
    p.add_argument("--svg", help="write the diagram SVG here")
    p.add_argument("--fiber-word", action="store_true", help="emit the band word at --phi")
    p.add_argument("--phi", type=float, default=1.0)
    p.set_defaults(func=cmd_diagram)

    p = sub.add_parser("fibers", help="fiber level-set meshes and the chi sweep")
    _add_input_flags(p)
    p.add_argument("--phi", type=float, help="single fiber argument")
    p.add_argument("--phi-count", type=int, default=15, help="uniform sweep size")
    p.add_argument("--grid", default="128,128,256", help="NX,NY,NT")
    p.add_argument("--radius", default="auto")
    p.add_argument("--mesh-dir", help="write OBJ/PLY meshes into this directory")
    p.set_defaults(func=cmd_fibers)

    p = sub.add_parser("singularity", help="semiholomorphic polynomial of the loop")
    _add_input_flags(p)
    p.add_argument("--k", type=int, help="override the radial exponent k")
    p.add_argument("--newton", help="write the Newton staircase SVG here")
    p.set_defaults(func=cmd_singularity)
    return ap


def _apply_config(ap, argv):
    """TOML config preloads defaults; explicit flags win."""
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    path = argv[i + 1]
    with open(path, "rb") as f:
        cfg = tomllib.load(f)
    extra = []
    for key, value in cfg.items():
        flag = "--" + key.replace("_", "-")
        if flag in argv:
            continue
        if isinstance(value, bool):
            if value:
                extra.append(flag)
        else:
            extra.extend([flag, str(value)])
    # insert after the subcommand token
    return argv + extra


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    try:
        argv = _apply_config(ap, argv)
    except (OSError, tomllib.TOMLDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    args = ap.parse_args(argv)
    try:
        _validate_config(args)
        return args.func(args)
    except ValueError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
