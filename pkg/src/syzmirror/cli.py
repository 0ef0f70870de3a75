"""Command-line entry point: ``syzmirror <command> ...``.

Exit codes: 0 success, 1 malformed input, 2 a mathematical precondition failed
(reported on stderr, never a traceback).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from . import __version__
from .affine_base import BaseStructure
from .branes import (
    LiftedPath,
    admissibility_violation,
    reference_path,
    strong_admissibility_violation,
    winding_number,
)
from .categories import KClass, euler_form, format_tables, hms_check, spherical_twist
from .geometry_core import DEFAULT_TOL, BasePoint, SurfaceSpec, classify_fiber, on_wall
from .plotting import base_diagram_svg
from .syz_functor import transform_sphere_brane
from .toric_mirror import (
    LatticeTriangulation,
    TriangulationError,
    build_an_fan,
    build_fan_from_triangulation,
)

REFERENCE_NOTE = (
    "winding numbers are relative to the straight (s, theta) segment from a_{i-1} "
    "to a_i turning by at most pi (ties turn counter-clockwise)"
)


class InputError(Exception):
    exit_code = 1


class DomainError(Exception):
    exit_code = 2


@dataclass
class RunConfig:
    command: str
    inputs: dict[str, Path] = field(default_factory=dict)
    output: Path | None = None
    tol: float | None = None
    n: int | None = None
    pretty: bool = False

    def __post_init__(self):
        for name, p in self.inputs.items():
            if not p.is_file():
                raise InputError(f"{name} file not found: {p}")
        if self.n is not None and self.n < 1:
            raise InputError("n must be at least 1")
        if self.tol is not None and not self.tol > 0:
            raise InputError("--tol must be positive")


def _env_tolerance() -> float:
    env = os.environ.get("SYZ_TOL")
    if env:
        try:
            value = float(env)
        except ValueError:
            raise InputError(f"SYZ_TOL is not a number: {env!r}") from None
        if not value > 0:
            raise InputError("SYZ_TOL must be positive")
        return value
    return DEFAULT_TOL


def _read_json(path: Path, what: str):
    text = path.read_text()
    if not text.strip():
        raise InputError(f"{what} file {path} is empty")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{what} file {path} is not valid JSON: {exc}") from None


def _load_spec(cfg: RunConfig) -> SurfaceSpec:
    data = _read_json(cfg.inputs["roots"], "roots")
    # precedence: --tol, then the file's "tol", then SYZ_TOL, then the default
    tol = cfg.tol
    if tol is None and isinstance(data, dict) and "tol" not in data:
        tol = _env_tolerance()
    try:
        return SurfaceSpec.from_json(data, tol)
    except (ValueError, TypeError) as exc:
        raise InputError(f"bad roots file: {exc}") from None


def _load_path(cfg: RunConfig) -> LiftedPath:
    data = _read_json(cfg.inputs["path"], "path")
    try:
        return LiftedPath.from_json(data)
    except (ValueError, TypeError) as exc:
        raise InputError(f"bad path file: {exc}") from None


def _emit(cfg: RunConfig, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if cfg.output is not None:
        cfg.output.write_text(text)
    else:
        sys.stdout.write(text)


def _emit_json(cfg: RunConfig, obj) -> None:
    _emit(cfg, json.dumps(obj, indent=2 if cfg.pretty else None))


def cmd_fan(cfg: RunConfig, args) -> int:
    if args.triangulation is not None:
        data = _read_json(cfg.inputs["triangulation"], "triangulation")
        try:
            fan = build_fan_from_triangulation(LatticeTriangulation.from_json(data))
        except (TriangulationError, ValueError, TypeError, KeyError) as exc:
            raise InputError(f"bad triangulation: {exc}") from None
    else:
        if cfg.n is None:
            raise InputError("fan needs --n or --triangulation")
        fan = build_an_fan(cfg.n)
    report = fan.to_json()
    report["smooth"] = fan.is_smooth()
    report["crepant"] = fan.is_crepant()
    bad = [list(c) for c in fan.max_cones if not fan.is_unimodular(c)]
    if bad:
        report["non_unimodular_cones"] = bad
    _emit_json(cfg, report)
    if bad:
        print(f"error: triangulation is not unimodular in cones {bad}", file=sys.stderr)
        return 2
    return 0


def cmd_classify(cfg: RunConfig, args) -> int:
    spec = _load_spec(cfg)
    try:
        b = BasePoint(args.s, args.lam)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    out = {
        "s": b.s,
        "lambda": b.lam,
        "fiber": classify_fiber(spec, b).value,
        "on_wall": on_wall(spec, b),
    }
    if args.charts:
        out["base"] = BaseStructure(spec).descriptor()
    _emit_json(cfg, out)
    return 0


def _reference_json(spec: SurfaceSpec, i: int) -> dict:
    ref = reference_path(spec, i)
    return {"path": ref.to_json(), "convention": REFERENCE_NOTE}


def cmd_wind(cfg: RunConfig, args) -> int:
    spec, path = _load_spec(cfg), _load_path(cfg)
    problem = admissibility_violation(spec, path)
    if problem is not None:
        raise DomainError(f"path is not admissible: {problem}")
    i = path.index
    w = winding_number(path, reference_path(spec, i), spec.tol)
    _emit_json(
        cfg,
        {
            "target": list(path.target),
            "winding": w,
            "strongly_admissible": strong_admissibility_violation(spec, path) is None,
            "reference": _reference_json(spec, i),
        },
    )
    return 0


def cmd_transform(cfg: RunConfig, args) -> int:
    spec, path = _load_spec(cfg), _load_path(cfg)
    problem = strong_admissibility_violation(spec, path)
    if problem is not None:
        if not problem.startswith("not strongly admissible"):
            problem = f"not strongly admissible: {problem}"
        raise DomainError(problem)
    brane = transform_sphere_brane(spec, path)
    out = brane.to_json()
    out["reference"] = _reference_json(spec, path.index)
    _emit_json(cfg, out)
    return 0


def cmd_hms(cfg: RunConfig, args) -> int:
    n = cfg.n
    ok = hms_check(n)
    lines = [f"A_{n}: Floer cohomology of the spheres vs Ext of O_E(-1) on exceptional curves", ""]
    lines.append(format_tables(n))
    lines.append("")
    lines.append(f"pairs compared: {n * n}")
    lines.append("PASS" if ok else "FAIL")
    _emit(cfg, "\n".join(lines))
    return 0 if ok else 2


def cmd_twist(cfg: RunConfig, args) -> int:
    n = cfg.n
    try:
        coords = tuple(int(x) for x in args.k_class.split(","))
    except ValueError:
        raise InputError("--class must be comma-separated integers") from None
    if len(coords) != n:
        raise InputError(f"--class needs {n} entries")
    if not 1 <= args.i <= n:
        raise InputError(f"--i must lie in 1..{n}")
    out = spherical_twist(args.i, KClass(coords), n)
    _emit_json(
        cfg,
        {"n": n, "i": args.i, "class": list(coords), "result": list(out.coords),
         "euler_form": euler_form(n).tolist()},
    )
    return 0


def cmd_plot(cfg: RunConfig, args) -> int:
    spec = _load_spec(cfg)
    path = _load_path(cfg) if "path" in cfg.inputs else None
    if path is not None:
        problem = admissibility_violation(spec, path)
        if problem is not None:
            raise DomainError(f"path is not admissible: {problem}")
    _emit(cfg, base_diagram_svg(spec, path))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="syzmirror", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", type=Path, help="write to this file instead of stdout")
    common.add_argument("--tol", type=float, help="tolerance (default: SYZ_TOL or 1e-9)")
    common.add_argument("--pretty", action="store_true", help="indented JSON")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fan", parents=[common], help="A_n fan or fan over a triangulation")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--n", type=int)
    g.add_argument("--triangulation", type=Path)
    p.set_defaults(func=cmd_fan)

    p = sub.add_parser("classify", parents=[common], help="classify the fiber over (s, lambda)")
    p.add_argument("--roots", type=Path, required=True)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--lam", type=float, required=True)
    p.add_argument("--charts", action="store_true", help="include strip/chart descriptors")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("wind", parents=[common], help="winding number of a lifted path")
    p.add_argument("--roots", type=Path, required=True)
    p.add_argument("--path", type=Path, required=True)
    p.set_defaults(func=cmd_wind)

    p = sub.add_parser("transform", parents=[common], help="mirror B-brane of a sphere brane")
    p.add_argument("--roots", type=Path, required=True)
    p.add_argument("--path", type=Path, required=True)
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("hms", parents=[common], help="compare hom tables on both sides")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_hms)

    p = sub.add_parser("twist", parents=[common], help="spherical twist on K-theory")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--class", dest="k_class", required=True, help="e.g. 1,0,0")
    p.set_defaults(func=cmd_twist)

    p = sub.add_parser("plot-base", aliases=["plot"], parents=[common], help="SVG of the base and a path")
    p.add_argument("--roots", type=Path, required=True)
    p.add_argument("--path", type=Path)
    p.set_defaults(func=cmd_plot)
    return parser


_FILE_ARGS = ("roots", "path", "triangulation")


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    try:
        inputs = {k: getattr(args, k) for k in _FILE_ARGS if getattr(args, k, None) is not None}
        cfg = RunConfig(
            command=args.command,
            inputs=inputs,
            output=args.output,
            tol=args.tol,
            n=getattr(args, "n", None),
            pretty=args.pretty,
        )
        return args.func(cfg, args)
    except (InputError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
