"""Command line interface.

Subcommands:

  analyze   verdict report for one (H, B) pair, text or JSON
  profile   per-point curvature and gap table along the profile, CSV
  scan      verdict grid over rectangular (H, B) ranges, CSV
  mesh      OBJ export of the free boundary portion
  verify    run the acceptance checks

Exit codes: 0 success, 1 verification failure, 2 invalid input,
3 numerical failure, 4 no portion exists for the requested surface.

Numeric tolerances resolve in priority order: command line flag, then
CMCPINCH_* environment variable, then library default.  Floating point
values are serialized with 12 significant digits.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .curvature import analyze_point
from .delaunay import NODOID, UNDULOID, DelaunayParams, eval_state, z_many
from .freeboundary import (VERDICT_INVALID, AnalysisReport, EnclosureError,
                           NoRootError, classify, find_sbar, g_function,
                           nodoid_find_rbar)
from .mesh import export_obj_scene, revolve, sphere
from .numerics import (IterationLimitError, NoSignChangeError,
                       QuadratureConfig, RootConfig, SubdivisionLimitError)
from .verify import run_checks

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INVALID_INPUT = 2
EXIT_NUMERICAL_FAILURE = 3
EXIT_NO_PORTION = 4

ENV_PREFIX = "CMCPINCH_"


@dataclass(frozen=True)
class CliConfig:
    quad: QuadratureConfig
    root: RootConfig


def _fmt(v: float) -> str:
    return f"{v:.12g}"


def _round12(v: Optional[float]) -> Optional[float]:
    return None if v is None else float(f"{v:.12g}")


def _env_or(args_value, env_name: str, default, cast):
    if args_value is not None:
        return args_value
    raw = os.environ.get(ENV_PREFIX + env_name)
    if raw is not None:
        return cast(raw)
    return default


def _resolve_config(args: argparse.Namespace) -> CliConfig:
    quad = QuadratureConfig(
        abs_tol=_env_or(args.quad_abs_tol, "QUAD_ABS_TOL", 1e-10, float),
        rel_tol=_env_or(args.quad_rel_tol, "QUAD_REL_TOL", 1e-10, float),
        max_subdivisions=_env_or(args.quad_max_subdivisions,
                                 "QUAD_MAX_SUBDIVISIONS", 100_000, int))
    root = RootConfig(
        x_tol=_env_or(args.root_x_tol, "ROOT_X_TOL", 1e-12, float),
        f_tol=_env_or(args.root_f_tol, "ROOT_F_TOL", 1e-10, float),
        max_iterations=_env_or(args.root_max_iterations,
                               "ROOT_MAX_ITERATIONS", 200, int))
    return CliConfig(quad=quad, root=root)


def _open_output(path: Optional[str]):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", newline=""), True


def _report_payload(rep: AnalysisReport) -> dict:
    p = rep.portion
    payload = {
        "H": _round12(rep.params.H),
        "B": _round12(rep.params.B),
        "family": rep.params.family,
        "verdict": rep.verdict,
        "s0": _round12(rep.s0),
        "r0": _round12(rep.r0),
        "z0": _round12(rep.z0),
        "zAtS0": _round12(rep.z_at_s0),
        "sBar": _round12(p.s_bar) if p else None,
        "R0": _round12(p.R0) if p else None,
        "scaledH": _round12(p.scaled_params.H) if p else None,
        "sBarScaled": _round12(p.s_bar / p.R0) if p else None,
        "minGap": _round12(p.min_gap) if p else None,
        "orthogonalityResidual":
            _round12(p.orthogonality_residual) if p else None,
        "n0": rep.n0,
        "violations": [
            {"n": v.n, "t": _round12(v.t),
             "lambda2": _round12(v.lambda2), "gap": _round12(v.gap)}
            for v in rep.violations
        ],
    }
    return payload


def _print_report_text(payload: dict, out) -> None:
    for key in ("H", "B", "family", "verdict", "s0", "r0", "z0", "zAtS0",
                "sBar", "R0", "scaledH", "sBarScaled", "minGap",
                "orthogonalityResidual", "n0"):
        value = payload[key]
        if value is None:
            continue
        if isinstance(value, float):
            out.write(f"{key}: {_fmt(value)}\n")
        else:
            out.write(f"{key}: {value}\n")
    if payload["violations"]:
        out.write("violations:\n")
        for v in payload["violations"]:
            out.write(f"  n={v['n']} t={_fmt(v['t'])} "
                      f"lambda2={_fmt(v['lambda2'])} gap={_fmt(v['gap'])}\n")


def cmd_analyze(args: argparse.Namespace) -> int:
    cfg = _resolve_config(args)
    params = DelaunayParams(args.H, args.B)
    rep = classify(params, cfg.root, cfg.quad)
    payload = _report_payload(rep)
    out, close = _open_output(args.output)
    try:
        if args.format == "json":
            out.write(json.dumps(payload, indent=2) + "\n")
        else:
            _print_report_text(payload, out)
    finally:
        if close:
            out.close()
    return EXIT_OK


PROFILE_COLUMNS = ["s", "x", "z", "dx", "dz", "ddx", "ddz", "k1", "k2", "u",
                   "lambda1", "lambda2", "phiSq", "gap", "g"]


def cmd_profile(args: argparse.Namespace) -> int:
    cfg = _resolve_config(args)
    params = DelaunayParams(args.H, args.B)
    if args.n < 16:
        raise ValueError("profile needs at least 16 samples")
    if not args.s_max > args.s_min:
        raise ValueError("need --s-max > --s-min")
    ss = np.linspace(args.s_min, args.s_max, args.n)
    zs = z_many(params, ss, cfg.quad)
    out, close = _open_output(args.output)
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(PROFILE_COLUMNS)
        for i in range(args.n):
            st = eval_state(params, float(ss[i]), cfg.quad, z=float(zs[i]))
            pa = analyze_point(params, st)
            if abs(st.dz) < 1e-12:
                g_cell = ""
            else:
                g_cell = _fmt(g_function(st))
            writer.writerow([
                _fmt(st.s), _fmt(st.x), _fmt(st.z), _fmt(st.dx),
                _fmt(st.dz), _fmt(st.ddx), _fmt(st.ddz), _fmt(pa.k1),
                _fmt(pa.k2), _fmt(pa.support), _fmt(pa.lambda1),
                _fmt(pa.lambda2), _fmt(pa.phi_sq), _fmt(pa.gap), g_cell])
    finally:
        if close:
            out.close()
    return EXIT_OK


SCAN_COLUMNS = ["H", "B", "family", "verdict", "zAtS0MinusZ0", "sBar", "R0",
                "minGap"]


def cmd_scan(args: argparse.Namespace) -> int:
    cfg = _resolve_config(args)
    if args.H_steps < 1 or args.B_steps < 1:
        raise ValueError("need at least one step in each direction")
    hs = np.linspace(args.H_min, args.H_max, args.H_steps)
    bs = np.linspace(args.B_min, args.B_max, args.B_steps)
    out, close = _open_output(args.output)
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(SCAN_COLUMNS)
        for h in hs:
            for b in bs:
                row = [_fmt(float(h)), _fmt(float(b))]
                try:
                    params = DelaunayParams(float(h), float(b))
                except ValueError:
                    writer.writerow(row + ["", VERDICT_INVALID,
                                           "", "", "", ""])
                    continue
                rep = classify(params, cfg.root, cfg.quad)
                dichotomy = ""
                if rep.z_at_s0 is not None and rep.z0 is not None:
                    dichotomy = _fmt(rep.z_at_s0 - rep.z0)
                p = rep.portion
                writer.writerow(row + [
                    params.family, rep.verdict, dichotomy,
                    _fmt(p.s_bar) if p else "",
                    _fmt(p.R0) if p else "",
                    _fmt(p.min_gap) if p else ""])
    finally:
        if close:
            out.close()
    return EXIT_OK


def cmd_mesh(args: argparse.Namespace) -> int:
    cfg = _resolve_config(args)
    params = DelaunayParams(args.H, args.B)
    if args.resolution < 8:
        raise ValueError("mesh resolution must be at least 8")
    family = params.family
    try:
        if family == UNDULOID:
            sb = find_sbar(params, cfg.root, cfg.quad)
        elif family == NODOID:
            sb = nodoid_find_rbar(params, cfg.root, cfg.quad)
        else:
            print("error: a cylinder never meets a centred sphere "
                  "orthogonally", file=sys.stderr)
            return EXIT_NO_PORTION
    except NoRootError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_PORTION
    boundary = eval_state(params, sb, cfg.quad)
    r0 = math.hypot(boundary.x, boundary.z)
    portion_mesh = revolve(params, -sb, sb, args.resolution,
                           args.resolution, cfg.quad)
    objects = [("portion", portion_mesh)]
    if args.include_sphere:
        objects.append(("sphere", sphere(r0, max(args.resolution // 2, 2),
                                         args.resolution)))
    with open(args.out, "wb") as sink:
        export_obj_scene(objects, sink)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    cfg = _resolve_config(args)
    results = run_checks(cfg.quad, cfg.root)
    out = sys.stdout
    all_passed = all(r.passed for r in results)
    if args.format == "json":
        for r in results:
            out.write(json.dumps({
                "id": r.check_id,
                "description": r.description,
                "passed": r.passed,
                "worstRatio": (None if math.isinf(r.worst_ratio)
                               else _round12(r.worst_ratio)),
                "detail": r.detail,
            }) + "\n")
    else:
        for r in results:
            status = "PASS" if r.passed else "FAIL"
            ratio = ("inf" if math.isinf(r.worst_ratio)
                     else f"{r.worst_ratio:.3e}")
            line = f"{r.check_id:<5} {status}  ratio={ratio}  {r.description}"
            if r.detail:
                line += f"  [{r.detail}]"
            out.write(line + "\n")
        passed = sum(1 for r in results if r.passed)
        out.write(f"{passed}/{len(results)} checks passed\n")
    return EXIT_OK if all_passed else EXIT_VERIFY_FAILED


def _add_tolerance_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--quad-abs-tol", type=float, default=None)
    p.add_argument("--quad-rel-tol", type=float, default=None)
    p.add_argument("--quad-max-subdivisions", type=int, default=None)
    p.add_argument("--root-x-tol", type=float, default=None)
    p.add_argument("--root-f-tol", type=float, default=None)
    p.add_argument("--root-max-iterations", type=int, default=None)


def _add_params_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--H", type=float, required=True,
                   help="mean curvature, H > 0")
    p.add_argument("--B", type=float, required=True,
                   help="shape parameter, B >= 0 and B != 1")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cmcpinch",
        description="Delaunay free boundary portions in a ball and the "
                    "pinching gap")
    sub = parser.add_subparsers(dest="command", required=True)

    p_analyze = sub.add_parser("analyze", help="verdict for one (H, B)")
    _add_params_flags(p_analyze)
    p_analyze.add_argument("--format", choices=("text", "json"),
                           default="text")
    p_analyze.add_argument("--output", default=None,
                           help="file path or - for stdout")
    _add_tolerance_flags(p_analyze)
    p_analyze.set_defaults(fn=cmd_analyze)

    p_profile = sub.add_parser("profile",
                               help="CSV table along the profile")
    _add_params_flags(p_profile)
    p_profile.add_argument("--s-min", type=float, required=True)
    p_profile.add_argument("--s-max", type=float, required=True)
    p_profile.add_argument("--n", type=int, default=256,
                           help="sample count, at least 16")
    p_profile.add_argument("--output", default=None)
    _add_tolerance_flags(p_profile)
    p_profile.set_defaults(fn=cmd_profile)

    p_scan = sub.add_parser("scan", help="CSV verdict grid over (H, B)")
    p_scan.add_argument("--H-min", type=float, required=True)
    p_scan.add_argument("--H-max", type=float, required=True)
    p_scan.add_argument("--H-steps", type=int, required=True)
    p_scan.add_argument("--B-min", type=float, required=True)
    p_scan.add_argument("--B-max", type=float, required=True)
    p_scan.add_argument("--B-steps", type=int, required=True)
    p_scan.add_argument("--output", default=None)
    _add_tolerance_flags(p_scan)
    p_scan.set_defaults(fn=cmd_scan)

    p_mesh = sub.add_parser("mesh", help="OBJ export of the portion")
    _add_params_flags(p_mesh)
    p_mesh.add_argument("--out", required=True, help="output OBJ path")
    p_mesh.add_argument("--resolution", type=int, default=64)
    p_mesh.add_argument("--include-sphere", action="store_true",
                        help="also emit the bounding sphere as an object")
    _add_tolerance_flags(p_mesh)
    p_mesh.set_defaults(fn=cmd_mesh)

    p_verify = sub.add_parser("verify", help="run the acceptance checks")
    p_verify.add_argument("--format", choices=("text", "json"),
                          default="text")
    _add_tolerance_flags(p_verify)
    p_verify.set_defaults(fn=cmd_verify)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else EXIT_OK
    try:
        return args.fn(args)
    except NoRootError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_PORTION
    except (ValueError, NoSignChangeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID_INPUT
    except (SubdivisionLimitError, IterationLimitError, EnclosureError,
            OverflowError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL_FAILURE


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
