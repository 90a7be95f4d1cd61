"""Acceptance checks AC1 through AC16.

Each check compares computed quantities against frozen reference values
or exact identities and reports a worst residual *ratio*: the largest
observed residual divided by that subcheck's tolerance.  A ratio at or
below 1 passes.  Structural requirements (verdict strings, mesh
topology) contribute ratio 0 when satisfied and infinity when not.

The checks deliberately follow independent routes where the point is
redundancy: AC14 re-integrates with a fixed-grid composite Simpson rule
that shares no code with the adaptive integrator, AC8 compares closed
forms against finite differences, AC16 re-parses the exported OBJ text
rather than trusting the arrays it came from.
"""
from __future__ import annotations

import io
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .curvature import analyze_point, support_function
from .delaunay import DelaunayParams, eval_state, z_many, z_of, _dz_integrand
from .freeboundary import (VERDICT_PINCHED, check_profile_conditions,
                           classify, find_n0, g_function, nodoid_r0, s0,
                           violation_points, z0)
from .mesh import export_obj, revolve
from .numerics import (DEFAULT_QUADRATURE, DEFAULT_ROOT, QuadratureConfig,
                       RootConfig, integrate)

EXAMPLE = DelaunayParams(0.1, 0.9)
NODOID_EXAMPLE = DelaunayParams(1.0, 1.5)

# reference values for the (H, B) = (0.1, 0.9) worked example
S0_REF = 4.51026
Z0_REF = 19.0 / 9.0
Z_AT_S0_REF = 2.71697

# z(2.0) from a 10^6-panel composite Simpson rule, cross-checked at
# build time against an independent adaptive integrator
Z2_ORACLE_PAIRS = [
    ((0.1, 0.3), 1.997602923785724),
    ((0.1, 0.9), 1.5430733456176617),
    ((0.1, 1.5), -1.8903313685563665),
    ((1.0, 0.3), 1.9397928252889742),
    ((1.0, 0.9), 1.256203318159944),
    ((1.0, 1.5), 0.06574153375893992),
]


@dataclass(frozen=True)
class CheckResult:
    check_id: str
    description: str
    passed: bool
    worst_ratio: float
    detail: str = ""


class _Ratios:
    """Collects residual/tolerance ratios and boolean requirements."""

    def __init__(self) -> None:
        self.worst = 0.0
        self.ok = True

    def bound(self, residual: float, tol: float) -> None:
        ratio = abs(residual) / tol
        if not math.isfinite(ratio):
            ratio = math.inf
        self.worst = max(self.worst, ratio)
        self.ok = self.ok and ratio <= 1.0

    def require(self, condition: bool) -> None:
        if not condition:
            self.worst = math.inf
            self.ok = False

    def result(self, check_id: str, description: str,
               detail: str = "") -> CheckResult:
        return CheckResult(check_id, description, self.ok, self.worst, detail)


class _Context:
    def __init__(self, quad: QuadratureConfig, root: RootConfig) -> None:
        self.quad = quad
        self.root = root
        self._cache: dict = {}

    def _memo(self, key, thunk):
        if key not in self._cache:
            self._cache[key] = thunk()
        return self._cache[key]

    def example_report(self):
        return self._memo("example",
                          lambda: classify(EXAMPLE, self.root, self.quad))

    def nodoid_report(self):
        return self._memo("nodoid",
                          lambda: classify(NODOID_EXAMPLE, self.root,
                                           self.quad))

    def sample_rows(self):
        """1000 random (params, state, analysis) rows over all families."""
        def build():
            rng = np.random.default_rng(20260819)
            rows = []
            for _ in range(1000):
                pick = rng.random()
                if pick < 0.1:
                    b = 0.0
                elif pick < 0.55:
                    b = float(rng.uniform(0.05, 0.9))
                else:
                    b = float(rng.uniform(1.15, 2.5))
                h = float(rng.uniform(0.2, 2.0))
                span = min(6.0, 2.0 * math.pi / h)
                s = float(rng.uniform(-span, span))
                params = DelaunayParams(h, b)
                st = eval_state(params, s, self.quad)
                rows.append((params, st, analyze_point(params, st)))
            return rows
        return self._memo("samples", build)


def _check_s0_reference(ctx: _Context) -> CheckResult:
    val = s0(EXAMPLE)
    r = _Ratios()
    r.bound(val - S0_REF, 1e-4)
    return r.result("AC1", "s0(0.1, 0.9) matches 4.51026 within 1e-4",
                    f"s0={val:.12g}")


def _check_z0_reference(ctx: _Context) -> CheckResult:
    val = z0(EXAMPLE)
    r = _Ratios()
    r.bound(val - Z0_REF, 1e-12)
    return r.result("AC2", "z0(0.1, 0.9) equals 19/9 within 1e-12",
                    f"z0={val:.17g}")


def _check_z_at_s0_reference(ctx: _Context) -> CheckResult:
    val = z_of(EXAMPLE, s0(EXAMPLE), ctx.quad)
    r = _Ratios()
    r.bound(val - Z_AT_S0_REF, 1e-4)
    return r.result("AC3", "z(s0) for (0.1, 0.9) matches 2.71697 within 1e-4",
                    f"z(s0)={val:.12g}")


def _check_example_portion(ctx: _Context) -> CheckResult:
    rep = ctx.example_report()
    r = _Ratios()
    r.require(rep.verdict == VERDICT_PINCHED and rep.portion is not None)
    if rep.portion is None:
        return r.result("AC4", "example portion is pinched and orthogonal",
                        f"verdict={rep.verdict}")
    p = rep.portion
    r.bound(p.orthogonality_residual, 1e-8)
    r.bound(min(p.min_gap, 0.0), 1e-8)
    for sb in (p.s_bar, -p.s_bar):
        st = eval_state(EXAMPLE, sb, ctx.quad)
        r.bound(analyze_point(EXAMPLE, st).gap - 2.0, 1e-6)
    neck = eval_state(EXAMPLE, 0.0, ctx.quad)
    r.bound(analyze_point(EXAMPLE, neck).gap, 1e-10)
    return r.result(
        "AC4",
        "example portion: pinched, |u(sb)| <= 1e-8, minGap >= -1e-8, "
        "boundary gap 2 +- 1e-6, neck gap 0 +- 1e-10",
        f"sBar={p.s_bar:.12g} R0={p.R0:.12g} minGap={p.min_gap:.3e}")


def _check_gap_identity(ctx: _Context) -> CheckResult:
    r = _Ratios()
    for _, _, pa in ctx.sample_rows():
        r.bound(pa.gap - 2.0 * pa.lambda1 * pa.lambda2, 1e-10)
    return r.result("AC5",
                    "gap = 2 lambda1 lambda2 within 1e-10 on 1000 samples")


def _check_cmc_identity(ctx: _Context) -> CheckResult:
    r = _Ratios()
    for params, _, pa in ctx.sample_rows():
        r.bound(pa.mean_curv - params.H, 1e-8)
    return r.result("AC6", "k1 + k2 = H within 1e-8 on the sample set")


def _check_arc_length(ctx: _Context) -> CheckResult:
    r = _Ratios()
    for _, st, _ in ctx.sample_rows():
        r.bound(st.dx * st.dx + st.dz * st.dz - 1.0, 1e-12)
    return r.result("AC7", "x'^2 + z'^2 = 1 within 1e-12 on the sample set")


def _check_derivatives(ctx: _Context) -> CheckResult:
    h = 1e-5
    r = _Ratios()
    for params, st, _ in ctx.sample_rows():
        plus = eval_state(params, st.s + h, ctx.quad, z=0.0)
        minus = eval_state(params, st.s - h, ctx.quad, z=0.0)
        fd_dz = integrate(_dz_integrand(params), st.s - h, st.s + h,
                          ctx.quad) / (2.0 * h)
        for fd, closed in (((plus.x - minus.x) / (2.0 * h), st.dx),
                           ((plus.dx - minus.dx) / (2.0 * h), st.ddx),
                           (fd_dz, st.dz),
                           ((plus.dz - minus.dz) / (2.0 * h), st.ddz)):
            r.bound(fd - closed, 1e-6 * max(1.0, abs(closed)))
    return r.result(
        "AC8", "closed-form x', x'', z', z'' match central differences "
               "(h=1e-5) to 1e-6 relative")


def _check_neck_gap(ctx: _Context) -> CheckResult:
    r = _Ratios()
    for h in (0.1, 1.0):
        for b in np.linspace(0.05, 0.95, 10):
            params = DelaunayParams(h, float(b))
            st = eval_state(params, 0.0, ctx.quad)
            r.bound(analyze_point(params, st).gap, 1e-12)
    return r.result("AC9", "neck gap vanishes within 1e-12 on 20 unduloids")


def _check_cylinder(ctx: _Context) -> CheckResult:
    r = _Ratios()
    for h in (1.0, 0.7):
        params = DelaunayParams(h, 0.0)
        for s in np.linspace(-5.0, 5.0, 50):
            st = eval_state(params, float(s), ctx.quad)
            pa = analyze_point(params, st)
            r.bound(pa.gap, 1e-12)
            r.bound(pa.lambda2, 1e-12)
    return r.result("AC10",
                    "cylinder gap and lambda2 vanish within 1e-12 "
                    "at 100 points")


def _check_violation_sequence(ctx: _Context) -> CheckResult:
    r = _Ratios()
    n0 = find_n0(EXAMPLE, ctx.quad)
    threshold = EXAMPLE.B / EXAMPLE.H
    points = violation_points(EXAMPLE, n0 + 3, ctx.quad)
    acb = math.acos(EXAMPLE.B)
    t_n0 = (2.0 * math.pi * n0 - acb) / EXAMPLE.H
    r.require(z_of(EXAMPLE, t_n0, ctx.quad) > threshold)
    if n0 > 1:
        t_prev = (2.0 * math.pi * (n0 - 1) - acb) / EXAMPLE.H
        r.require(z_of(EXAMPLE, t_prev, ctx.quad) <= threshold)
    r.require(points[n0 - 1].gap < 0.0)
    for pt in points:
        st = eval_state(EXAMPLE, pt.t, ctx.quad)
        pa = analyze_point(EXAMPLE, st)
        r.bound(pa.lambda1 - 1.0, 1e-10)
    return r.result(
        "AC11", "n0 is the first index with z(t_n) > B/H, the gap there is "
                "negative, and lambda1(t_n) = 1 within 1e-10",
        f"n0={n0} gap(t_n0)={points[n0 - 1].gap:.6g}")


def _check_dilation(ctx: _Context) -> CheckResult:
    rep = ctx.example_report()
    r = _Ratios()
    r.require(rep.portion is not None)
    if rep.portion is None:
        return r.result("AC12", "dilation invariance")
    p = rep.portion
    scaled_rep = classify(p.scaled_params, ctx.root, ctx.quad)
    r.require(scaled_rep.verdict == VERDICT_PINCHED
              and scaled_rep.portion is not None)
    if scaled_rep.portion is not None:
        r.bound(scaled_rep.portion.R0 - 1.0, 1e-10)
    ss = np.linspace(-p.s_bar, p.s_bar, 100)
    z_orig = z_many(EXAMPLE, ss, ctx.quad)
    z_scaled = z_many(p.scaled_params, ss / p.R0, ctx.quad)
    for i, s in enumerate(ss):
        pa = analyze_point(EXAMPLE, eval_state(
            EXAMPLE, float(s), ctx.quad, z=float(z_orig[i])))
        pa_scaled = analyze_point(p.scaled_params, eval_state(
            p.scaled_params, float(s) / p.R0, ctx.quad, z=float(z_scaled[i])))
        r.bound(pa.gap - pa_scaled.gap, 1e-9)
    return r.result(
        "AC12", "gaps agree within 1e-9 at 100 corresponding points and the "
                "rescaled portion has R0 = 1 within 1e-10",
        f"scaled H={p.scaled_params.H:.12g}")


def _check_nodoid(ctx: _Context) -> CheckResult:
    rep = ctx.nodoid_report()
    r = _Ratios()
    r.require(rep.verdict == VERDICT_PINCHED and rep.portion is not None)
    if rep.portion is None:
        return r.result("AC13", "nodoid portion", f"verdict={rep.verdict}")
    rb = rep.portion.s_bar
    r_top = nodoid_r0(NODOID_EXAMPLE)
    r.require(0.0 < rb < r_top)
    boundary = eval_state(NODOID_EXAMPLE, rb, ctx.quad)
    r.bound(g_function(boundary), 1e-10)
    ss = np.linspace(-rb, rb, 1000)
    zs = z_many(NODOID_EXAMPLE, ss, ctx.quad)
    for i in range(len(ss)):
        st = eval_state(NODOID_EXAMPLE, float(ss[i]), ctx.quad,
                        z=float(zs[i]))
        r.require(st.ddx > 0.0)
        r.require(st.dx * st.z <= 0.0)
        c1, c2, c3 = check_profile_conditions(st)
        r.require((c1 or c2) and c3)
        pa = analyze_point(NODOID_EXAMPLE, st)
        r.bound(min(pa.gap, 0.0), 1e-8)
    return r.result(
        "AC13", "nodoid (1, 1.5): rb in (0, r0), |g(rb)| <= 1e-10, x'' > 0, "
                "x' z <= 0, profile conditions hold, gap >= -1e-8",
        f"rb={rb:.12g} r0={r_top:.12g}")


def _composite_simpson_z(params: DelaunayParams, s: float,
                         panels: int = 10 ** 6) -> float:
    # fixed-grid oracle, independent of numerics.integrate
    u = np.linspace(0.0, s, 2 * panels + 1)
    c = np.cos(params.H * u)
    vals = (1.0 - params.B * c) / np.sqrt(
        1.0 + params.B * params.B - 2.0 * params.B * c)
    h = s / (2.0 * panels)
    return float(h / 3.0 * (vals[0] + vals[-1] + 4.0 * vals[1::2].sum()
                            + 2.0 * vals[2:-1:2].sum()))


def _check_quadrature_oracle(ctx: _Context) -> CheckResult:
    r = _Ratios()
    for (h, b), frozen in Z2_ORACLE_PAIRS:
        params = DelaunayParams(h, b)
        adaptive = z_of(params, 2.0, ctx.quad)
        simpson = _composite_simpson_z(params, 2.0)
        r.bound(adaptive - simpson, 1e-9)
        # the frozen constant guards against both routes drifting together
        r.bound(simpson - frozen, 1e-9)
    return r.result(
        "AC14", "adaptive z(2.0) matches 1e6-panel composite Simpson "
                "within 1e-9 on six parameter pairs")


def _check_radial_boundary(ctx: _Context) -> CheckResult:
    r = _Ratios()
    for params, rep in ((EXAMPLE, ctx.example_report()),
                        (NODOID_EXAMPLE, ctx.nodoid_report())):
        p = rep.portion
        r.require(p is not None)
        if p is None:
            continue
        st = eval_state(params, p.s_bar, ctx.quad)
        r.bound(p.R0 * abs(st.dx) / st.x - 1.0, 1e-6)
    return r.result(
        "AC15", "the boundary circle is radial: R0 |x'(sb)| / x(sb) = 1 "
                "within 1e-6 for both example portions")


def _parse_obj(text: str):
    vs, vns, faces = [], [], []
    for line in text.splitlines():
        parts = line.split()
        if not parts:
            continue
        if parts[0] == "v":
            vs.append(tuple(float(t) for t in parts[1:4]))
        elif parts[0] == "vn":
            vns.append(tuple(float(t) for t in parts[1:4]))
        elif parts[0] == "f":
            tri = []
            for tok in parts[1:4]:
                v_idx, _, n_idx = tok.partition("//")
                tri.append((int(v_idx), int(n_idx)))
            faces.append(tuple(tri))
    return vs, vns, faces


def _check_mesh_export(ctx: _Context) -> CheckResult:
    rep = ctx.example_report()
    r = _Ratios()
    r.require(rep.portion is not None)
    if rep.portion is None:
        return r.result("AC16", "mesh export")
    p = rep.portion
    n_mer, n_par = 64, 64
    m = revolve(EXAMPLE, -p.s_bar, p.s_bar, n_mer, n_par, ctx.quad)
    sink = io.BytesIO()
    export_obj(m, sink)
    vs, vns, faces = _parse_obj(sink.getvalue().decode("ascii"))
    r.require(len(vs) == len(m.vertices))
    r.require(len(vns) == len(m.normals))
    r.require(len(faces) == len(m.triangles))
    radii = np.linalg.norm(np.array(vs), axis=1)
    r.bound(float(radii.max()) / p.R0 - 1.0, 1e-6)
    first_ring = radii[:n_par]
    last_ring = radii[-n_par:]
    for ring in (first_ring, last_ring):
        r.bound(float(np.abs(ring - p.R0).max()), 1e-6)
    norm_len = np.linalg.norm(np.array(vns), axis=1)
    r.bound(float(np.abs(norm_len - 1.0).max()), 1e-9)
    edges = set()
    for tri in faces:
        idx = [t[0] for t in tri]
        for k in range(3):
            e = (idx[k], idx[(k + 1) % 3])
            edges.add((min(e), max(e)))
    euler = len(vs) - len(edges) + len(faces)
    r.require(euler == 0)
    return r.result(
        "AC16", "OBJ re-parses: boundary rings at radius R0 +- 1e-6, all "
                "vertices inside the ball, unit normals, Euler "
                "characteristic 0",
        f"V={len(vs)} E={len(edges)} F={len(faces)} chi={euler}")


CHECKS: list[tuple[str, Callable[[_Context], CheckResult]]] = [
    ("AC1", _check_s0_reference),
    ("AC2", _check_z0_reference),
    ("AC3", _check_z_at_s0_reference),
    ("AC4", _check_example_portion),
    ("AC5", _check_gap_identity),
    ("AC6", _check_cmc_identity),
    ("AC7", _check_arc_length),
    ("AC8", _check_derivatives),
    ("AC9", _check_neck_gap),
    ("AC10", _check_cylinder),
    ("AC11", _check_violation_sequence),
    ("AC12", _check_dilation),
    ("AC13", _check_nodoid),
    ("AC14", _check_quadrature_oracle),
    ("AC15", _check_radial_boundary),
    ("AC16", _check_mesh_export),
]


def run_checks(quad_cfg: Optional[QuadratureConfig] = None,
               root_cfg: Optional[RootConfig] = None) -> list[CheckResult]:
    """Run every acceptance check; exceptions become failed results."""
    ctx = _Context(quad_cfg or DEFAULT_QUADRATURE, root_cfg or DEFAULT_ROOT)
    results = []
    for check_id, fn in CHECKS:
        try:
            results.append(fn(ctx))
        except Exception as exc:
            results.append(CheckResult(
                check_id, "check aborted", False, math.inf,
                f"{type(exc).__name__}: {exc}"))
    return results
