"""Free boundary portions in a ball and the pinching verdict.

A portion of a Delaunay surface between arc-length values -sb and +sb
meets the sphere of radius R0 = |(x(sb), z(sb))| orthogonally exactly
when the support function vanishes at sb.  With z'(sb) != 0 that is the
same as a zero of

    g(s) = x(s) - (x'(s) / z'(s)) z(s),

since u = x' z - x z' = -z' g.  This module locates such zeros, builds
the resulting portion, checks the pointwise pinching gap over it, and
produces the sequence of points outside the portion where the gap goes
negative.

Unduloid dichotomy (0 < B < 1).  Let s0 = arccos(B) / H be the first
positive zero of x'' (the inflection of the profile radius) and
z0 = (1 - B^2) / (H B).  Then g(s0) <= 0 exactly when z(s0) >= z0, and:

* z(s0) <  z0: g > 0 on (0, s0]; no orthogonal crossing, no portion.
* z(s0) >= z0: g crosses zero at a unique sb in (0, s0], giving a free
  boundary portion on [-sb, sb].

Nodoid case (B > 1).  On the inner branch (0, r0) with
r0 = arccos(1/B) / H, g decreases from (B - 1)/H > 0 to -infinity, so a
root rb always exists and the portion is [-rb, rb].

Violation sequence (unduloid, B > 0).  At t_n = (2 n pi - arccos B) / H
the meridian curvature contribution gives lambda1 = 1 exactly, while
lambda2 = B H (B/H - z(t_n)).  Since z(t_n) increases without bound,
lambda2 and hence the gap = 2 lambda1 lambda2 eventually go negative:
the pinching inequality cannot hold on arbitrarily tall portions.  n0 is
the first index where z(t_n) > B/H.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple, Optional

import numpy as np

from .curvature import analyze_point, support_function
from .delaunay import (CYLINDER, NODOID, UNDULOID, DelaunayParams,
                       GeneratrixState, eval_state, z_many, z_of,
                       _dz_integrand)
from .numerics import (DEFAULT_QUADRATURE, DEFAULT_ROOT, IterationLimitError,
                       QuadratureConfig, RootConfig, find_root, integrate)

VERDICT_PINCHED = "PinchedFreeBoundaryPortion"
VERDICT_NO_ORTHOGONAL = "NoOrthogonalIntersection"
VERDICT_CYLINDER = "Cylinder"
VERDICT_INVALID = "Invalid"

VIOLATION_SCAN_CAP = 10 ** 6


class NoRootError(ValueError):
    """The requested orthogonal-crossing root does not exist."""


class EnclosureError(RuntimeError):
    """A sampled portion point fell outside the bounding ball."""


class ViolationPoint(NamedTuple):
    n: int
    t: float
    lambda2: float
    gap: float


@dataclass(frozen=True)
class FreeBoundaryPortion:
    """A symmetric profile arc meeting its bounding sphere orthogonally."""

    s_bar: float
    R0: float
    scaled_params: DelaunayParams
    min_gap: float
    orthogonality_residual: float


@dataclass(frozen=True)
class AnalysisReport:
    params: DelaunayParams
    verdict: str
    s0: Optional[float] = None
    r0: Optional[float] = None
    z0: Optional[float] = None
    z_at_s0: Optional[float] = None
    portion: Optional[FreeBoundaryPortion] = None
    violations: list[ViolationPoint] = field(default_factory=list)
    n0: Optional[int] = None


def g_function(st: GeneratrixState) -> float:
    """g = x - (x'/z') z; zero iff the support function is zero there."""
    if st.dz == 0.0:
        raise ValueError("g is undefined where z' = 0")
    return st.x - (st.dx / st.dz) * st.z


def s0(params: DelaunayParams) -> float:
    """First positive zero of x'' for an unduloid: arccos(B) / H."""
    if params.family != UNDULOID:
        raise ValueError("s0 is defined for unduloids only")
    return math.acos(params.B) / params.H


def z0(params: DelaunayParams) -> float:
    """Height threshold (1 - B^2) / (H B) of the unduloid dichotomy."""
    if params.family != UNDULOID:
        raise ValueError("z0 is defined for unduloids only")
    return (1.0 - params.B * params.B) / (params.H * params.B)


def _g_of_s(params: DelaunayParams, quad_cfg: QuadratureConfig):
    def g(s: float) -> float:
        return g_function(eval_state(params, s, quad_cfg))
    return g


def find_sbar(params: DelaunayParams,
              root_cfg: RootConfig = DEFAULT_ROOT,
              quad_cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Orthogonal-crossing arc length sb in (0, s0] for an unduloid.

    Raises NoRootError when z(s0) < z0, which is exactly the case g > 0
    throughout (0, s0].  The root search runs to bracket collapse
    (f_tol is not used for early exit) so sb carries x_tol accuracy;
    downstream radii inherit it.
    """
    s_top = s0(params)
    if z_of(params, s_top, quad_cfg) < z0(params):
        raise NoRootError(
            "no orthogonal sphere crossing: z(s0) < (1 - B^2)/(H B)")
    collapse = replace(root_cfg, f_tol=0.0)
    return find_root(_g_of_s(params, quad_cfg), 0.0, s_top, collapse)


def nodoid_r0(params: DelaunayParams) -> float:
    """End of the inner nodoid branch: arccos(1/B) / H, where z' = 0."""
    if params.family != NODOID:
        raise ValueError("r0 is defined for nodoids only")
    return math.acos(1.0 / params.B) / params.H


def nodoid_find_rbar(params: DelaunayParams,
                     root_cfg: RootConfig = DEFAULT_ROOT,
                     quad_cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Orthogonal-crossing arc length rb in (0, r0) for a nodoid.

    g(0) = (B - 1)/H > 0 and g -> -infinity approaching r0, so a root
    always exists; the upper bracket end is walked toward r0 until g
    turns negative.
    """
    r_top = nodoid_r0(params)
    g = _g_of_s(params, quad_cfg)
    hi = r_top * (1.0 - 1e-3)
    for _ in range(60):
        if g(hi) <= 0.0:
            break
        hi = r_top - 0.5 * (r_top - hi)
    else:
        raise NoRootError("could not bracket the nodoid crossing below r0")
    collapse = replace(root_cfg, f_tol=0.0)
    return find_root(g, 0.0, hi, collapse)


def check_profile_conditions(st: GeneratrixState) -> tuple[bool, bool, bool]:
    """Pointwise sufficient conditions (c1, c2, c3) for the gap bound.

    c1: z' != 0 and x'' g >= -1
    c2: z' == 0 (within 1e-12) and z z'' >= -1
    c3: -x x'^2 <= z' x' z

    (c1 or c2) together with c3 imply gap >= 0 at the point.
    """
    on_zero_set = abs(st.dz) < 1e-12
    if on_zero_set:
        c1 = False
        c2 = st.z * st.ddz >= -1.0
    else:
        c1 = st.ddx * g_function(st) >= -1.0
        c2 = False
    c3 = -st.x * st.dx * st.dx <= st.dz * st.dx * st.z
    return c1, c2, c3


def _golden_min(fun, lo: float, hi: float, iterations: int = 80) -> float:
    # golden-section refinement; returns the smallest sampled value
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc = fun(c)
    fd = fun(d)
    best = min(fc, fd)
    for _ in range(iterations):
        if b - a < 1e-13:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = fun(d)
        best = min(best, fc, fd)
    return best


def build_portion(params: DelaunayParams,
                  root_cfg: RootConfig = DEFAULT_ROOT,
                  quad_cfg: QuadratureConfig = DEFAULT_QUADRATURE,
                  n_samples: int = 2048) -> FreeBoundaryPortion:
    """Locate the crossing, measure R0, and scan the gap over the portion.

    The gap is sampled on a uniform grid of n_samples points over
    [-sb, sb], then refined around the grid minimum by golden section.
    Every sample is checked to lie inside the ball of radius R0 (1e-9
    relative tolerance); a point outside raises EnclosureError since the
    construction guarantees containment.
    """
    family = params.family
    if family == UNDULOID:
        sb = find_sbar(params, root_cfg, quad_cfg)
    elif family == NODOID:
        sb = nodoid_find_rbar(params, root_cfg, quad_cfg)
    else:
        raise ValueError("a cylinder has no orthogonal sphere crossing")

    boundary = eval_state(params, sb, quad_cfg)
    r0 = math.hypot(boundary.x, boundary.z)
    residual = abs(support_function(boundary))

    ss = np.linspace(-sb, sb, n_samples)
    zs = z_many(params, ss, quad_cfg)
    limit = r0 * r0 * (1.0 + 1e-9)
    gaps = np.empty(n_samples)
    for i in range(n_samples):
        st = eval_state(params, float(ss[i]), quad_cfg, z=float(zs[i]))
        if st.x * st.x + st.z * st.z > limit:
            raise EnclosureError(
                f"portion sample at s={st.s!r} lies outside radius {r0!r}")
        gaps[i] = analyze_point(params, st).gap

    min_gap = float(gaps.min())
    i_min = int(gaps.argmin())
    lo = float(ss[max(i_min - 1, 0)])
    hi = float(ss[min(i_min + 1, n_samples - 1)])

    def gap_at(s: float) -> float:
        return analyze_point(params, eval_state(params, s, quad_cfg)).gap

    min_gap = min(min_gap, _golden_min(gap_at, lo, hi))

    scaled = DelaunayParams(params.H * r0, params.B)
    return FreeBoundaryPortion(s_bar=sb, R0=r0, scaled_params=scaled,
                               min_gap=min_gap,
                               orthogonality_residual=residual)


def scale_to_unit_ball(portion: FreeBoundaryPortion,
                       params: DelaunayParams) -> tuple[DelaunayParams, float]:
    """Parameters and boundary arc length after dilation by 1/R0.

    The dilated surface has mean curvature H R0, the same B, and meets
    the unit sphere at arc length sb / R0.
    """
    return (DelaunayParams(params.H * portion.R0, params.B),
            portion.s_bar / portion.R0)


def _violation_prereqs(params: DelaunayParams) -> None:
    if params.family != UNDULOID or params.B == 0.0:
        raise ValueError("the violation sequence needs an unduloid with B > 0")


def violation_points(params: DelaunayParams, count: int,
                     quad_cfg: QuadratureConfig = DEFAULT_QUADRATURE
                     ) -> list[ViolationPoint]:
    """First `count` members of the violation sequence t_n.

    t_n = (2 n pi - arccos B) / H.  Heights are advanced by the exact
    per-period increment of z, so one long quadrature (to t_1) plus one
    period quadrature serve every n.
    """
    _violation_prereqs(params)
    if count < 1:
        raise ValueError("count must be at least 1")
    acb = math.acos(params.B)
    period = 2.0 * math.pi / params.H
    t1 = (2.0 * math.pi - acb) / params.H
    z1 = z_of(params, t1, quad_cfg)
    z_per_period = integrate(_dz_integrand(params), t1, t1 + period, quad_cfg)
    out = []
    for n in range(1, count + 1):
        t_n = (2.0 * math.pi * n - acb) / params.H
        z_n = z1 + (n - 1) * z_per_period
        st = eval_state(params, t_n, quad_cfg, z=z_n)
        pa = analyze_point(params, st)
        out.append(ViolationPoint(n=n, t=t_n, lambda2=pa.lambda2, gap=pa.gap))
    return out


def find_n0(params: DelaunayParams,
            quad_cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> int:
    """Smallest n with z(t_n) > B/H, i.e. the first negative-gap index."""
    _violation_prereqs(params)
    acb = math.acos(params.B)
    period = 2.0 * math.pi / params.H
    t1 = (2.0 * math.pi - acb) / params.H
    z1 = z_of(params, t1, quad_cfg)
    z_per_period = integrate(_dz_integrand(params), t1, t1 + period, quad_cfg)
    threshold = params.B / params.H
    for n in range(1, VIOLATION_SCAN_CAP + 1):
        if z1 + (n - 1) * z_per_period > threshold:
            return n
    raise IterationLimitError(
        f"no violation index found with n <= {VIOLATION_SCAN_CAP}")


def classify(params: DelaunayParams,
             root_cfg: RootConfig = DEFAULT_ROOT,
             quad_cfg: QuadratureConfig = DEFAULT_QUADRATURE,
             n_samples: int = 2048) -> AnalysisReport:
    """Full analysis of one parameter pair.

    Cylinders never cross a centred sphere orthogonally (u = -1/H is
    constant), unduloids go through the z(s0) vs z0 dichotomy, nodoids
    always produce a portion.  For a pinched unduloid the report also
    carries the violation sequence through n0 + 2.
    """
    family = params.family
    if family == CYLINDER:
        return AnalysisReport(params=params, verdict=VERDICT_CYLINDER)

    if family == UNDULOID:
        s_top = s0(params)
        z_thresh = z0(params)
        z_at_top = z_of(params, s_top, quad_cfg)
        if z_at_top < z_thresh:
            return AnalysisReport(params=params,
                                  verdict=VERDICT_NO_ORTHOGONAL,
                                  s0=s_top, z0=z_thresh, z_at_s0=z_at_top)
        portion = build_portion(params, root_cfg, quad_cfg, n_samples)
        n0 = find_n0(params, quad_cfg)
        violations = violation_points(params, n0 + 2, quad_cfg)
        return AnalysisReport(params=params, verdict=VERDICT_PINCHED,
                              s0=s_top, z0=z_thresh, z_at_s0=z_at_top,
                              portion=portion, violations=violations, n0=n0)

    portion = build_portion(params, root_cfg, quad_cfg, n_samples)
    return AnalysisReport(params=params, verdict=VERDICT_PINCHED,
                          r0=nodoid_r0(params), portion=portion)
