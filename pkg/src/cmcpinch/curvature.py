"""Pointwise curvature, support function, and the pinching gap.

For a profile point with unit tangent (x', z') and outward normal
N = (-z', x') rotated into the surface normal, the principal curvatures
of the revolved surface are

    k1 = x' z'' - x'' z'        (meridian direction)
    k2 = z' / x                 (parallel direction)

and k1 + k2 = H identically.  The support function u = <position, N>
restricted to the profile plane is u = x' z - x z'.  The quantities
derived from these:

    lambda1 = 1 + k1 u,  lambda2 = 1 + k2 u
        eigenvalues of the Hessian of |position|^2 / 2 on the surface
    phi_sq = (k1 - k2)^2 / 2
        squared norm of the traceless second fundamental form
    gap = (2 + (k1 + k2) u)^2 / 2 - phi_sq u^2 = 2 lambda1 lambda2
        the pinching quantity; gap >= 0 is the pinching inequality

A sphere of radius rho tangent from inside has k1 = k2 = 1/rho and
u = -rho, which gives gap = 0: spheres sit exactly on the equality case.
"""
from __future__ import annotations

from dataclasses import dataclass

from .delaunay import DelaunayParams, GeneratrixState


@dataclass(frozen=True)
class PointAnalysis:
    s: float
    k1: float
    k2: float
    mean_curv: float
    support: float
    lambda1: float
    lambda2: float
    trace_sum: float
    phi_sq: float
    gap: float


def principal_curvatures(st: GeneratrixState) -> tuple[float, float]:
    k1 = st.dx * st.ddz - st.ddx * st.dz
    k2 = st.dz / st.x
    return k1, k2


def support_function(st: GeneratrixState) -> float:
    """u = <position, normal> for the profile point st."""
    return st.dx * st.z - st.x * st.dz


def hessian_eigenvalues(st: GeneratrixState) -> tuple[float, float]:
    k1, k2 = principal_curvatures(st)
    u = support_function(st)
    return 1.0 + k1 * u, 1.0 + k2 * u


def assemble_analysis(s: float, k1: float, k2: float, u: float) -> PointAnalysis:
    """Build a PointAnalysis from raw curvatures and support value.

    Split out from analyze_point so non-Delaunay configurations (for
    example a sphere with k1 = k2 = 1/rho, u = -rho) can be fed through
    the same gap arithmetic.
    """
    mean_curv = k1 + k2
    lambda1 = 1.0 + k1 * u
    lambda2 = 1.0 + k2 * u
    phi_sq = 0.5 * (k1 - k2) ** 2
    gap = 0.5 * (2.0 + mean_curv * u) ** 2 - phi_sq * u * u
    return PointAnalysis(s=s, k1=k1, k2=k2, mean_curv=mean_curv, support=u,
                         lambda1=lambda1, lambda2=lambda2,
                         trace_sum=lambda1 + lambda2, phi_sq=phi_sq, gap=gap)


def analyze_point(params: DelaunayParams, st: GeneratrixState) -> PointAnalysis:
    """Curvature and gap data at one profile point of params.

    params is the surface st was evaluated on; mean_curv in the result
    reproduces params.H up to rounding.
    """
    k1, k2 = principal_curvatures(st)
    return assemble_analysis(st.s, k1, k2, support_function(st))
