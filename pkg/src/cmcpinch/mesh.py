"""Triangle meshes of revolved portions and Wavefront OBJ export.

The portion [s_min, s_max] of a profile is revolved around the z axis
into position

    P(s, theta) = (x(s) cos theta, x(s) sin theta, z(s))

with the exact unit normal

    N(s, theta) = (-z'(s) cos theta, -z'(s) sin theta, x'(s)),

which is unit length because the profile is arc-length parametrized.
Meshes are plain numpy arrays; export writes deterministic ASCII OBJ
(9 significant digits, one object per mesh, faces as v//vn triples).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import BinaryIO, Optional, Sequence

import numpy as np

from .delaunay import DelaunayParams, z_many
from .numerics import DEFAULT_QUADRATURE, QuadratureConfig


@dataclass(frozen=True)
class TriangleMesh:
    vertices: np.ndarray   # (n, 3) float64
    normals: np.ndarray    # (n, 3) float64, unit, one per vertex
    triangles: np.ndarray  # (m, 3) int, indices into vertices

    def __post_init__(self) -> None:
        if self.vertices.shape != self.normals.shape:
            raise ValueError("vertices and normals must match in shape")
        if self.triangles.ndim != 2 or self.triangles.shape[1] != 3:
            raise ValueError("triangles must be an (m, 3) index array")


def revolve(params: DelaunayParams, s_min: float, s_max: float,
            n_meridian: int, n_parallel: int,
            quad_cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> TriangleMesh:
    """Mesh the revolved profile over [s_min, s_max].

    n_meridian sample rows run along the profile (including both ends),
    n_parallel columns around the axis.  Triangles are wound so their
    cross products align with N.
    """
    if n_meridian < 2 or n_parallel < 3:
        raise ValueError("need n_meridian >= 2 and n_parallel >= 3")
    if not s_max > s_min:
        raise ValueError("need s_max > s_min")

    ss = np.linspace(s_min, s_max, n_meridian)
    zs = z_many(params, ss, quad_cfg)
    hs = params.H * ss
    q = 1.0 + params.B ** 2 - 2.0 * params.B * np.cos(hs)
    rq = np.sqrt(q)
    xs = rq / params.H
    dxs = params.B * np.sin(hs) / rq
    dzs = (1.0 - params.B * np.cos(hs)) / rq

    theta = 2.0 * math.pi * np.arange(n_parallel) / n_parallel
    ct = np.cos(theta)
    st = np.sin(theta)

    # vertex (i, j) -> row i * n_parallel + j
    vx = np.outer(xs, ct)
    vy = np.outer(xs, st)
    vz = np.repeat(zs, n_parallel).reshape(n_meridian, n_parallel)
    vertices = np.stack((vx, vy, vz), axis=-1).reshape(-1, 3)

    nx = np.outer(-dzs, ct)
    ny = np.outer(-dzs, st)
    nz = np.repeat(dxs, n_parallel).reshape(n_meridian, n_parallel)
    normals = np.stack((nx, ny, nz), axis=-1).reshape(-1, 3)

    tris = []
    for i in range(n_meridian - 1):
        base = i * n_parallel
        for j in range(n_parallel):
            j1 = (j + 1) % n_parallel
            a = base + j
            b = base + n_parallel + j
            c = base + n_parallel + j1
            d = base + j1
            tris.append((a, b, c))
            tris.append((a, c, d))
    triangles = np.array(tris, dtype=np.int64)
    return TriangleMesh(vertices=vertices, normals=normals,
                        triangles=triangles)


def sphere(radius: float, n_lat: int = 32, n_lon: int = 64) -> TriangleMesh:
    """Latitude-longitude sphere mesh centred at the origin."""
    if radius <= 0.0:
        raise ValueError("radius must be positive")
    if n_lat < 2 or n_lon < 3:
        raise ValueError("need n_lat >= 2 and n_lon >= 3")

    verts = [(0.0, 0.0, radius)]
    for i in range(1, n_lat):
        phi = math.pi * i / n_lat
        ring_z = radius * math.cos(phi)
        ring_r = radius * math.sin(phi)
        for j in range(n_lon):
            th = 2.0 * math.pi * j / n_lon
            verts.append((ring_r * math.cos(th), ring_r * math.sin(th),
                          ring_z))
    verts.append((0.0, 0.0, -radius))
    vertices = np.array(verts)
    normals = vertices / radius

    tris = []
    top = 0
    bottom = len(verts) - 1
    ring = lambda i, j: 1 + (i - 1) * n_lon + (j % n_lon)
    for j in range(n_lon):
        tris.append((top, ring(1, j), ring(1, j + 1)))
    for i in range(1, n_lat - 1):
        for j in range(n_lon):
            a, b = ring(i, j), ring(i + 1, j)
            c, d = ring(i + 1, j + 1), ring(i, j + 1)
            tris.append((a, b, c))
            tris.append((a, c, d))
    for j in range(n_lon):
        tris.append((bottom, ring(n_lat - 1, j + 1), ring(n_lat - 1, j)))
    triangles = np.array(tris, dtype=np.int64)
    return TriangleMesh(vertices=vertices, normals=normals,
                        triangles=triangles)


def _format_scene(named: Sequence[tuple[Optional[str], TriangleMesh]]) -> str:
    lines = []
    offset = 0
    for name, mesh in named:
        if name is not None:
            lines.append(f"o {name}")
        for vx, vy, vz in mesh.vertices:
            lines.append(f"v {vx:.9g} {vy:.9g} {vz:.9g}")
        for nx, ny, nz in mesh.normals:
            lines.append(f"vn {nx:.9g} {ny:.9g} {nz:.9g}")
        for a, b, c in mesh.triangles:
            ia, ib, ic = a + 1 + offset, b + 1 + offset, c + 1 + offset
            lines.append(f"f {ia}//{ia} {ib}//{ib} {ic}//{ic}")
        offset += len(mesh.vertices)
    return "\n".join(lines) + "\n"


def export_obj(mesh: TriangleMesh, destination: BinaryIO) -> None:
    """Write one mesh to a binary sink as ASCII OBJ."""
    destination.write(_format_scene([(None, mesh)]).encode("ascii"))


def export_obj_scene(named: Sequence[tuple[Optional[str], TriangleMesh]],
                     destination: BinaryIO) -> None:
    """Write several named meshes to one OBJ, with shared index space."""
    destination.write(_format_scene(named).encode("ascii"))
