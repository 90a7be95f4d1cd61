import io
import math

import numpy as np
import pytest

from cmcpinch.delaunay import DelaunayParams
from cmcpinch.mesh import (TriangleMesh, export_obj, export_obj_scene,
                           revolve, sphere)

EXAMPLE = DelaunayParams(1.0, 0.9)


def parse_obj(text):
    verts, norms, faces = [], [], []
    for line in text.splitlines():
        parts = line.split()
        if not parts:
            continue
        if parts[0] == "v":
            verts.append([float(p) for p in parts[1:4]])
        elif parts[0] == "vn":
            norms.append([float(p) for p in parts[1:4]])
        elif parts[0] == "f":
            faces.append([int(p.split("//")[0]) - 1 for p in parts[1:4]])
    return np.array(verts), np.array(norms), np.array(faces)


def edge_count(triangles):
    edges = set()
    for a, b, c in triangles:
        for u, v in ((a, b), (b, c), (c, a)):
            edges.add((min(u, v), max(u, v)))
    return len(edges)


def test_revolve_counts():
    mesh = revolve(EXAMPLE, -1.0, 1.0, 3, 4)
    assert mesh.vertices.shape == (12, 3)
    assert mesh.normals.shape == (12, 3)
    assert mesh.triangles.shape == (16, 3)


def test_revolve_validation():
    with pytest.raises(ValueError):
        revolve(EXAMPLE, -1.0, 1.0, 1, 4)
    with pytest.raises(ValueError):
        revolve(EXAMPLE, -1.0, 1.0, 3, 2)
    with pytest.raises(ValueError):
        revolve(EXAMPLE, 1.0, 1.0, 3, 4)


def test_mesh_shape_validation():
    good = np.zeros((3, 3))
    with pytest.raises(ValueError):
        TriangleMesh(vertices=good, normals=np.zeros((2, 3)),
                     triangles=np.zeros((1, 3), dtype=int))
    with pytest.raises(ValueError):
        TriangleMesh(vertices=good, normals=good,
                     triangles=np.zeros((3,), dtype=int))


def test_normals_are_unit():
    mesh = revolve(EXAMPLE, -2.0, 2.0, 40, 24)
    lengths = np.linalg.norm(mesh.normals, axis=1)
    np.testing.assert_allclose(lengths, 1.0, atol=1e-12)


def test_normals_match_surface_geometry():
    """Central differences of the vertex grid reproduce the normals."""
    n_m, n_p = 256, 256
    mesh = revolve(EXAMPLE, -1.5, 1.5, n_m, n_p)
    grid = mesh.vertices.reshape(n_m, n_p, 3)
    d_s = grid[2:, :, :] - grid[:-2, :, :]
    d_t = np.roll(grid, -1, axis=1) - np.roll(grid, 1, axis=1)
    cross = np.cross(d_s, d_t[1:-1, :, :])
    cross /= np.linalg.norm(cross, axis=-1, keepdims=True)
    stored = mesh.normals.reshape(n_m, n_p, 3)[1:-1, :, :]
    np.testing.assert_allclose(cross, stored, rtol=0.0, atol=3e-3)


def test_triangles_wound_along_normals():
    mesh = revolve(EXAMPLE, -1.0, 1.0, 20, 16)
    v, n, t = mesh.vertices, mesh.normals, mesh.triangles
    face_cross = np.cross(v[t[:, 1]] - v[t[:, 0]], v[t[:, 2]] - v[t[:, 0]])
    face_normal = (n[t[:, 0]] + n[t[:, 1]] + n[t[:, 2]]) / 3.0
    assert np.all(np.sum(face_cross * face_normal, axis=1) > 0.0)


def test_revolved_band_is_an_annulus():
    mesh = revolve(EXAMPLE, -1.0, 1.0, 17, 23)
    v = len(mesh.vertices)
    e = edge_count(mesh.triangles)
    f = len(mesh.triangles)
    assert v - e + f == 0


def test_sphere_counts_and_radius():
    mesh = sphere(2.5, n_lat=8, n_lon=12)
    assert len(mesh.vertices) == 2 + 7 * 12
    assert len(mesh.triangles) == 2 * 12 + 2 * 12 * 6
    radii = np.linalg.norm(mesh.vertices, axis=1)
    np.testing.assert_allclose(radii, 2.5, atol=1e-12)


def test_sphere_normals_point_outward():
    mesh = sphere(3.0, n_lat=6, n_lon=9)
    np.testing.assert_allclose(mesh.normals,
                               mesh.vertices / 3.0, atol=1e-15)
    lengths = np.linalg.norm(mesh.normals, axis=1)
    np.testing.assert_allclose(lengths, 1.0, atol=1e-12)


def test_sphere_is_topologically_closed():
    mesh = sphere(1.0, n_lat=7, n_lon=11)
    v = len(mesh.vertices)
    e = edge_count(mesh.triangles)
    f = len(mesh.triangles)
    assert v - e + f == 2


def test_sphere_validation():
    with pytest.raises(ValueError):
        sphere(0.0)
    with pytest.raises(ValueError):
        sphere(1.0, n_lat=1)
    with pytest.raises(ValueError):
        sphere(1.0, n_lon=2)


def test_export_single_triangle_exact():
    mesh = TriangleMesh(
        vertices=np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0],
                           [0.0, 1.0, 0.0]]),
        normals=np.array([[0.0, 0.0, 1.0]] * 3),
        triangles=np.array([[0, 1, 2]]))
    sink = io.BytesIO()
    export_obj(mesh, sink)
    assert sink.getvalue().decode("ascii") == (
        "v 0 0 0\n"
        "v 1 0 0\n"
        "v 0 1 0\n"
        "vn 0 0 1\n"
        "vn 0 0 1\n"
        "vn 0 0 1\n"
        "f 1//1 2//2 3//3\n")


def test_export_is_deterministic():
    mesh = revolve(EXAMPLE, -1.3, 1.3, 12, 10)
    a, b = io.BytesIO(), io.BytesIO()
    export_obj(mesh, a)
    export_obj(mesh, b)
    assert a.getvalue() == b.getvalue()


def test_scene_offsets_face_indices():
    tri = TriangleMesh(
        vertices=np.eye(3), normals=np.array([[0.0, 0.0, 1.0]] * 3),
        triangles=np.array([[0, 1, 2]]))
    sink = io.BytesIO()
    export_obj_scene([("first", tri), ("second", tri)], sink)
    lines = sink.getvalue().decode("ascii").splitlines()
    assert lines[0] == "o first"
    assert "f 1//1 2//2 3//3" in lines
    assert "f 4//4 5//5 6//6" in lines
    assert lines.index("o second") > lines.index("o first")


def test_obj_round_trip():
    mesh = revolve(DelaunayParams(1.0, 1.5), -0.4, 0.4, 15, 9)
    sink = io.BytesIO()
    export_obj(mesh, sink)
    verts, norms, faces = parse_obj(sink.getvalue().decode("ascii"))
    np.testing.assert_allclose(verts, mesh.vertices, rtol=1e-8, atol=1e-9)
    np.testing.assert_allclose(norms, mesh.normals, rtol=1e-8, atol=1e-9)
    np.testing.assert_array_equal(faces, mesh.triangles)


def test_revolved_radii_match_profile():
    mesh = revolve(EXAMPLE, 0.0, math.pi, 5, 64)
    grid = mesh.vertices.reshape(5, 64, 3)
    radii = np.hypot(grid[:, :, 0], grid[:, :, 1])
    ss = np.linspace(0.0, math.pi, 5)
    q = 1.0 + 0.81 - 1.8 * np.cos(ss)
    expected = np.outer(np.sqrt(q), np.ones(64))
    np.testing.assert_allclose(radii, expected, atol=1e-12)
