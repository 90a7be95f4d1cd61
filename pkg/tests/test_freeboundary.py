import math

import numpy as np
import pytest

from cmcpinch.curvature import analyze_point, support_function
from cmcpinch.delaunay import (DelaunayParams, GeneratrixState, eval_state,
                               z_many, z_of)
from cmcpinch.freeboundary import (VERDICT_CYLINDER, VERDICT_NO_ORTHOGONAL,
                                   VERDICT_PINCHED, NoRootError,
                                   build_portion, check_profile_conditions,
                                   classify, find_n0, find_sbar, g_function,
                                   nodoid_find_rbar, nodoid_r0, s0,
                                   scale_to_unit_ball, violation_points, z0)

EXAMPLE = DelaunayParams(0.1, 0.9)
NODOID_EX = DelaunayParams(1.0, 1.5)

# frozen from an independent bisection/quadrature computation
SBAR_GOLDEN = 1.7576056770276693
R0_GOLDEN = 2.3975840691447803
SCALED_H_GOLDEN = 0.23975840691447803
SBAR_SCALED_GOLDEN = 0.7330736384374661
RBAR_GOLDEN = 0.47899833600628366
T1_GOLDEN = 58.32158495383323
LAMBDA2_T1_GOLDEN = -3.1635820425103582
GAP_T1_GOLDEN = -6.3271640850207165


@pytest.fixture(scope="module")
def example_portion():
    return build_portion(EXAMPLE)


@pytest.fixture(scope="module")
def nodoid_portion():
    return build_portion(NODOID_EX)


def test_g_at_unduloid_neck():
    assert g_function(eval_state(EXAMPLE, 0.0)) == pytest.approx(
        1.0, rel=1e-12)  # (1 - B)/H


def test_g_constant_on_cylinder():
    params = DelaunayParams(0.5, 0.0)
    for s in (-2.0, 0.0, 3.3):
        assert g_function(eval_state(params, s)) == pytest.approx(
            2.0, rel=1e-12)


def test_g_at_nodoid_neck():
    assert g_function(eval_state(NODOID_EX, 0.0)) == pytest.approx(
        0.5, rel=1e-12)  # (B - 1)/H


def test_g_rejects_zero_dz():
    st = GeneratrixState(s=0.0, x=1.0, z=0.5, dx=1.0, dz=0.0, ddx=0.0,
                         ddz=0.0)
    with pytest.raises(ValueError):
        g_function(st)


def test_u_equals_minus_dz_times_g():
    rng = np.random.default_rng(31)
    for _ in range(300):
        b = float(rng.uniform(0.05, 0.9)) if rng.random() < 0.5 else \
            float(rng.uniform(1.1, 2.5))
        params = DelaunayParams(float(rng.uniform(0.2, 2.0)), b)
        st = eval_state(params, float(rng.uniform(-4.0, 4.0)))
        if abs(st.dz) < 1e-6:
            continue
        u = support_function(st)
        assert u == pytest.approx(-st.dz * g_function(st),
                                  rel=1e-10, abs=1e-12)


def test_s0_example_value():
    assert s0(EXAMPLE) == pytest.approx(4.510268117962624, rel=1e-14)


def test_s0_special_angle():
    # B = 1/2 puts the inflection at arccos(1/2)/H
    assert s0(DelaunayParams(2.0, 0.5)) == pytest.approx(
        math.pi / 6.0, rel=1e-14)


def test_s0_is_first_ddx_zero():
    top = s0(EXAMPLE)
    for s in np.linspace(1e-3, top * 0.999, 200):
        assert eval_state(EXAMPLE, float(s), z=0.0).ddx > 0.0
    assert eval_state(EXAMPLE, top, z=0.0).ddx == pytest.approx(
        0.0, abs=1e-13)
    assert eval_state(EXAMPLE, top * 1.01, z=0.0).ddx < 0.0


def test_z0_example_value():
    assert z0(EXAMPLE) == pytest.approx(19.0 / 9.0, abs=1e-12)


def test_s0_z0_wrong_family():
    for fn in (s0, z0):
        with pytest.raises(ValueError):
            fn(DelaunayParams(1.0, 0.0))
        with pytest.raises(ValueError):
            fn(NODOID_EX)


def test_dichotomy_matches_g_sign():
    # z(s0) >= z0 exactly when g(s0) <= 0
    for b in (0.3, 0.5, 0.7, 0.75, 0.8, 0.9, 0.95):
        params = DelaunayParams(1.0, b)
        top = s0(params)
        assert ((z_of(params, top) >= z0(params))
                == (g_function(eval_state(params, top)) <= 0.0))


def test_g_decreases_toward_s0():
    top = s0(EXAMPLE)
    g0 = g_function(eval_state(EXAMPLE, 0.0))
    g_half = g_function(eval_state(EXAMPLE, top / 2.0))
    g_top = g_function(eval_state(EXAMPLE, top))
    assert g0 > g_half > g_top
    assert g_top < 0.0


def test_find_sbar_golden():
    assert find_sbar(EXAMPLE) == pytest.approx(SBAR_GOLDEN, abs=1e-9)


def test_sbar_is_orthogonal(example_portion):
    st = eval_state(EXAMPLE, example_portion.s_bar)
    assert abs(support_function(st)) <= 1e-10
    assert abs(g_function(st)) <= 1e-10


def test_find_sbar_no_root():
    with pytest.raises(NoRootError):
        find_sbar(DelaunayParams(1.0, 0.5))


def test_find_sbar_wrong_family():
    with pytest.raises(ValueError):
        find_sbar(DelaunayParams(1.0, 0.0))
    with pytest.raises(ValueError):
        find_sbar(NODOID_EX)


def test_nodoid_r0_special_angle():
    assert nodoid_r0(DelaunayParams(1.0, 2.0)) == pytest.approx(
        math.pi / 3.0, rel=1e-14)


def test_nodoid_branch_end():
    r_top = nodoid_r0(NODOID_EX)
    assert eval_state(NODOID_EX, r_top, z=0.0).dz == pytest.approx(
        0.0, abs=1e-12)
    # z decreasing and radius strictly convex on the inner branch
    for s in np.linspace(1e-3, r_top * 0.999, 200):
        st = eval_state(NODOID_EX, float(s), z=0.0)
        assert st.dz < 0.0
        assert st.ddx > 0.0


def test_nodoid_r0_wrong_family():
    with pytest.raises(ValueError):
        nodoid_r0(EXAMPLE)
    with pytest.raises(ValueError):
        nodoid_find_rbar(DelaunayParams(1.0, 0.0))


def test_nodoid_rbar_golden():
    rb = nodoid_find_rbar(NODOID_EX)
    assert rb == pytest.approx(RBAR_GOLDEN, abs=1e-9)
    assert 0.0 < rb < nodoid_r0(NODOID_EX)


def test_nodoid_rbar_is_orthogonal(nodoid_portion):
    st = eval_state(NODOID_EX, nodoid_portion.s_bar)
    assert abs(support_function(st)) <= 1e-10


def test_profile_conditions_cylinder():
    c1, c2, c3 = check_profile_conditions(
        eval_state(DelaunayParams(1.0, 0.0), 1.3))
    assert c1 and not c2 and c3


def test_profile_conditions_hold_on_example_portion(example_portion):
    sb = example_portion.s_bar
    ss = np.linspace(-sb, sb, 400)
    zs = z_many(EXAMPLE, ss)
    for i in range(len(ss)):
        st = eval_state(EXAMPLE, float(ss[i]), z=float(zs[i]))
        c1, c2, c3 = check_profile_conditions(st)
        assert (c1 or c2) and c3


def test_profile_conditions_fail_at_violation_point():
    pts = violation_points(EXAMPLE, 1)
    st = eval_state(EXAMPLE, pts[0].t)
    _, _, c3 = check_profile_conditions(st)
    assert not c3


def test_profile_conditions_zero_set_branch():
    # at the nodoid branch end z' vanishes and the c2 alternative applies
    st = eval_state(NODOID_EX, nodoid_r0(NODOID_EX))
    c1, c2, c3 = check_profile_conditions(st)
    assert not c1 and c2


def test_build_portion_example(example_portion):
    p = example_portion
    assert p.s_bar == pytest.approx(SBAR_GOLDEN, abs=1e-9)
    assert p.R0 == pytest.approx(R0_GOLDEN, abs=1e-9)
    assert p.min_gap >= -1e-8
    assert p.min_gap == pytest.approx(0.0, abs=1e-10)
    assert p.orthogonality_residual <= 1e-10
    assert p.scaled_params.H == pytest.approx(SCALED_H_GOLDEN, abs=1e-9)
    assert p.scaled_params.B == 0.9


def test_build_portion_nodoid(nodoid_portion):
    p = nodoid_portion
    assert p.s_bar == pytest.approx(RBAR_GOLDEN, abs=1e-9)
    assert p.min_gap >= -1e-8
    assert p.R0 > eval_state(NODOID_EX, p.s_bar, z=0.0).x


def test_boundary_gap_is_two(example_portion, nodoid_portion):
    # u = 0 at the crossing, so the gap reduces to (1/2) * 2^2
    for params, p in ((EXAMPLE, example_portion),
                      (NODOID_EX, nodoid_portion)):
        for sb in (p.s_bar, -p.s_bar):
            pa = analyze_point(params, eval_state(params, sb))
            assert pa.gap == pytest.approx(2.0, abs=1e-6)


def test_build_portion_cylinder_raises():
    with pytest.raises(ValueError):
        build_portion(DelaunayParams(1.0, 0.0))


def test_portion_stays_inside_ball(example_portion):
    p = example_portion
    ss = np.linspace(-p.s_bar, p.s_bar, 500)
    zs = z_many(EXAMPLE, ss)
    for i in range(len(ss)):
        st = eval_state(EXAMPLE, float(ss[i]), z=float(zs[i]))
        assert st.x ** 2 + st.z ** 2 <= p.R0 ** 2 * (1.0 + 1e-9)


def test_scale_to_unit_ball(example_portion):
    scaled, sb_scaled = scale_to_unit_ball(example_portion, EXAMPLE)
    assert scaled.H == pytest.approx(SCALED_H_GOLDEN, abs=1e-9)
    assert scaled.B == 0.9
    assert sb_scaled == pytest.approx(SBAR_SCALED_GOLDEN, abs=1e-9)


def test_rescaled_portion_has_unit_radius(example_portion):
    scaled, _ = scale_to_unit_ball(example_portion, EXAMPLE)
    rescaled = build_portion(scaled)
    assert rescaled.R0 == pytest.approx(1.0, abs=1e-10)


def test_gap_is_dilation_invariant(example_portion):
    p = example_portion
    scaled, _ = scale_to_unit_ball(p, EXAMPLE)
    ss = np.linspace(-p.s_bar, p.s_bar, 25)
    z_orig = z_many(EXAMPLE, ss)
    z_scal = z_many(scaled, ss / p.R0)
    for i in range(len(ss)):
        g1 = analyze_point(EXAMPLE, eval_state(
            EXAMPLE, float(ss[i]), z=float(z_orig[i]))).gap
        g2 = analyze_point(scaled, eval_state(
            scaled, float(ss[i]) / p.R0, z=float(z_scal[i]))).gap
        assert g1 == pytest.approx(g2, abs=1e-9)


def test_geodesic_curvature_of_boundary(example_portion, nodoid_portion):
    # after rescaling to the unit ball the boundary circle has geodesic
    # curvature 1, i.e. R0 |x'(sb)| = x(sb)
    for params, p in ((EXAMPLE, example_portion),
                      (NODOID_EX, nodoid_portion)):
        st = eval_state(params, p.s_bar, z=0.0)
        assert p.R0 * abs(st.dx) / st.x == pytest.approx(1.0, abs=1e-6)


def test_violation_t1_golden():
    pts = violation_points(EXAMPLE, 3)
    assert pts[0].n == 1
    assert pts[0].t == pytest.approx(T1_GOLDEN, rel=1e-12)
    assert pts[0].lambda2 == pytest.approx(LAMBDA2_T1_GOLDEN, abs=1e-9)
    assert pts[0].gap == pytest.approx(GAP_T1_GOLDEN, abs=1e-9)


def test_violation_closed_forms():
    # lambda1(t_n) = 1, lambda2(t_n) = B H (B/H - z(t_n)), x''(t_n) = 0
    pts = violation_points(EXAMPLE, 4)
    for pt in pts:
        st = eval_state(EXAMPLE, pt.t)
        pa = analyze_point(EXAMPLE, st)
        assert pa.lambda1 == pytest.approx(1.0, abs=1e-10)
        closed = EXAMPLE.B * EXAMPLE.H * (EXAMPLE.B / EXAMPLE.H - st.z)
        assert pt.lambda2 == pytest.approx(closed, abs=1e-8)
        assert st.ddx == pytest.approx(0.0, abs=1e-10)
        assert st.dx == pytest.approx(-EXAMPLE.B, abs=1e-11)


def test_violation_alternate_closed_form():
    # (2 n pi - arccos B)/H == -arcsin(-B)/H + (4n - 1) pi/(2H)
    for n in (1, 2, 3, 7):
        t_a = (2.0 * math.pi * n - math.acos(EXAMPLE.B)) / EXAMPLE.H
        t_b = (-math.asin(-EXAMPLE.B)
               + (4.0 * n - 1.0) * math.pi / 2.0) / EXAMPLE.H
        assert t_a == pytest.approx(t_b, rel=1e-13)


def test_violation_sequence_descends():
    pts = violation_points(EXAMPLE, 5)
    for a, b in zip(pts, pts[1:]):
        assert b.t > a.t
        assert b.lambda2 < a.lambda2
        assert b.gap < a.gap


def test_find_n0_example():
    n0 = find_n0(EXAMPLE)
    assert n0 == 1
    pts = violation_points(EXAMPLE, 1)
    assert pts[0].gap < 0.0
    assert z_of(EXAMPLE, pts[0].t) > EXAMPLE.B / EXAMPLE.H


def test_find_n0_marks_first_negative_gap():
    for b in (0.1, 0.5, 0.9, 0.99):
        params = DelaunayParams(0.5, b)
        n0 = find_n0(params)
        pts = violation_points(params, n0 + 1)
        assert pts[n0 - 1].gap < 0.0
        if n0 > 1:
            assert pts[n0 - 2].gap >= 0.0


def test_violation_wrong_family():
    with pytest.raises(ValueError):
        violation_points(DelaunayParams(1.0, 0.0), 2)
    with pytest.raises(ValueError):
        violation_points(NODOID_EX, 2)
    with pytest.raises(ValueError):
        find_n0(NODOID_EX)
    with pytest.raises(ValueError):
        violation_points(EXAMPLE, 0)


def test_classify_example():
    rep = classify(EXAMPLE)
    assert rep.verdict == VERDICT_PINCHED
    assert rep.s0 == pytest.approx(4.510268117962624, rel=1e-12)
    assert rep.z0 == pytest.approx(19.0 / 9.0, abs=1e-12)
    assert rep.z_at_s0 == pytest.approx(2.7169705278161382, abs=1e-9)
    assert rep.r0 is None
    assert rep.portion is not None
    assert rep.n0 == 1
    assert len(rep.violations) == rep.n0 + 2
    assert rep.violations[rep.n0 - 1].gap < 0.0


def test_classify_cylinder():
    rep = classify(DelaunayParams(2.0, 0.0))
    assert rep.verdict == VERDICT_CYLINDER
    assert rep.s0 is None and rep.z0 is None and rep.portion is None
    assert rep.violations == [] and rep.n0 is None


def test_classify_no_orthogonal():
    rep = classify(DelaunayParams(1.0, 0.5))
    assert rep.verdict == VERDICT_NO_ORTHOGONAL
    assert rep.z_at_s0 < rep.z0
    assert rep.portion is None
    assert rep.violations == [] and rep.n0 is None


def test_classify_nodoid():
    rep = classify(NODOID_EX)
    assert rep.verdict == VERDICT_PINCHED
    assert rep.r0 == pytest.approx(nodoid_r0(NODOID_EX), rel=1e-14)
    assert rep.s0 is None and rep.z0 is None
    assert rep.portion is not None
    assert rep.violations == []


def test_verdict_depends_only_on_shape():
    # both sides of the dichotomy scale as 1/H, so H never flips it
    for h in (0.25, 1.0, 4.0):
        assert classify(
            DelaunayParams(h, 0.7)).verdict == VERDICT_NO_ORTHOGONAL
        assert classify(DelaunayParams(h, 0.8)).verdict == VERDICT_PINCHED
