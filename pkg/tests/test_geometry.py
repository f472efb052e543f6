import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lpbounds.geometry import (
    Box,
    EuclideanBall,
    Heatball,
    ModifiedHeatball,
    DilatedRegion,
    BallSystem,
    dilate,
    euclidean_system,
    box_system,
    parabolic_system,
    parabolic_box_system,
    build_radius_function,
    max_inscribed_radius,
    euclidean_shrink,
    heatball_shrink,
    system_shrink,
    unit_ball_volume,
    region_to_dict,
    region_from_dict,
)

SMAX = 1.0 / (4.0 * math.pi)


def test_unit_ball_volume_known_values():
    assert unit_ball_volume(1) == pytest.approx(2.0)
    assert unit_ball_volume(2) == pytest.approx(math.pi)
    assert unit_ball_volume(3) == pytest.approx(4.0 * math.pi / 3.0)
    assert unit_ball_volume(4) == pytest.approx(math.pi**2 / 2.0)


def test_box_basics():
    b = Box((0.0, -1.0), (2.0, 1.0))
    assert b.dim == 2
    assert b.measure == pytest.approx(4.0)
    assert b.center == pytest.approx((1.0, 0.0))
    assert b.contains((1.0, 0.5))
    assert b.contains((0.0, -1.0))  # closed
    assert not b.contains((2.1, 0.0))
    with pytest.raises(ValueError):
        Box((0.0,), (0.0,))


def test_box_sample_inside():
    b = Box((0.0, 0.0, 0.0), (1.0, 2.0, 3.0))
    pts = b.sample(500, np.random.default_rng(0))
    assert pts.shape == (500, 3)
    assert np.all(b.contains(pts))


def test_euclidean_ball():
    ball = EuclideanBall((1.0, 1.0), 0.5)
    assert ball.measure == pytest.approx(math.pi * 0.25)
    assert ball.contains((1.0, 1.0))
    assert not ball.contains((1.5, 1.0))  # open ball
    bb = ball.bounding_box()
    assert bb.lo == pytest.approx((0.5, 0.5))
    pts = ball.sample(400, np.random.default_rng(1))
    assert np.all(ball.contains(pts))


def test_heatball_center_and_strictness():
    hb = Heatball((0.0, 0.0), 1.0)
    assert hb.contains((0.0, 0.0))  # the center belongs to its own ball
    assert not hb.contains((0.0, 1e-9))  # future is out
    assert not hb.contains((0.5, 0.0))
    s = SMAX / math.e
    w = math.sqrt(2.0 * s)  # slice half-width at log factor 1
    assert hb.contains((0.99 * w, -s))
    assert not hb.contains((1.01 * w, -s))
    assert not hb.contains((0.0, -SMAX * 1.01))


def test_heatball_bounding_box_reach():
    r, n = 0.7, 2
    hb = Heatball((0.0, 0.0, 0.0), r)
    bb = hb.bounding_box()
    w = r * math.sqrt(n / (2.0 * math.pi * math.e))
    assert bb.hi[0] == pytest.approx(w)
    assert bb.lo[2] == pytest.approx(-r * r / (4.0 * math.pi))
    assert bb.hi[2] == pytest.approx(0.0)


def test_modified_heatball_contains_plain_one():
    # the m-augmented ball projects to a wider spatial slice
    hb = Heatball((0.0, 0.0), 1.0)
    mhb = ModifiedHeatball((0.0, 0.0), 1.0, m=3)
    rng = np.random.default_rng(2)
    pts = hb.bounding_box().sample(4000, rng)
    inside = pts[np.atleast_1d(hb.contains(pts))]
    assert len(inside) > 100
    assert np.all(mhb.contains(inside))
    with pytest.raises(ValueError):
        ModifiedHeatball((0.0, 0.0), 1.0, m=0)


def test_dilated_region_scaling():
    unit = Box((-1.0, -1.0), (1.0, 1.0))
    reg = DilatedRegion(unit, (0.5, 0.5), 0.3, (1.0, 2.0))
    assert reg.measure == pytest.approx(4.0 * 0.3**3)
    assert reg.contains((0.5 + 0.29, 0.5))
    assert not reg.contains((0.5 + 0.31, 0.5))
    assert reg.contains((0.5, 0.5 + 0.089))
    assert not reg.contains((0.5, 0.5 + 0.091))
    pts = reg.sample(300, np.random.default_rng(3))
    assert np.all(reg.contains(pts))


def test_ball_systems():
    e2 = euclidean_system(2)
    assert e2.degree == pytest.approx(2.0)
    assert e2.unit_volume == pytest.approx(math.pi)
    p1 = parabolic_system(1)
    assert p1.degree == pytest.approx(3.0)
    assert p1.center_on_boundary
    pb = parabolic_box_system(3, 1)
    w = max(4.0 / (math.pi * math.e), math.sqrt(4.0 / (2.0 * math.pi * math.e)))
    assert pb.unit_ball.hi == pytest.approx((w, 1.0 / (2.0 * math.pi)))
    ball = pb.ball((0.5, 0.5), 0.1)
    assert ball.contains((0.5, 0.5))


def test_parabolic_box_dominates_unit_modified_ball():
    # containment of E_m(1) in the unit candidate box, all small m+n
    for m in (3, 4, 5):
        for n in (1, 2):
            pb = parabolic_box_system(m, n)
            mhb = ModifiedHeatball((0.0,) * (n + 1), 1.0, m=m)
            box = mhb.bounding_box()
            unit = pb.unit_ball
            assert np.all(np.asarray(unit.lo) <= np.asarray(box.lo) + 1e-12)
            assert np.all(np.asarray(unit.hi) >= np.asarray(box.hi) - 1e-12)


def test_radius_function_box_exact():
    dom = Box((0.0, 0.0), (1.0, 1.0))
    rf = build_radius_function(euclidean_system(2), dom)
    assert rf.divisor == 2.0
    assert rf.sup_radius((0.5, 0.5)) == pytest.approx(0.5, rel=1e-9)
    assert rf((0.5, 0.5)) == pytest.approx(0.25, rel=1e-9)
    assert rf((0.1, 0.5)) == pytest.approx(0.05, rel=1e-9)
    with pytest.raises(ValueError):
        rf((1.5, 0.5))


def test_radius_function_matches_quadratic_on_ball_domain():
    # symmetrized candidate box of the unit disc has half-widths (1, 1); the
    # exact sup solves (0.3 + r)^2 + r^2 = 1
    dom = EuclideanBall((0.0, 0.0), 1.0)
    rf = build_radius_function(euclidean_system(2), dom)
    want = (-0.6 + math.sqrt(0.36 + 4 * 2 * 0.91)) / 4.0
    assert rf.sup_radius((0.3, 0.0)) == pytest.approx(want, rel=1e-9)


def test_radius_function_parabolic_divisor():
    dom = Box((0.0, 0.0), (1.0, 1.0))
    rf = build_radius_function(parabolic_box_system(3, 1), dom)
    assert rf.divisor == 2.0  # lambdas (1, 2) are all >= 1
    r = rf.sup_radius((0.5, 0.5))
    ball = dilate(rf.system, (0.5, 0.5), r * (1 - 1e-9))
    bb = ball.bounding_box() if hasattr(ball, "bounding_box") else ball
    assert dom.contains(tuple(bb.lo)) and dom.contains(tuple(bb.hi))


@settings(max_examples=25, deadline=None)
@given(st.floats(0.05, 0.45), st.floats(0.05, 0.45), st.floats(0.1, 2.0))
def test_radius_function_containment_property(ax, ay, lam):
    dom = Box((0.0, 0.0), (1.0, 1.0))
    sys = box_system((1.0, 1.0), (1.0, lam))
    rf = build_radius_function(sys, dom)
    a = (ax, ay)
    sup = rf.sup_radius(a)
    assert sup > 0
    inner = dilate(sys, a, sup * (1 - 1e-9)).bounding_box()
    assert dom.contains(tuple(inner.lo)) and dom.contains(tuple(inner.hi))
    outer = dilate(sys, a, sup * 1.02).bounding_box()
    corners_in = dom.contains(tuple(outer.lo)) and dom.contains(tuple(outer.hi))
    assert not corners_in


def test_max_inscribed_radius_closed_forms():
    dom = Box((0.0, 0.0), (2.0, 1.0))
    assert max_inscribed_radius(euclidean_system(2), dom, (1.0, 0.5)) == \
        pytest.approx(0.5)
    assert max_inscribed_radius(euclidean_system(2), dom, (0.2, 0.5)) == \
        pytest.approx(0.2)
    hdom = Box((0.0, 0.0), (1.0, 1.0))
    r = max_inscribed_radius(parabolic_system(1), hdom, (0.5, 0.5))
    w = math.sqrt(1.0 / (2.0 * math.pi * math.e))
    assert r == pytest.approx(min(0.5 / w, math.sqrt(0.5 * 4 * math.pi)))


def test_shrinks():
    b = Box((0.0, 0.0), (1.0, 1.0))
    s = euclidean_shrink(b, 0.1)
    assert s.lo == pytest.approx((0.1, 0.1))
    assert euclidean_shrink(b, 0.6) is None

    hs = heatball_shrink(b, 0.5, 1)
    w = 0.5 * math.sqrt(1.0 / (2.0 * math.pi * math.e))
    assert hs.lo[0] == pytest.approx(w)
    assert hs.lo[1] == pytest.approx(0.25 / (4.0 * math.pi))
    assert hs.hi[1] == pytest.approx(1.0)  # no shrink at the future end
    with pytest.raises(ValueError):
        heatball_shrink(Box((0.0,), (1.0,)), 0.1, 1)

    sys = parabolic_box_system(3, 1)
    ss = system_shrink(b, sys, 0.5)
    assert ss.lo[0] == pytest.approx(0.5 * sys.unit_ball.hi[0])
    with pytest.raises(TypeError):
        system_shrink(b, euclidean_system(2), 0.1)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 3), st.floats(0.2, 2.0))
def test_heatball_measure_scaling_bbox(n, r):
    # |bbox(E(r))| = r^{n+2} |bbox(E(1))|, the carrier of the volume scaling
    unit = Heatball((0.0,) * (n + 1), 1.0).bounding_box().measure
    scaled = Heatball((0.0,) * (n + 1), r).bounding_box().measure
    assert scaled == pytest.approx(r ** (n + 2) * unit, rel=1e-9)


def test_region_dict_round_trip():
    regions = [
        Box((0.0, 0.0), (1.0, 2.0)),
        EuclideanBall((0.5, 0.5), 0.25),
        Heatball((0.0, 0.0), 0.8),
        ModifiedHeatball((0.0, 0.0), 0.8, m=4),
        DilatedRegion(Box((-1.0,), (1.0,)), (0.5,), 0.2, (1.0,)),
    ]
    rng = np.random.default_rng(7)
    for reg in regions:
        back = region_from_dict(region_to_dict(reg))
        pts = reg.bounding_box().sample(200, rng) if hasattr(reg, "bounding_box") \
            else reg.sample(200, rng)
        a = np.atleast_1d(reg.contains(pts))
        b = np.atleast_1d(back.contains(pts))
        assert np.array_equal(a, b)


def test_region_from_dict_unknown_kind():
    with pytest.raises(ValueError):
        region_from_dict({"kind": "torus"})
