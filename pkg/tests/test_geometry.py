import math
from functools import partial

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cwrev.errors import ConvexityError
from cwrev.geometry import (
    Mesh,
    check_convexity,
    curve_point,
    mesh_signed_volume,
    min_radius_of_curvature,
    radius_of_curvature,
    sample_curve,
    surface_area,
    surface_area_quadrature,
    surface_point,
    tessellate,
    width_at,
)
from cwrev.profiles import (
    HALF_PI,
    Body,
    PiecewiseTrigProfile,
    SineSeriesProfile,
    critical_half_width,
    evaluate,
    make_ball,
    reuleaux_profile,
)
from cwrev.variational import sample_breakpoints

from oracles import revolution_area_quad, sine_support

SQRT3 = math.sqrt(3.0)


def test_reuleaux_curve_landmarks():
    body = Body(reuleaux_profile(), 1.0)
    assert curve_point(body, 0.0) == pytest.approx((1.0, 0.0), abs=1e-15)
    assert curve_point(body, HALF_PI) == pytest.approx((0.0, SQRT3), abs=1e-15)
    assert curve_point(body, -HALF_PI) == pytest.approx((0.0, SQRT3 - 2.0), abs=1e-15)


def test_reuleaux_radii_are_two_or_zero():
    body = Body(reuleaux_profile(), 1.0)
    t = np.linspace(-HALF_PI, HALF_PI, 1001)
    rho = radius_of_curvature(body, t)
    assert np.all(np.isclose(rho, 2.0, atol=1e-12) | np.isclose(rho, 0.0, atol=1e-12))
    assert np.any(np.isclose(rho, 0.0, atol=1e-12))


def test_ball_is_round():
    body = Body(make_ball(0.3), 1.25)
    t = np.linspace(-math.pi, math.pi, 301)
    x, y = curve_point(body, t)
    np.testing.assert_allclose(np.hypot(x, y - 0.3), 1.25, atol=1e-14)
    np.testing.assert_allclose(radius_of_curvature(body, t), 1.25, atol=1e-14)


def _random_body(seed):
    rng = np.random.default_rng(seed)
    if rng.random() < 0.5:
        m = int(rng.integers(1, 6))
        prof = SineSeriesProfile(tuple(rng.uniform(-1, 1, m) * 0.5 ** np.arange(m)))
    else:
        k = int(rng.integers(1, 6))
        prof = PiecewiseTrigProfile(tuple(sample_breakpoints(k, 1, rng, 1e-6)[0]), int(rng.choice([1, -1])))
    return Body(prof, critical_half_width(prof) + float(rng.uniform(0, 1)))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_constant_width(seed):
    body = _random_body(seed)
    t = np.random.default_rng(seed).uniform(-10, 10, 200)
    np.testing.assert_allclose(width_at(body, t), 2 * body.half_width, atol=1e-10)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_convex_and_poles_on_axis(seed):
    body = _random_body(seed)
    assert min_radius_of_curvature(body) >= -1e-9
    assert abs(curve_point(body, HALF_PI)[0]) < 1e-9
    assert abs(curve_point(body, -HALF_PI)[0]) < 1e-9


def test_below_critical_width_is_not_convex():
    prof = SineSeriesProfile((0.0, 0.1))
    with pytest.raises(ConvexityError):
        check_convexity(Body.unchecked(prof, 0.7))
    assert check_convexity(Body(prof, 0.8)) == pytest.approx(0.0, abs=1e-9)


def test_surface_point_revolves_curve():
    body = Body(reuleaux_profile(), 1.0)
    p = surface_point(body, 0.0, HALF_PI)
    np.testing.assert_allclose(p, [0.0, 1.0, 0.0], atol=1e-15)
    grid = surface_point(body, np.array([0.0, 0.5]), np.array([0.0, 1.0]))
    assert grid.shape == (2, 3)


def test_sample_curve_records():
    body = Body(make_ball(), 2.0)
    rows = sample_curve(body, np.linspace(-HALF_PI, HALF_PI, 5))
    assert len(rows) == 5
    for r in rows:
        assert r.rho == pytest.approx(2.0)
        assert r.s == pytest.approx(2.0)
        assert r.h == pytest.approx(0.0)


@pytest.mark.parametrize("nt, ntheta", [(3, 3), (8, 5), (32, 17)])
def test_tessellation_counts_and_topology(nt, ntheta):
    mesh = tessellate(Body(reuleaux_profile(), 1.0), nt, ntheta)
    assert mesh.num_vertices == (nt + 1) * ntheta + 2
    assert mesh.num_triangles == 2 * nt * ntheta + 2 * ntheta
    assert mesh.is_watertight()
    assert mesh.is_consistently_oriented()
    assert mesh.euler_characteristic() == 2


def test_tessellation_is_outward():
    mesh = tessellate(Body(make_ball(), 1.0), 16, 16)
    assert mesh_signed_volume(mesh) > 0
    assert mesh_signed_volume(mesh.reversed()) == pytest.approx(-mesh_signed_volume(mesh))


def test_signed_volume_of_unit_cube():
    v = np.array([[x, y, z] for x in (0, 1) for y in (0, 1) for z in (0, 1)], dtype=float)
    faces = [
        (0, 1, 3), (0, 3, 2), (4, 6, 7), (4, 7, 5),
        (0, 4, 5), (0, 5, 1), (2, 3, 7), (2, 7, 6),
        (0, 2, 6), (0, 6, 4), (1, 5, 7), (1, 7, 3),
    ]
    cube = Mesh(v, np.array(faces))
    assert cube.is_watertight()
    assert mesh_signed_volume(cube) == pytest.approx(1.0, abs=1e-15)
    assert mesh_signed_volume(cube.triangle_soup() + 5.0) == pytest.approx(1.0, abs=1e-13)


def test_reuleaux_area_exact_vs_quadrature():
    body = Body(reuleaux_profile(), 1.0)
    assert surface_area(body) == pytest.approx(surface_area_quadrature(body), abs=1e-10)


@pytest.mark.parametrize("seed", range(5))
def test_piecewise_area_matches_independent_quadrature(seed):
    rng = np.random.default_rng(seed)
    k = seed + 1
    prof = PiecewiseTrigProfile(tuple(sample_breakpoints(k, 1, rng, 1e-3)[0]), 1 if seed % 2 else -1, 0.3)
    body = Body(prof, 1.4)
    breaks = [*prof.breakpoints, *(-b for b in prof.breakpoints)]
    oracle = revolution_area_quad(partial(evaluate, prof), 1.4, breaks)
    assert surface_area(body) == pytest.approx(oracle, rel=1e-11)


def test_sine_area_matches_independent_quadrature():
    coeffs = (0.1, 0.05, -0.02)
    body = Body(SineSeriesProfile(coeffs), 1.0)
    assert surface_area(body) == pytest.approx(revolution_area_quad(sine_support(coeffs), 1.0), rel=1e-11)


def test_ball_area():
    assert surface_area(Body(make_ball(0.2), 1.5)) == pytest.approx(4 * math.pi * 1.5**2, rel=1e-12)
