import math
from functools import partial

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cwrev.errors import FlowExitsConvexityError, InfeasibleBodyError
from cwrev.functionals import (
    REULEAUX_DEFICIT,
    REULEAUX_RATIO,
    analyze,
    blaschke_volume,
    closed_form_deficit_from_breakpoints,
    deficit,
    deficit_bilinear,
    deficit_boundary_form,
    deficit_closed_form,
    deficit_quadrature,
    is_first_harmonic,
    normal_flow,
    ratio,
    volume,
)
from cwrev.profiles import Body, PiecewiseTrigProfile, SineSeriesProfile, evaluate, make_ball, reuleaux_profile
from cwrev.variational import sample_breakpoints

from oracles import piecewise_deficit_quad, revolution_volume_quad, sine_series_deficit_exact, sine_support

coefficient_lists = st.lists(st.floats(-1.0, 1.0, allow_nan=False), min_size=1, max_size=6)


def test_reuleaux_constants():
    prof = reuleaux_profile()
    assert deficit_closed_form(prof) == pytest.approx(1 - math.pi / 3, abs=1e-15)
    assert deficit_quadrature(prof) == pytest.approx(1 - math.pi / 3, abs=1e-13)
    assert deficit_boundary_form(prof) == pytest.approx(1 - math.pi / 3, abs=1e-13)
    body = Body(prof, 1.0)
    assert ratio(body) == pytest.approx(4 - math.pi, abs=1e-15)
    assert volume(body) == pytest.approx(4 * math.pi / 3 * (4 - math.pi), abs=1e-14)
    assert REULEAUX_RATIO == 4 - math.pi
    assert REULEAUX_DEFICIT == 1 - math.pi / 3


def test_sin_3t_deficit_is_minus_64_over_35():
    # product-to-sum: int sin^2(3t) cos t = 17/35, int cos^2(3t) cos t = 18/35
    assert sine_series_deficit_exact([0.0, 1.0]) == pytest.approx(-64 / 35, abs=1e-15)
    assert deficit_quadrature(SineSeriesProfile((0.0, 1.0))) == pytest.approx(-64 / 35, abs=1e-13)


@settings(max_examples=50, deadline=None)
@given(coefficient_lists)
def test_quadrature_matches_exact_series_oracle(coeffs):
    prof = SineSeriesProfile(tuple(coeffs))
    exact = sine_series_deficit_exact(coeffs)
    assert deficit_quadrature(prof) == pytest.approx(exact, abs=1e-12)
    assert deficit_boundary_form(prof) == pytest.approx(exact, abs=1e-11)


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
@pytest.mark.parametrize("sigma0", [1, -1])
def test_closed_form_matches_piecewise_oracle(k, sigma0):
    rng = np.random.default_rng(10 * k + (sigma0 > 0))
    for row in sample_breakpoints(k, 4, rng, min_gap=1e-4):
        prof = PiecewiseTrigProfile(tuple(row), sigma0, float(rng.uniform(-1, 1)))
        oracle = piecewise_deficit_quad(tuple(row), sigma0, prof.vertical_offset)
        assert deficit_closed_form(prof) == pytest.approx(oracle, abs=1e-12)
        assert deficit_quadrature(prof) == pytest.approx(oracle, abs=1e-11)
        assert deficit_boundary_form(prof) == pytest.approx(oracle, abs=1e-11)


def test_vectorized_closed_form():
    rng = np.random.default_rng(5)
    rows = sample_breakpoints(3, 50, rng)
    vec = closed_form_deficit_from_breakpoints(rows, -1)
    for row, f in zip(rows, vec):
        assert f == pytest.approx(deficit_closed_form(PiecewiseTrigProfile(tuple(row), -1)), abs=1e-14)


def test_offset_does_not_change_deficit():
    a = deficit_closed_form(reuleaux_profile(1, 0.0))
    b = deficit_closed_form(reuleaux_profile(1, 2.5))
    assert a == pytest.approx(b, abs=1e-15)
    assert deficit_quadrature(reuleaux_profile(1, 2.5)) == pytest.approx(a, abs=1e-13)


@settings(max_examples=50, deadline=None)
@given(coefficient_lists)
def test_wirtinger(coeffs):
    prof = SineSeriesProfile(tuple(coeffs))
    f = deficit_quadrature(prof)
    assert f <= 1e-12
    if max((abs(c) for c in coeffs[1:]), default=0.0) > 1e-3:
        assert f < -1e-9


@settings(max_examples=30, deadline=None)
@given(coefficient_lists, coefficient_lists, st.floats(-2, 2))
def test_quadratic_expansion(u, v, eps):
    hu, hv = SineSeriesProfile(tuple(u)), SineSeriesProfile(tuple(v))
    lhs = deficit_quadrature(hu + hv.scaled(eps))
    rhs = deficit_quadrature(hu) + 2 * eps * deficit_bilinear(hu, hv) + eps**2 * deficit_quadrature(hv)
    assert lhs == pytest.approx(rhs, abs=1e-10)


def test_first_harmonic_is_in_the_kernel():
    # sin t pairs to zero with every profile
    rng = np.random.default_rng(2)
    for _ in range(10):
        v = SineSeriesProfile(tuple(rng.uniform(-1, 1, 5)))
        assert deficit_bilinear(make_ball(1.0), v) == pytest.approx(0.0, abs=1e-13)
    assert deficit_bilinear(make_ball(1.0), reuleaux_profile()) == pytest.approx(0.0, abs=1e-13)


def test_ball_degeneracy():
    for c in (0.0, 0.4, -1.3):
        body = Body(make_ball(c), 1.7)
        rep = analyze(body)
        assert rep.critical_half_width == 0.0
        assert abs(rep.deficit) < 1e-12
        assert rep.ratio == pytest.approx(1.0, abs=1e-12)
        assert rep.volume == pytest.approx(4 * math.pi * 1.7**3 / 3, rel=1e-12)
    assert is_first_harmonic(make_ball(0.3))
    assert not is_first_harmonic(SineSeriesProfile((0.3, 1e-3)))


@pytest.mark.parametrize("coeffs, w", [((0.1, 0.05, -0.02), 1.0), ((0.0, -0.08), 0.9), ((0.5, 0.02, 0.01, 0.005), 0.6)])
def test_volume_matches_revolution_oracle(coeffs, w):
    body = Body(SineSeriesProfile(coeffs), w)
    assert volume(body) == pytest.approx(revolution_volume_quad(sine_support(coeffs), w), rel=1e-10)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_piecewise_volume_matches_revolution_oracle(k):
    rng = np.random.default_rng(40 + k)
    prof = PiecewiseTrigProfile(tuple(sample_breakpoints(k, 1, rng, 1e-3)[0]), 1, 0.2)
    breaks = [*prof.breakpoints, *(-b for b in prof.breakpoints)]
    for w in (1.0, 1.6):
        oracle = revolution_volume_quad(partial(evaluate, prof), w, breaks)
        assert volume(Body(prof, w)) == pytest.approx(oracle, rel=1e-10)


def test_blaschke_relation():
    for body in (
        Body(reuleaux_profile(), 1.0),
        Body(reuleaux_profile(-1, 0.3), 2.0),
        Body(SineSeriesProfile((0.2, 0.03, -0.01)), 0.9),
    ):
        v = volume(body)
        assert abs(v - blaschke_volume(body)) / v < 1e-9


def test_analyze_methods_agree():
    body = Body(reuleaux_profile(), 1.0)
    exact = analyze(body)
    quad = analyze(body, method="quadrature")
    assert exact.method == "exact-piecewise"
    assert exact.ratio == pytest.approx(4 - math.pi, abs=1e-12)
    assert quad.ratio == pytest.approx(4 - math.pi, abs=1e-9)
    assert exact.area == pytest.approx(11.973268693932534, abs=1e-12)
    with pytest.raises(ValueError):
        analyze(Body(make_ball(), 1.0), method="exact-piecewise")


def test_deficit_dispatch():
    assert deficit(reuleaux_profile()) == deficit_closed_form(reuleaux_profile())
    assert deficit(make_ball()) == deficit_quadrature(make_ball())


def test_ratio_decreases_toward_critical_width():
    prof = SineSeriesProfile((0.0, 0.05))
    ws = [0.4, 0.5, 0.8, 1.5]
    vals = [ratio(Body(prof, w)) for w in ws]
    assert all(a < b for a, b in zip(vals, vals[1:]))


def test_normal_flow():
    body = Body(SineSeriesProfile((0.0, 0.05)), 0.9)
    moved = normal_flow(body, 0.3)
    assert moved.half_width == pytest.approx(0.6)
    assert moved.profile == body.profile
    assert ratio(moved) < ratio(body)
    with pytest.raises(FlowExitsConvexityError) as info:
        normal_flow(body, 0.6)
    assert info.value.max_tau == pytest.approx(0.5, abs=1e-12)


def test_infeasible_width_is_rejected_by_functionals():
    body = Body.unchecked(SineSeriesProfile((0.0, 0.1)), 0.5)
    with pytest.raises(InfeasibleBodyError):
        volume(body)
