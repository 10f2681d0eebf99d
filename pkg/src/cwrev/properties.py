"""Randomized verification battery behind ``cwrev verify``.

Each runner draws its own samples from a seeded generator, so an outcome
is a pure function of ``(samples, seed)`` apart from the elapsed time.
"""
from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .functionals import (
    REULEAUX_DEFICIT,
    closed_form_deficit_from_breakpoints,
    deficit_bilinear,
    deficit_closed_form,
    deficit_quadrature,
    ratio,
)
from .geometry import curve_point, min_radius_of_curvature, width_at
from .profiles import HALF_PI, Body, PiecewiseTrigProfile, SineSeriesProfile, critical_half_width
from .variational import (
    TripleParams,
    merge_deficit_change,
    merge_triple,
    middle_shift_slope,
    sample_breakpoints,
    triple_params,
)

WIRTINGER_TOL = 1e-12
STRICT_TOL = 1e-9
WIDTH_TOL = 1e-10
CONVEXITY_TOL = 1e-9
POLE_TOL = 1e-9
EXPANSION_TOL = 1e-10
MERGE_TOL = 1e-10
MAX_TERMS = 8
MAX_K = 5


@dataclass(frozen=True)
class PropertyOutcome:
    property_id: str
    samples: int
    worst_residual: float
    violations: int
    elapsed: float = field(default=0.0, compare=False)
    children: tuple["PropertyOutcome", ...] = ()

    @property
    def passed(self):
        return self.violations == 0

    def to_dict(self):
        return asdict(self)


def random_sine_profile(rng, max_terms=MAX_TERMS, min_terms=1):
    """Coefficients uniform in [-1, 1] damped by ``2^-k``."""
    m = int(rng.integers(min_terms, max_terms + 1))
    coeffs = rng.uniform(-1.0, 1.0, m) * 0.5 ** np.arange(m)
    return SineSeriesProfile(tuple(coeffs))


def random_piecewise_profile(rng, max_k=MAX_K):
    k = int(rng.integers(1, max_k + 1))
    bps = sample_breakpoints(k, 1, rng, min_gap=1e-6)[0]
    sign = 1 if rng.random() < 0.5 else -1
    return PiecewiseTrigProfile(tuple(bps), sign, float(rng.uniform(-1.0, 1.0)))


def random_profile(rng):
    return random_sine_profile(rng) if rng.random() < 0.5 else random_piecewise_profile(rng)


def _outcome(pid, samples, worst, violations, started, children=()):
    return PropertyOutcome(pid, samples, float(worst), int(violations), time.perf_counter() - started, tuple(children))


def run_wirtinger(samples: int, seed: int) -> PropertyOutcome:
    """The deficit is nonpositive and vanishes exactly on ``c sin t``.

    ``worst_residual`` is the largest deficit seen on a random profile.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    started = time.perf_counter()
    rng = np.random.default_rng(seed)
    worst = -math.inf
    bad = 0
    for _ in range(samples):
        prof = random_sine_profile(rng)
        f = deficit_quadrature(prof)
        worst = max(worst, f)
        if f > WIRTINGER_TOL:
            bad += 1
        higher = max((abs(c) for c in prof.coefficients[1:]), default=0.0)
        if higher >= 1e-3 and f > -STRICT_TOL:
            bad += 1
        ball = SineSeriesProfile(prof.coefficients[:1])
        if abs(deficit_quadrature(ball)) >= WIRTINGER_TOL:
            bad += 1
    return _outcome("wirtinger", samples, worst, bad, started)


def run_bijection_checks(samples: int, seed: int) -> PropertyOutcome:
    """Constant width, convexity, pole closure, and sharpness of the critical half-width.

    For every random profile and ``w`` in ``{w0, w0 + 0.1, w0 + 1}``; below
    ``w0`` a negative radius of curvature must be found.  ``worst_residual``
    is the largest width error.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    started = time.perf_counter()
    rng = np.random.default_rng(seed)
    worst = 0.0
    bad = 0
    for _ in range(samples):
        prof = random_profile(rng)
        w0 = critical_half_width(prof)
        directions = rng.uniform(-math.pi, math.pi, 64)
        for w in (w0, w0 + 0.1, w0 + 1.0):
            if w <= 0.0:
                continue
            body = Body(prof, w)
            err = float(np.max(np.abs(width_at(body, directions) - 2.0 * w)))
            worst = max(worst, err)
            bad += err >= WIDTH_TOL
            rho_min = min_radius_of_curvature(body)
            bad += rho_min < -CONVEXITY_TOL
            if isinstance(prof, PiecewiseTrigProfile) and w == w0:
                # a vertex must be present at the critical half-width
                bad += abs(rho_min) > CONVEXITY_TOL
            poles = max(abs(curve_point(body, HALF_PI)[0]), abs(curve_point(body, -HALF_PI)[0]))
            bad += poles > POLE_TOL
        if w0 - 0.05 > 0.0:
            below = Body.unchecked(prof, w0 - 0.05)
            bad += min_radius_of_curvature(below) >= 0.0
    return _outcome("bijection", samples, worst, bad, started)


def _sample_triples(rng, n, case):
    """Feasible ``(x, y, z)`` with ``x <= y`` (case ``"x<=y"``) or ``y <= z`` (``"y<=z"``)."""
    out = []
    while len(out) < n:
        x, y, z = rng.uniform(0.0, 2.0, 3)
        p = TripleParams(float(x), float(y), float(z))
        if not p.feasible:
            continue
        if (case == "x<=y" and x <= y) or (case == "y<=z" and y <= z):
            out.append(p)
    return out


def _check_monotonicity(rng, samples):
    started = time.perf_counter()
    bad = 0
    worst = -math.inf
    for j in range(samples):
        prof = random_sine_profile(rng, min_terms=2) if j % 2 == 0 else random_piecewise_profile(rng)
        w0 = max(critical_half_width(prof), 1e-3)
        ratios = [ratio(Body(prof, w0 + dw)) for dw in (0.0, 0.1, 0.5, 1.0, 2.0)]
        steps = np.diff(ratios)
        worst = max(worst, float(-steps.min()))
        bad += bool(np.any(steps <= 0.0))
    return _outcome("ratio_monotonicity", samples, worst, bad, started)


def _check_expansion(rng, samples):
    started = time.perf_counter()
    bad = 0
    worst = 0.0
    for _ in range(samples):
        h = random_sine_profile(rng)
        v = random_sine_profile(rng)
        fh, fv, b = deficit_quadrature(h), deficit_quadrature(v), deficit_bilinear(h, v)
        for eps in (0.1, 0.01):
            res = abs(deficit_quadrature(h + v.scaled(eps)) - fh - 2 * eps * b - eps * eps * fv)
            worst = max(worst, res)
            bad += res >= EXPANSION_TOL
    return _outcome("quadratic_expansion", samples, worst, bad, started)


def _check_merge(rng, samples):
    started = time.perf_counter()
    bad = 0
    worst = 0.0
    for row in sample_breakpoints(2, samples, rng):
        prof = PiecewiseTrigProfile(tuple(row), 1 if rng.random() < 0.5 else -1)
        merged = merge_triple(prof, 1)
        diff = deficit_closed_form(merged) - deficit_closed_form(prof)
        res = abs(merge_deficit_change(triple_params(prof, 1)) - diff)
        worst = max(worst, res)
        bad += (not diff < 0.0) or res >= MERGE_TOL
    return _outcome("merge_monotonicity", samples, worst, bad, started)


def _check_slopes(rng, samples):
    started = time.perf_counter()
    bad = 0
    worst = -math.inf
    for p in _sample_triples(rng, samples, "x<=y"):
        d = middle_shift_slope(p)
        worst = max(worst, d)
        bad += not d < 0.0
    for p in _sample_triples(rng, samples, "y<=z"):
        d = middle_shift_slope(p)
        worst = max(worst, -d)
        bad += not d > 0.0
    return _outcome("slope_signs", 2 * samples, worst, bad, started)


def _check_global_bound(rng, samples):
    started = time.perf_counter()
    bad = 0
    lowest = math.inf
    for k in range(1, MAX_K + 1):
        for sign in (1, -1):
            f = closed_form_deficit_from_breakpoints(sample_breakpoints(k, samples, rng), sign)
            lowest = min(lowest, float(f.min()))
            bad += int(np.count_nonzero(f < REULEAUX_DEFICIT - STRICT_TOL))
    # residual: how far the lowest deficit sits below the Reuleaux value (<= 0 when passing)
    return _outcome("global_bound", 2 * MAX_K * samples, REULEAUX_DEFICIT - lowest, bad, started)


def run_variational_checks(samples: int, seed: int) -> PropertyOutcome:
    """Ratio monotonicity in ``w``, exact quadratic expansion, merge monotonicity,
    slope sign laws and the global lower bound on the deficit.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    started = time.perf_counter()
    streams = [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(5)]
    children = (
        _check_monotonicity(streams[0], max(1, samples // 10)),
        _check_expansion(streams[1], max(1, samples // 10)),
        _check_merge(streams[2], samples),
        _check_slopes(streams[3], samples),
        _check_global_bound(streams[4], samples),
    )
    return _outcome(
        "variational",
        sum(c.samples for c in children),
        max(c.worst_residual for c in children),
        sum(c.violations for c in children),
        started,
        children,
    )


def run_all(samples: int, seed: int):
    return [
        run_wirtinger(samples, seed),
        run_bijection_checks(samples, seed),
        run_variational_checks(samples, seed),
    ]
