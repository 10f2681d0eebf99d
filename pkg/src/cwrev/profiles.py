"""Profiles of constant-width bodies of revolution.

A body of revolution of constant width ``2w`` is described by the pair
``(h, w)`` where ``s = h + w`` is the support function of its generating
curve, parametrized by the angle ``t`` of the outward normal.  ``h`` is
given on the quarter circle ``[0, pi/2]`` with ``h(0) = 0`` and
``h'(pi/2) = 0`` and extended to the whole circle by

    h(t + pi) = -h(t)        (constant width)
    h(pi - t) = h(t)         (mirror symmetry about the rotation axis)

Two analytic families are supported: odd-harmonic sine series, which
are smooth, and piecewise trigonometric profiles with ``|h'' + h| = 1``,
which carry the extremal structure (arcs and vertices).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Union

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import InfeasibleBodyError, ValidationError

HALF_PI = 0.5 * math.pi
TWO_PI = 2.0 * math.pi

#: Slack allowed on ``w >= w0(h)`` so that ``w = w0`` survives rounding.
TOL_FEAS = 1e-9
#: Tolerance on the boundary conditions and continuity residuals.
VALIDATION_TOL = 1e-10

W0_SAMPLES = 4096
W0_XATOL = 1e-12


@dataclass(frozen=True)
class SineSeriesProfile:
    """``h(t) = sum_k c_k sin((2k+1) t)``.

    Every basis function already satisfies both circle symmetries and
    both boundary conditions, so any finite coefficient list is admissible.
    """

    coefficients: tuple[float, ...]

    def __post_init__(self):
        coeffs = tuple(float(c) for c in np.atleast_1d(np.asarray(self.coefficients, dtype=float)))
        if not coeffs:
            raise ValueError("sine series needs at least one coefficient")
        if not all(math.isfinite(c) for c in coeffs):
            raise ValueError("sine series coefficients must be finite")
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def harmonics(self):
        return 2 * np.arange(len(self.coefficients)) + 1

    @property
    def knots(self):
        return (0.0, HALF_PI)

    def quarter(self, t):
        """Return ``(h, h', h'')`` at ``t`` in [0, pi/2] (the formula is valid anywhere)."""
        t = np.asarray(t, dtype=float)
        n = self.harmonics
        c = np.asarray(self.coefficients)
        arg = np.multiply.outer(t, n)
        s, co = np.sin(arg), np.cos(arg)
        return s @ c, co @ (c * n), -(s @ (c * n * n))

    def curvature_excess(self, t):
        """``h + h''`` evaluated directly from the coefficients."""
        t = np.asarray(t, dtype=float)
        n = self.harmonics
        c = np.asarray(self.coefficients) * (1.0 - n * n)
        return np.sin(np.multiply.outer(t, n)) @ c

    def scaled(self, factor):
        return SineSeriesProfile(tuple(factor * c for c in self.coefficients))

    def __add__(self, other):
        if not isinstance(other, SineSeriesProfile):
            return NotImplemented
        m = max(len(self.coefficients), len(other.coefficients))
        a = np.zeros(m)
        b = np.zeros(m)
        a[: len(self.coefficients)] = self.coefficients
        b[: len(other.coefficients)] = other.coefficients
        return SineSeriesProfile(tuple(a + b))


@dataclass(frozen=True)
class PiecewiseTrigProfile:
    """Profile with ``|h'' + h| = 1`` almost everywhere on [0, pi/2].

    On piece ``i`` (between ``tau_i`` and ``tau_{i+1}``, with ``tau_0 = 0``
    and ``tau_{k+1} = pi/2``) the profile reads
    ``h = A_i cos t + B_i sin t + sigma_i`` with ``sigma_i = sigma_0 (-1)^i``.
    ``A_0 = -sigma_0`` enforces ``h(0) = 0`` and the coefficients of the
    following pieces are fixed by C^1 continuity at each breakpoint.
    ``vertical_offset`` is ``B_0``; changing it translates the curve along
    the axis without changing its shape.

    Construction never rejects constraint violations (ordering, range,
    closure); :func:`validate` reports them.
    """

    breakpoints: tuple[float, ...]
    leading_sign: int = 1
    vertical_offset: float = 0.0
    signs: tuple[int, ...] = field(init=False, repr=False, compare=False)
    cos_coeffs: tuple[float, ...] = field(init=False, repr=False, compare=False)
    sin_coeffs: tuple[float, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        bps = tuple(float(b) for b in self.breakpoints)
        if not all(math.isfinite(b) for b in bps):
            raise ValueError("breakpoints must be finite")
        if self.leading_sign not in (1, -1):
            raise ValueError("leading_sign must be +1 or -1")
        if not math.isfinite(self.vertical_offset):
            raise ValueError("vertical_offset must be finite")
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "leading_sign", int(self.leading_sign))
        object.__setattr__(self, "vertical_offset", float(self.vertical_offset))

        signs = [self.leading_sign * (-1) ** i for i in range(len(bps) + 1)]
        a = [-float(self.leading_sign)]
        b = [self.vertical_offset]
        for i, tau in enumerate(bps, start=1):
            jump = signs[i - 1] - signs[i]
            a.append(a[-1] + jump * math.cos(tau))
            b.append(b[-1] + jump * math.sin(tau))
        object.__setattr__(self, "signs", tuple(signs))
        object.__setattr__(self, "cos_coeffs", tuple(a))
        object.__setattr__(self, "sin_coeffs", tuple(b))

    @property
    def num_breakpoints(self):
        return len(self.breakpoints)

    @property
    def knots(self):
        return (0.0, *self.breakpoints, HALF_PI)

    @property
    def closure_residual(self):
        """``sum_i (-1)^(i-1) cos(tau_i) - 1/2``; zero iff ``h'(pi/2) = 0``."""
        return sum((-1) ** i * math.cos(tau) for i, tau in enumerate(self.breakpoints)) - 0.5

    def piece_index(self, t):
        # side="right": a breakpoint belongs to the piece on its right
        return np.searchsorted(np.asarray(self.breakpoints), t, side="right")

    def quarter(self, t):
        t = np.asarray(t, dtype=float)
        idx = self.piece_index(t)
        a = np.asarray(self.cos_coeffs)[idx]
        b = np.asarray(self.sin_coeffs)[idx]
        sig = np.asarray(self.signs, dtype=float)[idx]
        c, s = np.cos(t), np.sin(t)
        h = a * c + b * s + sig
        return h, -a * s + b * c, -a * c - b * s

    def curvature_excess(self, t):
        t = np.asarray(t, dtype=float)
        return np.asarray(self.signs, dtype=float)[self.piece_index(t)]

    def negated(self):
        return PiecewiseTrigProfile(self.breakpoints, -self.leading_sign, -self.vertical_offset)

    def with_breakpoints(self, breakpoints):
        return PiecewiseTrigProfile(tuple(breakpoints), self.leading_sign, self.vertical_offset)


Profile = Union[SineSeriesProfile, PiecewiseTrigProfile]


def evaluate(profile: Profile, t):
    """Evaluate ``(h, h', h'')`` of the circle extension at any angle ``t``.

    ``t`` is reduced to [-pi, pi); the quarter-circle representation is
    mapped to the other quadrants through oddness and mirror symmetry.
    At a breakpoint inside [0, pi/2] the right limit of ``h''`` is returned.
    Scalars in, scalars out; arrays in, arrays out.
    """
    scalar = np.ndim(t) == 0
    t = np.asarray(t, dtype=float)
    # leave in-range angles untouched so breakpoints are hit exactly
    red = np.where((t >= -math.pi) & (t < math.pi), t, np.mod(t + math.pi, TWO_PI) - math.pi)
    odd = np.where(red < 0, -1.0, 1.0)
    u = np.abs(red)
    mirror = np.where(u > HALF_PI, -1.0, 1.0)
    u = np.where(u > HALF_PI, math.pi - u, u)
    h, dh, d2h = profile.quarter(u)
    h, dh, d2h = odd * h, mirror * dh, odd * d2h
    if scalar:
        return float(h), float(dh), float(d2h)
    return h, dh, d2h


def curvature_excess(profile: Profile, t):
    """``h + h''`` on the full circle (odd in ``t``)."""
    h, _, d2h = evaluate(profile, t)
    return h + d2h


@lru_cache(maxsize=4096)
def _sine_critical_half_width(profile):
    grid = np.linspace(0.0, HALF_PI, W0_SAMPLES + 1)
    vals = np.abs(profile.curvature_excess(grid))
    best = float(vals.max())
    # local maxima of the sampled |h + h''|, endpoints included; a flat run counts once
    padded = np.concatenate(([-np.inf], vals, [-np.inf]))
    peaks = np.nonzero((padded[1:-1] > padded[:-2]) & (padded[1:-1] >= padded[2:]))[0]
    step = grid[1] - grid[0]
    n = profile.harmonics.astype(float)
    c = np.asarray(profile.coefficients) * (1.0 - n * n)

    def neg_abs(x):
        return -abs(float(np.dot(c, np.sin(n * x))))

    for j in peaks:
        lo = max(grid[j] - step, 0.0)
        hi = min(grid[j] + step, HALF_PI)
        res = minimize_scalar(neg_abs, bounds=(lo, hi), method="bounded", options={"xatol": W0_XATOL})
        best = max(best, -float(res.fun))
    return best


def critical_half_width(profile: Profile) -> float:
    """Essential supremum of ``|h + h''|`` over [0, pi/2].

    This is the smallest half-width ``w`` for which ``h + w`` is the
    support function of a convex curve.  Piecewise profiles return
    exactly 1.
    """
    if isinstance(profile, PiecewiseTrigProfile):
        return 1.0
    return _sine_critical_half_width(profile)


@dataclass(frozen=True)
class Violation:
    constraint: str
    residual: float
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self):
        return not self.violations

    def __bool__(self):
        return self.ok

    def summary(self):
        if self.ok:
            return "valid"
        return "; ".join(
            f"{v.constraint} (residual {v.residual:.4g}{', ' + v.detail if v.detail else ''})"
            for v in self.violations
        )


def validate(profile: Profile, tol: float = VALIDATION_TOL) -> ValidationReport:
    """Check the defining constraints of a profile and list every violation."""
    out = []
    h0 = evaluate(profile, 0.0)[0]
    if abs(h0) > tol:
        out.append(Violation("h(0)=0", abs(h0)))
    dh_end = profile.quarter(HALF_PI)[1]
    if abs(float(dh_end)) > tol:
        out.append(Violation("h'(pi/2)=0", abs(float(dh_end))))

    if isinstance(profile, PiecewiseTrigProfile):
        bps = profile.breakpoints
        for i, tau in enumerate(bps, start=1):
            if not 0.0 < tau < HALF_PI:
                out.append(Violation("breakpoint_range", max(-tau, tau - HALF_PI, 0.0), f"tau_{i}={tau!r}"))
        for i in range(1, len(bps)):
            if not bps[i] > bps[i - 1]:
                out.append(Violation("breakpoint_order", bps[i - 1] - bps[i], f"tau_{i} >= tau_{i + 1}"))
        a, b, sig = profile.cos_coeffs, profile.sin_coeffs, profile.signs
        for i, tau in enumerate(bps, start=1):
            c, s = math.cos(tau), math.sin(tau)
            jump_h = (a[i] * c + b[i] * s + sig[i]) - (a[i - 1] * c + b[i - 1] * s + sig[i - 1])
            jump_dh = (-a[i] * s + b[i] * c) - (-a[i - 1] * s + b[i - 1] * c)
            res = max(abs(jump_h), abs(jump_dh))
            if res > tol:
                out.append(Violation("c1_continuity", res, f"at tau_{i}"))
        closure = abs(profile.closure_residual)
        if closure > tol:
            out.append(Violation("closure", closure, "sum (-1)^(i-1) cos tau_i != 1/2"))
    else:
        if not all(math.isfinite(c) for c in profile.coefficients):
            out.append(Violation("finite_coefficients", math.inf))
    return ValidationReport(tuple(out))


def make_ball(c: float = 0.0) -> SineSeriesProfile:
    """Profile ``c sin t``: a round ball whose centre sits ``c`` up the axis."""
    if not math.isfinite(c):
        raise ValueError("c must be finite")
    return SineSeriesProfile((float(c),))


def reuleaux_profile(leading_sign: int = 1, vertical_offset: float = 0.0) -> PiecewiseTrigProfile:
    """The single-breakpoint profile (breakpoint at pi/3) of the rotated Reuleaux triangle."""
    return PiecewiseTrigProfile((math.pi / 3.0,), leading_sign, vertical_offset)


@dataclass(frozen=True)
class Body:
    """A profile together with a half-width ``w >= w0(h)``; the body has width ``2w``."""

    profile: Profile
    half_width: float
    critical: float = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        w = float(self.half_width)
        object.__setattr__(self, "half_width", w)
        report = validate(self.profile)
        if not report.ok:
            raise ValidationError(f"invalid profile: {report.summary()}", report.violations)
        if not (math.isfinite(w) and w > 0.0):
            raise InfeasibleBodyError(f"half-width must be positive, got {w!r}")
        w0 = critical_half_width(self.profile)
        object.__setattr__(self, "critical", w0)
        if w < w0 - TOL_FEAS:
            raise InfeasibleBodyError(f"half-width {w!r} is below the critical half-width {w0!r}")

    @classmethod
    def unchecked(cls, profile: Profile, half_width: float) -> "Body":
        """Pair a profile with any half-width, skipping feasibility checks.

        Used to probe what goes wrong below the critical half-width.
        """
        body = object.__new__(cls)
        object.__setattr__(body, "profile", profile)
        object.__setattr__(body, "half_width", float(half_width))
        object.__setattr__(body, "critical", critical_half_width(profile))
        return body

    @property
    def width(self):
        return 2.0 * self.half_width

    def support(self, t):
        """``(s, s', s'')`` of the generating curve at normal angle ``t``."""
        h, dh, d2h = evaluate(self.profile, t)
        return h + self.half_width, dh, d2h
