"""Volume deficit functional, volume, volume ratio and the inward normal flow.

The volume of the body ``(h, w)`` is ``4 pi (w^3/3 + w D(h))`` with the
deficit functional

    D(h) = int_0^{pi/2} (h^2 - h'^2 / 2) cos t dt   <= 0,

and the ratio to the ball of the same width is ``1 + 3 D(h) / w^2``.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import FlowExitsConvexityError, InfeasibleBodyError
from .geometry import surface_area
from .profiles import (
    TOL_FEAS,
    Body,
    PiecewiseTrigProfile,
    Profile,
    SineSeriesProfile,
    critical_half_width,
)
from .quadrature import piecewise_gauss

QUAD_TOL = 1e-10

#: Ratio of the rotated Reuleaux triangle, the minimizer among bodies of revolution.
REULEAUX_RATIO = 4.0 - math.pi
#: Deficit of the normalized Reuleaux profile.
REULEAUX_DEFICIT = 1.0 - math.pi / 3.0
#: Ratio of Meissner's tetrahedron (not a body of revolution); reference only, never computed.
MEISSNER_RATIO = 0.8019


def _knots(*profiles):
    return np.unique(np.concatenate([np.asarray(p.knots) for p in profiles]))


def deficit_bilinear(u: Profile, v: Profile, tol: float = QUAD_TOL) -> float:
    """Symmetric bilinear form ``int (u v - u' v' / 2) cos t dt`` over [0, pi/2].

    ``deficit_bilinear(h, h)`` is the deficit of ``h``; the deficit of
    ``h + e v`` expands exactly as ``D(h) + 2 e B(h, v) + e^2 D(v)``.
    """

    def integrand(t):
        hu, du, _ = u.quarter(t)
        hv, dv, _ = v.quarter(t)
        return (hu * hv - 0.5 * du * dv) * np.cos(t)

    return piecewise_gauss(integrand, _knots(u, v), tol=tol)


def deficit_quadrature(profile: Profile, tol: float = QUAD_TOL) -> float:
    """Deficit ``int (h^2 - h'^2/2) cos t dt`` by adaptive Gauss quadrature.

    Integration is split at the breakpoints of piecewise profiles, where
    the integrand is smooth on each panel.
    """
    return deficit_bilinear(profile, profile, tol=tol)


def deficit_boundary_form(profile: Profile, tol: float = QUAD_TOL) -> float:
    """Deficit through the equivalent form ``int (h + h'') (h cos t - h' sin t) dt``.

    Integration by parts against the boundary conditions turns the
    quadratic form into this one; the factor ``h cos t - h' sin t``
    vanishes at both ends of the quarter circle.
    """

    def integrand(t):
        h, dh, d2h = profile.quarter(t)
        return (h + d2h) * (h * np.cos(t) - dh * np.sin(t))

    return piecewise_gauss(integrand, profile.knots, tol=tol)


def deficit_closed_form(profile: PiecewiseTrigProfile) -> float:
    """Exact deficit of a piecewise profile: ``sum_i sigma_i A_i (tau_{i+1} - tau_i) + 1``.

    On each piece ``(h + h'')(h cos t - h' sin t) = sigma_i A_i + cos t``,
    and the ``cos t`` terms integrate to 1 over the quarter circle.
    """
    knots = profile.knots
    total = 0.0
    for i, (sig, a) in enumerate(zip(profile.signs, profile.cos_coeffs)):
        total += sig * a * (knots[i + 1] - knots[i])
    return total + 1.0


def closed_form_deficit_from_breakpoints(breakpoints, leading_sign=1):
    """Vectorized :func:`deficit_closed_form` over rows of a breakpoint array.

    ``breakpoints`` has shape ``(..., k)``.  Used by searches that evaluate
    many configurations without building profile objects.
    """
    tau = np.asarray(breakpoints, dtype=float)
    k = tau.shape[-1]
    signs = leading_sign * (-1.0) ** np.arange(k + 1)
    jumps = signs[:-1] - signs[1:]
    a = np.empty(tau.shape[:-1] + (k + 1,))
    a[..., 0] = -leading_sign
    a[..., 1:] = -leading_sign + np.cumsum(jumps * np.cos(tau), axis=-1)
    zeros = np.zeros(tau.shape[:-1] + (1,))
    knots = np.concatenate([zeros, tau, zeros + 0.5 * math.pi], axis=-1)
    return (signs * a * np.diff(knots, axis=-1)).sum(axis=-1) + 1.0


def deficit(profile: Profile) -> float:
    """Deficit by the most accurate available route."""
    if isinstance(profile, PiecewiseTrigProfile):
        return deficit_closed_form(profile)
    return deficit_quadrature(profile)


def _require_feasible(body: Body):
    if body.half_width < body.critical - TOL_FEAS:
        raise InfeasibleBodyError(
            f"half-width {body.half_width!r} is below the critical half-width {body.critical!r}"
        )


def volume(body: Body, deficit_value: float | None = None) -> float:
    """``4 pi (w^3/3 + w D(h))``."""
    _require_feasible(body)
    d = deficit(body.profile) if deficit_value is None else deficit_value
    w = body.half_width
    return 4.0 * math.pi * (w**3 / 3.0 + w * d)


def ratio(body: Body, deficit_value: float | None = None) -> float:
    """Volume over the volume of the ball of equal width: ``1 + 3 D(h) / w^2``."""
    _require_feasible(body)
    d = deficit(body.profile) if deficit_value is None else deficit_value
    return 1.0 + 3.0 * d / body.half_width**2


def blaschke_volume(body: Body, area: float | None = None) -> float:
    """Volume recovered from the surface area: ``A w - (8 pi / 3) w^3``."""
    a = surface_area(body) if area is None else area
    w = body.half_width
    return a * w - 8.0 * math.pi / 3.0 * w**3


def normal_flow(body: Body, tau: float) -> Body:
    """Move the boundary inward a distance ``tau`` along its normals.

    The profile is unchanged and the half-width drops by ``tau``.  The flow
    stays convex only while ``w - tau >= w0(h)``.
    """
    max_tau = body.half_width - body.critical
    if tau < 0.0 or tau > max_tau + TOL_FEAS or body.half_width - tau <= 0.0:
        raise FlowExitsConvexityError(
            f"flow time {tau!r} leaves the convex range [0, {max_tau!r}]", max_tau=max_tau
        )
    return Body(body.profile, body.half_width - tau)


@dataclass(frozen=True)
class FunctionalReport:
    deficit: float
    critical_half_width: float
    half_width: float
    volume: float
    area: float
    ratio: float
    method: str

    def to_dict(self):
        return asdict(self)


def analyze(body: Body, method: str | None = None) -> FunctionalReport:
    """Compute all scalar functionals of ``body``.

    ``method`` is ``"exact-piecewise"`` (piecewise profiles only) or
    ``"quadrature"``; by default the exact route is used when available.
    """
    if method is None:
        method = "exact-piecewise" if isinstance(body.profile, PiecewiseTrigProfile) else "quadrature"
    if method == "exact-piecewise":
        if not isinstance(body.profile, PiecewiseTrigProfile):
            raise ValueError("exact-piecewise evaluation needs a piecewise profile")
        d = deficit_closed_form(body.profile)
    elif method == "quadrature":
        d = deficit_quadrature(body.profile)
    else:
        raise ValueError(f"unknown method {method!r}")
    return FunctionalReport(
        deficit=d,
        critical_half_width=critical_half_width(body.profile),
        half_width=body.half_width,
        volume=volume(body, d),
        area=surface_area(body),
        ratio=ratio(body, d),
        method=method,
    )


def is_first_harmonic(profile: Profile, tol: float = 0.0) -> bool:
    """True when the profile is ``c sin t`` (a ball)."""
    return isinstance(profile, SineSeriesProfile) and all(abs(c) <= tol for c in profile.coefficients[1:])
