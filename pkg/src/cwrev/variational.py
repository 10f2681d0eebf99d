"""Discontinuity-structure moves on piecewise profiles and the minimizer search.

Three successive pieces with signs ``+1, -1, +1`` (after negating the
profile if needed) between discontinuities ``t0 < t1 < t2`` and the next
discontinuity or the pole ``t3`` are summarized by

    x = -A_{i-1},   y = A_i,   z = -A_{i+1},

so that ``cos t1 = (x + y)/2`` and ``cos t2 = (y + z)/2``.  Two moves
lower the deficit:

* merging ``t1, t2`` into one breakpoint at ``arccos((x + z)/2)``, which
  helps when ``z < y < x``;
* shifting ``y`` (both breakpoints move), whose slope is negative when
  ``x <= y`` and positive when ``y <= z``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize as scipy_minimize

from .errors import (
    DomainError,
    InfeasibleConfigurationError,
    InfeasibleMergeError,
    InfeasiblePerturbationError,
)
from .functionals import REULEAUX_DEFICIT, closed_form_deficit_from_breakpoints, deficit_closed_form
from .profiles import HALF_PI, PiecewiseTrigProfile

COLLISION_GAP = 1e-6
RESTARTS = 6
# rounding slack on x, y, z >= 0 (z = 0 exactly when t3 is the pole)
ROUNDING_TOL = 1e-12


@dataclass(frozen=True)
class TripleParams:
    x: float
    y: float
    z: float

    def issues(self):
        """Constraint violations, empty when the triple comes from a valid profile."""
        out = []
        if min(self.x, self.y, self.z) < -ROUNDING_TOL:
            out.append("x, y, z must be nonnegative")
        if not self.x + self.y < 2.0:
            out.append("x + y must be < 2")
        if not self.y + self.z < 2.0:
            out.append("y + z must be < 2")
        if not self.x + self.y > 0.0:
            out.append("x + y must be > 0")
        if not self.z < self.x:
            out.append("z must be < x (t1 < t2)")
        return out

    @property
    def feasible(self):
        return not self.issues()

    @property
    def breakpoint_cosines(self):
        return 0.5 * (self.x + self.y), 0.5 * (self.y + self.z)


def _arccos_checked(c, what):
    if not -1.0 <= c <= 1.0:
        raise DomainError(f"{what} = {c!r} lies outside [-1, 1]")
    return math.acos(c)


def merge_deficit_change(params: TripleParams) -> float:
    """Deficit change of the merge move.

    ``(z - x) acos((x+z)/2) + (x - y) acos((x+y)/2) + (y - z) acos((y+z)/2)``
    """
    x, y, z = params.x, params.y, params.z
    return (
        (z - x) * _arccos_checked(0.5 * (x + z), "(x+z)/2")
        + (x - y) * _arccos_checked(0.5 * (x + y), "(x+y)/2")
        + (y - z) * _arccos_checked(0.5 * (y + z), "(y+z)/2")
    )


def middle_shift_slope(params: TripleParams) -> float:
    """Derivative of the deficit when the middle coefficient ``y`` moves to ``y + eps``."""
    x, y, z = params.x, params.y, params.z
    if abs(x + y) >= 2.0 or abs(y + z) >= 2.0:
        raise DomainError(f"need |x+y| < 2 and |y+z| < 2, got {x + y!r}, {y + z!r}")
    return (
        math.acos(0.5 * (x + y))
        - math.acos(0.5 * (y + z))
        + (x - y) / math.sqrt(4.0 - (x + y) ** 2)
        + (y - z) / math.sqrt(4.0 - (y + z) ** 2)
    )


def _triple_window(profile: PiecewiseTrigProfile, i: int):
    k = profile.num_breakpoints
    if not 1 <= i <= k - 1:
        raise InfeasibleMergeError(f"no triple of successive discontinuities around index {i} (k={k})")
    knots = profile.knots
    return knots[i - 1], knots[i], knots[i + 1], knots[i + 2]


def triple_params(profile: PiecewiseTrigProfile, i: int) -> TripleParams:
    """``(x, y, z)`` for pieces ``i-1, i, i+1``, normalized so piece ``i-1`` has sign +1."""
    _triple_window(profile, i)
    sig = profile.signs[i - 1]
    a = profile.cos_coeffs
    return TripleParams(-sig * a[i - 1], sig * a[i], -sig * a[i + 1])


def merge_triple(profile: PiecewiseTrigProfile, i: int) -> PiecewiseTrigProfile:
    """Replace breakpoints ``tau_i, tau_{i+1}`` by a single one at ``arccos((x+z)/2)``.

    The profile is unchanged up to ``t0 = tau_{i-1}``; beyond ``t3`` it is
    the negated original up to a multiple of ``sin t`` (the vertical
    translation freedom), so the deficit there is unchanged.
    """
    t0, _, _, t3 = _triple_window(profile, i)
    p = triple_params(profile, i)
    c_star = 0.5 * (p.x + p.z)
    if not math.cos(t3) < c_star < math.cos(t0):
        raise InfeasibleMergeError(
            f"merged breakpoint cos = {c_star!r} falls outside ({math.cos(t3)!r}, {math.cos(t0)!r})"
        )
    bps = profile.breakpoints
    return profile.with_breakpoints(bps[: i - 1] + (math.acos(c_star),) + bps[i + 1 :])


def perturb_middle(profile: PiecewiseTrigProfile, i: int, eps: float) -> PiecewiseTrigProfile:
    """Shift the normalized middle coefficient ``y`` by ``eps``.

    Breakpoints move exactly to ``cos tau_i = (x + y + eps)/2`` and
    ``cos tau_{i+1} = (y + eps + z)/2``; all other pieces are untouched.
    """
    try:
        t0, _, _, t3 = _triple_window(profile, i)
    except InfeasibleMergeError as exc:
        raise InfeasiblePerturbationError(str(exc)) from None
    if eps == 0.0:
        return profile
    p = triple_params(profile, i)
    c1 = 0.5 * (p.x + p.y + eps)
    c2 = 0.5 * (p.y + eps + p.z)
    if not math.cos(t0) > c1 > c2 > math.cos(t3):
        raise InfeasiblePerturbationError(
            f"eps={eps!r} moves breakpoints out of order (cosines {c1!r}, {c2!r} within "
            f"({math.cos(t3)!r}, {math.cos(t0)!r}))"
        )
    bps = profile.breakpoints
    return profile.with_breakpoints(bps[: i - 1] + (math.acos(c1), math.acos(c2)) + bps[i + 1 :])


# --- feasible configurations ------------------------------------------------


def closing_cosine(free_cosines):
    """Cosine of the last breakpoint that makes the alternating cosine sum 1/2."""
    c = np.asarray(free_cosines, dtype=float)
    k = c.shape[-1] + 1
    partial = (c * (-1.0) ** np.arange(k - 1)).sum(axis=-1)
    return (-1.0) ** (k - 1) * (0.5 - partial)


def sample_breakpoints(k: int, n: int, rng: np.random.Generator, min_gap: float = 0.0) -> np.ndarray:
    """Draw ``n`` feasible breakpoint sets of size ``k`` (shape ``(n, k)``).

    The first ``k - 1`` cosines are uniform order statistics on (0, 1); the
    last one is solved from the closure constraint and the draw is kept if
    it respects the ordering.
    """
    if k < 1:
        raise InfeasibleConfigurationError("need at least one breakpoint")
    if k == 1:
        return np.full((n, 1), math.acos(0.5))
    out = []
    have = 0
    while have < n:
        m = max(64, 4 * (n - have))
        free = -np.sort(-rng.uniform(0.0, 1.0, size=(m, k - 1)), axis=1)
        last = closing_cosine(free)
        ok = (last > 0.0) & (last < free[:, -1])
        cos_all = np.concatenate([free, last[:, None]], axis=1)[ok]
        tau = np.arccos(np.clip(cos_all, -1.0, 1.0))
        if min_gap > 0.0:
            knots = np.concatenate([np.zeros((len(tau), 1)), tau, np.full((len(tau), 1), HALF_PI)], axis=1)
            tau = tau[np.diff(knots, axis=1).min(axis=1) > min_gap]
        out.append(tau)
        have += len(tau)
    return np.concatenate(out)[:n]


def _close_last(free):
    """Append the closing breakpoint to ``free``; ``None`` if it breaks ordering."""
    free = list(free)
    last = float(closing_cosine(np.cos(free))) if free else 0.5
    prev = math.cos(free[-1]) if free else 1.0
    if not 0.0 < last < prev:
        return None
    return tuple(free) + (math.acos(last),)


def project_to_closure(breakpoints) -> tuple[float, ...]:
    """Restore the closure constraint by re-solving one breakpoint from the others.

    The last breakpoint is tried first, then the others in turn.
    """
    bps = list(breakpoints)
    k = len(bps)
    if k == 0:
        raise InfeasibleConfigurationError("no breakpoints: h'(pi/2) = 0 cannot hold")
    cand = _close_last(bps[:-1])
    if cand is not None and _ordered(cand):
        return cand
    for j in range(k - 1):
        others = bps[:j] + bps[j + 1 :]
        sign = (-1.0) ** j
        partial = sum((-1.0) ** (m if m < j else m + 1) * math.cos(t) for m, t in enumerate(others))
        c = sign * (0.5 - partial)
        if -1.0 < c < 1.0:
            trial = tuple(bps[:j] + [math.acos(c)] + bps[j + 1 :])
            if _ordered(trial):
                return trial
    raise InfeasibleConfigurationError(f"cannot satisfy closure for breakpoints {tuple(bps)!r}")


def _min_gap(bps):
    knots = (0.0, *bps, HALF_PI)
    return min(b - a for a, b in zip(knots[:-1], knots[1:]))


def _ordered(bps):
    knots = (0.0, *bps, HALF_PI)
    return all(b > a for a, b in zip(knots[:-1], knots[1:]))


def collapse(profile: PiecewiseTrigProfile, gap: float = COLLISION_GAP) -> PiecewiseTrigProfile:
    """Remove pieces thinner than ``gap`` and restore closure.

    A vanishing first piece drops ``tau_1`` and flips the leading sign, a
    vanishing last piece drops ``tau_k``, and a vanishing interior piece
    drops both of its breakpoints (its neighbours share a sign and join).
    """
    bps = list(profile.breakpoints)
    sign = profile.leading_sign
    changed = True
    while changed and bps:
        changed = False
        if bps[0] < gap:
            bps.pop(0)
            sign = -sign
            changed = True
            continue
        if HALF_PI - bps[-1] < gap:
            bps.pop()
            changed = True
            continue
        for j in range(len(bps) - 1):
            if bps[j + 1] - bps[j] < gap:
                del bps[j : j + 2]
                changed = True
                break
    if len(bps) == profile.num_breakpoints:
        return profile
    return PiecewiseTrigProfile(project_to_closure(bps), sign, profile.vertical_offset)


# --- search -------------------------------------------------------------------


@dataclass(frozen=True)
class TraceEntry:
    breakpoints: tuple[float, ...]
    leading_sign: int
    deficit: float
    stage: str

    @property
    def k(self):
        return len(self.breakpoints)

    @property
    def interior(self):
        """No piece is thinner than the collision gap."""
        return _min_gap(self.breakpoints) >= COLLISION_GAP


@dataclass
class SearchResult:
    k: int
    best_profile: PiecewiseTrigProfile
    best_deficit: float
    trace: list[TraceEntry] = field(default_factory=list)
    converged: bool = False

    @property
    def best_ratio(self):
        """Volume ratio of the best profile at its minimizing half-width ``w = 1``."""
        return 1.0 + 3.0 * self.best_deficit


def _objective_factory(k, leading_sign):
    # scalar math: this runs ~10^5 times per search and k is tiny
    def objective(free):
        prev_t, prev_c = 0.0, 1.0
        cos_free = []
        for t in free:
            if t <= prev_t:
                return 1.0 + (prev_t - t)
            prev_t = t
            cos_free.append(math.cos(t))
        if prev_t >= HALF_PI:
            return 1.0 + (prev_t - HALF_PI)
        partial = sum(c if j % 2 == 0 else -c for j, c in enumerate(cos_free))
        last = (0.5 - partial) if (k - 1) % 2 == 0 else (partial - 0.5)
        prev_c = cos_free[-1]
        if not 0.0 < last < prev_c:
            return 1.0 + max(-last, last - prev_c, 0.0)
        knots = [0.0, *free, math.acos(last), HALF_PI]
        total = 1.0
        a = -leading_sign
        sig = leading_sign
        for j in range(k + 1):
            total += sig * a * (knots[j + 1] - knots[j])
            if j < k:
                a += 2 * sig * (cos_free[j] if j < k - 1 else last)
                sig = -sig
        return total

    return objective


def _local_search(profile, tol):
    k = profile.num_breakpoints
    if k == 1:
        return PiecewiseTrigProfile((math.acos(0.5),), profile.leading_sign, profile.vertical_offset), True
    free0 = np.asarray(profile.breakpoints[:-1])
    objective = _objective_factory(k, profile.leading_sign)
    x, fx, ok = free0, objective(free0), False
    # restarts rebuild a simplex that collapsed against the feasibility wall
    for _ in range(RESTARTS):
        res = scipy_minimize(
            objective,
            x,
            method="Nelder-Mead",
            options={"xatol": tol, "fatol": 1e-15, "maxfev": 1500 * k},
        )
        improved = res.fun < fx - 1e-15
        if res.fun <= fx:
            x, fx = res.x, res.fun
        if res.success and not improved:
            ok = True
            break
        closed = _close_last(x)
        if closed is not None and _min_gap(closed) < COLLISION_GAP:
            # reached a stratum boundary; collapse takes over from here
            ok = True
            break
    closed = _close_last(x)
    if closed is None or not _ordered(closed):
        closed = project_to_closure(profile.breakpoints)
    return PiecewiseTrigProfile(closed, profile.leading_sign, profile.vertical_offset), ok


def _best_merge(profile):
    best = None
    for i in range(1, profile.num_breakpoints):
        try:
            cand = merge_triple(profile, i)
        except InfeasibleMergeError:
            continue
        gain = deficit_closed_form(cand) - deficit_closed_form(profile)
        if gain < 0.0 and (best is None or gain < best[0]):
            best = (gain, cand)
    return None if best is None else best[1]


def descend(profile: PiecewiseTrigProfile, trace: list | None = None, tol: float = 1e-10):
    """Local search in the stratum of ``profile``, then collapse or merge, until one breakpoint remains
    or no move lowers the deficit.  Returns ``(final_profile, converged)``.
    """
    trace = [] if trace is None else trace
    converged = True
    current = profile
    while True:
        current, ok = _local_search(current, tol)
        converged = converged and ok
        trace.append(TraceEntry(current.breakpoints, current.leading_sign, deficit_closed_form(current), "local"))
        reduced = collapse(current)
        if reduced is not current:
            current = reduced
            trace.append(TraceEntry(current.breakpoints, current.leading_sign, deficit_closed_form(current), "collapse"))
            continue
        if current.num_breakpoints >= 2:
            merged = _best_merge(current)
            if merged is not None:
                current = merged
                trace.append(TraceEntry(current.breakpoints, current.leading_sign, deficit_closed_form(current), "merge"))
                continue
        return current, converged


def minimize(k: int, seeds: int, seed: int | None = None, leading_sign: int = 1) -> SearchResult:
    """Multi-start search for the smallest deficit among piecewise profiles with ``k`` breakpoints.

    Each start is a random feasible configuration.  Nelder-Mead runs on
    ``tau_1..tau_{k-1}`` with ``tau_k`` eliminated through the closure
    constraint; when a piece shrinks below ``COLLISION_GAP`` the profile
    drops to the lower stratum and the search continues there, and an
    interior stationary point is followed by the best improving merge.
    Every intermediate configuration is kept in the trace.
    """
    if k < 1:
        raise InfeasibleConfigurationError("k must be at least 1")
    if seeds < 1:
        raise ValueError("seeds must be at least 1")
    rng = np.random.default_rng(seed)
    starts = sample_breakpoints(k, seeds, rng)
    trace: list[TraceEntry] = []
    best = None
    all_converged = True
    for row in starts:
        start = PiecewiseTrigProfile(tuple(row), leading_sign)
        trace.append(TraceEntry(start.breakpoints, leading_sign, deficit_closed_form(start), "start"))
        final, ok = descend(start, trace)
        all_converged = all_converged and ok
        f = deficit_closed_form(final)
        if best is None or f < best[0]:
            best = (f, final)
    f, prof = best
    return SearchResult(k=k, best_profile=prof, best_deficit=f, trace=trace, converged=all_converged)


def theorem_gap(deficit_value: float) -> float:
    """Distance above the Reuleaux deficit (negative would contradict the minimality result)."""
    return deficit_value - REULEAUX_DEFICIT
