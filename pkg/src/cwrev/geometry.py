"""Generating curve, surface of revolution, tessellation and mesh oracles."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvexityError
from .profiles import HALF_PI, Body, PiecewiseTrigProfile
from .quadrature import piecewise_gauss

CONVEXITY_TOL = 1e-9
AREA_TOL = 1e-10


@dataclass(frozen=True)
class ProfileSample:
    t: float
    h: float
    dh: float
    d2h: float
    s: float
    x: float
    y: float
    rho: float


def curve_point(body: Body, t):
    """Point of the generating curve whose outward normal makes angle ``t``.

    Uses ``gamma = s e^{it} + s' i e^{it}``; vectorized over ``t``.
    """
    s, ds, _ = body.support(t)
    c, sn = np.cos(t), np.sin(t)
    x = s * c - ds * sn
    y = s * sn + ds * c
    if np.ndim(t) == 0:
        return float(x), float(y)
    return x, y


def radius_of_curvature(body: Body, t):
    """``s'' + s = h'' + h + w``; zero at a vertex, ``2w`` on a rolling arc."""
    s, _, d2s = body.support(t)
    rho = s + d2s
    return float(rho) if np.ndim(t) == 0 else rho


def min_radius_of_curvature(body: Body, n: int = 4097) -> float:
    """Smallest sampled radius of curvature over the right half of the curve.

    For piecewise profiles both one-sided values at every breakpoint are
    included, so the minimum is exact.
    """
    t = np.linspace(-HALF_PI, HALF_PI, n)
    if isinstance(body.profile, PiecewiseTrigProfile):
        bps = np.asarray(body.profile.breakpoints)
        eps = 1e-12
        t = np.concatenate((t, bps + eps, bps - eps, -bps + eps, -bps - eps))
    return float(np.min(radius_of_curvature(body, t)))


def check_convexity(body: Body, n: int = 4097) -> float:
    """Raise :class:`ConvexityError` if the curve has negative curvature radius."""
    rho_min = min_radius_of_curvature(body, n)
    if rho_min < -CONVEXITY_TOL:
        raise ConvexityError(f"radius of curvature reaches {rho_min:.6g} < 0; the body is not convex")
    return rho_min


def width_at(body: Body, t):
    """Width of the curve in direction ``t``: ``s(t) + s(t + pi)``."""
    s1 = body.support(t)[0]
    s2 = body.support(np.asarray(t) + math.pi)[0]
    out = s1 + s2
    return float(out) if np.ndim(t) == 0 else out


def surface_point(body: Body, t, theta):
    """Boundary point ``(x cos theta, x sin theta, y)`` of the body."""
    x, y = curve_point(body, t)
    if np.ndim(t) == 0 and np.ndim(theta) == 0:
        if abs(abs(t) - HALF_PI) < 1e-15:
            x = 0.0
        return np.array([x * math.cos(theta), x * math.sin(theta), y])
    x, y, theta = np.broadcast_arrays(x, y, theta)
    return np.stack([x * np.cos(theta), x * np.sin(theta), y], axis=-1)


def sample_curve(body: Body, t):
    """Tabulate :class:`ProfileSample` records at the given angles."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    h, dh, d2h = (np.atleast_1d(a) for a in body.support(t))
    h = h - body.half_width
    x, y = curve_point(body, t)
    rho = radius_of_curvature(body, t)
    return [
        ProfileSample(float(a), float(b), float(c), float(d), float(b + body.half_width), float(e), float(f), float(g))
        for a, b, c, d, e, f, g in zip(t, h, dh, d2h, np.atleast_1d(x), np.atleast_1d(y), np.atleast_1d(rho))
    ]


@dataclass(frozen=True, eq=False)
class Mesh:
    """Triangulated closed surface; ``triangles`` index ``vertices`` and face outward."""

    vertices: np.ndarray
    triangles: np.ndarray

    def __post_init__(self):
        v = np.ascontiguousarray(self.vertices, dtype=float).reshape(-1, 3)
        f = np.ascontiguousarray(self.triangles, dtype=np.int64).reshape(-1, 3)
        v.setflags(write=False)
        f.setflags(write=False)
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "triangles", f)

    @property
    def num_vertices(self):
        return len(self.vertices)

    @property
    def num_triangles(self):
        return len(self.triangles)

    def edges(self):
        """Unique undirected edges and how many triangles use each."""
        f = self.triangles
        e = np.concatenate([f[:, [0, 1]], f[:, [1, 2]], f[:, [2, 0]]])
        e.sort(axis=1)
        return np.unique(e, axis=0, return_counts=True)

    def euler_characteristic(self):
        edges, _ = self.edges()
        return self.num_vertices - len(edges) + self.num_triangles

    def is_watertight(self):
        _, counts = self.edges()
        return bool(np.all(counts == 2))

    def is_consistently_oriented(self):
        # each directed edge must appear once; its reverse comes from the neighbour
        f = self.triangles
        directed = np.concatenate([f[:, [0, 1]], f[:, [1, 2]], f[:, [2, 0]]])
        return len(np.unique(directed, axis=0)) == len(directed)

    def reversed(self):
        return Mesh(self.vertices, self.triangles[:, ::-1])

    def triangle_soup(self):
        return self.vertices[self.triangles]


def mesh_signed_volume(mesh) -> float:
    """Divergence-theorem volume ``(1/6) sum a . (b x c)``; positive when outward.

    Accepts a :class:`Mesh` or an ``(m, 3, 3)`` triangle soup.
    """
    soup = mesh.triangle_soup() if isinstance(mesh, Mesh) else np.asarray(mesh, dtype=float)
    a, b, c = soup[:, 0], soup[:, 1], soup[:, 2]
    return float(np.einsum("ij,ij->i", a, np.cross(b, c)).sum() / 6.0)


def tessellate(body: Body, nt: int, ntheta: int) -> Mesh:
    """Triangulate the boundary of ``body``.

    ``nt + 1`` rings at uniformly spaced normal angles strictly inside
    (-pi/2, pi/2), each with ``ntheta`` vertices, plus one vertex per pole.
    The ``nt x ntheta`` quads between rings give two triangles each and each
    pole is closed by a fan of ``ntheta`` triangles, so the mesh has
    ``(nt + 1) ntheta + 2`` vertices and ``2 nt ntheta + 2 ntheta`` triangles.
    """
    if nt < 3 or ntheta < 3:
        raise ValueError("need nt >= 3 and ntheta >= 3")
    check_convexity(body)

    t = -HALF_PI + math.pi * np.arange(1, nt + 2) / (nt + 2)
    theta = 2.0 * math.pi * np.arange(ntheta) / ntheta
    x, y = curve_point(body, t)
    rings = np.stack(
        [np.multiply.outer(x, np.cos(theta)), np.multiply.outer(x, np.sin(theta)), np.repeat(y[:, None], ntheta, axis=1)],
        axis=-1,
    ).reshape(-1, 3)
    south = np.array([[0.0, 0.0, curve_point(body, -HALF_PI)[1]]])
    north = np.array([[0.0, 0.0, curve_point(body, HALF_PI)[1]]])
    vertices = np.concatenate([rings, south, north])
    s_idx = len(rings)
    n_idx = s_idx + 1

    nr = nt + 1
    j, i = np.meshgrid(np.arange(nr - 1), np.arange(ntheta), indexing="ij")
    i1 = (i + 1) % ntheta
    p00 = j * ntheta + i
    p01 = j * ntheta + i1
    p10 = (j + 1) * ntheta + i
    p11 = (j + 1) * ntheta + i1
    quads = np.concatenate(
        [np.stack([p00, p01, p11], -1).reshape(-1, 3), np.stack([p00, p11, p10], -1).reshape(-1, 3)]
    )
    i = np.arange(ntheta)
    i1 = (i + 1) % ntheta
    bottom = np.stack([np.full(ntheta, s_idx), i1, i], -1)
    top_ring = (nr - 1) * ntheta
    top = np.stack([np.full(ntheta, n_idx), top_ring + i, top_ring + i1], -1)
    return Mesh(vertices, np.concatenate([bottom, quads, top]))


def _piece_area_exact(profile: PiecewiseTrigProfile, w: float) -> float:
    # On [tau_i, tau_i+1]: x = A_i + (w + sigma_i) cos t and rho = w + sigma_i;
    # on the mirrored piece below the equator: x = -A_i + (w - sigma_i) cos t, rho = w - sigma_i.
    total = 0.0
    knots = profile.knots
    for i, (a, sig) in enumerate(zip(profile.cos_coeffs, profile.signs)):
        lo, hi = knots[i], knots[i + 1]
        up, down = w + sig, w - sig
        total += (up * a - down * a) * (hi - lo)
        total += (up * up + down * down) * (math.sin(hi) - math.sin(lo))
    return 2.0 * math.pi * total


def _area_integrand(body):
    def f(t):
        x, _ = curve_point(body, t)
        return 2.0 * math.pi * x * radius_of_curvature(body, t)

    return f


def surface_area_quadrature(body: Body, tol: float = AREA_TOL) -> float:
    """Area ``2 pi int x(t) rho(t) dt`` by adaptive Gauss, split at every breakpoint."""
    knots = np.asarray(body.profile.knots)
    knots = np.unique(np.concatenate([-knots, knots]))
    return piecewise_gauss(_area_integrand(body), knots, tol=tol)


def surface_area(body: Body) -> float:
    """Area of the boundary of ``body``.

    Exact per-piece antiderivatives for piecewise profiles; adaptive
    Gauss quadrature otherwise.
    """
    if isinstance(body.profile, PiecewiseTrigProfile):
        return _piece_area_exact(body.profile, body.half_width)
    return surface_area_quadrature(body)
