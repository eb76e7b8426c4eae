"""Random generation of half-sphere points, cone sections and Poisson hulls."""

from dataclasses import dataclass

import numpy as np

from .closed_forms import omega
from .errors import (
    DegenerateInput,
    InvalidParams,
    InvalidRadii,
    PoleAtEquator,
    TruncationFailure,
)
from .geometry import convex_hull
from .rng import as_rng

MAX_HALVINGS = 40


@dataclass(frozen=True)
class PoissonParams:
    """Parameters of the process with intensity ``c / w_{d+gamma} |x|^-(d+gamma)``."""

    d: int
    gamma: float
    c: float

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 1:
            raise InvalidParams("d must be a positive integer")
        if not self.gamma > 0 or not self.c > 0:
            raise InvalidParams("gamma and c must be positive")

    def tail_mass(self, r):
        """Expected number of points outside radius r (``inf`` at r = 0)."""
        r = np.asarray(r, dtype=float)
        with np.errstate(divide="ignore"):
            return self.c * omega(self.d) / (self.gamma * omega(self.d + self.gamma)) * r ** (-self.gamma)

    def radius_for_mass(self, mass):
        k = self.c * omega(self.d) / (self.gamma * omega(self.d + self.gamma))
        return (k / mass) ** (1.0 / self.gamma)


@dataclass(frozen=True, eq=False)
class PoissonSample:
    params: PoissonParams
    points: np.ndarray
    r_trunc: float
    certified: bool


@dataclass(frozen=True, eq=False)
class ConeSample:
    d: int
    n: int
    halfsphere_points: np.ndarray
    gnomonic_points: np.ndarray

    def section_hull(self):
        return convex_hull(self.gnomonic_points)


def sample_halfsphere(d, rng=None, size=None):
    """Uniform point(s) on the upper half of the unit sphere in R^{d+1}."""
    rng = as_rng(rng)
    shape = (d + 1,) if size is None else (size, d + 1)
    g = rng.standard_normal(shape)
    g /= np.linalg.norm(g, axis=-1, keepdims=True)
    g[..., 0] = np.abs(g[..., 0])
    return g


def gnomonic(u):
    """Central projection ``(x_1/x_0, ..., x_d/x_0)`` onto the tangent plane at the pole."""
    u = np.asarray(u, dtype=float)
    x0 = u[..., :1]
    if np.any(x0 <= 1e-300):
        raise PoleAtEquator("first coordinate must be positive")
    return u[..., 1:] / x0


def sample_cauchy_type(d, rng=None, size=None):
    """Points with density ``(2 / w_{d+1}) (1 + |x|^2)^(-(d+1)/2)`` on R^d."""
    rng = as_rng(rng)
    while True:
        u = sample_halfsphere(d, rng, size)
        try:
            return gnomonic(u)
        except PoleAtEquator:
            continue


def _uniform_directions(d, m, rng):
    g = rng.standard_normal((m, d))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def sample_poisson_annulus(params, r_in, r_out, rng=None):
    """Points of the process with ``r_in < |x| <= r_out`` (``r_out`` may be inf)."""
    if not 0 < r_in < r_out:
        raise InvalidRadii("need 0 < r_in < r_out")
    rng = as_rng(rng)
    g = params.gamma
    mass = float(params.tail_mass(r_in) - (params.tail_mass(r_out) if np.isfinite(r_out) else 0.0))
    n = rng.poisson(mass)
    lo = r_in ** (-g)
    hi = r_out ** (-g) if np.isfinite(r_out) else 0.0
    u = rng.random(n)
    radii = (lo - u * (lo - hi)) ** (-1.0 / g)
    return radii[:, None] * _uniform_directions(params.d, n, rng)


def initial_radius(params):
    return params.radius_for_mass(max(4 * params.d, 40))


def _certify(points, r, d):
    if len(points) < d + 1:
        return None
    try:
        h = convex_hull(points)
    except DegenerateInput:
        return None
    if h.contains_origin and np.all(h.offsets >= r):
        return h
    return None


def sample_poisson_hull(params, rng=None):
    """Certified finite sample of the process together with its convex hull.

    Points are generated outside a radius ``r``; once the hull of those
    points contains the ball of radius ``r``, no point inside the ball can
    be a vertex, so the hull equals the hull of the whole process.  Until
    then the radius is halved and the next annulus is added.
    """
    rng = as_rng(rng)
    r = initial_radius(params)
    pts = sample_poisson_annulus(params, r, np.inf, rng)
    for _ in range(MAX_HALVINGS + 1):
        h = _certify(pts, r, params.d)
        if h is not None:
            return PoissonSample(params, pts, float(r), True), h
        inner = sample_poisson_annulus(params, r / 2, r, rng)
        pts = np.vstack([pts, inner])
        r /= 2
    raise TruncationFailure("no certified truncation after %d halvings" % MAX_HALVINGS)


def sample_symmetric_hull(params, rng=None):
    """Hull of ``{x, -x}`` over a certified sample of the process."""
    sample, _ = sample_poisson_hull(params, rng)
    return convex_hull(np.vstack([sample.points, -sample.points]))


def sample_cone(d, n, rng=None):
    """n iid half-sphere points and their gnomonic images."""
    if n < d + 1:
        raise InvalidParams("need n >= d + 1")
    rng = as_rng(rng)
    u = sample_halfsphere(d, rng, n)
    while np.any(u[:, 0] <= 1e-300):
        bad = u[:, 0] <= 1e-300
        u[bad] = sample_halfsphere(d, rng, int(bad.sum()))
    return ConeSample(d, n, u, gnomonic(u))
