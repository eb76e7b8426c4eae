"""Conic functionals of polyhedral cones in R^{d+1}.

A cone with generators in the open upper half-space is represented by its
section ``{x_0 = 1}``, the convex hull of the gnomonic images of the
generators.  Membership, solid angle and Grassmann angles all reduce to
questions about that section hull in R^d.
"""

from dataclasses import dataclass, field
from math import comb

import numpy as np
from scipy.linalg import qr
from scipy.special import betainc, betaln

from .closed_forms import omega
from .constants import ACTIVE_TOL, RANK_TOL
from .errors import (
    DegenerateInput,
    DimensionMismatch,
    InvalidK,
    InvalidParams,
    OriginOutside,
)
from .estimate import Estimate
from .geometry import (
    Hull,
    batch_affine_intersects,
    contains_point,
    convex_hull,
    f_vector,
    radial_function,
    uniform_directions,
)
from .nnls import nnls
from .rng import as_rng
from .samplers import ConeSample, gnomonic, sample_cauchy_type, sample_cone, sample_halfsphere


@dataclass(frozen=True, eq=False)
class Cone:
    """Polyhedral cone ``pos{generators}`` in R^{d+1}.

    ``section_hull`` is ``None`` when some generator has ``x_0 <= 0`` (for
    instance a half-space), in which case the section is unbounded and only
    projection-based functionals are available.
    """

    generators: np.ndarray
    section_hull: Hull | None = None

    @property
    def dim(self):
        """Ambient dimension ``m = d + 1``."""
        return self.generators.shape[1]

    @property
    def d(self):
        return self.dim - 1

    @classmethod
    def from_sample(cls, sample: ConeSample):
        return cls(np.asarray(sample.halfsphere_points, dtype=float), convex_hull(sample.gnomonic_points))

    @classmethod
    def from_generators(cls, generators):
        G = np.atleast_2d(np.asarray(generators, dtype=float))
        G = G / np.linalg.norm(G, axis=1, keepdims=True)
        section = None
        if G.shape[1] >= 2 and np.all(G[:, 0] > 1e-300) and len(G) >= G.shape[1]:
            try:
                section = convex_hull(gnomonic(G))
            except DegenerateInput:
                section = None
        return cls(G, section)

    def _need_section(self):
        if self.section_hull is None:
            raise InvalidParams("cone has no bounded section in {x_0 = 1}")
        return self.section_hull


def _as_cone(cone):
    if isinstance(cone, Cone):
        return cone
    if isinstance(cone, ConeSample):
        return Cone.from_sample(cone)
    return Cone.from_generators(cone)


@dataclass(frozen=True, eq=False)
class ConicProfile:
    """Estimated conic intrinsic volumes with Grassmann angles by two routes.

    ``v[k]`` is ``v_k`` for ``k = 0..m``; ``h*[k]`` is ``h_{k+1}`` and
    ``w*[k]`` is ``w_{k+1}`` for ``k = 0..m-1``.  The ``*_from_v`` arrays come
    from the Crofton and Kubota sums over ``v``; the ``*_direct`` arrays come
    from the affine intersection tests and are ``nan`` when the cone has no
    bounded section.
    """

    dim: int
    samples: int
    v: np.ndarray
    v_stderr: np.ndarray
    h_from_v: np.ndarray
    h_from_v_stderr: np.ndarray
    w_from_v: np.ndarray
    w_from_v_stderr: np.ndarray
    h_direct: np.ndarray = field(default=None)
    h_direct_stderr: np.ndarray = field(default=None)
    w_direct: np.ndarray = field(default=None)
    w_direct_stderr: np.ndarray = field(default=None)
    even_sum: Estimate = None
    odd_sum: Estimate = None
    rank_deficient: int = 0

    @property
    def h(self):
        return self.h_direct if self.h_direct is not None else self.h_from_v

    @property
    def w(self):
        return self.w_direct if self.w_direct is not None else self.w_from_v

    def to_dict(self):
        def arr(x):
            return None if x is None else [float(t) for t in x]

        return {
            "dim": self.dim,
            "samples": self.samples,
            "v": arr(self.v),
            "v_stderr": arr(self.v_stderr),
            "h_from_v": arr(self.h_from_v),
            "h_from_v_stderr": arr(self.h_from_v_stderr),
            "h_direct": arr(self.h_direct),
            "h_direct_stderr": arr(self.h_direct_stderr),
            "w_from_v": arr(self.w_from_v),
            "w_from_v_stderr": arr(self.w_from_v_stderr),
            "w_direct": arr(self.w_direct),
            "w_direct_stderr": arr(self.w_direct_stderr),
            "even_sum": None if self.even_sum is None else self.even_sum.to_dict(),
            "odd_sum": None if self.odd_sum is None else self.odd_sum.to_dict(),
            "rank_deficient": self.rank_deficient,
        }


def _rank(A):
    if A.shape[1] == 0:
        return 0
    _, R, _ = qr(A, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    return int(np.sum(diag > RANK_TOL * diag[0]))


def project_onto_cone(generators, g):
    """Metric projection of g onto ``pos{generators}``.

    Parameters
    ----------
    generators : array_like, shape (n, m)
        Rows are the generators.
    g : array_like, shape (m,)

    Returns
    -------
    proj : ndarray, shape (m,)
    active : ndarray of int
        Indices with positive coefficient.
    """
    V = np.atleast_2d(np.asarray(generators, dtype=float))
    g = np.asarray(g, dtype=float)
    if V.shape[0] == 0:
        raise InvalidParams("need at least one generator")
    if V.shape[1] != g.shape[0]:
        raise DimensionMismatch("generators and g differ in dimension")
    alpha, _ = nnls(V.T, g, maxiter=10 * max(V.shape))
    active = np.flatnonzero(alpha > ACTIVE_TOL)
    return V[active].T @ alpha[active], active


def _face_index(V, g):
    """Dimension of the face whose relative interior holds the projection of g."""
    _, active = project_onto_cone(V, g)
    r = _rank(V[active].T)
    return r, r < len(active)


def conic_intrinsic_volumes(cone, samples=4000, rng=None):
    """Gaussian-projection estimates of ``v_0, ..., v_m``.

    Returns a :class:`ConicProfile` without the direct Grassmann route.
    """
    cone = _as_cone(cone)
    seed = rng if isinstance(rng, (int, np.integer)) else None
    rng = as_rng(rng)
    m = cone.dim
    V = cone.generators
    G = rng.standard_normal((samples, m))
    idx = np.empty(samples, dtype=int)
    deficient = 0
    for s in range(samples):
        idx[s], flag = _face_index(V, G[s])
        deficient += flag
    onehot = (idx[:, None] == np.arange(m + 1)[None, :]).astype(float)

    # Crofton: h_{k+1} = sum of v_{k+i} over odd i; Kubota: w_{k+1} = sum_{i>k} v_i
    hmask = np.array([[(j - k) % 2 == 1 and j > k for j in range(m + 1)] for k in range(m)], dtype=float)
    wmask = np.array([[j > k for j in range(m + 1)] for k in range(m)], dtype=float)
    v = _column_stats(onehot)
    h = _column_stats(onehot @ hmask.T)
    w = _column_stats(onehot @ wmask.T)
    even = Estimate.from_samples(onehot[:, 0::2].sum(axis=1), seed, "v_even_sum")
    odd = Estimate.from_samples(onehot[:, 1::2].sum(axis=1), seed, "v_odd_sum")
    return ConicProfile(
        dim=m,
        samples=samples,
        v=v[0],
        v_stderr=v[1],
        h_from_v=h[0],
        h_from_v_stderr=h[1],
        w_from_v=w[0],
        w_from_v_stderr=w[1],
        even_sum=even,
        odd_sum=odd,
        rank_deficient=int(deficient),
    )


def _column_stats(x):
    """Column means and standard errors of a (samples, k) array."""
    n = x.shape[0]
    mean = x.mean(axis=0)
    se = x.std(axis=0, ddof=1) / np.sqrt(n) if n > 1 else np.full(x.shape[1], np.inf)
    return mean, se


def _grassmann_hits(section, d, k, samples, rng):
    j = d + 1 - k
    Z = sample_cauchy_type(d, rng, samples * j).reshape(samples, j, d)
    return batch_affine_intersects(Z, section).astype(float)


def grassmann_angle(cone, k, samples=4000, rng=None):
    """Estimate of ``h_{k+1}``: half the chance a random (d+1-k)-subspace meets the cone.

    ``k = 0`` gives exactly 1/2.  Otherwise each trial draws ``d + 1 - k``
    Cauchy-type points and tests whether their affine hull meets the
    section hull.
    """
    cone = _as_cone(cone)
    d = cone.d
    if int(k) != k or not 0 <= k <= d:
        raise InvalidK("need 0 <= k <= d")
    seed = rng if isinstance(rng, (int, np.integer)) else None
    if k == 0:
        return Estimate(0.5, 0.0, samples, seed, "h_1")
    rng = as_rng(rng)
    hits = _grassmann_hits(cone._need_section(), d, k, samples, rng)
    return Estimate.from_samples(0.5 * hits, seed, f"h_{k + 1}")


def solid_angle(cone, samples=4000, rng=None):
    """Normalised spherical measure of the cone, by half-sphere sampling."""
    cone = _as_cone(cone)
    seed = rng if isinstance(rng, (int, np.integer)) else None
    rng = as_rng(rng)
    u = sample_halfsphere(cone.d, rng, samples)
    u = u[u[:, 0] > 1e-300]
    inside = contains_point(cone._need_section(), gnomonic(u))
    return Estimate.from_samples(0.5 * np.asarray(inside, dtype=float), seed, "solid_angle")


def _radial_tail(rho, d):
    """``P(|Z| > rho)`` per unit direction mass for the Cauchy-type law.

    With ``t = r^2 / (1 + r^2)`` the radial integral of
    ``(2/w_{d+1}) r^{d-1} (1 + r^2)^{-(d+1)/2}`` beyond ``rho`` is
    ``(1/w_{d+1}) B(1/2, d/2) I_{1/(1+rho^2)}(1/2, d/2)``.
    """
    return np.exp(betaln(0.5, 0.5 * d)) / omega(d + 1) * betainc(0.5, 0.5 * d, 1.0 / (1.0 + rho**2))


def deficit_solid_angle(cone, n=None, mc_dirs=4096, rng=None):
    """Estimate of ``n (1/2 - alpha)`` through the section hull.

    ``1/2 - alpha`` is half the probability that a Cauchy-type point falls
    outside the section.  In polar coordinates around the origin the radial
    part of that probability has a closed form, leaving a Monte Carlo average
    over directions.  In d = 1 the value is exact.
    """
    cone = _as_cone(cone)
    h = cone._need_section()
    if n is None:
        n = len(cone.generators)
    seed = rng if isinstance(rng, (int, np.integer)) else None
    d = h.dim
    if d == 1:
        # exact: a standard Cauchy point misses [lo, hi] with probability 1 - (atan hi - atan lo)/pi
        lo, hi = float(h.vertices.min()), float(h.vertices.max())
        val = 0.5 * n * (1.0 - (np.arctan(hi) - np.arctan(lo)) / np.pi)
        return Estimate(val, 0.0, 1, seed, "deficit")
    if not h.contains_origin:
        raise OriginOutside("section hull does not contain the origin")
    rng = as_rng(rng)
    dirs = uniform_directions(d, mc_dirs, rng)
    rho = radial_function(h, dirs)
    vals = 0.5 * n * omega(d) * _radial_tail(rho, d)
    return Estimate.from_samples(vals, seed, "deficit")


def conic_profile(cone, samples=4000, rng=None):
    """Intrinsic volumes plus Grassmann angles by the direct and the v routes."""
    cone = _as_cone(cone)
    rng = as_rng(rng)
    prof = conic_intrinsic_volumes(cone, samples, rng)
    m = cone.dim
    if cone.section_hull is None:
        return prof
    hd = np.zeros(m)
    hs = np.zeros(m)
    for k in range(m):
        e = grassmann_angle(cone, k, samples, rng)
        hd[k], hs[k] = e.mean, e.stderr
    # w_{k+1} = h_{k+1} + h_{k+2} with h_{m+1} = 0; direct estimates are independent
    wd = hd + np.append(hd[1:], 0.0)
    ws = np.sqrt(hs**2 + np.append(hs[1:], 0.0) ** 2)
    return ConicProfile(
        dim=m,
        samples=samples,
        v=prof.v,
        v_stderr=prof.v_stderr,
        h_from_v=prof.h_from_v,
        h_from_v_stderr=prof.h_from_v_stderr,
        w_from_v=prof.w_from_v,
        w_from_v_stderr=prof.w_from_v_stderr,
        h_direct=hd,
        h_direct_stderr=hs,
        w_direct=wd,
        w_direct_stderr=ws,
        even_sum=prof.even_sum,
        odd_sum=prof.odd_sum,
        rank_deficient=prof.rank_deficient,
    )


@dataclass(frozen=True)
class BuchtaReport:
    """Both sides of ``2 C(n+j, j) (1/2 - E h_{k+1}(C_n)) = E f_j(C_{n+j})`` with ``j = d+1-k``."""

    d: int
    n: int
    k: int
    lhs: Estimate
    rhs: Estimate
    z: float
    exact_lhs: float | None = None
    exact_rhs: float | None = None

    @property
    def exact_pass(self):
        if self.exact_lhs is None:
            return None
        return abs(self.exact_lhs - self.exact_rhs) <= 1e-12 * max(1.0, abs(self.exact_rhs))

    def to_dict(self):
        return {
            "d": self.d,
            "n": self.n,
            "k": self.k,
            "lhs": self.lhs.to_dict(),
            "rhs": self.rhs.to_dict(),
            "z": self.z,
            "exact_lhs": self.exact_lhs,
            "exact_rhs": self.exact_rhs,
        }


def buchta_identity_check(d, n, k, samples=10_000, rng=None):
    """Independent Monte Carlo estimates of both sides of the Grassmann-angle identity.

    The left side uses fresh cones ``C_n`` and the direct Grassmann test;
    the right side counts ``j``-faces of fresh cones ``C_{n+j}``, which are
    the ``(j-1)``-faces of their sections.  For ``d = 1`` both sides are also
    evaluated exactly.
    """
    if int(d) != d or d < 1 or int(k) != k or not 1 <= k <= d or n < d + 1:
        raise InvalidParams("need 1 <= k <= d and n >= d + 1")
    seed = rng if isinstance(rng, (int, np.integer)) else None
    rng = as_rng(rng)
    j = d + 1 - k
    factor = comb(n + j, j)
    lhs_vals = np.empty(samples)
    rhs_vals = np.empty(samples)
    for s in range(samples):
        section = sample_cone(d, n, rng).section_hull()
        hit = _grassmann_hits(section, d, k, 1, rng)[0]
        # 2 C (1/2 - hit/2) per trial
        lhs_vals[s] = factor * (1.0 - hit)
    for s in range(samples):
        section = sample_cone(d, n + j, rng).section_hull()
        rhs_vals[s] = f_vector(section)[j - 1]
    lhs = Estimate.from_samples(lhs_vals, seed, "buchta_lhs")
    rhs = Estimate.from_samples(rhs_vals, seed, "buchta_rhs")
    se = np.hypot(lhs.stderr, rhs.stderr)
    if se > 0:
        z = float((lhs.mean - rhs.mean) / se)
    else:
        z = 0.0 if lhs.mean == rhs.mean else float("inf")
    exact_lhs = exact_rhs = None
    if d == 1:
        # the arc spanned by n uniform angles on [0, pi] leaves mean mass 1/(n+1) of the half-circle
        exact_lhs = 2.0 * factor / (n + 1)
        exact_rhs = 2.0
    return BuchtaReport(d, n, k, lhs, rhs, z, exact_lhs, exact_rhs)
