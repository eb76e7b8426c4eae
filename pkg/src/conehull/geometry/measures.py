"""Volumes, facet functionals and radial quantities of hulls."""

from math import factorial

import numpy as np

from ..closed_forms import omega
from ..errors import DimensionMismatch, NonSimplicial, OriginOutside
from ..estimate import Estimate
from ..rng import as_rng


def simplex_volume(vertices):
    """k-volume of the simplex spanned by k+1 points (Gram determinant).

    Works in any ambient dimension >= k; a degenerate simplex gives 0.
    """
    V = np.atleast_2d(np.asarray(vertices, dtype=float))
    k = V.shape[0] - 1
    if k == 0:
        return 1.0
    E = V[1:] - V[0]
    if k == V.shape[1]:
        return abs(float(np.linalg.det(E))) / factorial(k)
    G = E @ E.T
    return float(np.sqrt(max(np.linalg.det(G), 0.0))) / factorial(k)


def facet_volumes(h):
    """(d-1)-volumes of all facets of a simplicial hull."""
    d = h.dim
    if h.facet_vertices.shape[1] != d:
        raise NonSimplicial("facets must have exactly d vertices")
    if d == 1:
        return np.ones(h.n_facets)
    P = h.vertices[h.facet_vertices]  # (F, d, d)
    E = P[:, 1:, :] - P[:, :1, :]
    G = np.einsum("fik,fjk->fij", E, E)
    return np.sqrt(np.clip(np.linalg.det(G), 0.0, None)) / factorial(d - 1)


def hull_volume(h):
    """d-volume as a sum of pyramids over the facets.

    The apex is the vertex centroid, which is interior, so the result is
    exact whether or not the origin lies inside.
    """
    apex = h.vertices.mean(axis=0)
    heights = h.offsets - h.normals @ apex
    return float(np.sum(heights * facet_volumes(h)) / h.dim)


def t_functional(h, a, b):
    """Sum over facets of ``dist(aff F, 0)**a * Vol_{d-1}(F)**b``."""
    if a < 0 or b < 0:
        raise ValueError("a and b must be nonnegative")
    dist = np.abs(h.offsets)
    vol = facet_volumes(h) if b != 0 else np.ones(h.n_facets)
    return float(np.sum(np.power(dist, a) * np.power(vol, b)))


def radial_function(h, direction):
    """Distance from the origin to the boundary along unit direction(s).

    ``direction`` may be a single vector or an array of shape (m, d).
    """
    if not h.contains_origin:
        raise OriginOutside("radial function needs the origin in the interior")
    u = np.asarray(direction, dtype=float)
    if u.shape[-1] != h.dim:
        raise DimensionMismatch("direction dimension differs from hull dimension")
    proj = u @ h.normals.T
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(proj > 0, h.offsets / proj, np.inf)
    rho = ratio.min(axis=-1)
    return float(rho) if u.ndim == 1 else rho


def uniform_directions(d, m, rng):
    g = rng.standard_normal((m, d))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def complement_power_integral(h, mc_dirs=4096, rng=None):
    """Monte Carlo value of the integral of ``|x|^-(d+1)`` outside the hull.

    In polar coordinates the radial integral is ``1 / rho(theta)``, so the
    integral equals ``omega_d * E[1 / rho(theta)]`` for uniform directions.
    """
    if not h.contains_origin:
        raise OriginOutside("complement integral needs the origin in the interior")
    seed = rng if isinstance(rng, (int, np.integer)) else None
    rng = as_rng(rng)
    d = h.dim
    if d == 1:
        # S^0 = {-1, +1}: the integral is exact
        vals = 1.0 / radial_function(h, np.array([[1.0], [-1.0]]))
        return Estimate(float(vals.sum()), 0.0, 2, seed, "complement_power_integral")
    dirs = uniform_directions(d, mc_dirs, rng)
    vals = omega(d) / radial_function(h, dirs)
    return Estimate.from_samples(vals, seed, "complement_power_integral")
