"""Linear subspaces, Haar sampling, projections and affine intersection tests."""

from dataclasses import dataclass

import numpy as np

from ..constants import DEGENERACY_TOL, GEOM_TOL, ORTHO_TOL
from ..errors import DegenerateAffineHull, DimensionMismatch
from ..rng import as_rng
from .lp import point_in_conv_lp


@dataclass(frozen=True, eq=False)
class Subspace:
    """k-dimensional linear subspace of R^d given by an orthonormal basis (rows)."""

    basis: np.ndarray

    def __post_init__(self):
        B = np.atleast_2d(np.asarray(self.basis, dtype=float))
        object.__setattr__(self, "basis", B)
        if B.shape[0] > B.shape[1]:
            raise DimensionMismatch("more basis vectors than ambient dimensions")
        if np.max(np.abs(B @ B.T - np.eye(B.shape[0]))) > ORTHO_TOL * 10:
            raise ValueError("basis is not orthonormal")

    @property
    def dim(self):
        return self.basis.shape[1]

    @property
    def k(self):
        return self.basis.shape[0]


def haar_subspace(d, k, rng=None):
    """Uniformly distributed k-subspace of R^d (QR of a Gaussian matrix)."""
    if not 1 <= k <= d:
        raise ValueError("need 1 <= k <= d")
    rng = as_rng(rng)
    G = rng.standard_normal((d, k))
    Q, R = np.linalg.qr(G)
    Q = Q * np.sign(np.diag(R))
    return Subspace(Q.T.copy())


def project_points(points, target):
    """Coordinates of orthogonal projections in the basis of ``target``."""
    P = np.atleast_2d(np.asarray(points, dtype=float))
    if P.shape[1] != target.dim:
        raise DimensionMismatch("points and subspace live in different dimensions")
    return P @ target.basis.T


def affine_intersects_hull(anchor, span_points, hull_points):
    """Does ``aff{anchor, span_points}`` meet ``conv(hull_points)``?

    Everything is projected onto the orthogonal complement of the direction
    space; the affine hull collapses to one point there, and the question
    becomes a point-in-convex-hull feasibility problem.
    """
    a = np.asarray(anchor, dtype=float)
    H = np.atleast_2d(np.asarray(hull_points, dtype=float))
    d = a.shape[0]
    S = np.asarray(span_points, dtype=float).reshape(-1, d)
    if H.shape[1] != d:
        raise DimensionMismatch("anchor and hull points differ in dimension")
    if len(S) == 0:
        return point_in_conv_lp(a, H)
    D = S - a
    U, s, Vt = np.linalg.svd(D, full_matrices=True)
    if s[-1] <= DEGENERACY_TOL * max(s[0], 1.0) or len(S) > d:
        raise DegenerateAffineHull("span points are affinely dependent")
    comp = Vt[len(S) :]
    if comp.shape[0] == 0:
        return True
    pa = comp @ a
    ph = H @ comp.T
    if comp.shape[0] == 1:
        # one-dimensional complement: the LP reduces to an interval test
        return bool(ph.min() <= pa[0] <= ph.max())
    return point_in_conv_lp(pa, ph)


def batch_affine_intersects(Z, h):
    """Vectorised ``affine_intersects_hull`` for many affine spans against one hull.

    Parameters
    ----------
    Z : ndarray, shape (S, j, d)
        Each of the S trials spans ``aff{Z[s, 0], ..., Z[s, j-1]}``.
    h : Hull
        A full-dimensional hull in R^d.

    Returns
    -------
    ndarray of bool, shape (S,)

    Notes
    -----
    Points use the facet inequalities, lines clip a parameter interval
    against every facet, and hyperplanes check whether the vertices lie on
    both sides.  Other dimensions fall back to the LP test per trial.
    """
    Z = np.asarray(Z, dtype=float)
    S, j, d = Z.shape
    if d != h.dim:
        raise DimensionMismatch("spans and hull differ in dimension")
    tol = GEOM_TOL * max(1.0, float(np.abs(h.vertices).max()))
    if j == 1:
        return np.all(Z[:, 0, :] @ h.normals.T <= h.offsets + tol, axis=1)
    if j == 2:
        p, u = Z[:, 0, :], Z[:, 1, :] - Z[:, 0, :]
        a = u @ h.normals.T
        c = h.offsets - p @ h.normals.T
        with np.errstate(divide="ignore", invalid="ignore"):
            t = c / a
        upper = np.where(a > 0, t, np.inf).min(axis=1)
        lower = np.where(a < 0, t, -np.inf).max(axis=1)
        parallel_ok = np.all((a != 0) | (c >= -tol), axis=1)
        return (lower <= upper) & parallel_ok
    if j == d:
        D = Z[:, 1:, :] - Z[:, :1, :]
        # normal of each hyperplane: signed maximal minors of D (generalised cross product)
        u = np.empty((S, d))
        for i in range(d):
            u[:, i] = (-1) ** i * np.linalg.det(np.delete(D, i, axis=2))
        a = np.einsum("sd,sd->s", u, Z[:, 0, :])
        proj = u @ h.vertices.T
        return (proj.min(axis=1) <= a) & (a <= proj.max(axis=1))
    return np.array([affine_intersects_hull(z[0], z[1:], h.vertices) for z in Z], dtype=bool)
