"""Incremental beneath-beyond convex hull in general dimension.

Facets are simplices stored with their outward unit normal and offset, so
that a facet is the set ``{x : <normal, x> = offset}`` and the hull is the
intersection of the half-spaces ``<normal, x> <= offset``.
"""

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from ..constants import DEGENERACY_TOL, GEOM_TOL, HULL_REL_TOL
from ..errors import DegenerateInput, DimensionMismatch, NonSimplicial


@dataclass(frozen=True, eq=False)
class Hull:
    """Simplicial convex polytope in R^dim.

    Attributes
    ----------
    dim : int
        Ambient dimension.
    vertices : ndarray, shape (V, dim)
        Extreme points only.
    normals : ndarray, shape (F, dim)
        Outward unit normals of the facets.
    offsets : ndarray, shape (F,)
        Signed distances of the facet hyperplanes from the origin.
    facet_vertices : ndarray of int, shape (F, dim)
        Row ``i`` indexes the vertices spanning facet ``i``.
    """

    dim: int
    vertices: np.ndarray
    normals: np.ndarray
    offsets: np.ndarray
    facet_vertices: np.ndarray

    @property
    def contains_origin(self):
        return bool(np.all(self.offsets > 0))

    @property
    def n_facets(self):
        return len(self.offsets)

    @property
    def facets(self):
        """List of ``(normal, offset, vertex_indices)`` triples."""
        return [
            (self.normals[i], float(self.offsets[i]), tuple(int(j) for j in self.facet_vertices[i]))
            for i in range(self.n_facets)
        ]

    def facet_points(self, i):
        return self.vertices[self.facet_vertices[i]]


class _Facet:
    __slots__ = ("verts", "normal", "offset", "neighbors", "outside", "alive")

    def __init__(self, verts, normal, offset):
        self.verts = verts
        self.normal = normal
        self.offset = offset
        self.neighbors = [None] * len(verts)
        self.outside = []
        self.alive = True


def _as_points(points, d=None):
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None] if d == 1 else pts[None, :]
    if pts.ndim != 2:
        raise DimensionMismatch("points must be a 2-d array")
    if d is not None and pts.shape[1] != d:
        raise DimensionMismatch(f"points have dimension {pts.shape[1]}, expected {d}")
    if not np.all(np.isfinite(pts)):
        raise ValueError("non-finite coordinates")
    return pts


def _hyperplane(P, interior, scale):
    """Oriented unit normal and offset of the hyperplane through the rows of P."""
    d = P.shape[1]
    if d == 1:
        n = np.ones(1)
    elif d == 2:
        e = P[1] - P[0]
        ln = np.hypot(e[0], e[1])
        if ln <= DEGENERACY_TOL * scale:
            raise DegenerateInput("coincident points")
        n = np.array([e[1], -e[0]]) / ln
    elif d == 3:
        e1 = P[1] - P[0]
        e2 = P[2] - P[0]
        n = np.cross(e1, e2)
        ln = np.linalg.norm(n)
        if ln <= DEGENERACY_TOL * np.linalg.norm(e1) * np.linalg.norm(e2):
            raise DegenerateInput("collinear facet vertices")
        n = n / ln
    else:
        E = P[1:] - P[0]
        _, s, vt = np.linalg.svd(E)
        if s[-1] <= DEGENERACY_TOL * s[0]:
            raise DegenerateInput("affinely dependent facet vertices")
        n = vt[-1]
    off = float(n @ P[0])
    if off - n @ interior < 0:
        n, off = -n, -off
    if off - n @ interior <= DEGENERACY_TOL * scale:
        raise DegenerateInput("facet hyperplane passes through the interior point")
    return n, off


def _initial_simplex(pts, scale):
    d = pts.shape[1]
    centroid = pts.mean(axis=0)
    chosen = [int(np.argmax(np.sum((pts - centroid) ** 2, axis=1)))]
    basis = np.zeros((0, d))
    for _ in range(d):
        diff = pts - pts[chosen[0]]
        resid = diff - (diff @ basis.T) @ basis
        dist = np.sum(resid**2, axis=1)
        j = int(np.argmax(dist))
        if np.sqrt(dist[j]) <= DEGENERACY_TOL * scale:
            raise DegenerateInput("points do not span R^%d" % d)
        chosen.append(j)
        u = resid[j] / np.sqrt(dist[j])
        basis = np.vstack([basis, u])
    return chosen


def convex_hull(points, d=None):
    """Convex hull of points in general position.

    Parameters
    ----------
    points : array_like, shape (n, d)
        At least ``d + 1`` points.
    d : int, optional
        Expected dimension; checked against ``points``.

    Returns
    -------
    Hull
        Vertices are exactly the extreme points; every facet is a simplex.

    Raises
    ------
    DegenerateInput
        When a facet simplex or the starting simplex is (numerically) flat.
    DimensionMismatch
        When the coordinates do not have dimension ``d``.
    """
    pts = _as_points(points, d)
    n, d = pts.shape
    if n < d + 1:
        raise DegenerateInput(f"need at least {d + 1} points in R^{d}, got {n}")
    scale = float(np.max(np.abs(pts - pts.mean(axis=0)))) or 1.0
    tol = HULL_REL_TOL * scale

    simplex = _initial_simplex(pts, scale)
    interior = pts[simplex].mean(axis=0)

    facets = []
    for skip in range(d + 1):
        verts = [simplex[i] for i in range(d + 1) if i != skip]
        nrm, off = _hyperplane(pts[verts], interior, scale)
        facets.append((skip, _Facet(verts, nrm, off)))
    # neighbor opposite vertex v of facet(skip=s) is the facet skipping v
    by_skip = {simplex[s]: f for s, f in facets}
    for s, f in facets:
        for j, v in enumerate(f.verts):
            f.neighbors[j] = by_skip[v]
    live = [f for _, f in facets]

    in_simplex = np.zeros(n, dtype=bool)
    in_simplex[simplex] = True
    rest = np.flatnonzero(~in_simplex)
    owner = [None] * n
    _assign(pts, rest, live, owner, tol)

    order = rest[np.argsort(-np.sum((pts[rest] - interior) ** 2, axis=1), kind="stable")]
    for p in order:
        start = owner[p]
        if start is None:
            continue
        x = pts[p]
        visible = [start]
        start.alive = False
        horizon = []
        stack = [start]
        while stack:
            f = stack.pop()
            for j, g in enumerate(f.neighbors):
                if not g.alive:
                    continue
                if g.normal @ x - g.offset > tol:
                    g.alive = False
                    visible.append(g)
                    stack.append(g)
        for f in visible:
            for j, g in enumerate(f.neighbors):
                if g.alive:
                    horizon.append((f, j, g))

        new = []
        ridges = {}
        for f, j, g in horizon:
            ridge = f.verts[:j] + f.verts[j + 1 :]
            verts = ridge + [int(p)]
            nrm, off = _hyperplane(pts[verts], interior, scale)
            nf = _Facet(verts, nrm, off)
            nf.neighbors[d - 1] = g
            g.neighbors[g.neighbors.index(f)] = nf
            for i in range(d - 1):
                key = frozenset(verts[:i] + verts[i + 1 :])
                other = ridges.pop(key, None)
                if other is None:
                    ridges[key] = (nf, i)
                else:
                    of, oi = other
                    nf.neighbors[i] = of
                    of.neighbors[oi] = nf
            new.append(nf)
        if ridges:
            raise DegenerateInput("inconsistent horizon; input is not in general position")

        pending = []
        for f in visible:
            pending.extend(q for q in f.outside if q != p)
            f.outside = []
        owner[p] = None
        if pending:
            _assign(pts, np.asarray(pending), new, owner, tol)
        live = [f for f in live if f.alive] + new

    return _finalize(pts, live, scale)


def _assign(pts, idx, facets, owner, tol):
    """Attach each point to the facet it lies farthest beyond, or drop it."""
    if len(idx) == 0:
        return
    N = np.array([f.normal for f in facets])
    b = np.array([f.offset for f in facets])
    dist = pts[idx] @ N.T - b
    best = np.argmax(dist, axis=1)
    above = dist[np.arange(len(idx)), best] > tol
    for q, k, a in zip(idx, best, above):
        if a:
            f = facets[k]
            f.outside.append(int(q))
            owner[q] = f
        else:
            owner[q] = None


def _finalize(pts, live, scale):
    used = sorted({v for f in live for v in f.verts})
    remap = {v: i for i, v in enumerate(used)}
    normals = np.array([f.normal for f in live])
    offsets = np.array([f.offset for f in live])
    fverts = np.array([[remap[v] for v in f.verts] for f in live], dtype=np.intp)
    viol = pts @ normals.T - offsets
    if np.max(viol) > GEOM_TOL * max(1.0, scale):
        raise DegenerateInput("hull construction lost a point; input is not in general position")
    return Hull(pts.shape[1], pts[used].copy(), normals, offsets, fverts)


def f_vector(h):
    """Face counts ``(f_0, ..., f_{d-1})`` of a simplicial hull.

    Faces are enumerated as vertex subsets of the facet simplices and
    deduplicated, which is only valid when every facet is a simplex.
    """
    d = h.dim
    if h.facet_vertices.shape[1] > d:
        raise NonSimplicial("facet with more than d vertices")
    counts = []
    for k in range(d - 1):
        faces = set()
        for row in h.facet_vertices:
            faces.update(combinations(sorted(row.tolist()), k + 1))
        counts.append(len(faces))
    counts.append(h.n_facets)
    return np.array(counts, dtype=np.int64)


def euler_characteristic(fv):
    return int(sum((-1) ** k * int(c) for k, c in enumerate(fv)))


def contains_point(h, x, tol=GEOM_TOL):
    """Closed containment test against every facet inequality."""
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != h.dim:
        raise DimensionMismatch(f"point of dimension {x.shape[-1]} in a hull of dimension {h.dim}")
    inside = np.all(x @ h.normals.T <= h.offsets + tol, axis=-1)
    return bool(inside) if x.ndim == 1 else inside
