import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.spatial import ConvexHull

from conehull.errors import DegenerateInput, DimensionMismatch
from conehull.geometry import (
    affine_intersects_hull,
    batch_affine_intersects,
    contains_point,
    convex_hull,
    euler_characteristic,
    f_vector,
    haar_subspace,
    hull_volume,
    linprog_eq,
    point_in_conv_lp,
    project_points,
    radial_function,
    simplex_volume,
    t_functional,
)

seeds = st.integers(0, 2**32 - 1)
dims = st.sampled_from([2, 3, 4])


def _cloud(seed, d, n=None):
    rng = np.random.default_rng(seed)
    n = n or rng.integers(d + 1, 4 * d + 12)
    return rng.standard_normal((n, d)) * rng.uniform(0.5, 3.0, size=d)


@given(seeds, dims)
def test_hull_matches_qhull(seed, d):
    pts = _cloud(seed, d)
    h = convex_hull(pts)
    ref = ConvexHull(pts)
    got = {tuple(np.round(v, 12)) for v in h.vertices}
    want = {tuple(np.round(v, 12)) for v in pts[ref.vertices]}
    assert got == want
    assert h.n_facets == len(ref.simplices)
    assert hull_volume(h) == pytest.approx(ref.volume, rel=1e-9)


@given(seeds, dims)
def test_vertices_are_lp_extreme_points(seed, d):
    pts = _cloud(seed, d, n=3 * d + 4)
    h = convex_hull(pts)
    verts = {tuple(v) for v in h.vertices}
    for i, p in enumerate(pts):
        others = np.delete(pts, i, axis=0)
        assert (tuple(p) in verts) == (not point_in_conv_lp(p, others))


@given(seeds, dims)
def test_every_input_point_is_inside(seed, d):
    pts = _cloud(seed, d)
    h = convex_hull(pts)
    assert np.all(contains_point(h, pts))
    assert np.all(pts @ h.normals.T <= h.offsets + 1e-9)


@given(seeds, dims)
def test_face_relations(seed, d):
    h = convex_hull(_cloud(seed, d))
    f = f_vector(h)
    assert euler_characteristic(f) == 1 - (-1) ** d
    assert d * f[-1] == 2 * f[-2]


@given(seeds, dims)
def test_t_functional_identities(seed, d):
    pts = _cloud(seed, d, n=4 * d + 8)
    h = convex_hull(pts - pts.mean(axis=0))
    assert t_functional(h, 0, 0) == pytest.approx(h.n_facets)
    if h.contains_origin:
        assert t_functional(h, 1, 1) == pytest.approx(d * hull_volume(h), rel=1e-10)


def test_unit_cube_volume_and_radial_function():
    corners = np.array(np.meshgrid(*[[-1.0, 1.0]] * 3)).reshape(3, -1).T
    jitter = np.random.default_rng(0).uniform(-1e-7, 1e-7, corners.shape)
    h = convex_hull(corners + jitter)
    assert hull_volume(h) == pytest.approx(8.0, rel=1e-5)
    assert radial_function(h, np.array([1.0, 0.0, 0.0])) == pytest.approx(1.0, rel=1e-5)


def test_simplex_volume():
    assert simplex_volume(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])) == pytest.approx(0.5)
    # equilateral triangle with side sqrt(2) sitting in R^3
    assert simplex_volume(np.eye(3)) == pytest.approx(np.sqrt(3) / 2)
    assert simplex_volume(np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]])) == pytest.approx(0.0, abs=1e-15)


def test_interval_hull():
    h = convex_hull(np.array([[0.3], [-2.0], [1.5], [0.0]]))
    np.testing.assert_allclose(np.sort(h.vertices[:, 0]), [-2.0, 1.5])
    assert hull_volume(h) == pytest.approx(3.5)
    assert list(f_vector(h)) == [2]


def test_flat_input_is_rejected():
    pts = np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0], [3.0, 3.0]])
    with pytest.raises(DegenerateInput):
        convex_hull(pts)


def test_dimension_check():
    with pytest.raises(DimensionMismatch):
        convex_hull(np.zeros((5, 2)) + np.arange(10).reshape(5, 2), d=3)


def test_linprog_statuses():
    status, x, val = linprog_eq(np.array([1.0, 2.0]), np.array([[1.0, 1.0]]), np.array([1.0]))
    assert status == "optimal"
    assert val == pytest.approx(1.0)
    np.testing.assert_allclose(x, [1.0, 0.0], atol=1e-12)
    status, _, _ = linprog_eq(np.array([1.0]), np.array([[1.0]]), np.array([-1.0]))
    assert status == "infeasible"
    status, _, _ = linprog_eq(np.array([-1.0, 0.0]), np.array([[1.0, -1.0]]), np.array([0.0]))
    assert status == "unbounded"


@given(seeds, st.sampled_from([2, 3]), st.integers(1, 3))
def test_batch_affine_matches_lp(seed, d, j):
    j = min(j, d)
    rng = np.random.default_rng(seed)
    h = convex_hull(rng.standard_normal((2 * d + 4, d)))
    Z = 2.5 * rng.standard_cauchy((20, j, d))
    fast = batch_affine_intersects(Z, h)
    for s in range(len(Z)):
        assert fast[s] == affine_intersects_hull(Z[s, 0], Z[s, 1:], h.vertices)


@given(seeds, st.integers(2, 5), st.integers(1, 5))
def test_haar_subspace_is_orthonormal(seed, d, k):
    k = min(k, d)
    L = haar_subspace(d, k, np.random.default_rng(seed))
    np.testing.assert_allclose(L.basis @ L.basis.T, np.eye(k), atol=1e-12)
    x = np.random.default_rng(seed + 1).standard_normal((4, d))
    q = project_points(x, L)
    assert q.shape == (4, k)
    assert np.all(np.linalg.norm(q, axis=1) <= np.linalg.norm(x, axis=1) + 1e-12)
