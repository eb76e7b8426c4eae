from math import comb, pi

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conehull import closed_forms as cf
from conehull.conic import (
    Cone,
    buchta_identity_check,
    conic_intrinsic_volumes,
    conic_profile,
    deficit_solid_angle,
    grassmann_angle,
    project_onto_cone,
    solid_angle,
)
from conehull.errors import InvalidK, InvalidParams
from conehull.rng import make_rng
from conehull.samplers import sample_cone


def _orthant(m):
    """Orthonormal generators whose common axis is the pole e_0."""
    a = np.ones(m) / np.sqrt(m)
    # Householder reflection swapping a and e_0
    u = a - np.eye(m)[0]
    H = np.eye(m) - 2 * np.outer(u, u) / (u @ u)
    return (H @ np.eye(m)).T


def _within(est, se, target, z=4.0):
    return abs(est - target) <= z * se + 1e-12


@given(st.integers(0, 2**32 - 1), st.integers(2, 4), st.integers(1, 8))
def test_projection_is_a_metric_projection(seed, m, n):
    rng = np.random.default_rng(seed)
    V = rng.standard_normal((n, m))
    g = rng.standard_normal(m)
    p, active = project_onto_cone(V, g)
    r = g - p
    # p is in the cone, the residual is orthogonal to p and lies in the polar cone
    assert abs(r @ p) <= 1e-8 * max(1.0, g @ g)
    assert np.all(V @ r <= 1e-8 * max(1.0, np.linalg.norm(g)))
    p2, _ = project_onto_cone(V, p)
    np.testing.assert_allclose(p2, p, atol=1e-8)
    assert set(active) <= set(range(n))


def test_projection_of_interior_point_is_itself():
    V = _orthant(3)
    g = V.sum(axis=0)
    p, active = project_onto_cone(V, g)
    np.testing.assert_allclose(p, g, atol=1e-12)
    assert len(active) == 3


def test_orthant_profile():
    # v_k of the nonnegative orthant in R^3 is C(3, k) / 8
    cone = Cone.from_generators(_orthant(3))
    assert cone.section_hull is not None
    prof = conic_profile(cone, samples=3000, rng=make_rng(0))
    exact_v = np.array([comb(3, k) / 8 for k in range(4)])
    for k in range(4):
        assert _within(prof.v[k], prof.v_stderr[k], exact_v[k])
    exact_h = [0.5, 3 / 8, 1 / 8]
    for k in range(3):
        assert _within(prof.h_direct[k], prof.h_direct_stderr[k], exact_h[k])
        assert _within(prof.h_from_v[k], prof.h_from_v_stderr[k], exact_h[k])
    assert prof.rank_deficient == 0


def test_quadrant_profile():
    prof = conic_intrinsic_volumes(_orthant(2), samples=4000, rng=make_rng(1))
    for k, t in enumerate([0.25, 0.5, 0.25]):
        assert _within(prof.v[k], prof.v_stderr[k], t)


@pytest.mark.parametrize("m", [2, 3, 4])
def test_halfspace_profile(m):
    # generators +-e_1..+-e_{m-1} and e_0 span the half-space x_0 >= 0
    G = [np.eye(m)[0]] + [s * np.eye(m)[i] for i in range(1, m) for s in (1, -1)]
    cone = Cone.from_generators(G)
    assert cone.section_hull is None
    prof = conic_profile(cone, samples=1500, rng=make_rng(m))
    np.testing.assert_allclose(prof.v[: m - 1], 0.0)
    assert _within(prof.v[m - 1], prof.v_stderr[m - 1], 0.5)
    assert _within(prof.v[m], prof.v_stderr[m], 0.5)
    assert prof.h_direct is None
    with pytest.raises(InvalidParams):
        grassmann_angle(cone, 1, 10, make_rng(0))


@pytest.mark.parametrize("d,n,seed", [(1, 5, 0), (2, 7, 1), (3, 9, 2)])
def test_identities_on_random_cones(d, n, seed):
    rng = make_rng(seed)
    prof = conic_profile(sample_cone(d, n, rng), samples=1500, rng=rng)
    assert _within(prof.even_sum.mean, prof.even_sum.stderr, 0.5)
    assert _within(prof.odd_sum.mean, prof.odd_sum.stderr, 0.5)
    assert prof.v.sum() == pytest.approx(1.0)
    for k in range(d + 1):
        se = np.hypot(prof.h_direct_stderr[k], prof.h_from_v_stderr[k])
        assert _within(prof.h_direct[k], se, prof.h_from_v[k])
        se = np.hypot(prof.w_direct_stderr[k], prof.w_from_v_stderr[k])
        assert _within(prof.w_direct[k], se, prof.w_from_v[k])
    # Kubota through the v route is an exact linear identity
    h_next = np.append(prof.h_from_v[1:], 0.0)
    np.testing.assert_allclose(prof.w_from_v, prof.h_from_v + h_next, atol=1e-12)
    assert prof.h_direct[0] == 0.5


def test_grassmann_angle_arguments():
    s = sample_cone(2, 6, make_rng(0))
    assert grassmann_angle(s, 0, 10, make_rng(0)).mean == 0.5
    with pytest.raises(InvalidK):
        grassmann_angle(s, 3, 10, make_rng(0))


def test_top_grassmann_angle_is_solid_angle():
    rng = make_rng(5)
    s = sample_cone(2, 6, rng)
    a = solid_angle(s, 20_000, rng)
    h = grassmann_angle(s, 2, 20_000, rng)
    assert _within(a.mean, np.hypot(a.stderr, h.stderr), h.mean)


def test_deficit_matches_solid_angle():
    rng = make_rng(6)
    for _ in range(20):
        s = sample_cone(2, 12, rng)
        cone = Cone.from_sample(s)
        if cone.section_hull.contains_origin:
            break
    defi = deficit_solid_angle(cone, rng=rng, mc_dirs=8192)
    a = solid_angle(cone, 40_000, rng)
    se = np.hypot(defi.stderr, 12 * a.stderr)
    assert _within(defi.mean, se, 12 * (0.5 - a.mean))


def test_one_dimensional_deficit_law():
    # for n uniform angles the uncovered mass has mean 1 / (n + 1)
    rng = make_rng(7)
    n = 6
    vals = [deficit_solid_angle(sample_cone(1, n, rng)).mean / n for _ in range(4000)]
    se = np.std(vals, ddof=1) / np.sqrt(len(vals))
    assert _within(np.mean(vals), se, 1 / (n + 1))


def test_exact_grassmann_asymptotics():
    # n (1/2 - E h_3(C_n)) in d = 2 from the exact facet formula increases to pi^2 / 4
    vals = [n * cf.exact_facets_halfsphere(2, n + 1) / (2 * (n + 1)) for n in (25, 50, 100, 200, 2000)]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    assert vals[0] == pytest.approx(2.342, abs=1e-3)
    assert vals[-1] == pytest.approx(pi**2 / 4, rel=1e-2)


def test_buchta_exact_in_one_dimension():
    rep = buchta_identity_check(1, 10, 1, samples=200, rng=make_rng(0))
    assert rep.exact_lhs == pytest.approx(2.0)
    assert rep.exact_rhs == 2.0
    assert rep.exact_pass
    assert rep.rhs.mean == 2.0


@pytest.mark.parametrize("k", [1, 2])
def test_buchta_two_sides_agree(k):
    rep = buchta_identity_check(2, 8, k, samples=1500, rng=make_rng(10 + k))
    assert abs(rep.z) < 4
    exact = cf.expected_section_f_vector(2, 8 + 3 - k)[2 - k]
    assert _within(rep.rhs.mean, rep.rhs.stderr, exact)
    assert _within(rep.lhs.mean, rep.lhs.stderr, exact)


def test_buchta_rejects_bad_k():
    with pytest.raises(InvalidParams):
        buchta_identity_check(2, 8, 3, samples=10)
