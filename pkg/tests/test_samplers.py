import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats

from conehull import diagnostics
from conehull.errors import InvalidParams, InvalidRadii, PoleAtEquator
from conehull.geometry import contains_point
from conehull.rng import ENV_SEED, make_rng, master_seed, replicate_rng
from conehull.samplers import (
    PoissonParams,
    gnomonic,
    sample_cauchy_type,
    sample_cone,
    sample_halfsphere,
    sample_poisson_annulus,
    sample_poisson_hull,
    sample_symmetric_hull,
)


def test_master_seed_resolution(monkeypatch):
    monkeypatch.delenv(ENV_SEED, raising=False)
    assert master_seed(7) == 7
    default = master_seed()
    monkeypatch.setenv(ENV_SEED, "0x10")
    assert master_seed() == 16
    assert master_seed(3) == 3
    assert default != 16


def test_streams_are_reproducible_and_distinct():
    a = make_rng(5, 1, 2).random(4)
    np.testing.assert_array_equal(a, make_rng(5, 1, 2).random(4))
    assert not np.allclose(a, make_rng(5, 1, 3).random(4))
    assert not np.allclose(replicate_rng(5, 0).random(4), replicate_rng(5, 1).random(4))


@given(st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_halfsphere_points(d, seed):
    u = sample_halfsphere(d, make_rng(seed), 50)
    assert u.shape == (50, d + 1)
    np.testing.assert_allclose(np.linalg.norm(u, axis=1), 1.0)
    assert np.all(u[:, 0] >= 0)


@given(st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_gnomonic_inverts_radial_lift(d, seed):
    x = make_rng(seed).standard_normal((20, d))
    lift = np.hstack([np.ones((20, 1)), x])
    u = lift / np.linalg.norm(lift, axis=1, keepdims=True)
    np.testing.assert_allclose(gnomonic(u), x, atol=1e-12)


def test_gnomonic_rejects_equator():
    with pytest.raises(PoleAtEquator):
        gnomonic(np.array([0.0, 1.0]))


def test_cauchy_type_shape():
    assert sample_cauchy_type(3, make_rng(0), 7).shape == (7, 3)
    assert sample_cauchy_type(2, make_rng(0)).shape == (2,)


def test_cone_sample():
    s = sample_cone(2, 10, make_rng(1))
    assert s.halfsphere_points.shape == (10, 3)
    np.testing.assert_allclose(s.gnomonic_points, gnomonic(s.halfsphere_points))
    with pytest.raises(InvalidParams):
        sample_cone(3, 3, make_rng(1))


def test_annulus_radii():
    p = PoissonParams(2, 1.5, 3.0)
    x = sample_poisson_annulus(p, 0.5, 2.0, make_rng(2))
    r = np.linalg.norm(x, axis=1)
    assert np.all((r > 0.5) & (r <= 2.0))
    with pytest.raises(InvalidRadii):
        sample_poisson_annulus(p, 2.0, 1.0, make_rng(2))


def test_invalid_params():
    with pytest.raises(InvalidParams):
        PoissonParams(2, 0.0, 1.0)
    with pytest.raises(InvalidParams):
        PoissonParams(0, 1.0, 1.0)


@given(st.integers(1, 3), st.sampled_from([0.5, 1.0, 2.0, 4.0]), st.sampled_from([0.5, 1.0, 2.0]), st.integers(0, 10_000))
def test_certificate(d, g, c, seed):
    sample, h = sample_poisson_hull(PoissonParams(d, g, c), make_rng(seed))
    assert sample.certified
    assert h.contains_origin
    # the ball of radius r_trunc sits inside the hull, so nothing inside it is a vertex
    assert np.all(h.offsets >= sample.r_trunc)
    assert np.all(np.linalg.norm(sample.points, axis=1) > sample.r_trunc)
    assert np.all(contains_point(h, sample.points, tol=1e-8))


def test_symmetric_hull_is_symmetric():
    h = sample_symmetric_hull(PoissonParams(2, 2.0, 1.0), make_rng(4))
    got = {tuple(np.round(v, 10)) for v in h.vertices}
    assert got == {tuple(np.round(-v, 10)) for v in h.vertices}


def test_same_seed_same_hull():
    p = PoissonParams(3, 2.0, 1.0)
    _, h1 = sample_poisson_hull(p, make_rng(9))
    _, h2 = sample_poisson_hull(p, make_rng(9))
    np.testing.assert_array_equal(h1.vertices, h2.vertices)


@pytest.mark.parametrize(
    "check",
    [
        lambda: diagnostics.halfsphere_first_coordinate_ks(3, size=4000, seed=11),
        lambda: diagnostics.cauchy_1d_ks(size=4000, seed=11),
        lambda: diagnostics.cauchy_angle_chisquare(size=4000, seed=11),
        lambda: diagnostics.annulus_count_chisquare(replicates=3000, seed=11),
        lambda: diagnostics.truncated_radius_ks(size=3000, seed=11),
        lambda: diagnostics.projection_count_chisquare(d=2, k=1, replicates=600, seed=11),
        lambda: diagnostics.non_absorption_binomial(1.0, 1.5, replicates=600, seed=11),
    ],
)
def test_distribution_checks_at_small_sizes(check):
    res = check()
    assert res.passed, res


def test_diagnostics_detect_a_wrong_law():
    # the same KS machinery must reject a sample from a different law
    x = make_rng(0).standard_normal(4000)
    assert stats.kstest(x, "cauchy").pvalue < diagnostics.ALPHA
