from math import comb, factorial, inf, pi

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate as sint
from scipy import stats

from conehull import closed_forms as cf
from conehull.errors import InfiniteMoment, InvalidParams, NonPositiveArgument
from conehull.quadrature import integrate


def test_ball_and_sphere_constants():
    assert cf.kappa(2) == pytest.approx(pi)
    assert cf.kappa(3) == pytest.approx(4 * pi / 3)
    assert cf.omega(2) == pytest.approx(2 * pi)
    assert cf.omega(3) == pytest.approx(4 * pi)
    for d in range(1, 8):
        assert cf.omega(d) == pytest.approx(d * cf.kappa(d))
    with pytest.raises(NonPositiveArgument):
        cf.omega(0)


def test_quadrature():
    assert integrate(np.sin, 0.0, pi) == pytest.approx(2.0, abs=1e-13)
    assert integrate(lambda x: x**7, -1.0, 2.0) == pytest.approx((2**8 - 1) / 8, rel=1e-14)
    assert integrate(lambda x: np.sqrt(x), 0.0, 1.0, abs_tol=1e-12) == pytest.approx(2 / 3, abs=1e-11)


def test_halfsphere_facets_exact_values():
    for n in (1, 2, 5, 50):
        assert cf.exact_facets_halfsphere(1, n) == pytest.approx(2.0, abs=1e-12)
    assert cf.exact_facets_halfsphere(2, 3) == pytest.approx(3.0, abs=1e-12)


@given(st.integers(1, 6))
def test_simplicial_cone_has_d_plus_one_facets(d):
    assert cf.exact_facets_halfsphere(d, d + 1) == pytest.approx(d + 1, rel=1e-11)


@pytest.mark.parametrize("d,n", [(2, 5), (2, 20), (2, 100), (3, 10), (4, 30)])
def test_halfsphere_facets_against_scipy_quad(d, n):
    val, _ = sint.quad(lambda a: (1 - a / pi) ** (n - d) * np.sin(a) ** (d - 1), 0, pi, epsabs=1e-14, epsrel=1e-13, limit=200)
    ref = 2 * cf.omega(d) / cf.omega(d + 1) * comb(n, d) * val
    assert cf.exact_facets_halfsphere(d, n) == pytest.approx(ref, rel=1e-10)


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_halfsphere_facets_increase_to_limit(d):
    vals = [cf.exact_facets_halfsphere(d, n) for n in (d + 1, 2 * d + 5, 50, 400, 5000)]
    assert all(b >= a - 1e-9 for a, b in zip(vals, vals[1:]))
    assert vals[-1] == pytest.approx(cf.limit_facets_halfsphere(d), rel=5e-3)


def test_limit_facets():
    assert cf.limit_facets_halfsphere(2) == pytest.approx(pi**2 / 2)
    assert cf.limit_facets_halfsphere(3) == pytest.approx(4 * pi**2 / 3)


def test_poisson_facets():
    assert cf.expected_facets_poisson(2, 2.0) == pytest.approx(6.0)
    assert cf.expected_facets_poisson(3, 2.0) == pytest.approx(20.0)
    for d in range(1, 7):
        assert cf.expected_facets_poisson(d, 2.0) == pytest.approx(comb(2 * d, d))
        # gamma = 1 is the cone-section limit
        assert cf.expected_facets_poisson(d, 1.0) == pytest.approx(cf.limit_facets_halfsphere(d))


def test_icosahedron_f_vector():
    np.testing.assert_allclose(cf.expected_f_vector_poisson(3, 2.0), [12, 30, 20])
    np.testing.assert_allclose(cf.expected_f_vector_poisson(2, 2.0), [6, 6])


def test_section_f_vector():
    assert cf.expected_section_f_vector(1, 7) == [pytest.approx(2.0)]
    np.testing.assert_allclose(cf.expected_section_f_vector(2, 3), [3, 3])
    np.testing.assert_allclose(cf.expected_section_f_vector(3, 4), [4, 6, 4], rtol=1e-10)


def test_constants_B():
    assert cf.constant_B(2, 2).value == pytest.approx(pi**2 / 2)
    assert cf.constant_B(3, 3).value == pytest.approx(4 * pi**2)
    assert cf.constant_B(2, 3).value == pytest.approx(2 * pi**2)
    assert cf.constant_B(4, 3).value == 0.0
    assert cf.constant_B(2, 5).value == pytest.approx(10 * pi**2)
    assert cf.constant_B(3, 5).value is None


@given(st.integers(1, 8))
def test_B_dd_matches_limit_facets(d):
    assert 2 / factorial(d) * cf.constant_B(d, d).value == pytest.approx(cf.limit_facets_halfsphere(d), rel=1e-12)


def test_limit_f_vector():
    np.testing.assert_allclose(cf.limit_f_vector(2), [pi**2 / 2] * 2)
    np.testing.assert_allclose(cf.limit_f_vector(3), [2 + 2 * pi**2 / 3, 2 * pi**2, 4 * pi**2 / 3])
    f4 = cf.limit_f_vector(4)
    assert f4[0] - f4[1] + f4[2] - f4[3] == pytest.approx(0.0, abs=1e-10)
    assert cf.limit_f_vector(5)[0] is None


def test_T_and_volume_special_values():
    assert cf.expected_volume_poisson(2, 2.0, 2.0).value == pytest.approx(0.5)
    assert cf.expected_T(2, 1.0, 1.0, 1.0, 0.0).value == pytest.approx(pi / 4)
    assert cf.expected_T_symmetric(2, 2.0, 1.0, 0, 0).value == pytest.approx(6.0)


@given(st.integers(1, 5), st.floats(0.2, 6.0), st.floats(0.1, 5.0))
def test_T00_is_facet_count(d, g, c):
    assert cf.expected_T(d, g, c, 0, 0).value == pytest.approx(cf.expected_facets_poisson(d, g), rel=1e-10)


@given(st.integers(1, 5), st.floats(1.05, 6.0), st.floats(0.1, 5.0))
def test_T11_is_d_times_volume(d, g, c):
    # the hull contains the origin almost surely, so T_{1,1} = d Vol
    t = cf.expected_T(d, g, c, 1, 1).value
    assert t == pytest.approx(d * cf.expected_volume_poisson(d, g, c).value, rel=1e-10)


@given(st.integers(1, 5), st.floats(0.2, 6.0), st.floats(0.1, 5.0), st.floats(0, 3), st.floats(0, 3))
def test_T_scaling_in_c(d, g, c, a, b):
    # the process at intensity c is the one at intensity 1 scaled by c^(1/gamma)
    o1 = cf.expected_T(d, g, 1.0, a, b)
    oc = cf.expected_T(d, g, c, a, b)
    if not o1.finite:
        assert oc.value == inf
        return
    power = (a + b * (d - 1)) / g
    assert oc.value == pytest.approx(o1.value * c**power, rel=1e-9)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_intrinsic_volume_top_is_volume(d):
    assert cf.expected_intrinsic_volume(d, 2.0, 2.0, d).value == pytest.approx(cf.expected_volume_poisson(d, 2.0, 2.0).value)
    assert cf.intrinsic_prefactor(d, d) == pytest.approx(1.0)


def test_intrinsic_prefactor_mean_width():
    # the unit disc projects to segments of length 2 and has V_1 = half its perimeter
    assert cf.intrinsic_prefactor(2, 1) * 2.0 == pytest.approx(pi)


def test_infinity_branches_grid():
    for d in (1, 2, 3):
        for g in (0.5, 1.0, 1.5, 2.0, 3.0):
            for a in (0.0, 0.5, 1.0, 2.0, 4.0):
                for b in (0.0, 0.5, 1.0, 2.0, 3.0):
                    diverges = (g - b) * d + b - a <= 0 or g <= b
                    v = cf.expected_T(d, g, 1.0, a, b).value
                    assert (v == inf) == diverges
                    assert v > 0
            assert (cf.expected_volume_poisson(d, g, 1.0).value == inf) == (g <= 1)


def test_invalid_arguments():
    with pytest.raises(InvalidParams):
        cf.expected_T(2, -1.0, 1.0, 0, 0)
    with pytest.raises(InvalidParams):
        cf.exact_facets_halfsphere(3, 2)
    with pytest.raises(InfiniteMoment):
        cf.simplex_moment_betaprime(1, 0.5, 2, 2.0)


def test_simplex_moment_monte_carlo():
    # k = 2 points on the line with density (1 + x^2)^(-3/2) are t_2 / sqrt(2)
    rng = np.random.default_rng(3)
    z = stats.t(2).rvs((200_000, 2), random_state=rng) / np.sqrt(2)
    vals = np.abs(z[:, 0] - z[:, 1]) ** 0.5
    exact = cf.simplex_moment_betaprime(1, 2.0, 2, 0.5)
    assert abs(vals.mean() - exact) < 4 * vals.std() / np.sqrt(len(vals))


def test_non_absorption_and_tails():
    assert cf.non_absorption_1d(1.0, 1.0, 1.0) == pytest.approx(np.exp(-1 / (2 * pi)))
    assert cf.poisson_tail_mass(2, 2.0, 2.0, 1.0) == pytest.approx(2 * 2 * pi / (2 * cf.omega(4)))
    assert cf.cauchy_tail_constant(1) == pytest.approx(2 / pi)
    t = np.linspace(0, 0.999, 7)
    pdf = cf.halfsphere_first_coordinate_pdf(t, 2)
    np.testing.assert_allclose(pdf, 1.0)
    assert sint.quad(lambda x: cf.halfsphere_first_coordinate_pdf(x, 4), 0, 1)[0] == pytest.approx(1.0)
