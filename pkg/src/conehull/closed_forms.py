"""Closed-form values for random cones and power-law Poisson hulls.

Gamma products are accumulated as sums of ``gammaln`` terms and exponentiated
once at the end; every argument that reaches ``gammaln`` here is positive.
"""

from dataclasses import dataclass, field
from math import comb, exp, factorial, inf, isfinite, lgamma, log, pi, sqrt

import numpy as np

from .errors import InfiniteMoment, InvalidParams, NonPositiveArgument
from .quadrature import integrate


@dataclass(frozen=True)
class Oracle:
    """A closed-form value tagged with the formula it came from.

    ``value`` is ``math.inf`` on the divergent branches and ``None`` when no
    closed form is known.
    """

    value: float | None
    formula_id: str
    params: dict = field(default_factory=dict)

    @property
    def known(self):
        return self.value is not None

    @property
    def finite(self):
        return self.value is not None and isfinite(self.value)

    def __float__(self):
        return float("nan") if self.value is None else float(self.value)


def kappa(d):
    """Volume of the unit ball in R^d, for real d > 0."""
    if d <= 0:
        raise NonPositiveArgument("kappa needs d > 0")
    return exp(0.5 * d * log(pi) - lgamma(0.5 * d + 1.0))


def omega(s):
    """Surface area 2 pi^(s/2) / Gamma(s/2) of the unit sphere in R^s, for real s > 0."""
    if s <= 0:
        raise NonPositiveArgument("omega needs s > 0")
    return 2.0 * exp(0.5 * s * log(pi) - lgamma(0.5 * s))


def _check_dg(d, gamma):
    if int(d) != d or d < 1:
        raise InvalidParams("d must be a positive integer")
    if not gamma > 0:
        raise InvalidParams("gamma must be positive")


def exact_facets_halfsphere(d, n):
    """Expected number of facets of the cone spanned by n uniform half-sphere points.

    Adaptive Gauss-Legendre quadrature of
    ``(2 w_d / w_{d+1}) C(n, d) int_0^pi (1 - a/pi)^(n-d) sin^(d-1)(a) da``.
    """
    if int(d) != d or int(n) != n or d < 1 or n < d:
        raise InvalidParams("need integers n >= d >= 1")
    d, n = int(d), int(n)
    m = n - d

    def f(a):
        return (1.0 - a / pi) ** m * np.sin(a) ** (d - 1)

    # The integrand concentrates in [0, O(d/n)] for large n, so the range is
    # cut at pi 2^-j; a one-rule pass over the pieces sizes the tolerance.
    levels = int(np.ceil(np.log2(pi * (m + d)))) + 8
    edges = [0.0] + [pi * 2.0**-j for j in range(levels, -1, -1)]
    pieces = list(zip(edges, edges[1:]))
    rough = sum(integrate(f, lo, hi, abs_tol=np.inf) for lo, hi in pieces)
    integral = sum(integrate(f, lo, hi, abs_tol=1e-13 * rough) for lo, hi in pieces)
    return 2.0 * omega(d) / omega(d + 1) * comb(n, d) * integral


def limit_facets_halfsphere(d):
    """``2^-d d! kappa_d^2``: the large-n limit of :func:`exact_facets_halfsphere`."""
    return 2.0**-d * factorial(d) * kappa(d) ** 2


def expected_facets_poisson(d, gamma):
    """Mean facet number of the hull of the power-law Poisson process (free of c)."""
    _check_dg(d, gamma)
    g = gamma
    lv = (
        log(2.0 / d)
        + (d - 1) * log(g)
        + 0.5 * (d - 1) * log(pi)
        + lgamma(0.5 * (g * d + 1))
        - lgamma(0.5 * g * d)
        + d * (lgamma(0.5 * g) - lgamma(0.5 * (g + 1)))
    )
    return exp(lv)


def t_finite(d, gamma, a, b):
    """Finiteness conditions of the expected T-functional."""
    return (gamma - b) * d + b - a > 0 and gamma - b > 0


def expected_T(d, gamma, c, a, b):
    """Expected ``T_{a,b}`` over the facets of the hull of the process.

    Returns an :class:`Oracle` whose value is ``inf`` when
    ``(gamma - b) d + b - a <= 0`` or ``gamma <= b``.
    """
    _check_dg(d, gamma)
    if c <= 0 or a < 0 or b < 0:
        raise InvalidParams("need c > 0 and a, b >= 0")
    params = dict(d=d, gamma=gamma, c=c, a=a, b=b)
    if not t_finite(d, gamma, a, b):
        return Oracle(inf, "expected_T", params)
    g = gamma
    w = omega(g + 1)
    gb = g - b
    lv = (
        d * log(c)
        + log(omega(d))
        - log(g)
        - lgamma(d + 1)
        - d * log(w)
        + (a - b + (b - g) * d) / g * log(c / (g * w))
        + lgamma((gb * d + b - a) / g)
        - b * lgamma(d)
        + lgamma(0.5 * gb * d + 0.5 * (b + 1))
        - lgamma(0.5 * gb * d)
        + d * (lgamma(0.5 * gb) - lgamma(0.5 * (g + 1)))
    )
    for i in range(1, d):
        lv += lgamma(0.5 * (i + b + 1)) - lgamma(0.5 * i)
    return Oracle(exp(lv), "expected_T", params)


def expected_T_symmetric(d, gamma, c, a, b):
    """Symmetric hull at intensity c has the law of the plain hull at 2c for T."""
    o = expected_T(d, gamma, 2.0 * c, a, b)
    return Oracle(o.value, "expected_T_symmetric", dict(d=d, gamma=gamma, c=c, a=a, b=b))


def expected_volume_poisson(d, gamma, c):
    _check_dg(d, gamma)
    params = dict(d=d, gamma=gamma, c=c)
    if gamma <= 1:
        return Oracle(inf, "expected_volume", params)
    g = gamma
    lv = (
        d / g * log(c)
        - lgamma(d + 1)
        - d * (1 + 1 / g) * log(2.0)
        - d / (2 * g) * log(pi)
        + d * (g - 1) / g * (log(g) - lgamma(0.5 * (g + 1)))
        + lgamma(1 + d - d / g)
        + d * lgamma(0.5 * (g - 1))
        - lgamma(1 + 0.5 * d)
    )
    return Oracle(exp(lv), "expected_volume", params)


def intrinsic_prefactor(d, k):
    """``C(d, k) kappa_d / (kappa_k kappa_{d-k})`` with ``kappa_0 = 1``."""
    kk = kappa(k) if k > 0 else 1.0
    kdk = kappa(d - k) if d - k > 0 else 1.0
    return comb(d, k) * kappa(d) / (kk * kdk)


def expected_intrinsic_volume(d, gamma, c, k):
    if int(k) != k or not 1 <= k <= d:
        raise InvalidParams("need 1 <= k <= d")
    _check_dg(d, gamma)
    params = dict(d=d, gamma=gamma, c=c, k=k)
    vol = expected_volume_poisson(int(k), gamma, c)
    if not vol.finite:
        return Oracle(inf, "expected_intrinsic_volume", params)
    return Oracle(intrinsic_prefactor(d, k) * vol.value, "expected_intrinsic_volume", params)


def constant_B(k, d):
    """Known limit constants: ``B_{d,d}``, ``B_{2,d}`` and ``B_{d+1,d} = 0``.

    Any other pair gives an Oracle with ``value=None``.
    """
    params = dict(k=k, d=d)
    if k == d + 1:
        return Oracle(0.0, "B_d+1_d", params)
    if k == d and d >= 1:
        return Oracle((2 * pi) ** (d - 1) * exp(2 * lgamma(0.5 * (d + 1))), "B_d_d", params)
    if k == 2 and d >= 2:
        return Oracle(0.5 * comb(d + 1, 3) * pi**2, "B_2_d", params)
    return Oracle(None, "B_unknown", params)


def complete_f_vector(f):
    """Fill gaps of a simplicial d-polytope f-vector where the relations force them.

    ``f`` is a list of length d with ``None`` for unknown entries.  The
    Dehn-Sommerville relation gives ``f_{d-2}`` from the facet count, and
    the Euler relation then fixes a single remaining gap.  Applies equally
    to expectations, since both relations are linear.
    """
    f = list(f)
    d = len(f)
    if d >= 2 and f[d - 2] is None and f[d - 1] is not None:
        f[d - 2] = 0.5 * d * f[d - 1]
    missing = [i for i, v in enumerate(f) if v is None]
    if len(missing) == 1:
        i = missing[0]
        euler = 1 + (-1) ** (d - 1)
        rest = sum((-1) ** j * v for j, v in enumerate(f) if v is not None)
        f[i] = (euler - rest) * (-1) ** i
    return f


def limit_f_vector(d):
    """Limit of the expected f-vector of the spherical section of the cone.

    Entry ``k - 1`` is ``(2 / k!) B_{k,d}`` where the constant is known;
    :func:`complete_f_vector` fills gaps it determines.  Unknown entries
    are ``None``.
    """
    f = [None] * d
    for k in range(1, d + 1):
        B = constant_B(k, d)
        if B.known:
            f[k - 1] = 2.0 / factorial(k) * B.value
    return complete_f_vector(f)


def expected_f_vector_poisson(d, gamma):
    """Mean f-vector of the Poisson hull as far as the facet count determines it."""
    f = [None] * d
    f[d - 1] = expected_facets_poisson(d, gamma)
    return complete_f_vector(f)


def expected_section_f_vector(d, n):
    """Mean f-vector of ``conv{P(U_1), ..., P(U_n)}``; entry ``i`` counts (i+1)-faces of the cone."""
    f = [None] * d
    f[d - 1] = exact_facets_halfsphere(d, n)
    return complete_f_vector(f)


def simplex_moment_betaprime(d, gamma, k, beta):
    """``E Delta_{k-1}(Z_1..Z_k)^beta`` for iid beta-prime points in R^{k-1}.

    The density of each ``Z_i`` is proportional to ``(1 + |x|^2)^(-(d+gamma)/2)``.
    """
    if not d - k + 1 - beta + gamma > 0:
        raise InfiniteMoment("moment diverges: need d - k + 1 - beta + gamma > 0")
    if beta == 0:
        return 1.0
    s = 0.5 * (d + 1 - k + gamma)
    lv = (
        -beta * lgamma(k)
        + lgamma(s * k - 0.5 * (k - 1) * beta)
        - lgamma(0.5 * (d - k + 1 - beta + gamma) * k)
        + k * (lgamma(0.5 * (d + 1 - k - beta + gamma)) - lgamma(s))
    )
    for i in range(1, k):
        lv += lgamma(0.5 * (i + beta)) - lgamma(0.5 * i)
    return exp(lv)


def poisson_tail_mass(d, gamma, c, r):
    """Intensity mass of the process outside the ball of radius r."""
    return c * omega(d) / (gamma * omega(d + gamma)) * r ** (-gamma)


def non_absorption_1d(r, gamma, c):
    """Probability that r > 0 lies outside the hull of the 1-d process."""
    return exp(-c / (gamma * omega(gamma + 1)) * r ** (-gamma))


def cauchy_tail_constant(d):
    """Limit of ``n P(|X| > r n) * r`` for the Cauchy-type law on R^d."""
    return 2.0 * exp(lgamma(0.5 * (d + 1)) - lgamma(0.5 * d)) / sqrt(pi)


def halfsphere_first_coordinate_pdf(t, d):
    """Density of the first coordinate of a uniform point on the upper half-sphere."""
    t = np.asarray(t, dtype=float)
    const = cauchy_tail_constant(d)
    return const * (1.0 - t**2) ** (0.5 * d - 1.0)
