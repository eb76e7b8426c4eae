"""Goodness-of-fit checks of the samplers against their exact laws.

Each check returns a :class:`TestResult`; ``passed`` means the p-value is
above the significance level.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy import stats
from scipy.special import betainc

from .closed_forms import non_absorption_1d, omega
from .geometry import haar_subspace, project_points
from .rng import make_rng, master_seed
from .samplers import (
    PoissonParams,
    sample_cauchy_type,
    sample_halfsphere,
    sample_poisson_annulus,
    sample_poisson_hull,
)

ALPHA = 0.01


@dataclass(frozen=True)
class TestResult:
    test_id: str
    statistic: float
    p_value: float
    params: dict = field(default_factory=dict)
    alpha: float = ALPHA

    __test__ = False  # not a pytest class

    @property
    def passed(self):
        return bool(self.p_value > self.alpha)


def _pooled_chisquare(counts, probs, min_expected=5.0):
    """Chi-square test on integer counts with sparse tail classes merged.

    ``probs[j]`` is ``P(N = j)`` for ``j < len(probs) - 1`` and the last
    entry is the upper tail.
    """
    n = counts.sum()
    obs, exp = list(counts), list(n * np.asarray(probs))
    while len(exp) > 2 and exp[-1] < min_expected:
        e, o = exp.pop(), obs.pop()
        exp[-1] += e
        obs[-1] += o
    while len(exp) > 2 and exp[0] < min_expected:
        e, o = exp.pop(0), obs.pop(0)
        exp[0] += e
        obs[0] += o
    return stats.chisquare(obs, exp)


def _poisson_count_test(values, mean, test_id, params):
    values = np.asarray(values, dtype=int)
    top = max(int(values.max()), int(stats.poisson.ppf(1 - 1e-9, mean))) + 1
    counts = np.bincount(np.minimum(values, top), minlength=top + 1)
    probs = np.append(stats.poisson.pmf(np.arange(top), mean), stats.poisson.sf(top - 1, mean))
    res = _pooled_chisquare(counts, probs)
    return TestResult(test_id, float(res.statistic), float(res.pvalue), params)


def halfsphere_first_coordinate_ks(d=2, size=10_000, seed=None):
    """KS test of ``x_0`` against ``x_0^2 ~ Beta(1/2, d/2)`` (uniform for d = 2)."""
    rng = make_rng(master_seed(seed), 1)
    x0 = sample_halfsphere(d, rng, size)[:, 0]
    res = stats.kstest(x0, lambda t: betainc(0.5, 0.5 * d, np.clip(t, 0, 1) ** 2))
    return TestResult("ks_halfsphere_x0", float(res.statistic), float(res.pvalue), {"d": d, "size": size})


def cauchy_1d_ks(size=10_000, seed=None):
    rng = make_rng(master_seed(seed), 2)
    x = sample_cauchy_type(1, rng, size)[:, 0]
    res = stats.kstest(x, "cauchy")
    return TestResult("ks_cauchy_d1", float(res.statistic), float(res.pvalue), {"size": size})


def cauchy_angle_chisquare(d=2, size=10_000, sectors=12, seed=None):
    """Angles of planar Cauchy-type points fall evenly into sectors."""
    rng = make_rng(master_seed(seed), 3)
    x = sample_cauchy_type(d, rng, size)
    theta = np.arctan2(x[:, 1], x[:, 0])
    counts = np.histogram(theta, bins=sectors, range=(-np.pi, np.pi))[0]
    res = stats.chisquare(counts)
    return TestResult("chi2_cauchy_angle", float(res.statistic), float(res.pvalue), {"d": d, "size": size})


def annulus_count_chisquare(d=2, gamma=1.0, c=2.0, r=1.0, replicates=10_000, seed=None):
    """Counts of ``sample_poisson_annulus(r, inf)`` against their Poisson law."""
    params = PoissonParams(d, gamma, c)
    rng = make_rng(master_seed(seed), 4)
    counts = [len(sample_poisson_annulus(params, r, np.inf, rng)) for _ in range(replicates)]
    mean = float(params.tail_mass(r))
    return _poisson_count_test(counts, mean, "chi2_annulus_count", dict(d=d, gamma=gamma, c=c, r=r))


def truncated_radius_ks(d=2, gamma=1.5, c=1.0, r_in=0.5, size=10_000, seed=None):
    """Radii beyond ``r_in`` satisfy ``P(R > t) = (r_in / t)^gamma``."""
    params = PoissonParams(d, gamma, c)
    rng = make_rng(master_seed(seed), 5)
    radii = []
    while len(radii) < size:
        radii.extend(np.linalg.norm(sample_poisson_annulus(params, r_in, np.inf, rng), axis=1))
    radii = np.asarray(radii[:size])
    res = stats.kstest(radii, lambda t: 1.0 - (r_in / np.maximum(t, r_in)) ** gamma)
    return TestResult("ks_truncated_radius", float(res.statistic), float(res.pvalue), dict(d=d, gamma=gamma, r_in=r_in))


def projection_count_chisquare(d=3, k=1, gamma=1.0, c=1.0, radius=None, replicates=4000, seed=None):
    """Projected points of a certified sample, counted outside ``radius``.

    The projection onto a k-subspace of the d-dimensional process is the
    k-dimensional process with the same gamma and c, so the count outside
    ``radius`` is Poisson with mean ``c w_k / (gamma w_{k+gamma}) radius^-gamma``.
    Points within the truncation radius project inside it, so counts are
    exact whenever ``radius`` exceeds every truncation radius.
    """
    params = PoissonParams(d, gamma, c)
    target = PoissonParams(k, gamma, c)
    if radius is None:
        radius = float(target.radius_for_mass(3.0))
    base = master_seed(seed)
    counts = []
    for i in range(replicates):
        rng = make_rng(base, 6, i)
        sample, _ = sample_poisson_hull(params, rng)
        if sample.r_trunc > radius:
            raise AssertionError("truncation radius exceeds the counting radius")
        L = haar_subspace(d, k, rng)
        q = project_points(sample.points, L)
        counts.append(int(np.sum(np.linalg.norm(q, axis=1) > radius)))
    mean = c * omega(k) / (gamma * omega(k + gamma)) * radius ** (-gamma)
    return _poisson_count_test(counts, mean, "chi2_projection_count", dict(d=d, k=k, gamma=gamma, c=c, radius=radius))


def non_absorption_binomial(r, gamma, c=1.0, replicates=4000, seed=None):
    """Frequency of ``r`` outside the hull of the 1-d process against the closed form."""
    params = PoissonParams(1, gamma, c)
    base = master_seed(seed)
    outside = 0
    for i in range(replicates):
        _, h = sample_poisson_hull(params, make_rng(base, 7, int(round(1000 * gamma)), i))
        outside += bool(h.vertices.max() < r)
    p = non_absorption_1d(r, gamma, c)
    res = stats.binomtest(outside, replicates, p)
    return TestResult(
        "binom_non_absorption",
        outside / replicates,
        float(res.pvalue),
        dict(r=r, gamma=gamma, c=c, exact=p),
    )


def sampler_battery(replicates=None, seed=None):
    """All distribution checks at default sizes (``replicates`` scales the Poisson ones)."""
    rep = replicates or 4000
    out = [
        halfsphere_first_coordinate_ks(2, seed=seed),
        cauchy_1d_ks(seed=seed),
        cauchy_angle_chisquare(seed=seed),
        annulus_count_chisquare(seed=seed, replicates=max(rep, 10_000)),
        truncated_radius_ks(seed=seed),
    ]
    for k in (1, 2):
        out.append(projection_count_chisquare(d=3, k=k, replicates=rep, seed=seed))
    for gamma in (1.0, 2.0):
        for r in (0.5, 1.0, 2.0):
            out.append(non_absorption_binomial(r, gamma, replicates=rep, seed=seed))
    return out
