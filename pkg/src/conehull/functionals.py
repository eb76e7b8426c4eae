"""Monte Carlo estimators over random Poisson hulls and random cones.

Every estimator runs independent replicates; replicate ``i`` draws from
``replicate_rng(seed, i)`` and the per-replicate values are reduced in index
order, so the result is the same for any number of workers.
"""

from concurrent.futures import ProcessPoolExecutor
from functools import partial

import numpy as np

from .closed_forms import intrinsic_prefactor, omega, t_finite
from .errors import InvalidParams, WeightOverflow
from .estimate import Estimate
from .geometry import (
    batch_affine_intersects,
    convex_hull,
    f_vector,
    haar_subspace,
    hull_volume,
    project_points,
    t_functional,
    uniform_directions,
)
from .rng import master_seed, replicate_rng
from .samplers import (
    PoissonParams,
    sample_cauchy_type,
    sample_cone,
    sample_poisson_hull,
    sample_symmetric_hull,
)

HEAVY_TAIL = "heavy-tail"


class _Replicate:
    """Picklable ``i -> task(replicate_rng(seed, i))``."""

    def __init__(self, task, seed):
        self.task = task
        self.seed = seed

    def __call__(self, i):
        return np.atleast_1d(np.asarray(self.task(replicate_rng(self.seed, i)), dtype=float))


def run_replicates(task, replicates, seed=None, workers=1):
    """Evaluate ``task(rng)`` for each replicate and stack the results.

    Returns an array of shape ``(replicates, k)`` in replicate order.
    """
    seed = master_seed(seed)
    job = _Replicate(task, seed)
    if workers is None or workers <= 1 or replicates < 2:
        rows = [job(i) for i in range(replicates)]
    else:
        chunk = max(1, replicates // (8 * workers))
        with ProcessPoolExecutor(max_workers=workers) as ex:
            rows = list(ex.map(job, range(replicates), chunksize=chunk))
    return np.vstack(rows)


def _columns(values, seed, ids, flags=()):
    seed = master_seed(seed)
    return [Estimate.from_samples(values[:, i], seed, ids[i]).with_flags(*flags) for i in range(values.shape[1])]


def _f_task(params, rng):
    _, h = sample_poisson_hull(params, rng)
    return f_vector(h)


def estimate_f_vector_poisson(params, replicates=1000, seed=None, workers=1):
    """Mean f-vector ``(f_0, ..., f_{d-1})`` of the Poisson hull."""
    vals = run_replicates(partial(_f_task, params), replicates, seed, workers)
    return _columns(vals, seed, [f"f_{i}" for i in range(params.d)])


def _t_task(params, a, b, symmetric, rng):
    h = sample_symmetric_hull(params, rng) if symmetric else sample_poisson_hull(params, rng)[1]
    return t_functional(h, a, b)


def second_moment_flag(d, gamma, a, b):
    """True when doubling (a, b) breaks the finiteness conditions."""
    return not t_finite(d, gamma, 2 * a, 2 * b)


def estimate_T(params, a, b, replicates=1000, seed=None, workers=1, symmetric=False):
    """Mean ``T_{a,b}`` of the (symmetric) Poisson hull.

    The estimate carries the ``heavy-tail`` flag when the doubled exponents
    violate the finiteness conditions, a sign that the variance may be
    infinite and the standard error unreliable.
    """
    vals = run_replicates(partial(_t_task, params, a, b, symmetric), replicates, seed, workers)
    tid = "sym_T" if symmetric else "T"
    flags = (HEAVY_TAIL,) if second_moment_flag(params.d, params.gamma, a, b) else ()
    return _columns(vals, seed, [f"{tid}_{a}_{b}"], flags)[0]


def _volume_task(params, rng):
    return hull_volume(sample_poisson_hull(params, rng)[1])


def estimate_volume(params, replicates=1000, seed=None, workers=1):
    vals = run_replicates(partial(_volume_task, params), replicates, seed, workers)
    flags = (HEAVY_TAIL,) if second_moment_flag(params.d, params.gamma, 1, 1) else ()
    return _columns(vals, seed, ["volume"], flags)[0]


def _projected_volume(h, k, rng):
    L = haar_subspace(h.dim, k, rng)
    q = project_points(h.vertices, L)
    if k == 1:
        return float(q.max() - q.min())
    return hull_volume(convex_hull(q))


def _intrinsic_task(params, k, dirs, rng):
    _, h = sample_poisson_hull(params, rng)
    if k == params.d:
        return hull_volume(h)
    return intrinsic_prefactor(params.d, k) * np.mean([_projected_volume(h, k, rng) for _ in range(dirs)])


def estimate_intrinsic_volume(params, k, dirs=8, replicates=1000, seed=None, workers=1):
    """Mean ``V_k`` via volumes of projections onto fresh Haar k-subspaces.

    For ``k = d`` the prefactor is 1 and the projection is the identity, so
    this is the volume estimator replicate by replicate.
    """
    if int(k) != k or not 1 <= k <= params.d:
        raise InvalidParams("need 1 <= k <= d")
    vals = run_replicates(partial(_intrinsic_task, params, int(k), dirs), replicates, seed, workers)
    flags = (HEAVY_TAIL,) if second_moment_flag(int(k), params.gamma, 1, 1) else ()
    return _columns(vals, seed, [f"V_{k}"], flags)[0]


def _B_cauchy(h, k, d, inner, rng):
    X = sample_cauchy_type(d, rng, inner * k).reshape(inner, k, d)
    miss = ~batch_affine_intersects(X, h)
    if not np.any(miss):
        return 0.0
    r2 = np.sum(X[miss] ** 2, axis=2)
    if np.min(r2) < 1e-12:
        raise WeightOverflow("importance weight blew up: a missing point sits at the origin")
    # weight |x|^-(d+1) / q(x) with q the Cauchy-type density, up to the constants
    # (w_{d+1}/2)^k that cancel against the prefactor (1/2)(2/w_{d+1})^k
    logw = 0.5 * (d + 1) * np.sum(np.log1p(r2) - np.log(r2), axis=1)
    return 0.5 * np.sum(np.exp(logw)) / inner


def _B_radial(h, k, d, inner, rng):
    # The ball of radius rho = min offset lies inside the hull, so the integrand
    # vanishes there.  Sampling |x|^-(d+1) restricted to |x| > rho (Pareto(1)
    # radius, uniform direction) makes every weight the constant (w_d / rho)^k.
    rho = float(h.offsets.min())
    if rho <= 0:
        raise WeightOverflow("hull does not contain the origin")
    n = inner * k
    radii = rho / (1.0 - rng.random(n))
    X = (radii[:, None] * uniform_directions(d, n, rng)).reshape(inner, k, d)
    miss = ~batch_affine_intersects(X, h)
    return 0.5 * (2.0 / omega(d + 1) * omega(d) / rho) ** k * np.mean(miss)


_B_PROPOSALS = {"radial": _B_radial, "cauchy": _B_cauchy}


def _B_task(k, d, inner, proposal, rng):
    _, h = sample_poisson_hull(PoissonParams(d, 1.0, 2.0), rng)
    return _B_PROPOSALS[proposal](h, k, d, inner, rng)


def estimate_B(k, d, outer=400, inner=2000, seed=None, workers=1, proposal="radial"):
    """Importance-sampling estimate of the limit constant ``B_{k,d}``.

    The outer loop draws the Poisson hull with ``gamma = 1, c = 2``; the
    inner loop draws k points and weights the event that their affine hull
    misses the polytope.

    Parameters
    ----------
    proposal : {"radial", "cauchy"}
        ``"cauchy"`` draws the inner points from the Cauchy-type law, whose
        weights grow like ``|x|^-(d+1)`` near small hulls and make the
        estimator heavy-tailed for ``k >= 2, d >= 3``.  ``"radial"`` draws
        them from ``|x|^-(d+1)`` outside the inscribed ball, with constant
        weights.
    """
    if int(k) != k or int(d) != d or not 1 <= k <= d:
        raise InvalidParams("need 1 <= k <= d")
    if proposal not in _B_PROPOSALS:
        raise InvalidParams(f"unknown proposal {proposal!r}")
    vals = run_replicates(partial(_B_task, int(k), int(d), int(inner), proposal), outer, seed, workers)
    return _columns(vals, seed, [f"B_{k}_{d}"])[0]


def _section_task(d, n, rng):
    return f_vector(sample_cone(d, n, rng).section_hull())


def estimate_cone_section_f_vector(d, n, replicates=1000, seed=None, workers=1):
    """Mean f-vector of the section of ``C_n``; entry ``i`` counts the cone's (i+1)-faces."""
    vals = run_replicates(partial(_section_task, d, n), replicates, seed, workers)
    return _columns(vals, seed, [f"section_f_{i}" for i in range(d)])


def estimate_cone_section_limit(d, n_grid, replicates=1000, seed=None, workers=1):
    """Section f-vectors along ``n_grid`` plus the Poisson-hull reference row.

    Returns a list of ``(label, [Estimate, ...])`` rows; the last row uses
    ``gamma = 1, c = 2``.  Each row draws from its own seed stream.
    """
    grid = list(n_grid)
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise InvalidParams("n_grid must be increasing")
    base = master_seed(seed)
    rows = []
    for i, n in enumerate(grid):
        rows.append((n, estimate_cone_section_f_vector(d, n, replicates, base + 1000 * (i + 1), workers)))
    rows.append(("poisson", estimate_f_vector_poisson(PoissonParams(d, 1.0, 2.0), replicates, base, workers)))
    return rows

