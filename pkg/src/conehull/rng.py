"""Seeding: counter-based Philox streams keyed by (master seed, replicate).

Replicate ``i`` of an experiment always draws from the stream derived from
``(master_seed, i)``, so results do not depend on how replicates are
scheduled across workers.
"""

import os

import numpy as np

ENV_SEED = "CONEHULL_SEED"
DEFAULT_SEED = 20190101


def master_seed(seed=None):
    """Resolve the master seed: explicit value, then $CONEHULL_SEED, then default."""
    if seed is not None:
        return int(seed)
    env = os.environ.get(ENV_SEED)
    if env:
        return int(env, 0)
    return DEFAULT_SEED


def make_rng(seed, *stream):
    """Philox generator for ``seed`` split along the integer path ``stream``."""
    ss = np.random.SeedSequence(entropy=int(seed) & (2**64 - 1), spawn_key=tuple(int(s) for s in stream))
    return np.random.Generator(np.random.Philox(ss))


def replicate_rng(seed, index):
    return make_rng(seed, index)


def as_rng(rng):
    """Accept a Generator, an int seed or None."""
    if isinstance(rng, np.random.Generator):
        return rng
    return make_rng(master_seed(rng))
