import json

import numpy as np
import pytest

from conehull import serialize
from conehull.errors import SchemaError
from conehull.rng import make_rng
from conehull.samplers import PoissonParams, sample_cone, sample_poisson_hull


def test_hull_round_trip():
    _, h = sample_poisson_hull(PoissonParams(3, 2.0, 1.0), make_rng(0))
    back = serialize.loads(serialize.dumps(h))
    for name in ("vertices", "normals", "offsets", "facet_vertices"):
        np.testing.assert_array_equal(getattr(back, name), getattr(h, name))
    assert back.dim == 3


def test_samples_round_trip():
    s, _ = sample_poisson_hull(PoissonParams(2, 1.0, 2.0), make_rng(1))
    back = serialize.from_dict(json.loads(json.dumps(serialize.to_dict(s))))
    assert back.params == s.params
    assert back.r_trunc == s.r_trunc
    np.testing.assert_array_equal(back.points, s.points)
    c = sample_cone(2, 8, make_rng(2))
    back = serialize.loads(serialize.dumps(c))
    np.testing.assert_array_equal(back.gnomonic_points, c.gnomonic_points)
    assert (back.d, back.n) == (2, 8)


def test_schema_is_checked():
    _, h = sample_poisson_hull(PoissonParams(2, 2.0, 1.0), make_rng(0))
    doc = serialize.to_dict(h)
    doc["version"] = 99
    with pytest.raises(SchemaError):
        serialize.from_dict(doc)
    with pytest.raises(SchemaError):
        serialize.from_dict({"schema": "other"})
    with pytest.raises(TypeError):
        serialize.to_dict(object())
