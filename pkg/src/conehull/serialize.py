"""Versioned JSON documents for hulls and samples.

Floats are written with ``repr`` precision, so a round trip is exact.
"""

import json

import numpy as np

from .errors import SchemaError
from .geometry import Hull
from .samplers import ConeSample, PoissonParams, PoissonSample

SCHEMA_VERSION = 1


def _header(kind):
    return {"schema": f"conehull.{kind}", "version": SCHEMA_VERSION}


def _check(doc, kind):
    if doc.get("schema") != f"conehull.{kind}":
        raise SchemaError(f"expected schema conehull.{kind}, got {doc.get('schema')!r}")
    if doc.get("version") != SCHEMA_VERSION:
        raise SchemaError(f"unsupported version {doc.get('version')!r}")


def hull_to_dict(h):
    doc = _header("hull")
    doc.update(
        dim=int(h.dim),
        vertices=h.vertices.tolist(),
        facets=h.facet_vertices.tolist(),
        normals=h.normals.tolist(),
        offsets=h.offsets.tolist(),
    )
    return doc


def hull_from_dict(doc):
    _check(doc, "hull")
    d = int(doc["dim"])
    return Hull(
        d,
        np.asarray(doc["vertices"], dtype=float).reshape(-1, d),
        np.asarray(doc["normals"], dtype=float).reshape(-1, d),
        np.asarray(doc["offsets"], dtype=float),
        np.asarray(doc["facets"], dtype=int).reshape(-1, d),
    )


def poisson_sample_to_dict(s):
    doc = _header("poisson_sample")
    p = s.params
    doc.update(
        params={"d": int(p.d), "gamma": float(p.gamma), "c": float(p.c)},
        points=np.asarray(s.points).tolist(),
        r_trunc=float(s.r_trunc),
        certified=bool(s.certified),
    )
    return doc


def poisson_sample_from_dict(doc):
    _check(doc, "poisson_sample")
    p = PoissonParams(**doc["params"])
    pts = np.asarray(doc["points"], dtype=float).reshape(-1, p.d)
    return PoissonSample(p, pts, float(doc["r_trunc"]), bool(doc["certified"]))


def cone_sample_to_dict(s):
    doc = _header("cone_sample")
    doc.update(
        d=int(s.d),
        n=int(s.n),
        halfsphere_points=np.asarray(s.halfsphere_points).tolist(),
        gnomonic_points=np.asarray(s.gnomonic_points).tolist(),
    )
    return doc


def cone_sample_from_dict(doc):
    _check(doc, "cone_sample")
    d = int(doc["d"])
    return ConeSample(
        d,
        int(doc["n"]),
        np.asarray(doc["halfsphere_points"], dtype=float).reshape(-1, d + 1),
        np.asarray(doc["gnomonic_points"], dtype=float).reshape(-1, d),
    )


_WRITERS = {Hull: hull_to_dict, PoissonSample: poisson_sample_to_dict, ConeSample: cone_sample_to_dict}
_READERS = {
    "conehull.hull": hull_from_dict,
    "conehull.poisson_sample": poisson_sample_from_dict,
    "conehull.cone_sample": cone_sample_from_dict,
}


def to_dict(obj):
    try:
        return _WRITERS[type(obj)](obj)
    except KeyError:
        raise TypeError(f"cannot serialize {type(obj).__name__}") from None


def from_dict(doc):
    try:
        reader = _READERS[doc.get("schema")]
    except KeyError:
        raise SchemaError(f"unknown schema {doc.get('schema')!r}") from None
    return reader(doc)


def dumps(obj, **kw):
    return json.dumps(to_dict(obj), **kw)


def loads(text):
    return from_dict(json.loads(text))
