"""Monotone rough isometries between Bernoulli percolations.

Thin wrappers over the C++ core. Every call takes plain Python values and
returns the decoded JSON document together with the domain outcome flag.
"""

import json

from . import _core
from ._core import RoughisoError

__all__ = [
    "RoughisoError",
    "sample",
    "decompose",
    "construct",
    "verify",
    "oracle",
    "lattice",
    "experiment",
]


def _call(fn, request, *args):
    text, ok = fn(json.dumps(request), *args)
    return json.loads(text), ok


def sample(process, seed=0, **params):
    """Draw from a point process or coupling; returns (document, ok)."""
    return _call(_core.sample, {"process": process, "seed": seed, **params})


def decompose(points, M, K):
    return _call(_core.decompose, {"points": list(points), "M": M, "K": K})


def construct(n, seed=0, include_mapping=True, **overrides):
    """Staged construction; overrides may set M, F, R, K or horizon."""
    return _call(_core.construct, {"n": n, "seed": seed, **overrides}, include_mapping)


def verify(kind, instance, constants=None):
    req = {"kind": kind, "instance": instance}
    if constants is not None:
        req["constants"] = constants
    return _call(_core.verify, req)


def oracle(op, **fields):
    return _call(_core.oracle, {"op": op, **fields})


def lattice(instance, constants=None, fkg=False):
    req = {"instance": instance, "fkg": fkg}
    if constants is not None:
        req["constants"] = constants
    return _call(_core.lattice, req)


def experiment(spec, include_wall_time=False):
    """Run an experiment spec; returns (list of report lines, pass)."""
    doc, ok = _call(_core.experiment, spec, include_wall_time)
    return [json.loads(line) for line in doc["ndjson"].splitlines()], ok
