import json
from fractions import Fraction
import pathlib

import jsonschema
import pytest

import roughiso

SCHEMAS = pathlib.Path(__file__).resolve().parents[2] / "schemas"
TINY = {"A": [0, 1, 2, 4], "B": [0, 1, 3, 4], "constants": {"M": "2", "D": "0", "R": "1"}}


def schema(name):
    return json.loads((SCHEMAS / f"{name}.v1.json").read_text())


def check(doc, name):
    jsonschema.validate(doc, schema(name))


def test_construct_then_verify_markov():
    doc, ok = roughiso.construct(512, seed=7)
    assert ok and doc["success"]
    check(doc, "construct_result")
    verdict, vok = roughiso.verify("markov", doc)
    assert vok and verdict["ok"]
    check(verdict, "verdict")


def test_construct_is_deterministic():
    a, _ = roughiso.construct(512, seed=11, include_mapping=False)
    b, _ = roughiso.construct(512, seed=11, include_mapping=False)
    assert a == b


def test_verify_reports_violation():
    inst = {"A": [0, 1, 2], "B": [0, 1, 2], "image": [0, 2, 1]}
    verdict, ok = roughiso.verify("increasing", inst)
    assert not ok
    assert verdict["violation"]["kind"] == "NotMonotone"
    check(verdict, "verdict")


def test_oracle_documents():
    doc, ok = roughiso.oracle("minimal-M", instance=TINY, family="increasing")
    assert ok and doc["M"] == "2"
    check(doc, "oracle_result")
    doc, _ = roughiso.oracle("enumerate-increasing", instance=TINY)
    assert doc["count"] == len(doc["images"]) == 1
    check(doc, "oracle_result")
    doc, ok = roughiso.oracle("counterexample", L=2)
    assert ok
    assert doc["increasing_min_M"] is None or Fraction(doc["increasing_min_M"]) >= 2
    check(doc, "oracle_result")


def test_lattice_document():
    doc, ok = roughiso.lattice({"A": [0, 1, 2, 3], "B": [0, 1, 2, 3, 4]},
                               constants={"M": "2", "D": "1", "R": "1"}, fkg=True)
    assert ok and doc["closed"] and doc["distributive"] and doc["fkg_ok"]
    assert doc["size"] == len(doc["elements"]) >= 1
    check(doc, "lattice")


@pytest.mark.parametrize("process,params,name", [
    ("bernoulli", {"n": 16}, "point_set"),
    ("red", {"M": 3, "K": 2}, "point_set"),
    ("blue", {"L": 5, "M": 3}, "point_set"),
    ("initial-short", {"L": 4, "M": 3, "n": 20}, "point_set"),
    ("poisson", {"horizon": "8"}, "real_point_set"),
    ("dominance", {"M": 3, "count": 5}, "sample"),
    ("poisson-coupling", {"horizon": "16"}, "sample"),
    ("rescale", {"horizon": "8", "gamma": "3/2"}, "sample"),
])
def test_sample_documents(process, params, name):
    doc, ok = roughiso.sample(process, seed=5, **params)
    assert ok
    check(doc, name)
    if "verdict" in doc:
        assert doc["verdict"]["ok"]


def test_decompose_document():
    pts, _ = roughiso.sample("bernoulli", seed=2, n=400)
    doc, ok = roughiso.decompose(pts["points"], M=3, K=2)
    assert ok
    check(doc, "decomposition")


def test_experiment_lines_and_job_independence():
    spec = {"name": "dominance", "trials": 2000, "seed": 4, "jobs": 1}
    check(spec, "experiment_spec")
    lines, ok = roughiso.experiment(spec)
    for line in lines:
        check(line, "report_line")
    lines2, _ = roughiso.experiment({**spec, "jobs": 3})
    assert lines == lines2


def test_errors_carry_kind():
    with pytest.raises(roughiso.RoughisoError) as info:
        roughiso.verify("markov", {"A": [0, 1], "B": [0, 2], "image": [0, 5]},
                        constants={"M": "1", "F": "0"})
    assert info.value.args[0] == "ImageNotInCodomain"
