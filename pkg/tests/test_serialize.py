import json
from fractions import Fraction

import numpy as np
import pytest

from orthoposet import serialize as ser
from orthoposet.catalog import CRITICAL_NAMES, family_rep, remark5_weight
from orthoposet.exact import gauss
from orthoposet.stability import is_stable
from orthoposet.unitary import unitarize


@pytest.mark.parametrize("name", CRITICAL_NAMES)
def test_rep_roundtrip(name):
    r = family_rep(name, Fraction(-7, 3)).rep
    text = json.dumps(ser.rep_to_json(r))
    assert ser.rep_from_json(text) == r


def test_gaussian_rep_roundtrip():
    r = family_rep("(1,1,1,1)", gauss(Fraction(1, 2), -2)).rep
    doc = ser.rep_to_json(r)
    assert doc["spaces"]["d1"] == [["1", "1/2-2*i"]]
    assert ser.rep_from_json(doc) == r


@pytest.mark.parametrize("bad", [
    {"poset": {"elements": ["a"]}, "ambient_dim": 2, "spaces": {"a": [["1"]]}},
    {"poset": {"elements": ["a"]}, "ambient_dim": 2, "spaces": {"b": [["1", "0"]]}},
    {"poset": {"elements": ["a"]}, "ambient_dim": 2, "spaces": {"a": [[0.5, 1]]}},
    {"ambient_dim": 2, "spaces": {}},
])
def test_malformed_reps(bad):
    with pytest.raises(ser.FormatError):
        ser.rep_from_json(bad)


def test_stability_report_json():
    doc = ser.stability_to_json(is_stable(family_rep("(2,2,2)", 2).rep, remark5_weight("(2,2,2)")))
    assert doc["verdict"] == "Stable" and doc["slack"] == "1/3" and doc["witness"] is None
    json.dumps(doc)


def test_unitary_roundtrip():
    u = unitarize(family_rep("(1,3,3)", 2).rep, remark5_weight("(1,3,3)")).unitary
    doc = json.loads(json.dumps(ser.unitary_to_json(u, tol=1e-10)))
    back = ser.unitary_from_json(doc)
    for a in u.poset.elements:
        assert np.allclose(back.projections[a], u.projections[a], atol=0)
    assert back.residual == pytest.approx(u.residual, abs=1e-15)


def test_complex_matrices_as_pairs():
    m = np.array([[1 + 2j, 0], [0, 1]])
    doc = ser.float_matrix_to_json(m)
    assert doc[0][0] == [1.0, 2.0]
    assert np.array_equal(ser.float_matrix_from_json(doc), m)
