import json
from fractions import Fraction

import jsonschema
import pytest
from hypothesis import given
from hypothesis import strategies as st

from crford.certificate import BUNDLE_SCHEMA, Certificate, CertificateBundle, Status, combine_status, to_jsonable

statuses = st.sampled_from(list(Status))


def test_exact_json_encoding():
    assert to_jsonable(Fraction(-1, 2)) == "-1/2"
    assert to_jsonable({"k": (1, Fraction(3))}) == {"k": [1, "3"]}


@given(st.lists(statuses, min_size=1, max_size=8))
def test_overall_status(sts):
    combined = combine_status(sts)
    if all(s == Status.PASS for s in sts):
        assert combined == Status.PASS
    elif Status.FAIL in sts:
        assert combined == Status.FAIL
    else:
        assert combined == Status.UNDECIDED


def test_bundle_validates_and_is_deterministic():
    b = CertificateBundle(config={"command": "x"})
    b.add(Certificate("claim", {"a": 1}, Status.PASS, {"w": Fraction(1, 3)}))
    b.add(Certificate("other", {}, Status.UNDECIDED))
    data = json.loads(b.dumps())
    jsonschema.validate(data, BUNDLE_SCHEMA)
    assert data["status"] == "undecided"
    assert b.dumps() == b.dumps()


def test_bad_status_rejected():
    c = Certificate("claim", {}, "maybe")
    with pytest.raises(ValueError):
        c.to_json()
