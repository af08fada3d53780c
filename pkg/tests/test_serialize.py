"""Round-trips for every payload type: parse(serialize(x)) == x."""

import json

import pytest

from ellchain import serialize
from ellchain.chain import canonical_series, redistribute, validate_lls
from ellchain.elliptic import Degree0Class, IndecomposableSlot, LineBundleClass
from ellchain.pipelines import onto_certificate, petri_certificate


@pytest.mark.parametrize("g", [2, 3, 6])
def test_series_round_trip(g):
    s = canonical_series(g)
    assert serialize.loads(serialize.dumps(s)) == s


def test_series_with_twists_round_trip():
    from ellchain.pipelines import petri_build, petri_params

    build = petri_build(petri_params(5, 2, 7, 3))
    for series in (build.primary, build.dual):
        assert serialize.loads(serialize.dumps(series)) == series


def test_validation_round_trip():
    report = validate_lls(canonical_series(4))
    assert serialize.loads(serialize.dumps(report)) == report


def test_redistribution_round_trip():
    s = canonical_series(5)
    r = redistribute(s, (4, 0, 0, 2, 2))
    assert serialize.loads(serialize.dumps(r)) == r


def test_verdict_and_certificate_round_trip():
    for v in (petri_certificate(5, 2, 7, 3), onto_certificate(4, 2, 5)):
        assert serialize.loads(serialize.dumps(v)) == v
        assert serialize.loads(serialize.dumps(v.certificate)) == v.certificate


def test_deterministic_encoding():
    a = serialize.dumps(petri_certificate(4, 2, 6, 2, seed=5))
    b = serialize.dumps(petri_certificate(4, 2, 6, 2, seed=5))
    assert a == b


def test_schema_version_enforced():
    payload = serialize.to_payload(canonical_series(2))
    payload["schema"] = 99
    with pytest.raises(serialize.SchemaError):
        serialize.from_payload(payload)


def test_slots_and_classes_survive():
    twist = Degree0Class.of_pq(1) + Degree0Class.of_torsion("eta", 3, 2)
    payload = serialize._slot(LineBundleClass(2, 1, twist))
    assert serialize._load_slot(payload) == LineBundleClass(2, 1, twist)
    atom = IndecomposableSlot(3, 2, Degree0Class.of_generic("x", -2))
    assert serialize._load_slot(serialize._slot(atom)) == atom


def test_payloads_are_plain_json():
    text = serialize.dumps(petri_certificate(5, 2, 7, 3))
    json.loads(text)  # no custom types leak through
