import json
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import random_instance
from irtdg import BoundedTable, Exponential, Instance, Table, Topology, enmity_structure
from irtdg.errors import DocumentError, InvalidAssignment, InvalidInstance
from irtdg.model import SINGLE_SOURCE
from irtdg.reductions import IndependentSet, ThreePartition, UnaryBinPacking, gen_independent_set
from irtdg.serialization import (
    parse_assignment,
    parse_dff_spec,
    parse_instance,
    parse_rational,
    parse_source,
    serialize_generated,
    serialize_instance,
    source_to_doc,
)

MINIMAL = {"vertices": 1, "edges": [], "agents": ["a"], "utilities": [[0]], "dff": {"kind": "reciprocal"}}


def doc(**changes):
    return json.dumps({**MINIMAL, **changes})


def two_agents():
    return Instance(Topology.path(2), ["a", "b"], [[0, 1], [1, 0]])


def test_minimal_document():
    inst = parse_instance(doc())
    assert inst.agents == ("a",) and inst.topology.n == 1


def test_unicode_minus_and_single_source():
    text = doc(vertices=2, edges=[[0, 1]], agents=["a", "b"], utilities=[[0, "1/2"], ["−1", 0]])
    inst = parse_instance(text)
    assert inst.utilities[1][0] == -1 and inst.utilities[0][1] == F(1, 2)
    s = enmity_structure(inst)
    assert (s.kind, s.center) == (SINGLE_SOURCE, 1)


def test_table_violation_reported_with_path():
    with pytest.raises(InvalidInstance) as info:
        parse_instance(doc(dff={"kind": "table", "values": ["1", "1"]}))
    assert any(v.message == "not strictly decreasing" and v.path == "$.dff.values" for v in info.value.violations)


def test_non_canonical_rational_accepted():
    assert parse_rational("4/2") == 2
    assert parse_rational("-6/4") == F(-3, 2)
    assert parse_rational(7) == 7


@pytest.mark.parametrize("bad", ["1/0", 0.5, "0.5", "1e3", True, "1/-2", "", None])
def test_bad_rationals_rejected(bad):
    with pytest.raises(DocumentError):
        parse_rational(bad)


def test_unknown_dff_kind():
    with pytest.raises(DocumentError) as info:
        parse_instance(doc(dff={"kind": "gaussian"}))
    assert info.value.path == "$.dff.kind"


def test_malformed_json():
    with pytest.raises(DocumentError):
        parse_instance("{not json")


def test_utility_error_location():
    with pytest.raises(DocumentError) as info:
        parse_instance(doc(utilities=[["x"]]))
    assert info.value.path == "$.utilities[0][0]"


@pytest.mark.parametrize("text", [
    doc(),
    doc(vertices=2, edges=[[0, 1]], agents=["a", "b"], utilities=[[0, "1/2"], ["-1", 0]]),
    doc(vertices=3, edges=[[1, 2]], dff={"kind": "table", "values": ["3", "2", "1/2"]}),
])
def test_round_trip_examples(text):
    inst = parse_instance(text)
    out = serialize_instance(inst)
    assert parse_instance(out) == inst
    assert serialize_instance(parse_instance(out)) == out


@pytest.mark.parametrize("dff", [Exponential(F(2, 5)), Table([3, 2, 1]), BoundedTable([2, 1], 1)])
def test_dff_round_trip(dff):
    inst = Instance(Topology.path(3), ["a"], [[0]], dff)
    assert parse_instance(serialize_instance(inst)).dff == dff


@settings(max_examples=200)
@given(st.integers(0, 2**32 - 1))
def test_round_trip_random(seed):
    inst = random_instance(random.Random(seed))
    assert parse_instance(serialize_instance(inst)) == inst


def test_serialization_is_sorted_and_string_valued():
    text = serialize_instance(Instance(Topology.path(2), ["b", "a"], [[0, F(1, 3)], [-2, 0]]))
    data = json.loads(text)
    assert list(data) == sorted(data)
    assert data["utilities"] == [["0", "1/3"], ["-2", "0"]]


@pytest.mark.parametrize("spec, expected", [
    ("reciprocal", None),
    ("exponential:1/2", Exponential(F(1, 2))),
    ("table:3,2,1", Table([3, 2, 1])),
    ("bounded:2:1,1/2", BoundedTable([1, F(1, 2)], 2)),
])
def test_dff_spec(spec, expected):
    got = parse_dff_spec(spec)
    assert expected is None or got == expected


def test_dff_spec_rejects_unknown():
    with pytest.raises(DocumentError):
        parse_dff_spec("linear:2")


# --- assignments -----------------------------------------------------------


def test_assignment_valid():
    assert parse_assignment('{"a": 0, "b": 1}', two_agents()).placement == (0, 1)


@pytest.mark.parametrize("text, needle", [
    ('{"a": 0, "b": 0}', "duplicate vertex"),
    ('{"a": 5, "b": 0}', "out of range"),
    ('{"a": 0, "z": 1}', "unknown agent"),
    ('{"a": 0}', "not placed"),
    ('{"a": 0, "b": "1"}', "must be an integer"),
])
def test_assignment_errors_name_the_agent(text, needle):
    with pytest.raises(InvalidAssignment) as info:
        parse_assignment(text, two_agents())
    assert needle in str(info.value)
    assert "'" in str(info.value)


# --- sources and generated documents ---------------------------------------


@pytest.mark.parametrize("src", [
    UnaryBinPacking((2, 2), 2, 2),
    ThreePartition((5, 5, 6, 6, 7, 7), 18),
    IndependentSet(Topology.path(3), 2),
])
def test_source_round_trip(src):
    assert parse_source(json.dumps(source_to_doc(src))) == src


def test_unknown_source_kind():
    with pytest.raises(DocumentError):
        parse_source('{"source": {"kind": "sat"}}')


def test_generated_document_embeds_instance():
    gen = gen_independent_set(IndependentSet(Topology.path(3), 2))
    data = json.loads(serialize_generated(gen))
    assert data["gadget"] == "independent-set"
    assert parse_instance(json.dumps(data["instance"])) == gen.instance
