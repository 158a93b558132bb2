from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from irtdg import (
    UNREACHABLE,
    Assignment,
    BoundedTable,
    Exponential,
    Instance,
    Reciprocal,
    Table,
    Topology,
    agent_utility,
    enmity_structure,
    eval_dff,
    is_individually_rational,
    shortest_distances,
    validate_instance,
)
from irtdg.errors import DistanceOutOfRange, InvalidAssignment, NotAPath
from irtdg.model import GENERAL, NO_ARCS, SINGLE_SINK, SINGLE_SOURCE
from irtdg.reductions import IndependentSet, UnaryBinPacking, gen_independent_set, gen_unary_bin_packing


def zeros(n):
    return [[0] * n for _ in range(n)]


# --- topology and distances ------------------------------------------------


def test_path_distances():
    d = shortest_distances(Topology.path(3))
    assert d[0][2] == 2 and d[0][1] == 1 and d[1][1] == 0


def test_isolated_vertices_unreachable():
    assert shortest_distances(Topology(2))[0][1] is UNREACHABLE


def test_clique_distances():
    d = shortest_distances(Topology.complete(5))
    assert all(d[u][v] == 1 for u in range(5) for v in range(5) if u != v)


@pytest.mark.parametrize("edges", [[(0, 0)], [(0, 3)], [(0, 1), (1, 0)]])
def test_topology_rejects_bad_edges(edges):
    with pytest.raises(ValueError):
        Topology(3, edges)


def test_path_order_walks_from_lower_endpoint():
    topo = Topology(5, [(3, 1), (1, 4), (4, 0), (0, 2)])
    assert topo.is_path()
    assert topo.path_order() == (2, 0, 4, 1, 3)


@pytest.mark.parametrize("topo, expected", [
    (Topology(1), True),
    (Topology(2, [(0, 1)]), True),
    (Topology(2), False),
    (Topology.complete(3), False),
    (Topology(4, [(0, 1), (0, 2), (0, 3)]), False),
    (Topology(4, [(0, 1), (2, 3)]), False),
])
def test_is_path(topo, expected):
    assert topo.is_path() is expected


def test_path_order_rejects_non_path():
    with pytest.raises(NotAPath):
        Topology.complete(3).path_order()


def test_components_and_diameters():
    topo = Topology.disjoint_union([Topology.path(4), Topology(1), Topology.complete(3)])
    assert topo.components == ((0, 1, 2, 3), (4,), (5, 6, 7))
    assert topo.component_diameters() == [3, 0, 1]


edge_lists = st.integers(1, 8).flatmap(
    lambda n: st.tuples(
        st.just(n),
        st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda e: e[0] < e[1])),
    )
)


@settings(max_examples=200)
@given(edge_lists)
def test_distance_matrix_properties(data):
    n, edges = data
    d = shortest_distances(Topology(n, edges))
    for u in range(n):
        assert d[u][u] == 0
        for v in range(n):
            assert d[u][v] == d[v][u]
            assert (d[u][v] == 1) == ((min(u, v), max(u, v)) in edges)
            for w in range(n):
                if None not in (d[u][v], d[v][w], d[u][w]):
                    assert d[u][w] <= d[u][v] + d[v][w]
                if d[u][v] is not None and d[v][w] is not None:
                    assert d[u][w] is not None


# --- distance factors ------------------------------------------------------


def test_reciprocal():
    assert eval_dff(Reciprocal(), 2) == F(1, 2)


@pytest.mark.parametrize("dff", [Reciprocal(), Exponential(F(1, 3)), Table([3, 2, 1]), BoundedTable([1, F(1, 2)], 2)])
def test_unreachable_is_zero(dff):
    assert eval_dff(dff, UNREACHABLE) == 0


def test_bounded_past_cutoff_is_zero():
    f = BoundedTable([1, F(1, 2)], 2)
    assert f(2) == F(1, 2)
    assert f(3) == 0


def test_exponential():
    assert Exponential(F(1, 2))(3) == F(1, 8)


def test_table_past_end_is_an_error():
    with pytest.raises(DistanceOutOfRange):
        Table([3, 2])(3)


def test_zero_distance_rejected():
    with pytest.raises(ValueError):
        Reciprocal()(0)


def test_floats_rejected():
    with pytest.raises(TypeError):
        Table([0.5])


# --- utilities and IR ------------------------------------------------------


def test_single_agent_utility_is_zero():
    inst = Instance(Topology.path(3), ["a"], [[0]])
    assert agent_utility(inst, Assignment([2]), 0, inst.distances) == 0


def test_direct_substitution_on_path():
    inst = Instance(Topology.path(3), ["a", "b"], [[0, 2], [0, 0]], Reciprocal())
    assert agent_utility(inst, Assignment([0, 2]), 0, inst.distances) == 1


def test_bin_packing_units_score_zero_in_a_shared_clique():
    # item s=2 with capacity 4: its two units plus two units of another item of size 2
    gen = gen_unary_bin_packing(UnaryBinPacking((2, 2, 2, 2), 2, 4), Table([1]))
    inst = gen.instance
    a = Assignment([0, 1, 2, 3, 4, 5, 6, 7])
    for agent in range(8):
        assert agent_utility(inst, a, agent, inst.distances) == 0


def test_all_zero_matrix_is_ir():
    inst = Instance(Topology.path(4), ["a", "b", "c"], zeros(3))
    report = is_individually_rational(inst, Assignment([3, 0, 1]))
    assert report.individually_rational
    assert report.utilities == (0, 0, 0)


def test_forced_enemies_on_k2():
    inst = Instance(Topology.complete(2), ["a", "b"], [[0, -1], [-1, 0]], Reciprocal())
    ok, utils = is_individually_rational(inst, Assignment([0, 1]))
    assert not ok
    assert utils == (-1, -1)


def test_independent_set_certificate_scores():
    # standard agents: -(k-1) f(2) beta + f(1) (k-1) f(2) beta / f(1) = -1/2 + 1/2
    gen = gen_independent_set(IndependentSet(Topology.path(3), 2), 1, Reciprocal())
    report = is_individually_rational(gen.instance, Assignment([0, 2, 3]))
    assert report.individually_rational
    assert report.utilities == (0, 0, 1)


@pytest.mark.parametrize("placement", [[0, 0], [0, 5], [0]])
def test_bad_assignments_raise(placement):
    inst = Instance(Topology.path(3), ["a", "b"], zeros(2))
    with pytest.raises(InvalidAssignment):
        is_individually_rational(inst, Assignment(placement))


# --- enmity structure ------------------------------------------------------


def test_no_arcs():
    s = enmity_structure(Instance(Topology.path(3), ["a", "b", "c"], zeros(3)))
    assert s.kind == NO_ARCS and s.arc_count == 0


def test_single_source():
    u = zeros(3)
    u[0][1] = u[0][2] = -1
    s = enmity_structure(Instance(Topology.path(3), ["p", "x", "y"], u))
    assert (s.kind, s.center, s.arc_count) == (SINGLE_SOURCE, 0, 2)


def test_single_sink():
    u = zeros(3)
    u[1][0] = u[2][0] = -1
    s = enmity_structure(Instance(Topology.path(3), ["p", "x", "y"], u))
    assert (s.kind, s.center) == (SINGLE_SINK, 0)


def test_one_arc_reports_source():
    u = zeros(2)
    u[1][0] = -1
    s = enmity_structure(Instance(Topology.path(2), ["a", "b"], u))
    assert (s.kind, s.center) == (SINGLE_SOURCE, 1)


def test_general():
    u = zeros(3)
    u[0][1] = u[1][2] = -1
    assert enmity_structure(Instance(Topology.path(3), ["a", "b", "c"], u)).kind == GENERAL


# --- validation ------------------------------------------------------------


def messages(inst):
    return {v.message for v in validate_instance(inst)}


def test_diagonal_nonzero():
    inst = Instance(Topology.path(2), ["a"], [[1]])
    assert "diagonal nonzero" in messages(inst)


def test_too_few_vertices():
    inst = Instance(Topology.path(2), ["a", "b", "c"], zeros(3))
    assert any(m.startswith("fewer vertices than agents") for m in messages(inst))


def test_table_not_strictly_decreasing():
    inst = Instance(Topology.path(2), ["a"], [[0]], Table([1, 1]))
    assert "not strictly decreasing" in messages(inst)


def test_table_must_cover_component_diameters():
    inst = Instance(Topology.disjoint_union([Topology.path(4), Topology.path(2)]), ["a"], [[0]], Table([3, 2]))
    assert any("shorter than topology diameter" in m for m in messages(inst))
    ok = Instance(inst.topology, ["a"], [[0]], Table([3, 2, 1]))
    assert validate_instance(ok) == []


def test_exponential_base_range():
    assert messages(Instance(Topology(1), ["a"], [[0]], Exponential(F(3, 2))))


def test_bounded_needs_cutoff_values():
    assert messages(Instance(Topology(1), ["a"], [[0]], BoundedTable([1], 2)))


def test_violation_paths_are_json_paths():
    inst = Instance(Topology.path(2), ["a", "b"], [[0, 1], [0, 3]], Table([1, 1]))
    paths = {v.path for v in validate_instance(inst)}
    assert "$.utilities[1][1]" in paths and "$.dff.values" in paths


@settings(max_examples=200)
@given(st.lists(st.fractions(min_value=F(1, 100), max_value=100), min_size=1, max_size=6))
def test_table_validation_matches_strict_decrease(values):
    decreasing = all(a > b for a, b in zip(values, values[1:]))
    inst = Instance(Topology(1), ["a"], [[0]], Table(values))
    assert ("not strictly decreasing" not in messages(inst)) == decreasing
