"""Deciders for the existence of an individually rational assignment.

``solve_brute_force``
    Exhaustive branch and bound over injective placements (agents in index
    order, vertices in id order).  Returns the lexicographically smallest
    IR placement, so the witness never depends on pruning or worker count.
``solve_single_source``
    Polynomial algorithm when every negative utility belongs to one agent.
``solve_path_instar``
    ``(|N|-1)!`` enumeration when the topology is a path and every negative
    utility points at one agent.
``solve_auto``
    Dispatches to the cheapest applicable algorithm.
``solve_naive``
    Plain enumeration of all injective placements with exact rationals;
    the reference the pruned search is tested against.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

from .errors import InvalidInstance, StructureMismatch
from .model import (
    NO_ARCS,
    SINGLE_SINK,
    SINGLE_SOURCE,
    UNREACHABLE,
    Assignment,
    Instance,
    agent_utility,
    assignment_problems,
    check_instance,
    enmity_structure,
    is_individually_rational,
    validate_instance,
)

BRUTE_FORCE = "brute-force"
SINGLE_SOURCE_ALGO = "single-source"
PATH_INSTAR = "path-instar"
NO_ARCS_ALGO = "no-arcs"
NAIVE = "naive"


@dataclass(frozen=True)
class SolveResult:
    answer: bool
    witness: Optional[Assignment]
    algorithm: str
    nodes_explored: int = 0

    @property
    def answer_text(self) -> str:
        return "yes" if self.answer else "no"


# ---------------------------------------------------------------------------
# Branch and bound


def interchangeable_classes(instance: Instance) -> list[list[int]]:
    """Group agents that can swap places without changing anyone's utility.

    Agents ``a`` and ``b`` are interchangeable when their rows and columns
    agree outside the ``{a, b}`` entries and ``u[a][b] == u[b][a]``.
    """
    u = instance.utilities
    n = instance.n_agents

    def swappable(a, b):
        if u[a][b] != u[b][a]:
            return False
        for k in range(n):
            if k in (a, b):
                continue
            if u[a][k] != u[b][k] or u[k][a] != u[k][b]:
                return False
        return True

    classes: list[list[int]] = []
    for i in range(n):
        for cls in classes:
            if all(swappable(i, j) for j in cls):
                cls.append(i)
                break
        else:
            classes.append([i])
    return classes


@dataclass
class _Prepared:
    """Integer-scaled search data (picklable for worker processes).

    Each utility row is multiplied by the lcm of its denominators and the
    distance factor by the lcm of its denominators; both scalings are
    positive, so signs of all partial sums are exactly preserved.
    """

    n_agents: int
    n_vertices: int
    weights: list            # weights[i][j] scaled integer utility
    factor: list             # factor[a][b] scaled integer f(dist(a, b)), 0 if unreachable
    optimistic: list         # optimistic[i][k] = sum_{j >= k, j != i, w > 0} w * f(1)
    previous_twin: list      # previous agent of the same class, or -1


def _lcm_of_denominators(values) -> int:
    out = 1
    for v in values:
        out = math.lcm(out, v.denominator)
    return out


def _prepare(instance: Instance) -> _Prepared:
    n_agents = instance.n_agents
    n_vertices = instance.topology.n
    dist = instance.distances
    f = instance.dff
    finite = sorted({d for row in dist for d in row if d not in (UNREACHABLE, 0)})
    fvals = {d: f(d) for d in finite}
    f1 = f(1)
    fscale = _lcm_of_denominators(list(fvals.values()) + [f1])
    fint = {d: int(v * fscale) for d, v in fvals.items()}
    f1int = int(f1 * fscale)
    factor = [[0 if (d is UNREACHABLE or d == 0) else fint[d] for d in row] for row in dist]

    weights = []
    for row in instance.utilities:
        scale = _lcm_of_denominators(row)
        weights.append([int(x * scale) for x in row])

    optimistic = []
    for i in range(n_agents):
        suffix = [0] * (n_agents + 1)
        for k in range(n_agents - 1, -1, -1):
            w = weights[i][k]
            suffix[k] = suffix[k + 1] + (w * f1int if (k != i and w > 0) else 0)
        optimistic.append(suffix)

    previous_twin = [-1] * n_agents
    for cls in interchangeable_classes(instance):
        for a, b in zip(cls, cls[1:]):
            previous_twin[b] = a
    return _Prepared(n_agents, n_vertices, weights, factor, optimistic, previous_twin)


def _search_branch(prep: _Prepared, first_vertex: int) -> tuple[Optional[tuple], int]:
    """Depth-first search with agent 0 fixed on ``first_vertex``.

    Returns the first IR placement in lexicographic order (or ``None``)
    and the number of placements made.
    """
    n = prep.n_agents
    w, fac, opt, twin = prep.weights, prep.factor, prep.optimistic, prep.previous_twin
    place = [-1] * n
    used = [False] * prep.n_vertices
    partial = [0] * n
    nodes = 0

    def put(k, v):
        # returns the list of (agent, delta) applied so the caller can undo
        deltas = []
        own = 0
        fv = fac[v]
        wk = w[k]
        for j in range(k):
            pj = place[j]
            fd = fv[pj]
            if not fd:
                continue
            if wk[j]:
                own += wk[j] * fd
            wjk = w[j][k]
            if wjk:
                partial[j] += wjk * fd
                deltas.append((j, wjk * fd))
        partial[k] = own
        place[k] = v
        used[v] = True
        return deltas

    def undo(k, v, deltas):
        for j, d in deltas:
            partial[j] -= d
        partial[k] = 0
        place[k] = -1
        used[v] = False

    def feasible(k):
        nxt = k + 1
        for i in range(nxt):
            if partial[i] + opt[i][nxt] < 0:
                return False
        return True

    def rec(k):
        nonlocal nodes
        if k == n:
            return True
        lo = place[twin[k]] + 1 if twin[k] >= 0 else 0
        for v in range(lo, prep.n_vertices):
            if used[v]:
                continue
            nodes += 1
            deltas = put(k, v)
            if feasible(k) and rec(k + 1):
                return True
            undo(k, v, deltas)
        return False

    nodes += 1
    deltas = put(0, first_vertex)
    if feasible(0) and rec(1):
        return tuple(place), nodes
    undo(0, first_vertex, deltas)
    return None, nodes


def _search_branch_star(args):
    return _search_branch(*args)


def solve_brute_force(instance: Instance, threads: int = 1) -> SolveResult:
    """Exact exhaustive search with pruning and symmetry breaking.

    With ``threads > 1`` the branches for agent 0's vertex are searched in
    worker processes; branch results are combined in vertex order, so the
    witness and node count are the same as a sequential run.
    """
    check_instance(instance)
    if instance.n_agents == 0:
        return SolveResult(True, Assignment(()), BRUTE_FORCE, 0)
    prep = _prepare(instance)
    branches = range(prep.n_vertices)
    total = 0
    if threads and threads > 1 and prep.n_vertices > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_search_branch_star, [(prep, v) for v in branches]))
    else:
        results = (_search_branch(prep, v) for v in branches)
    for found, nodes in results:
        total += nodes
        if found is not None:
            witness = Assignment(found)
            assert is_individually_rational(instance, witness).individually_rational
            return SolveResult(True, witness, BRUTE_FORCE, total)
    return SolveResult(False, None, BRUTE_FORCE, total)


def solve_naive(instance: Instance) -> SolveResult:
    """Try every injective placement in lexicographic order, exact arithmetic, no pruning."""
    check_instance(instance)
    tried = 0
    for placement in itertools.permutations(range(instance.topology.n), instance.n_agents):
        tried += 1
        candidate = Assignment(placement)
        if is_individually_rational(instance, candidate).individually_rational:
            return SolveResult(True, candidate, NAIVE, tried)
    return SolveResult(False, None, NAIVE, tried)


# ---------------------------------------------------------------------------
# Single enemy source


def _require(condition, message):
    if not condition:
        raise StructureMismatch(message)


def solve_single_source(instance: Instance, p: int) -> SolveResult:
    """Every negative utility is held by agent ``p``; other agents are always IR.

    For each vertex ``v`` for ``p``: friends (``u[p][i] >= 0``) take the
    nearest free vertices, best friend first; enemies take the farthest
    ones (unreachable counts as farthest), worst enemy first.
    """
    check_instance(instance)
    arcs = enmity_structure(instance).arcs
    _require(0 <= p < instance.n_agents, f"agent {p} does not exist")
    _require(all(i == p for i, _ in arcs), f"some enmity arc does not leave agent {p}")

    row = instance.utilities[p]
    others = [i for i in range(instance.n_agents) if i != p]
    friends = sorted((i for i in others if row[i] >= 0), key=lambda i: (-row[i], i))
    enemies = sorted((i for i in others if row[i] < 0), key=lambda i: (row[i], i))
    dist = instance.distances
    n = instance.topology.n

    tried = 0
    for v in range(n):
        tried += 1
        far = n + 1
        ranked = sorted((u for u in range(n) if u != v),
                        key=lambda u: (far if dist[v][u] is UNREACHABLE else dist[v][u], u))
        placement = [-1] * instance.n_agents
        placement[p] = v
        for agent, vertex in zip(friends, ranked):
            placement[agent] = vertex
        for agent, vertex in zip(enemies, reversed(ranked)):
            placement[agent] = vertex
        candidate = Assignment(placement)
        if agent_utility(instance, candidate, p) >= 0:
            return SolveResult(True, candidate, SINGLE_SOURCE_ALGO, tried)
    return SolveResult(False, None, SINGLE_SOURCE_ALGO, tried)


# ---------------------------------------------------------------------------
# Path topology, enmity in-star


def solve_path_instar(instance: Instance, p: int) -> SolveResult:
    """Path topology, every negative utility directed at agent ``p``.

    ``p`` goes on the last vertex of the path (walked from the lower-id
    endpoint); every ordering of the remaining agents is tried on the first
    ``|N|-1`` vertices.
    """
    check_instance(instance)
    order = instance.topology.path_order()
    arcs = enmity_structure(instance).arcs
    _require(0 <= p < instance.n_agents, f"agent {p} does not exist")
    _require(all(j == p for _, j in arcs), f"some enmity arc does not point at agent {p}")

    others = [i for i in range(instance.n_agents) if i != p]
    slots = order[: len(others)]
    tried = 0
    for perm in itertools.permutations(others):
        tried += 1
        placement = [-1] * instance.n_agents
        placement[p] = order[-1]
        for agent, vertex in zip(perm, slots):
            placement[agent] = vertex
        candidate = Assignment(placement)
        if is_individually_rational(instance, candidate).individually_rational:
            return SolveResult(True, candidate, PATH_INSTAR, tried)
    return SolveResult(False, None, PATH_INSTAR, tried)


# ---------------------------------------------------------------------------
# Dispatch and verification


def solve_auto(instance: Instance, threads: int = 1) -> SolveResult:
    check_instance(instance)
    structure = enmity_structure(instance)
    if structure.kind == NO_ARCS:
        return SolveResult(True, Assignment(range(instance.n_agents)), NO_ARCS_ALGO, 0)
    if structure.kind == SINGLE_SOURCE:
        return solve_single_source(instance, structure.center)
    if structure.kind == SINGLE_SINK and instance.topology.is_path():
        return solve_path_instar(instance, structure.center)
    return solve_brute_force(instance, threads=threads)


@dataclass(frozen=True)
class WitnessReport:
    valid: bool
    individually_rational: bool
    utilities: Optional[tuple]
    problems: tuple = ()

    @property
    def ok(self) -> bool:
        return self.valid and self.individually_rational


def verify_witness(instance: Instance, assignment: Assignment) -> WitnessReport:
    """Check a claimed solution; problems are reported, never raised."""
    try:
        problems = [str(v) for v in validate_instance(instance)]
    except (InvalidInstance, ValueError) as exc:
        problems = [str(exc)]
    try:
        problems += assignment_problems(instance, Assignment(assignment))
    except TypeError as exc:
        problems.append(f"unreadable assignment: {exc}")
    if problems:
        return WitnessReport(False, False, None, tuple(problems))
    report = is_individually_rational(instance, Assignment(assignment))
    return WitnessReport(True, report.individually_rational, report.utilities)
