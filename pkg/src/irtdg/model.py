"""Game model: topologies, distance factors, instances, utilities and IR checks.

All arithmetic is exact.  Rationals are :class:`fractions.Fraction`, which
is always kept in lowest terms with a positive denominator.  An unreachable
pair of vertices has distance :data:`UNREACHABLE` (``None``), never a large
integer, and every distance factor maps it to zero.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import ClassVar, Iterable, NamedTuple, Optional, Sequence, Union

from .errors import DistanceOutOfRange, InvalidAssignment, InvalidInstance

UNREACHABLE = None

Distance = Optional[int]
DistanceMatrix = tuple[tuple[Distance, ...], ...]
RationalLike = Union[Fraction, int, str]

ZERO = Fraction(0)


def as_fraction(value: RationalLike) -> Fraction:
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, float):
        raise TypeError("floating point values are not accepted; use a Fraction or 'p/q' string")
    return Fraction(value)


# ---------------------------------------------------------------------------
# Topology and distances


@dataclass(frozen=True)
class Topology:
    """Simple undirected graph on vertices ``0 .. n-1``."""

    n: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 0:
            raise ValueError(f"vertex count must be a non-negative integer, got {self.n!r}")
        raw = list(self.edges)
        normalized = set()
        for edge in raw:
            u, v = edge
            if not (isinstance(u, int) and isinstance(v, int)):
                raise ValueError(f"edge endpoints must be integers: {edge!r}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge {edge!r} has an endpoint outside 0..{self.n - 1}")
            key = (min(u, v), max(u, v))
            if key in normalized:
                raise ValueError(f"duplicate edge {key!r}")
            normalized.add(key)
        object.__setattr__(self, "edges", frozenset(normalized))

    @classmethod
    def path(cls, n: int) -> Topology:
        return cls(n, [(i, i + 1) for i in range(n - 1)])

    @classmethod
    def complete(cls, n: int) -> Topology:
        return cls(n, [(i, j) for i in range(n) for j in range(i + 1, n)])

    @classmethod
    def disjoint_union(cls, parts: Iterable[Topology]) -> Topology:
        offset, edges = 0, []
        for part in parts:
            edges.extend((u + offset, v + offset) for u, v in part.edges)
            offset += part.n
        return cls(offset, edges)

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        nbrs: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        return tuple(tuple(sorted(vs)) for vs in nbrs)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @cached_property
    def distances(self) -> DistanceMatrix:
        return shortest_distances(self)

    @cached_property
    def components(self) -> tuple[tuple[int, ...], ...]:
        """Connected components, each sorted, ordered by smallest vertex."""
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            comp = [v for v in range(self.n) if self.distances[s][v] is not UNREACHABLE]
            for v in comp:
                seen[v] = True
            comps.append(tuple(comp))
        return tuple(comps)

    def component_diameters(self) -> list[int]:
        dist = self.distances
        return [max((dist[u][v] for u in comp for v in comp), default=0) for comp in self.components]

    @property
    def max_finite_distance(self) -> int:
        return max(self.component_diameters(), default=0)

    def is_path(self) -> bool:
        n = self.n
        if n == 0:
            return False
        if n == 1:
            return True
        if len(self.edges) != n - 1 or len(self.components) != 1:
            return False
        degrees = sorted(self.degree(v) for v in range(n))
        return degrees[:2] == [1, 1] and all(d == 2 for d in degrees[2:])

    def path_order(self) -> tuple[int, ...]:
        """Vertices of a path topology, walked from the lower-id endpoint."""
        from .errors import NotAPath

        if not self.is_path():
            raise NotAPath("topology is not a path")
        if self.n == 1:
            return (0,)
        start = min(v for v in range(self.n) if self.degree(v) == 1)
        order, prev, cur = [start], None, start
        while len(order) < self.n:
            nxt = next(w for w in self.adjacency[cur] if w != prev)
            order.append(nxt)
            prev, cur = cur, nxt
        return tuple(order)

    def relabel(self, perm: Sequence[int]) -> Topology:
        """Return the isomorphic topology in which vertex ``v`` becomes ``perm[v]``."""
        return Topology(self.n, [(perm[u], perm[v]) for u, v in self.edges])


def shortest_distances(topology: Topology) -> DistanceMatrix:
    """All-pairs hop distances by one breadth-first search per vertex."""
    adj = topology.adjacency
    rows = []
    for s in range(topology.n):
        dist: list[Distance] = [UNREACHABLE] * topology.n
        dist[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if dist[w] is UNREACHABLE:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        rows.append(tuple(dist))
    return tuple(rows)


# ---------------------------------------------------------------------------
# Distance factor functions


@dataclass(frozen=True)
class Violation:
    path: str
    message: str

    def __str__(self):
        return f"{self.path}: {self.message}"


class DistanceFactor:
    """Strictly decreasing positive weight of a distance; zero when unreachable.

    Subclasses implement :meth:`_finite` for distances ``d >= 1``.
    """

    kind: ClassVar[str]

    def __call__(self, d: Distance) -> Fraction:
        if d is UNREACHABLE:
            return ZERO
        if d < 1:
            raise ValueError(f"distance factor is defined for d >= 1, got {d}")
        return self._finite(d)

    def _finite(self, d: int) -> Fraction:
        raise NotImplementedError

    def violations(self, max_distance: int = 0) -> list[Violation]:
        return []


def _table_violations(values, path="$.dff.values") -> list[Violation]:
    out = []
    if not values:
        out.append(Violation(path, "table is empty"))
    if any(v <= 0 for v in values):
        out.append(Violation(path, "not strictly positive"))
    if any(a <= b for a, b in zip(values, values[1:])):
        out.append(Violation(path, "not strictly decreasing"))
    return out


@dataclass(frozen=True)
class Table(DistanceFactor):
    """Explicit values ``f(1), f(2), ...``; evaluating past the end is an error."""

    values: tuple = ()
    kind: ClassVar[str] = "table"

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(as_fraction(v) for v in self.values))

    def _finite(self, d):
        if d > len(self.values):
            raise DistanceOutOfRange(f"table defines f(1..{len(self.values)}), asked for f({d})")
        return self.values[d - 1]

    def violations(self, max_distance=0):
        out = _table_violations(self.values)
        if len(self.values) < max_distance:
            out.append(Violation(
                "$.dff.values",
                f"table shorter than topology diameter ({len(self.values)} < {max_distance})",
            ))
        return out


@dataclass(frozen=True)
class Reciprocal(DistanceFactor):
    """``f(d) = 1/d``."""

    kind: ClassVar[str] = "reciprocal"

    def _finite(self, d):
        return Fraction(1, d)


@dataclass(frozen=True)
class Exponential(DistanceFactor):
    """``f(d) = base**d`` with ``0 < base < 1``."""

    base: Fraction = Fraction(1, 2)
    kind: ClassVar[str] = "exponential"

    def __post_init__(self):
        object.__setattr__(self, "base", as_fraction(self.base))

    def _finite(self, d):
        return self.base ** d

    def violations(self, max_distance=0):
        if not 0 < self.base < 1:
            return [Violation("$.dff.base", "base must lie strictly between 0 and 1")]
        return []


@dataclass(frozen=True)
class BoundedTable(DistanceFactor):
    """Table values up to ``cutoff``; zero at every larger distance."""

    values: tuple = ()
    cutoff: int = 1
    kind: ClassVar[str] = "bounded"

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(as_fraction(v) for v in self.values))

    def _finite(self, d):
        if d > self.cutoff:
            return ZERO
        return self.values[d - 1]

    def violations(self, max_distance=0):
        out = []
        if isinstance(self.cutoff, bool) or not isinstance(self.cutoff, int) or self.cutoff < 1:
            out.append(Violation("$.dff.cutoff", "cutoff must be a positive integer"))
        elif len(self.values) < self.cutoff:
            out.append(Violation("$.dff.values", f"bounded table needs {self.cutoff} values, got {len(self.values)}"))
        return out + _table_violations(self.values[: self.cutoff] if isinstance(self.cutoff, int) else self.values)


def eval_dff(dff: DistanceFactor, d: Distance) -> Fraction:
    return dff(d)


# ---------------------------------------------------------------------------
# Instances and assignments


@dataclass(frozen=True)
class Instance:
    """A complete game: topology, named agents, utility matrix, distance factor.

    ``utilities[i][j]`` is what agent ``i`` thinks of agent ``j``.
    """

    topology: Topology
    agents: tuple
    utilities: tuple
    dff: DistanceFactor = field(default_factory=Reciprocal)

    def __post_init__(self):
        agents = tuple(str(a) for a in self.agents)
        rows = tuple(tuple(as_fraction(x) for x in row) for row in self.utilities)
        shape = []
        if len(rows) != len(agents):
            shape.append(Violation("$.utilities", f"expected {len(agents)} rows, got {len(rows)}"))
        for i, row in enumerate(rows):
            if len(row) != len(agents):
                shape.append(Violation(f"$.utilities[{i}]", f"expected {len(agents)} entries, got {len(row)}"))
        if shape:
            raise InvalidInstance(shape)
        object.__setattr__(self, "agents", agents)
        object.__setattr__(self, "utilities", rows)

    @property
    def n_agents(self) -> int:
        return len(self.agents)

    @property
    def distances(self) -> DistanceMatrix:
        return self.topology.distances

    def agent_index(self, name: str) -> int:
        return self.agents.index(name)


@dataclass(frozen=True)
class Assignment:
    """Injective placement: ``placement[i]`` is the vertex of agent ``i``."""

    placement: tuple

    def __post_init__(self):
        object.__setattr__(self, "placement", tuple(self.placement))

    def __getitem__(self, agent: int) -> int:
        return self.placement[agent]

    def __len__(self):
        return len(self.placement)

    def __iter__(self):
        return iter(self.placement)

    def as_mapping(self, instance: Instance) -> dict[str, int]:
        return {name: v for name, v in zip(instance.agents, self.placement)}


def assignment_problems(instance: Instance, assignment: Assignment) -> list[str]:
    problems = []
    if len(assignment) != instance.n_agents:
        problems.append(f"assignment covers {len(assignment)} agents, instance has {instance.n_agents}")
    seen: dict[int, int] = {}
    for i, v in enumerate(assignment.placement):
        name = instance.agents[i] if i < instance.n_agents else f"#{i}"
        if isinstance(v, bool) or not isinstance(v, int) or not 0 <= v < instance.topology.n:
            problems.append(f"agent {name!r} placed on out-of-range vertex {v!r}")
        elif v in seen:
            problems.append(f"agent {name!r} shares vertex {v} with agent {instance.agents[seen[v]]!r}")
        else:
            seen[v] = i
    return problems


def check_assignment(instance: Instance, assignment: Assignment) -> None:
    problems = assignment_problems(instance, assignment)
    if problems:
        raise InvalidAssignment("; ".join(problems))


def agent_utility(instance: Instance, assignment: Assignment, agent: int,
                  distances: Optional[DistanceMatrix] = None) -> Fraction:
    """Distance-weighted sum of ``agent``'s utilities toward everyone else."""
    dist = instance.distances if distances is None else distances
    row = instance.utilities[agent]
    here = assignment[agent]
    f = instance.dff
    total = ZERO
    for j, u in enumerate(row):
        if j == agent or not u:
            continue
        total += u * f(dist[here][assignment[j]])
    return total


class IRReport(NamedTuple):
    individually_rational: bool
    utilities: tuple


def is_individually_rational(instance: Instance, assignment: Assignment) -> IRReport:
    """Evaluate every agent; raises :class:`InvalidAssignment` on a bad placement."""
    check_assignment(instance, assignment)
    dist = instance.distances
    utils = tuple(agent_utility(instance, assignment, i, dist) for i in range(instance.n_agents))
    return IRReport(all(u >= 0 for u in utils), utils)


# ---------------------------------------------------------------------------
# Enmity structure

NO_ARCS = "no-arcs"
SINGLE_SOURCE = "single-source"
SINGLE_SINK = "single-sink"
GENERAL = "general"


@dataclass(frozen=True)
class EnmityStructure:
    arcs: frozenset
    kind: str
    center: Optional[int] = None

    @property
    def arc_count(self) -> int:
        return len(self.arcs)


def enmity_structure(instance: Instance) -> EnmityStructure:
    arcs = frozenset(
        (i, j)
        for i, row in enumerate(instance.utilities)
        for j, u in enumerate(row)
        if u < 0
    )
    if not arcs:
        return EnmityStructure(arcs, NO_ARCS)
    tails = {i for i, _ in arcs}
    if len(tails) == 1:
        return EnmityStructure(arcs, SINGLE_SOURCE, tails.pop())
    heads = {j for _, j in arcs}
    if len(heads) == 1:
        return EnmityStructure(arcs, SINGLE_SINK, heads.pop())
    return EnmityStructure(arcs, GENERAL)


# ---------------------------------------------------------------------------
# Validation


def validate_instance(instance: Instance) -> list[Violation]:
    """Every invariant an instance must satisfy; empty list means valid."""
    out = []
    n_agents = instance.n_agents
    if instance.topology.n < n_agents:
        out.append(Violation("$.vertices", f"fewer vertices than agents ({instance.topology.n} < {n_agents})"))
    seen = {}
    for i, name in enumerate(instance.agents):
        if name in seen:
            out.append(Violation(f"$.agents[{i}]", f"duplicate agent name {name!r}"))
        seen.setdefault(name, i)
    for i in range(n_agents):
        if instance.utilities[i][i] != 0:
            out.append(Violation(f"$.utilities[{i}][{i}]", "diagonal nonzero"))
    if not isinstance(instance.dff, DistanceFactor):
        out.append(Violation("$.dff", f"not a distance factor: {instance.dff!r}"))
    else:
        out.extend(instance.dff.violations(instance.topology.max_finite_distance))
    return out


def check_instance(instance: Instance) -> None:
    violations = validate_instance(instance)
    if violations:
        raise InvalidInstance(violations)
