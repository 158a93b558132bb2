"""Hardness gadgets, exhaustive source-problem deciders and certificate maps.

Every generator turns a source problem into an IR instance that is a
yes-instance exactly when the source is.  ``decide_source`` solves the
source problem by exhaustive search, and ``certificate_to_assignment``
turns a source certificate into the IR placement used in the forward
direction of the construction.  Together they let the solver suite be
checked against problems with independently known answers.

Agent and vertex numbering (0-based, certificates use the same indices):

* unary bin packing: agents ``a{i}_{j}`` item by item; bin ``b`` is the
  clique on vertices ``b*c .. b*c+c-1``.
* equitable partition: element agents ``a1..a2n`` first, then the guards.
* 3-partition: guards ``g1..g2n`` then elements ``a1..a3n``; component
  ``i`` is the K5 on vertices ``5i .. 5i+4``.
* independent set / clique: the ``k`` selected agents, then the guard; the
  source graph keeps its vertex ids, extra vertices are appended.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .errors import (
    CertificateInvalid,
    DegenerateParameter,
    DistanceOutOfRange,
    GeneratorPrecondition,
    OracleBudgetExceeded,
)
from .model import (
    Assignment,
    DistanceFactor,
    Instance,
    Reciprocal,
    Table,
    Topology,
    as_fraction,
    validate_instance,
)

DEFAULT_BUDGET = 10**6

UNARY_BIN_PACKING = "unary-bin-packing"
EP_BIPARTITE = "equitable-partition-bipartite"
EP_INSTAR = "equitable-partition-instar"
EP_PATH = "equitable-partition-path"
THREE_PARTITION = "three-partition"
INDEPENDENT_SET = "independent-set"
CLIQUE = "clique"

NOT_GUARANTEED = "equivalence-not-guaranteed"


# ---------------------------------------------------------------------------
# Source problems


@dataclass(frozen=True)
class UnaryBinPacking:
    items: tuple
    bins: int
    capacity: int
    kind = "unary-bin-packing"

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))

    def violations(self) -> list[str]:
        out = []
        if self.bins < 1:
            out.append("need at least one bin")
        if self.capacity < 2:
            # unit bins become isolated vertices where every agent scores 0
            out.append("capacity must be at least 2")
        if any(s <= 1 for s in self.items):
            out.append("every item must be larger than 1")
        if sum(self.items) != self.bins * self.capacity:
            out.append(f"items sum to {sum(self.items)}, not bins*capacity = {self.bins * self.capacity}")
        return out


@dataclass(frozen=True)
class EquitablePartition:
    items: tuple
    kind = "equitable-partition"

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))

    @property
    def n(self) -> int:
        return len(self.items) // 2

    @property
    def k(self) -> int:
        return sum(self.items) // 2

    def violations(self, strict: bool = True) -> list[str]:
        out = []
        s = self.items
        if not s or len(s) % 2:
            out.append("need a positive even number of items")
        if any(x < 1 for x in s):
            out.append("items must be positive")
        if sum(s) % 2:
            out.append("items must sum to an even number")
        if strict and s and not out:
            n, low = self.n, min(s)
            if low < n * n:
                out.append(f"min item {low} is below n^2 = {n * n}")
            if (max(s) - low) * n * n > low:
                out.append("item spread exceeds min/n^2")
        return out


@dataclass(frozen=True)
class ThreePartition:
    items: tuple
    target: int
    kind = "three-partition"

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))

    @property
    def n(self) -> int:
        return len(self.items) // 3

    def violations(self) -> list[str]:
        out = []
        s, k = self.items, self.target
        if not s or len(s) % 3:
            out.append("need a positive multiple of 3 items")
        elif sum(s) != self.n * k:
            out.append(f"items sum to {sum(s)}, not n*target = {self.n * k}")
        if any(not (k < 4 * x and 2 * x < k) for x in s):
            out.append("every item must lie strictly between target/4 and target/2")
        return out


@dataclass(frozen=True)
class IndependentSet:
    graph: Topology
    k: int
    kind = "independent-set"


@dataclass(frozen=True)
class Clique:
    graph: Topology
    k: int
    kind = "clique"


SourceProblem = Union[UnaryBinPacking, EquitablePartition, ThreePartition, IndependentSet, Clique]


@dataclass(frozen=True)
class GeneratedInstance:
    instance: Instance
    gadget: str
    metadata: dict = field(default_factory=dict, compare=False)
    source: Optional[SourceProblem] = None

    def agent_indices(self, names) -> list[int]:
        return [self.instance.agent_index(a) for a in names]

    @property
    def zero_agents(self) -> list[int]:
        """Agents whose utility is exactly zero under a certificate placement."""
        return self.agent_indices(self.metadata.get("zero_agents", []))


# ---------------------------------------------------------------------------
# Helpers


def _zeros(n):
    return [[Fraction(0)] * n for _ in range(n)]


def _f(dff: DistanceFactor, d: int) -> Fraction:
    try:
        return dff(d)
    except DistanceOutOfRange as exc:
        raise GeneratorPrecondition(f"distance factor must define f({d}): {exc}") from exc


def _finish(topology, agents, utilities, dff, gadget, metadata, source, waived=False):
    instance = Instance(topology, agents, utilities, dff)
    violations = validate_instance(instance)
    if violations:
        raise GeneratorPrecondition("generated instance is invalid: " + "; ".join(map(str, violations)))
    if waived:
        metadata[NOT_GUARANTEED] = True
    return GeneratedInstance(instance, gadget, metadata, source)


def _check(problems, waive=False):
    if problems and not waive:
        raise GeneratorPrecondition("; ".join(problems))
    return bool(problems)


# ---------------------------------------------------------------------------
# Generators


def gen_unary_bin_packing(src: UnaryBinPacking, dff: Optional[DistanceFactor] = None) -> GeneratedInstance:
    """B disjoint cliques of size c; one agent per unit of every item.

    Units of the same item like each other by ``(c - s)/(s - 1)``, units of
    different items dislike each other by 1.
    """
    dff = dff or Reciprocal()
    _check(src.violations())
    c = src.capacity
    owner, agents = [], []
    for i, s in enumerate(src.items):
        for j in range(s):
            owner.append(i)
            agents.append(f"a{i + 1}_{j + 1}")
    n = len(agents)
    u = _zeros(n)
    for x in range(n):
        s = src.items[owner[x]]
        same = Fraction(c - s, s - 1)
        for y in range(n):
            if x != y:
                u[x][y] = same if owner[x] == owner[y] else Fraction(-1)
    topology = Topology.disjoint_union(Topology.complete(c) for _ in range(src.bins))
    meta = {"bins": src.bins, "capacity": c, "zero_agents": list(agents)}
    return _finish(topology, agents, u, dff, UNARY_BIN_PACKING, meta, src)


def gen_equitable_partition(src: EquitablePartition, variant: str = "bipartite",
                            dff: Optional[DistanceFactor] = None, waive: bool = False) -> GeneratedInstance:
    """Dispatch to the bipartite, in-star or path construction."""
    builders = {"bipartite": _ep_bipartite, "instar": _ep_instar, "path": _ep_path}
    if variant not in builders:
        raise GeneratorPrecondition(f"unknown equitable-partition variant {variant!r}")
    return builders[variant](src, dff or Reciprocal(), waive)


def _ep_bipartite(src, dff, waive):
    # K_{n,n} on L = 0..n-1, R = n..2n-1, v_l = 2n (joined to L), v_r = 2n+1 (joined to R)
    _check(src.violations(strict=False))
    waived = _check(src.violations(strict=True), waive)
    n, k, s = src.n, src.k, src.items
    f1, f2, f3 = _f(dff, 1), _f(dff, 2), _f(dff, 3)
    left, right = range(n), range(n, 2 * n)
    vl, vr = 2 * n, 2 * n + 1
    edges = [(a, b) for a in left for b in right]
    edges += [(vl, a) for a in left] + [(vr, b) for b in right]
    agents = [f"a{i + 1}" for i in range(2 * n)] + ["g1", "g2"]
    g1, g2 = 2 * n, 2 * n + 1
    u = _zeros(2 * n + 2)
    for i, x in enumerate(s):
        like = Fraction(x) / f1
        u[g1][i] = u[g2][i] = u[i][g1] = u[i][g2] = like
    # the guards end up at distance 3, so the enmity is normalised by f(3)
    u[g1][g2] = u[g2][g1] = -(k + f2 / f1 * k) / f3
    meta = {"n": n, "k": k, "zero_agents": ["g1", "g2"]}
    return _finish(Topology(2 * n + 2, edges), agents, u, dff, EP_BIPARTITE, meta, src, waived)


def _ep_instar(src, dff, waive):
    # middles L = 0..n-1 (joined to H1), R = n..2n-1 (joined to H2); H1 = 2n, H2 = 2n+1, B = 2n+2
    _check(src.violations(strict=False))
    waived = False
    n, k, s = src.n, src.k, src.items
    f1, f2 = _f(dff, 1), _f(dff, 2)
    h1v, h2v, bv = 2 * n, 2 * n + 1, 2 * n + 2
    edges = [(h1v, h2v)]
    edges += [(m, bv) for m in range(2 * n)]
    edges += [(m, h1v) for m in range(n)] + [(m, h2v) for m in range(n, 2 * n)]
    agents = [f"a{i + 1}" for i in range(2 * n)] + ["h1", "h2", "b"]
    h1, h2, b = 2 * n, 2 * n + 1, 2 * n + 2
    u = _zeros(2 * n + 3)
    for h in (h1, h2):
        for j, x in enumerate(s):
            u[h][j] = Fraction(x)
        u[h][b] = -(f1 + f2) / f2 * k
    meta = {"n": n, "k": k, "zero_agents": ["h1", "h2"]}
    return _finish(Topology(2 * n + 3, edges), agents, u, dff, EP_INSTAR, meta, src, waived)


def path_gadget_exponent(k: int) -> int:
    """The unique ``l`` with ``k**3 < 2**l <= 2*k**3``."""
    return (k ** 3).bit_length()


def path_gadget_table(n: int, ell: int) -> list[int]:
    """Values ``f(1) .. f(2n+3)`` of the path gadget's distance factor."""
    values = []
    for d in range(1, 2 * n + 4):
        if d <= n:
            values.append(2 ** (3 * ell) - d)
        elif d == n + 1:
            values.append(2 ** (2 * ell))
        elif d <= 2 * n + 2:
            values.append(2 ** ell - d)
        else:
            values.append(1)
    return values


def _ep_path(src, dff_ignored, waive):
    # path v_1..v_{2n+4} = vertices 0..2n+3; agents a1..a2n, t, g1, g2, g3
    _check(src.violations(strict=False))
    n, k, s = src.n, src.k, src.items
    problems = src.violations(strict=True)
    if k < n ** 3:
        problems.append(f"k = {k} is below n^3 = {n ** 3}")
    if n < 10:
        problems.append(f"n = {n} is below 10")
    waived = _check(problems, waive)
    ell = path_gadget_exponent(k)
    table = Table(path_gadget_table(n, ell))
    f = table
    top = 2 ** (3 * ell)
    agents = [f"a{i + 1}" for i in range(2 * n)] + ["t", "g1", "g2", "g3"]
    t, g1, g2, g3 = 2 * n, 2 * n + 1, 2 * n + 2, 2 * n + 3
    u = _zeros(2 * n + 4)
    for g in (g1, g2, g3):
        for j, x in enumerate(s):
            u[g][j] = Fraction(x)
    slack = n * 2 * k
    u[g1][t] = -Fraction(top * k - slack) / f(1)
    u[g2][t] = -Fraction(top * 2 * k - slack) / f(n + 1)
    u[g3][t] = -Fraction(top * k - slack) / f(2 * n + 3)
    meta = {"n": n, "k": k, "ell": ell, "zero_agents": []}
    return _finish(Topology.path(2 * n + 4), agents, u, table, EP_PATH, meta, src, waived)


def gen_3partition(src: ThreePartition, dff: Optional[DistanceFactor] = None) -> GeneratedInstance:
    """n disjoint K5s, 2n mutually hostile guards, 3n element agents."""
    dff = dff or Reciprocal()
    _check(src.violations())
    n, k, s = src.n, src.target, src.items
    agents = [f"g{i + 1}" for i in range(2 * n)] + [f"a{j + 1}" for j in range(3 * n)]
    u = _zeros(5 * n)
    for g in range(2 * n):
        for h in range(2 * n):
            if g != h:
                u[g][h] = Fraction(-k)
        for j, x in enumerate(s):
            u[g][2 * n + j] = u[2 * n + j][g] = Fraction(x)
    topology = Topology.disjoint_union(Topology.complete(5) for _ in range(n))
    meta = {"n": n, "k": k, "zero_agents": agents[: 2 * n]}
    return _finish(topology, agents, u, dff, THREE_PARTITION, meta, src)


def _positive_beta(beta):
    beta = as_fraction(beta)
    if beta <= 0:
        raise DegenerateParameter(f"beta must be positive, got {beta}")
    return beta


def gen_independent_set(src: IndependentSet, beta=1, dff: Optional[DistanceFactor] = None) -> GeneratedInstance:
    """Source graph plus an apex; k mutually hostile agents and a guard they like."""
    dff = dff or Reciprocal()
    if src.k < 2:
        raise DegenerateParameter(f"independent-set gadget needs k >= 2, got {src.k}")
    beta = _positive_beta(beta)
    h, k = src.graph, src.k
    if k > h.n:
        raise GeneratorPrecondition(f"k = {k} exceeds the {h.n} vertices of the source graph")
    apex = h.n
    topology = Topology(h.n + 1, list(h.edges) + [(v, apex) for v in range(h.n)])
    f1, f2 = _f(dff, 1), _f(dff, 2)
    agents = [f"a{i + 1}" for i in range(k)] + ["g"]
    g = k
    u = _zeros(k + 1)
    like = (k - 1) * f2 * beta / f1
    for i in range(k):
        for j in range(k):
            if i != j:
                u[i][j] = -beta
        u[i][g] = u[g][i] = like
    meta = {"k": k, "beta": str(beta), "zero_agents": agents[:k]}
    return _finish(topology, agents, u, dff, INDEPENDENT_SET, meta, src)


def gen_clique(src: Clique, beta=1, dff: Optional[DistanceFactor] = None) -> GeneratedInstance:
    """Source graph plus an apex with a pendant; k selection agents dislike a guard."""
    dff = dff or Reciprocal()
    if src.k < 2:
        raise DegenerateParameter(f"clique gadget needs k >= 2, got {src.k}")
    beta = _positive_beta(beta)
    h, k = src.graph, src.k
    if k + 1 > h.n + 2:
        raise GeneratorPrecondition(f"k = {k} needs at least {k - 1} source vertices")
    apex, pendant = h.n, h.n + 1
    edges = list(h.edges) + [(v, apex) for v in range(h.n)] + [(apex, pendant)]
    topology = Topology(h.n + 2, edges)
    f1, f2 = _f(dff, 1), _f(dff, 2)
    agents = [f"a{i + 1}" for i in range(k)] + ["g"]
    g = k
    u = _zeros(k + 1)
    like = f2 * beta / (f1 * (k - 1))
    for i in range(k):
        for j in range(k):
            if i != j:
                u[i][j] = like
        u[i][g] = -beta
    meta = {"k": k, "beta": str(beta), "zero_agents": agents[:k]}
    return _finish(topology, agents, u, dff, CLIQUE, meta, src)


def generate(src: SourceProblem, dff: Optional[DistanceFactor] = None, *, variant: str = "bipartite",
             beta=1, waive: bool = False) -> GeneratedInstance:
    """Generator for any source problem."""
    if isinstance(src, UnaryBinPacking):
        return gen_unary_bin_packing(src, dff)
    if isinstance(src, EquitablePartition):
        return gen_equitable_partition(src, variant, dff, waive)
    if isinstance(src, ThreePartition):
        return gen_3partition(src, dff)
    if isinstance(src, IndependentSet):
        return gen_independent_set(src, beta, dff)
    if isinstance(src, Clique):
        return gen_clique(src, beta, dff)
    raise TypeError(f"not a source problem: {src!r}")


# ---------------------------------------------------------------------------
# Exhaustive source deciders


class _Budget:
    def __init__(self, limit):
        self.limit = limit
        self.used = 0

    def tick(self):
        self.used += 1
        if self.limit is not None and self.used > self.limit:
            raise OracleBudgetExceeded(f"search budget of {self.limit} steps exhausted")


def _decide_bin_packing(src, budget):
    items, c = src.items, src.capacity
    load = [0] * src.bins
    alloc = [-1] * len(items)

    def rec(i):
        if i == len(items):
            return all(x == c for x in load)
        tried_empty = False
        for b in range(src.bins):
            if load[b] + items[i] > c:
                continue
            if load[b] == 0:
                if tried_empty:
                    continue
                tried_empty = True
            budget.tick()
            load[b] += items[i]
            alloc[i] = b
            if rec(i + 1):
                return True
            load[b] -= items[i]
        return False

    if sum(items) == src.bins * c and rec(0):
        return True, tuple(alloc)
    return False, None


def _decide_equitable(src, budget):
    s, n = src.items, src.n
    if sum(s) % 2:
        return False, None
    for combo in itertools.combinations(range(2 * n), n):
        budget.tick()
        if sum(s[i] for i in combo) == src.k:
            return True, combo
    return False, None


def _decide_three_partition(src, budget):
    s, k = src.items, src.target
    used = [False] * len(s)
    groups = []

    def rec():
        free = [i for i, u in enumerate(used) if not u]
        if not free:
            return True
        first = free[0]
        for a, b in itertools.combinations(free[1:], 2):
            budget.tick()
            if s[first] + s[a] + s[b] != k:
                continue
            for i in (first, a, b):
                used[i] = True
            groups.append((first, a, b))
            if rec():
                return True
            groups.pop()
            for i in (first, a, b):
                used[i] = False
        return False

    if len(s) % 3 == 0 and rec():
        return True, tuple(groups)
    return False, None


def _decide_subset(graph, k, budget, want_edge):
    edges = graph.edges
    for combo in itertools.combinations(range(graph.n), k):
        budget.tick()
        if all(((a, b) in edges) == want_edge for a, b in itertools.combinations(combo, 2)):
            return True, combo
    return False, None


def decide_source(src: SourceProblem, budget: Optional[int] = DEFAULT_BUDGET):
    """Exact answer by exhaustive search, as ``(answer, certificate_or_None)``.

    Certificates: bin index per item (bin packing), the n chosen indices
    (equitable partition), the index triplets (3-partition), the chosen
    vertices (independent set, clique).
    """
    meter = _Budget(budget)
    if isinstance(src, UnaryBinPacking):
        return _decide_bin_packing(src, meter)
    if isinstance(src, EquitablePartition):
        return _decide_equitable(src, meter)
    if isinstance(src, ThreePartition):
        return _decide_three_partition(src, meter)
    if isinstance(src, IndependentSet):
        return _decide_subset(src.graph, src.k, meter, want_edge=False)
    if isinstance(src, Clique):
        return _decide_subset(src.graph, src.k, meter, want_edge=True)
    raise TypeError(f"not a source problem: {src!r}")


# ---------------------------------------------------------------------------
# Certificates


def check_certificate(src: SourceProblem, cert) -> None:
    """Raise :class:`CertificateInvalid` unless ``cert`` solves ``src``."""

    def fail(msg):
        raise CertificateInvalid(msg)

    try:
        if isinstance(src, UnaryBinPacking):
            cert = tuple(cert)
            if len(cert) != len(src.items) or any(not 0 <= b < src.bins for b in cert):
                fail("need one bin index in range per item")
            for b in range(src.bins):
                load = sum(x for x, bb in zip(src.items, cert) if bb == b)
                if load != src.capacity:
                    fail(f"bin {b} holds {load}, capacity is {src.capacity}")
        elif isinstance(src, EquitablePartition):
            chosen = sorted(set(cert))
            if len(chosen) != src.n or any(not 0 <= i < 2 * src.n for i in chosen):
                fail(f"need {src.n} distinct indices in range")
            if sum(src.items[i] for i in chosen) * 2 != sum(src.items):
                fail("chosen items do not sum to half the total")
        elif isinstance(src, ThreePartition):
            flat = [i for group in cert for i in group]
            if sorted(flat) != list(range(len(src.items))) or any(len(g) != 3 for g in cert):
                fail("triplets must partition every index exactly once")
            for group in cert:
                if sum(src.items[i] for i in group) != src.target:
                    fail(f"triplet {tuple(group)} does not sum to {src.target}")
        elif isinstance(src, (IndependentSet, Clique)):
            chosen = sorted(set(cert))
            if len(chosen) != src.k or any(not 0 <= v < src.graph.n for v in chosen):
                fail(f"need {src.k} distinct vertices in range")
            want_edge = isinstance(src, Clique)
            for a, b in itertools.combinations(chosen, 2):
                if ((a, b) in src.graph.edges) != want_edge:
                    fail(f"vertices {a} and {b} break the {'clique' if want_edge else 'independent set'}")
        else:
            raise TypeError(f"not a source problem: {src!r}")
    except (TypeError, ValueError) as exc:
        if isinstance(exc, CertificateInvalid):
            raise
        raise CertificateInvalid(f"malformed certificate: {exc}") from exc


def certificate_to_assignment(gen: GeneratedInstance, cert) -> Assignment:
    """The IR placement the construction builds from a source certificate."""
    src = gen.source
    if src is None:
        raise CertificateInvalid("generated instance does not carry its source problem")
    check_certificate(src, cert)
    n_agents = gen.instance.n_agents
    place = [-1] * n_agents

    if gen.gadget == UNARY_BIN_PACKING:
        c = src.capacity
        fill = [0] * src.bins
        agent = 0
        for size, b in zip(src.items, cert):
            for _ in range(size):
                place[agent] = b * c + fill[b]
                fill[b] += 1
                agent += 1
    elif gen.gadget in (EP_BIPARTITE, EP_INSTAR, EP_PATH):
        n = src.n
        chosen = sorted(set(cert))
        rest = [i for i in range(2 * n) if i not in chosen]
        if gen.gadget == EP_PATH:
            # t, g1 at v_1, v_2; chosen at v_3..v_{n+2}; g2 at v_{n+3}; rest at v_{n+4}..v_{2n+3}; g3 last
            for slot, i in enumerate(chosen):
                place[i] = 2 + slot
            for slot, i in enumerate(rest):
                place[i] = n + 3 + slot
            t, g1, g2, g3 = 2 * n, 2 * n + 1, 2 * n + 2, 2 * n + 3
            place[t], place[g1], place[g2], place[g3] = 0, 1, n + 2, 2 * n + 3
        else:
            for slot, i in enumerate(chosen):
                place[i] = slot
            for slot, i in enumerate(rest):
                place[i] = n + slot
            place[2 * n], place[2 * n + 1] = 2 * n, 2 * n + 1
            if gen.gadget == EP_INSTAR:
                place[2 * n + 2] = 2 * n + 2
    elif gen.gadget == THREE_PARTITION:
        n = src.n
        for comp, group in enumerate(cert):
            base = 5 * comp
            place[2 * comp], place[2 * comp + 1] = base, base + 1
            for slot, j in enumerate(group):
                place[2 * n + j] = base + 2 + slot
    elif gen.gadget in (INDEPENDENT_SET, CLIQUE):
        k = src.k
        for i, v in enumerate(sorted(set(cert))):
            place[i] = v
        place[k] = src.graph.n if gen.gadget == INDEPENDENT_SET else src.graph.n + 1
    else:
        raise CertificateInvalid(f"unknown gadget {gen.gadget!r}")
    return Assignment(place)
