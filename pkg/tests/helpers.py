"""Random instance builders and small-graph enumeration shared by the tests."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from irtdg import Instance, Reciprocal, Topology


def random_rational(rng: random.Random, low=-3, high=3, max_den=4) -> Fraction:
    den = rng.randint(1, max_den)
    return Fraction(rng.randint(low * den, high * den), den)


def random_topology(rng: random.Random, n: int, p: float | None = None) -> Topology:
    p = rng.random() if p is None else p
    return Topology(n, [e for e in itertools.combinations(range(n), 2) if rng.random() < p])


def random_instance(rng: random.Random, max_vertices=6, max_agents=6, dff=None) -> Instance:
    n = rng.randint(1, max_vertices)
    m = rng.randint(1, min(n, max_agents))
    u = [[Fraction(0) if i == j else random_rational(rng) for j in range(m)] for i in range(m)]
    return Instance(random_topology(rng, n), [f"x{i}" for i in range(m)], u, dff or Reciprocal())


def random_single_source(rng: random.Random, max_vertices=8, max_agents=6) -> tuple[Instance, int]:
    """Only agent ``p`` holds negative utilities; topology may be disconnected."""
    n = rng.randint(1, max_vertices)
    m = rng.randint(1, min(n, max_agents))
    p = rng.randrange(m)
    top = rng.choice([1, 3])
    u = []
    for i in range(m):
        row = []
        for j in range(m):
            if i == j:
                row.append(Fraction(0))
            elif i == p:
                row.append(random_rational(rng, -3, top))
            else:
                row.append(random_rational(rng, 0, 3))
        u.append(row)
    # sparse graphs keep plenty of disconnected cases
    topo = random_topology(rng, n, rng.choice([0.15, 0.3, 0.5, 0.8]))
    return Instance(topo, [f"x{i}" for i in range(m)], u, Reciprocal()), p


def random_path_single_sink(rng: random.Random, max_length=9, max_agents=6) -> tuple[Instance, int]:
    """Path topology with shuffled vertex ids; negative utilities only toward ``p``."""
    n = rng.randint(1, max_length)
    m = rng.randint(1, min(n, max_agents))
    p = rng.randrange(m)
    hostility = rng.choice([1, 3, 6])
    u = []
    for i in range(m):
        row = []
        for j in range(m):
            if i == j:
                row.append(Fraction(0))
            elif j == p:
                row.append(random_rational(rng, -hostility, 1))
            else:
                row.append(random_rational(rng, 0, 3))
        u.append(row)
    ids = list(range(n))
    rng.shuffle(ids)
    topo = Topology(n, [(ids[i], ids[i + 1]) for i in range(n - 1)])
    return Instance(topo, [f"x{i}" for i in range(m)], u, Reciprocal()), p


def connected_graphs(max_n: int):
    """One representative per isomorphism class of connected graphs on 1..max_n vertices."""
    for n in range(1, max_n + 1):
        seen = set()
        pairs = list(itertools.combinations(range(n), 2))
        perms = list(itertools.permutations(range(n)))
        for mask in range(1 << len(pairs)):
            edges = [e for b, e in enumerate(pairs) if mask >> b & 1]
            g = Topology(n, edges)
            if len(g.components) != 1:
                continue
            canon = min(tuple(sorted(tuple(sorted((pm[a], pm[b]))) for a, b in edges)) for pm in perms)
            if canon not in seen:
                seen.add(canon)
                yield g


def partitions(total: int, smallest: int = 2):
    """Non-increasing integer partitions of ``total`` with parts >= ``smallest``."""

    def rec(rest, largest):
        if rest == 0:
            yield ()
            return
        for part in range(min(rest, largest), smallest - 1, -1):
            for tail in rec(rest - part, part):
                yield (part,) + tail

    yield from rec(total, total)
