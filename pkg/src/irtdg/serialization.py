"""JSON documents for instances, assignments, source problems and gadgets.

Rationals travel as strings (``"3"``, ``"-1/2"``); bare JSON integers are
accepted on input, floating literals never are.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Any

from .errors import DocumentError, InvalidAssignment, InvalidInstance
from .model import (
    Assignment,
    BoundedTable,
    DistanceFactor,
    Exponential,
    Instance,
    Reciprocal,
    Table,
    Topology,
    validate_instance,
)
from .reductions import (
    Clique,
    EquitablePartition,
    GeneratedInstance,
    IndependentSet,
    ThreePartition,
    UnaryBinPacking,
)

_RATIONAL = re.compile(r"-?\d+(/\d+)?")


def parse_rational(value: Any, path: str = "$") -> Fraction:
    if isinstance(value, bool):
        raise DocumentError(path, "booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip().replace("−", "-")
        if _RATIONAL.fullmatch(text):
            num, _, den = text.partition("/")
            if den and int(den) == 0:
                raise DocumentError(path, f"zero denominator in {value!r}")
            return Fraction(int(num), int(den) if den else 1)
    raise DocumentError(path, f"not a rational ('p/q' or integer): {value!r}")


def format_rational(value: Fraction) -> str:
    return str(Fraction(value))


def _int(value, path, minimum=None):
    if isinstance(value, bool) or not isinstance(value, int):
        raise DocumentError(path, f"expected an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise DocumentError(path, f"must be at least {minimum}, got {value}")
    return value


def _list(value, path):
    if not isinstance(value, list):
        raise DocumentError(path, f"expected a list, got {type(value).__name__}")
    return value


def _obj(value, path):
    if not isinstance(value, dict):
        raise DocumentError(path, f"expected an object, got {type(value).__name__}")
    return value


def _require(doc, key, path):
    if key not in doc:
        raise DocumentError(f"{path}.{key}", "missing")
    return doc[key]


def _loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError("$", f"malformed JSON: {exc}") from exc


# ---------------------------------------------------------------------------
# Pieces


def topology_from_doc(doc, path="$") -> Topology:
    n = _int(_require(doc, "vertices", path), f"{path}.vertices", 0)
    edges = []
    for i, edge in enumerate(_list(doc.get("edges", []), f"{path}.edges")):
        epath = f"{path}.edges[{i}]"
        if not isinstance(edge, list) or len(edge) != 2:
            raise DocumentError(epath, "an edge is a pair [u, v]")
        u, v = (_int(x, epath) for x in edge)
        if u == v:
            raise DocumentError(epath, f"self-loop at vertex {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise DocumentError(epath, f"endpoint outside 0..{n - 1}")
        edges.append((u, v))
    try:
        return Topology(n, edges)
    except ValueError as exc:
        raise DocumentError(f"{path}.edges", str(exc)) from exc


def topology_to_doc(topology: Topology) -> dict:
    return {"vertices": topology.n, "edges": [list(e) for e in sorted(topology.edges)]}


def dff_from_doc(doc, path="$.dff") -> DistanceFactor:
    _obj(doc, path)
    kind = _require(doc, "kind", path)

    def values():
        raw = _list(_require(doc, "values", path), f"{path}.values")
        return [parse_rational(v, f"{path}.values[{i}]") for i, v in enumerate(raw)]

    if kind == "reciprocal":
        return Reciprocal()
    if kind == "table":
        return Table(values())
    if kind == "exponential":
        return Exponential(parse_rational(_require(doc, "base", path), f"{path}.base"))
    if kind == "bounded":
        cutoff = _int(_require(doc, "cutoff", path), f"{path}.cutoff", 1)
        return BoundedTable(values(), cutoff)
    raise DocumentError(f"{path}.kind", f"unknown distance factor kind {kind!r}")


def dff_to_doc(dff: DistanceFactor) -> dict:
    doc: dict[str, Any] = {"kind": dff.kind}
    if isinstance(dff, (Table, BoundedTable)):
        doc["values"] = [format_rational(v) for v in dff.values]
    if isinstance(dff, BoundedTable):
        doc["cutoff"] = dff.cutoff
    if isinstance(dff, Exponential):
        doc["base"] = format_rational(dff.base)
    return doc


def parse_dff_spec(spec: str) -> DistanceFactor:
    """Command-line shorthand: ``reciprocal``, ``exponential:1/2``,
    ``table:1,1/2,1/3`` or ``bounded:CUTOFF:v1,v2,...``."""
    kind, _, rest = spec.partition(":")
    try:
        if kind == "reciprocal" and not rest:
            return Reciprocal()
        if kind == "exponential":
            return Exponential(parse_rational(rest, "--dff"))
        if kind == "table":
            return Table([parse_rational(v, "--dff") for v in rest.split(",")])
        if kind == "bounded":
            cutoff, _, vals = rest.partition(":")
            return BoundedTable([parse_rational(v, "--dff") for v in vals.split(",")], int(cutoff))
    except ValueError as exc:
        raise DocumentError("--dff", str(exc)) from exc
    raise DocumentError("--dff", f"unrecognised distance factor {spec!r}")


# ---------------------------------------------------------------------------
# Instances


def instance_from_doc(doc, validate: bool = True) -> Instance:
    _obj(doc, "$")
    topology = topology_from_doc(doc)
    agents = _list(_require(doc, "agents", "$"), "$.agents")
    for i, name in enumerate(agents):
        if not isinstance(name, str):
            raise DocumentError(f"$.agents[{i}]", "agent names are strings")
    rows = _list(_require(doc, "utilities", "$"), "$.utilities")
    utilities = [
        [parse_rational(x, f"$.utilities[{i}][{j}]") for j, x in enumerate(_list(row, f"$.utilities[{i}]"))]
        for i, row in enumerate(rows)
    ]
    dff = dff_from_doc(_require(doc, "dff", "$"))
    instance = Instance(topology, tuple(agents), utilities, dff)
    if validate:
        violations = validate_instance(instance)
        if violations:
            raise InvalidInstance(violations)
    return instance


def parse_instance(document: str, validate: bool = True) -> Instance:
    """Parse an instance document; violations carry JSON-path locations."""
    return instance_from_doc(_loads(document), validate)


def instance_to_doc(instance: Instance) -> dict:
    doc = topology_to_doc(instance.topology)
    doc["agents"] = list(instance.agents)
    doc["utilities"] = [[format_rational(x) for x in row] for row in instance.utilities]
    doc["dff"] = dff_to_doc(instance.dff)
    return doc


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def serialize_instance(instance: Instance) -> str:
    return dumps(instance_to_doc(instance))


# ---------------------------------------------------------------------------
# Assignments


def assignment_from_doc(doc, instance: Instance) -> Assignment:
    if not isinstance(doc, dict):
        raise InvalidAssignment("an assignment document maps agent names to vertex ids")
    index = {name: i for i, name in enumerate(instance.agents)}
    placement = [None] * instance.n_agents
    owner: dict[int, str] = {}
    for name, v in doc.items():
        if name not in index:
            raise InvalidAssignment(f"unknown agent {name!r}")
        if isinstance(v, bool) or not isinstance(v, int):
            raise InvalidAssignment(f"agent {name!r}: vertex must be an integer, got {v!r}")
        if not 0 <= v < instance.topology.n:
            raise InvalidAssignment(f"agent {name!r}: vertex {v} out of range 0..{instance.topology.n - 1}")
        if v in owner:
            raise InvalidAssignment(f"agent {name!r}: duplicate vertex {v} (already holds {owner[v]!r})")
        owner[v] = name
        placement[index[name]] = v
    missing = [instance.agents[i] for i, v in enumerate(placement) if v is None]
    if missing:
        raise InvalidAssignment(f"agent {missing[0]!r} is not placed")
    return Assignment(placement)


def parse_assignment(document: str, instance: Instance) -> Assignment:
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise DocumentError("$", f"malformed JSON: {exc}") from exc
    return assignment_from_doc(doc, instance)


def assignment_to_doc(assignment: Assignment, instance: Instance) -> dict:
    return assignment.as_mapping(instance)


# ---------------------------------------------------------------------------
# Source problems and generated instances


def _ints(raw, path, minimum=None):
    return tuple(_int(x, f"{path}[{i}]", minimum) for i, x in enumerate(_list(raw, path)))


def source_from_doc(doc):
    _obj(doc, "$")
    path = "$"
    if "source" in doc:
        doc, path = _obj(doc["source"], "$.source"), "$.source"
    kind = _require(doc, "kind", path)
    if kind == "unary-bin-packing":
        return UnaryBinPacking(
            _ints(_require(doc, "items", path), f"{path}.items", 1),
            _int(_require(doc, "bins", path), f"{path}.bins", 1),
            _int(_require(doc, "capacity", path), f"{path}.capacity", 1),
        )
    if kind == "equitable-partition":
        return EquitablePartition(_ints(_require(doc, "items", path), f"{path}.items", 1))
    if kind == "three-partition":
        return ThreePartition(
            _ints(_require(doc, "items", path), f"{path}.items", 1),
            _int(_require(doc, "target", path), f"{path}.target", 1),
        )
    if kind in ("independent-set", "clique"):
        graph = topology_from_doc(_obj(_require(doc, "graph", path), f"{path}.graph"), f"{path}.graph")
        k = _int(_require(doc, "k", path), f"{path}.k")
        return (IndependentSet if kind == "independent-set" else Clique)(graph, k)
    raise DocumentError(f"{path}.kind", f"unknown source problem {kind!r}")


def parse_source(document: str):
    return source_from_doc(_loads(document))


def source_to_doc(src) -> dict:
    doc: dict[str, Any] = {"kind": src.kind}
    if isinstance(src, UnaryBinPacking):
        doc.update(items=list(src.items), bins=src.bins, capacity=src.capacity)
    elif isinstance(src, EquitablePartition):
        doc["items"] = list(src.items)
    elif isinstance(src, ThreePartition):
        doc.update(items=list(src.items), target=src.target)
    else:
        doc.update(graph=topology_to_doc(src.graph), k=src.k)
    return {"source": doc}


def generated_to_doc(gen: GeneratedInstance) -> dict:
    doc = {"instance": instance_to_doc(gen.instance), "gadget": gen.gadget, "metadata": dict(gen.metadata)}
    if gen.source is not None:
        doc["source"] = source_to_doc(gen.source)["source"]
    return doc


def serialize_generated(gen: GeneratedInstance) -> str:
    return dumps(generated_to_doc(gen))
