"""Command-line entry point.

Exit status 0 means the run completed (the yes/no answer is in stdout),
2 means bad input, 3 means an oracle budget ran out or a generator
parameter was degenerate.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import reductions
from .errors import DegenerateParameter, OracleBudgetExceeded, StructureMismatch, TDGError
from .model import NO_ARCS, enmity_structure, is_individually_rational
from .serialization import (
    assignment_to_doc,
    format_rational,
    instance_from_doc,
    parse_assignment,
    parse_dff_spec,
    parse_rational,
    parse_source,
    serialize_generated,
    source_from_doc,
    _loads,
)
from .solvers import (
    solve_auto,
    solve_brute_force,
    solve_path_instar,
    solve_single_source,
)

EXIT_INPUT = 2
EXIT_BUDGET = 3

FAMILIES = {
    "unary-bin-packing": reductions.UnaryBinPacking,
    "equitable-partition": reductions.EquitablePartition,
    "three-partition": reductions.ThreePartition,
    "independent-set": reductions.IndependentSet,
    "clique": reductions.Clique,
}


def _read(path):
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def load_instance(path):
    """Read an instance document, or the instance inside a generated document."""
    doc = _loads(_read(path))
    if isinstance(doc, dict) and "instance" in doc and "vertices" not in doc:
        doc = doc["instance"]
    return instance_from_doc(doc)


def _emit(obj):
    sys.stdout.write(json.dumps(obj) + "\n")


def _center(instance, tails: bool):
    arcs = enmity_structure(instance).arcs
    ends = {i if tails else j for i, j in arcs}
    if len(ends) > 1:
        side = "leave" if tails else "enter"
        raise StructureMismatch(f"enmity arcs {side} {len(ends)} different agents")
    return ends.pop() if ends else 0


def cmd_solve(args):
    instance = load_instance(args.instance)
    if args.algorithm == "auto":
        result = solve_auto(instance, threads=args.threads)
    elif args.algorithm == "brute":
        result = solve_brute_force(instance, threads=args.threads)
    elif args.algorithm == "single-source":
        result = solve_single_source(instance, _center(instance, tails=True))
    else:
        result = solve_path_instar(instance, _center(instance, tails=False))
    out = {"answer": result.answer_text}
    if args.witness and result.witness is not None:
        out["witness"] = assignment_to_doc(result.witness, instance)
    out["algorithm"] = result.algorithm
    out["nodes"] = result.nodes_explored
    _emit(out)


def cmd_check(args):
    instance = load_instance(args.instance)
    assignment = parse_assignment(_read(args.assignment), instance)
    report = is_individually_rational(instance, assignment)
    _emit({
        "utilities": {name: format_rational(u) for name, u in zip(instance.agents, report.utilities)},
        "individually_rational": report.individually_rational,
    })


def cmd_classify(args):
    instance = load_instance(args.instance)
    structure = enmity_structure(instance)
    topology = instance.topology
    _emit({
        "classification": structure.kind,
        "center": None if structure.center is None else instance.agents[structure.center],
        "arcs": structure.arc_count,
        "is_path": topology.is_path(),
        "components": [
            {"vertices": list(comp), "diameter": d}
            for comp, d in zip(topology.components, topology.component_diameters())
        ],
    })


def cmd_generate(args):
    doc = _loads(_read(args.source))
    src = source_from_doc(doc)
    expected = FAMILIES[args.family]
    if not isinstance(src, expected):
        raise reductions.GeneratorPrecondition(f"source document describes {src.kind!r}, not {args.family!r}")
    dff = parse_dff_spec(args.dff) if args.dff else None
    beta = parse_rational(args.beta, "--beta")
    gen = reductions.generate(src, dff, variant=args.variant, beta=beta, waive=args.waive)
    text = serialize_generated(gen)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_decide(args):
    src = parse_source(_read(args.source))
    answer, certificate = reductions.decide_source(src, budget=args.budget)
    out = {"answer": "yes" if answer else "no"}
    if certificate is not None:
        out["certificate"] = json.loads(json.dumps(certificate))
    _emit(out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="irtdg", description="Individual rationality in topological distance games")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="decide whether an individually rational assignment exists")
    p.add_argument("instance")
    p.add_argument("--algorithm", choices=["auto", "brute", "single-source", "path-instar"], default="auto")
    p.add_argument("--witness", action="store_true", help="print the assignment found")
    p.add_argument("--threads", type=int, default=1, help="worker processes for the brute-force search")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("check", help="evaluate a given assignment")
    p.add_argument("instance")
    p.add_argument("assignment")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("classify", help="report enmity structure and topology facts")
    p.add_argument("instance")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("generate", help="build a reduction gadget from a source problem")
    p.add_argument("family", choices=sorted(FAMILIES))
    p.add_argument("source")
    p.add_argument("--beta", default="1")
    p.add_argument("--dff", help="reciprocal | exponential:B | table:v1,v2,... | bounded:C:v1,v2,...")
    p.add_argument("--variant", choices=["bipartite", "instar", "path"], default="bipartite")
    p.add_argument("--waive", action="store_true", help="accept equitable-partition inputs outside the strict preconditions")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("decide", help="solve a source problem exhaustively")
    p.add_argument("source")
    p.add_argument("--budget", type=int, default=reductions.DEFAULT_BUDGET)
    p.set_defaults(func=cmd_decide)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (OracleBudgetExceeded, DegenerateParameter) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (TDGError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return 0


if __name__ == "__main__":
    sys.exit(main())
