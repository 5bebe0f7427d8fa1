"""Command-line front end.

Subcommands:
  analyze   full pipeline (validate -> regularize -> seed -> saturate -> report)
  examples  write a builtin problem file, or list them
  betti     Betti numbers of the problem's complex over one field
  fixed     Betti numbers of a fixed subcomplex of the regularized action
  cupfind   zero-divisor cup-length certificate for the problem's complex

Exit codes: 0 success, 2 parse/validation error, 3 inconsistent fact base,
4 enumeration cap exceeded.
"""

from __future__ import annotations

import argparse
import os
import sys

from eqtc.bounds import EngineConfig, analyze_problem, report
from eqtc.complex_core import ComplexError, from_maximal_simplices
from eqtc.group_action import (
    ActionError,
    CapExceeded,
    GroupError,
    fixed_subcomplex,
    group_closure,
    regularize,
    subgroups,
    validate_action,
)
from eqtc.homology import betti_numbers, parse_field
from eqtc.linalg import FieldError
from eqtc.problems import (
    Problem,
    ProblemFormatError,
    builtin_examples,
    dumps_problem,
    load_problem,
)
from eqtc.ring import combined_zero_divisors, kunneth_tensor_ring, nilpotency_lower_bound, ring_structure

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_INCONSISTENT = 3
EXIT_CAP = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eqtc",
        description="bounds for LS-category and (equivariant) topological complexity "
        "of finite simplicial complexes with finite group actions",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="run the full bounds pipeline on a problem file")
    analyze.add_argument("path")
    _add_engine_flags(analyze)
    analyze.add_argument("--format", choices=("text", "json", "structured"), default="text")
    analyze.add_argument("--output", help="also write the JSON report to this file")

    examples = sub.add_parser("examples", help="emit a builtin example problem file")
    examples.add_argument("name", nargs="?")
    examples.add_argument("--list", action="store_true", help="list builtin example names")
    examples.add_argument("--output", help="write the file here instead of stdout")

    betti = sub.add_parser("betti", help="Betti numbers of the problem's complex")
    betti.add_argument("path")
    betti.add_argument("--field", default="Q")

    fixed = sub.add_parser("fixed", help="Betti numbers of a fixed subcomplex")
    fixed.add_argument("path")
    fixed.add_argument(
        "--subgroup",
        default="full",
        help="'full', 'trivial', or a subgroup-class index (sorted by order)",
    )
    fixed.add_argument("--field", default="Q")

    cupfind = sub.add_parser("cupfind", help="zero-divisor cup-length certificate")
    cupfind.add_argument("path")
    cupfind.add_argument("--field", default="Q")
    cupfind.add_argument("--depth-cap", type=int, default=None)
    return parser


def _add_engine_flags(cmd: argparse.ArgumentParser) -> None:
    cmd.add_argument("--fields", default=None, help="comma-separated sweep, e.g. F2,F3,Q")
    cmd.add_argument("--depth-cap", type=int, default=None)
    cmd.add_argument("--seed", type=int, default=None)
    cmd.add_argument("--subgroups", choices=("conjugacy", "all"), default=None)


def _config(problem: Problem, args: argparse.Namespace) -> EngineConfig:
    fields = tuple(args.fields.split(",")) if args.fields else None
    # the one permitted environment override: the group-order cap
    env_cap = os.environ.get("EQTC_GROUP_ORDER_CAP")
    return EngineConfig.from_problem(
        problem,
        fields=fields,
        depth_cap=args.depth_cap,
        seed=args.seed,
        subgroup_mode=args.subgroups,
        group_order_cap=int(env_cap) if env_cap else None,
    )


def _load(path: str) -> Problem:
    return load_problem(path)


def _require_complex(problem: Problem) -> Problem:
    if problem.is_associated_space:
        raise ProblemFormatError(
            "this command needs a concrete complex; the file declares an associated space"
        )
    return problem


def _regularized(problem: Problem):
    K = from_maximal_simplices(
        problem.vertex_count, [list(s) for s in problem.maximal_simplices]
    )
    G = group_closure(K.vertex_count, [list(g) for g in problem.group_generators])
    return regularize(validate_action(K, G))


def cmd_analyze(args: argparse.Namespace, out) -> int:
    problem = _load(args.path)
    config = _config(problem, args)
    fb = analyze_problem(problem, config)
    out.write(report(fb, args.format))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(report(fb, "json"))
    return EXIT_INCONSISTENT if fb.inconsistencies else EXIT_OK


def cmd_examples(args: argparse.Namespace, out) -> int:
    examples = builtin_examples()
    if args.list or args.name is None:
        for name in sorted(examples):
            out.write(name + "\n")
        return EXIT_OK
    if args.name not in examples:
        known = ", ".join(sorted(examples))
        raise ProblemFormatError(f"unknown example {args.name!r}; available: {known}")
    text = dumps_problem(examples[args.name])
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    return EXIT_OK


def cmd_betti(args: argparse.Namespace, out) -> int:
    problem = _require_complex(_load(args.path))
    K = from_maximal_simplices(
        problem.vertex_count, [list(s) for s in problem.maximal_simplices]
    )
    values = betti_numbers(K, parse_field(args.field))
    out.write(" ".join(map(str, values)) + "\n")
    return EXIT_OK


def cmd_fixed(args: argparse.Namespace, out) -> int:
    problem = _require_complex(_load(args.path))
    R = _regularized(problem)
    classes = subgroups(R.group, "up_to_conjugacy")
    if args.subgroup == "full":
        H = classes[-1]
    elif args.subgroup == "trivial":
        H = classes[0]
    else:
        try:
            pos = int(args.subgroup)
            if pos < 0:
                raise IndexError
            H = classes[pos]
        except (ValueError, IndexError):
            raise ProblemFormatError(
                f"--subgroup must be 'full', 'trivial', or 0..{len(classes) - 1}"
            ) from None
    fixed, _ = fixed_subcomplex(R, H)
    if fixed.is_empty:
        out.write("empty\n")
    else:
        values = betti_numbers(fixed, parse_field(args.field))
        out.write(" ".join(map(str, values)) + "\n")
    return EXIT_OK


def cmd_cupfind(args: argparse.Namespace, out) -> int:
    problem = _require_complex(_load(args.path))
    K = from_maximal_simplices(
        problem.vertex_count, [list(s) for s in problem.maximal_simplices]
    )
    field = parse_field(args.field)
    cap = args.depth_cap if args.depth_cap is not None else max(1, 2 * K.dim)
    ring = ring_structure(K, field)
    tensor = kunneth_tensor_ring(ring)
    cert, _ = nilpotency_lower_bound(tensor, combined_zero_divisors(tensor), cap)
    factors = ", ".join(cert.factor_labels)
    out.write(f"zero-divisor length {cert.length}, certificate [{factors}]\n")
    return EXIT_OK


_COMMANDS = {
    "analyze": cmd_analyze,
    "examples": cmd_examples,
    "betti": cmd_betti,
    "fixed": cmd_fixed,
    "cupfind": cmd_cupfind,
}


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args, out)
    except CapExceeded as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CAP
    except (
        ProblemFormatError,
        ComplexError,
        ActionError,
        GroupError,
        FieldError,
        FileNotFoundError,
    ) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INVALID


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
