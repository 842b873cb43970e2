"""Command-line front end: graph file I/O, command dispatch, reports.

Graph file format: optional '#' comment lines, then a header line "n m",
then exactly m lines "u v" with 0 <= u,v < n, u != v, no duplicates.

Exit codes: 0 success (any outcome), 2 usage error, 3 input format
error, 4 oracle size refusal.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from emkernel.graph import Graph, build_graph
from emkernel.harness import (
    PlantSpec,
    exhaustive_verify,
    generate_member,
    kernelize_problem,
    plant_instance,
    sampled_verify,
)
from emkernel.oracle import OracleSizeError, Problem, ProblemInstance, solve_exact
from emkernel.recognizers import GraphClass

_PROBLEM_TAGS = {p.value: p for p in Problem}
_PROBLEM_TAGS["star-edit"] = Problem.STAR_DEL  # editing never inserts here
_CLASS_TAGS = {c.value: c for c in GraphClass}


class GraphFormatError(Exception):
    def __init__(self, line_no: int, msg: str):
        super().__init__(f"line {line_no}: {msg}")
        self.line_no = line_no


def parse_graph_file(text: str) -> Graph:
    graph, _ = parse_graph_file_with_meta(text)
    return graph


def parse_graph_file_with_meta(text: str) -> tuple[Graph, dict[str, str]]:
    """Parse the format above; '# key: value' comments come back as
    metadata (the generate command records problem, k, and seed there)."""
    meta: dict[str, str] = {}
    header: tuple[int, int] | None = None
    edges = []
    seen = set()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if ":" in body:
                key, _, value = body.partition(":")
                meta[key.strip()] = value.strip()
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphFormatError(line_no, f"expected two integers, got {raw!r}")
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(line_no, f"expected two integers, got {raw!r}")
        if header is None:
            if a < 0 or b < 0:
                raise GraphFormatError(line_no, "header needs n >= 0 and m >= 0")
            header = (a, b)
            continue
        n = header[0]
        if a == b:
            raise GraphFormatError(line_no, f"self-loop at vertex {a}")
        if not (0 <= a < n and 0 <= b < n):
            raise GraphFormatError(line_no, f"vertex id out of range [0, {n})")
        e = (a, b) if a < b else (b, a)
        if e in seen:
            raise GraphFormatError(line_no, f"duplicate edge {e[0]} {e[1]}")
        seen.add(e)
        edges.append(e)
    if header is None:
        raise GraphFormatError(1, "missing header line 'n m'")
    if len(edges) != header[1]:
        raise GraphFormatError(
            1, f"header promises m={header[1]} edges, file has {len(edges)}"
        )
    return build_graph(header[0], edges), meta


def write_graph_file(g: Graph, *, comments: tuple[str, ...] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(f"{g.n} {g.m}")
    lines.extend(f"{u} {v}" for u, v in sorted(g.edges()))
    return "\n".join(lines) + "\n"


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write_output(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _parse_problem(tag: str, parser: argparse.ArgumentParser) -> Problem:
    problem = _PROBLEM_TAGS.get(tag)
    if problem is None:
        parser.error(
            f"unknown problem {tag!r} (choose from {', '.join(sorted(_PROBLEM_TAGS))})"
        )
    return problem


def _cmd_kernelize(args, parser) -> int:
    problem = _parse_problem(args.problem, parser)
    graph, meta = parse_graph_file_with_meta(_read_input(args.input))
    started = time.perf_counter()
    outcome = kernelize_problem(problem, graph, args.k)
    elapsed = round((time.perf_counter() - started) * 1000)
    if outcome.is_decided:
        outcome_tag = "yes" if outcome.answer else "no"
        kernel_stats = None
    else:
        inst = outcome.reduced
        outcome_tag = "reduced"
        kernel_stats = {"n": inst.graph.n, "m": inst.graph.m, "k": inst.k}
        if args.output:
            _write_output(
                args.output,
                write_graph_file(
                    inst.graph, comments=(f"problem: {problem.value}", f"k: {inst.k}")
                ),
            )
    report = {
        "problem": problem.value,
        "input": {"n": graph.n, "m": graph.m, "k": args.k},
        "outcome": outcome_tag,
        "kernel": kernel_stats,
        "rule_firings": dict(sorted(outcome.trace.firing_counts().items())),
        "elapsed_ms": elapsed if args.timing else None,
        "seed": int(meta["seed"]) if "seed" in meta else None,
    }
    if args.report:
        _write_output(args.report, _json_text(report))
    if args.trace:
        _write_output(args.trace, _json_text(outcome.trace.to_jsonable()))
    claimed = {args.report, args.trace}
    if kernel_stats is not None:
        claimed.add(args.output)
    if "-" in claimed:
        return 0  # stdout carries a machine payload, keep it clean
    if kernel_stats is None:
        print(f"outcome: {outcome_tag}")
    else:
        print(
            "outcome: reduced "
            f"(n={kernel_stats['n']}, m={kernel_stats['m']}, k={kernel_stats['k']})"
        )
    return 0


def _cmd_solve(args, parser) -> int:
    problem = _parse_problem(args.problem, parser)
    graph, _ = parse_graph_file_with_meta(_read_input(args.input))
    decision = solve_exact(ProblemInstance(problem, graph, args.k))
    print("YES" if decision.answer else "NO")
    if args.witness and decision.answer:
        edits = sorted(decision.witness or ())
        _write_output(args.witness, "".join(f"{u} {v}\n" for u, v in edits))
    return 0


def _cmd_generate(args, parser) -> int:
    if args.n < 1:
        parser.error("--n must be at least 1")
    if args.perturb < 0:
        parser.error("--perturb must be at least 0")
    if (args.problem is None) == (args.graph_class is None):
        parser.error("give exactly one of --problem or --class")
    if args.graph_class is not None:
        if args.perturb:
            parser.error("--perturb only applies with --problem")
        cls = _CLASS_TAGS.get(args.graph_class)
        if cls is None:
            parser.error(
                f"unknown class {args.graph_class!r} "
                f"(choose from {', '.join(sorted(_CLASS_TAGS))})"
            )
        graph = generate_member(cls, args.n, args.seed)
        comments = (f"class: {cls.value}", f"seed: {args.seed}")
    else:
        problem = _parse_problem(args.problem, parser)
        inst = plant_instance(PlantSpec(problem, args.n, args.perturb, args.seed))
        graph = inst.graph
        comments = (
            f"problem: {problem.value}",
            f"k: {inst.k}",
            f"seed: {args.seed}",
        )
    _write_output(args.output, write_graph_file(graph, comments=comments))
    return 0


def _cmd_verify(args, parser) -> int:
    problem = _parse_problem(args.problem, parser)
    if args.samples is None:
        report = exhaustive_verify(problem, args.n_max, args.k_max)
    else:
        report = sampled_verify(problem, args.n_max, args.k_max, args.samples, args.seed)
    print(f"instances: {report.instances}")
    print(f"mismatches: {len(report.mismatches)}")
    for mm in report.mismatches:
        print(f"  {mm.stage} n={mm.n} k={mm.k} edges={sorted(mm.edges)} {mm.detail}")
    if args.report:
        _write_output(args.report, _json_text(report.to_jsonable()))
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="emkernel",
        description="Kernelization toolkit for edge-modification problems",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("kernelize", help="reduce an instance, report the outcome")
    p.add_argument("--problem", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--input", required=True, help="graph file, '-' for stdin")
    p.add_argument("--output", help="write the kernel graph here when reduced")
    p.add_argument("--report", help="write a JSON run report here, '-' for stdout")
    p.add_argument("--trace", help="write the reduction trace as JSON here")
    p.add_argument(
        "--timing",
        action="store_true",
        help="fill elapsed_ms in the report (off by default so reports are "
        "byte-identical across runs)",
    )

    p = sub.add_parser("solve", help="decide an instance exactly")
    p.add_argument("--problem", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--witness", help="write a witness edit set here on YES")

    p = sub.add_parser("generate", help="write a class member or planted instance")
    p.add_argument("--problem")
    p.add_argument("--class", dest="graph_class")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--perturb", type=int, default=0, help="edit distance to plant")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", default="-")

    p = sub.add_parser("verify", help="compare kernels against the reference solver")
    p.add_argument("--problem", required=True)
    p.add_argument("--n-max", type=int, default=5)
    p.add_argument("--k-max", type=int, default=3)
    p.add_argument("--samples", type=int, help="sample instead of sweeping")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--report", help="write the verification report as JSON")

    return parser


_HANDLERS = {
    "kernelize": _cmd_kernelize,
    "solve": _cmd_solve,
    "generate": _cmd_generate,
    "verify": _cmd_verify,
}


def run_command(argv: list[str]) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args, parser)
    except GraphFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OracleSizeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


def main(argv: list[str] | None = None) -> int:
    return run_command(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
