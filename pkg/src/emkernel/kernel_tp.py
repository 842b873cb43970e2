"""Kernel for Trivially Perfect Addition (add edges to kill every induced
P4 and C4).

Each obstruction has two "diagonals", the two non-adjacent vertex pairs
at distance two inside it.  A non-edge lying on more than k obstruction
diagonals must be added (the other diagonals alone would exhaust the
budget), which is the only edge-addition rule.  Afterwards every vertex
outside some obstruction is irrelevant and gets deleted, and anything
still larger than 2k^2 + 2k cannot be fixed.

Obstructions are enumerated through "incomparable" edges: an edge (x,y)
with A = N(x)-N[y] and B = N(y)-N[x] both nonempty yields, for each a in
A and b in B, the P4 a-x-y-b (if ab is a non-edge) or the C4 x-a-b-y
(if ab is an edge).  Every P4 arises once this way (from its middle
edge) and every C4 four times (once per edge), which keeps the counting
proportional to the obstructions present instead of n^4.
"""

from __future__ import annotations

from dataclasses import dataclass

from emkernel.graph import Edge, Graph, non_edges_within
from emkernel.oracle import Decision, Problem, ProblemInstance
from emkernel.recognizers import GraphClass, is_member
from emkernel.trace import KernelOutcome, ReductionTrace, RuleRecord, WorkGraph


@dataclass(frozen=True)
class DiagonalReport:
    pair: Edge
    count: int


def diagonal_count(g: Graph, u: int, v: int) -> int:
    """Number of obstructions with the non-edge (u,v) as a diagonal.

    Counts unordered pairs {a,b}, disjoint from {u,v} and with (a,b) not
    an edge, where {u,a,v,b} induces the C4 u-a-v-b or one of the paths
    u-a-v-b / v-a-u-b.  In all cases a is a common neighbor and b is
    adjacent to neither a nor both of u,v."""
    if u == v:
        raise ValueError("diagonal endpoints must differ")
    if g.has_edge(u, v):
        raise ValueError(f"({u},{v}) is an edge, not a diagonal")
    common = g.adj[u] & g.adj[v]
    c4 = non_edges_within(g, common)
    sym = g.adj[u] ^ g.adj[v]
    p4 = sum(len(sym) - len(sym & g.adj[a]) for a in common)
    return c4 + p4


def _diagonal_counts(adj: list[set[int]], edges: list[Edge]) -> dict[Edge, int]:
    """Counts for every non-edge on at least one obstruction diagonal."""
    p4c: dict[Edge, int] = {}
    c4c: dict[Edge, int] = {}
    for x, y in edges:
        a_side = adj[x] - adj[y]
        a_side.discard(y)
        b_side = adj[y] - adj[x]
        b_side.discard(x)
        if not a_side or not b_side:
            continue
        for a in a_side:
            na = adj[a]
            key_ay = (a, y) if a < y else (y, a)
            for b in b_side:
                key_xb = (x, b) if x < b else (b, x)
                bucket = c4c if b in na else p4c
                bucket[key_ay] = bucket.get(key_ay, 0) + 1
                bucket[key_xb] = bucket.get(key_xb, 0) + 1
    counts = dict(p4c)
    for pair, c in c4c.items():
        assert c % 4 == 0
        counts[pair] = counts.get(pair, 0) + c // 4
    return counts


def _work_edges(w: WorkGraph) -> list[Edge]:
    return [(u, v) for u in sorted(w.alive) for v in sorted(w.adj[u]) if v > u]


def apply_diagonal_rule(g: Graph, k: int) -> tuple[Graph, int, bool] | Decision:
    """Add every non-edge whose diagonal count exceeds the current k,
    smallest pair first, recounting after each addition.  Exhausting the
    budget decides no."""
    w = WorkGraph(g)
    changed = False
    while True:
        counts = _diagonal_counts(w.adj, _work_edges(w))
        pick = min((p for p, c in counts.items() if c >= k + 1), default=None)
        if pick is None:
            out, _ = w.to_graph()
            return out, k, changed
        w.add_edge(*pick)
        k -= 1
        changed = True
        if k < 0:
            return Decision(False, None)


def _modulator_from(adj: list[set[int]], edges: list[Edge]) -> set[int]:
    found: set[int] = set()
    for x, y in edges:
        a_side = adj[x] - adj[y]
        a_side.discard(y)
        b_side = adj[y] - adj[x]
        b_side.discard(x)
        if a_side and b_side:
            found.add(x)
            found.add(y)
            found |= a_side
            found |= b_side
    return found


def compute_modulator(g: Graph) -> set[int]:
    """All vertices lying in at least one induced P4 or C4.

    Every obstruction is witnessed by its middle edge (x,y): the private
    neighborhoods A, B are exactly the vertices completing it to a P4 or
    C4, so the union over such edges of {x,y} ∪ A ∪ B is the whole set."""
    return _modulator_from(g.adj, list(g.edges()))


def kernelize_tp(g: Graph, k: int) -> KernelOutcome:
    trace = ReductionTrace()

    def decided(answer: bool, rule: str) -> KernelOutcome:
        trace.add(RuleRecord(rule, detail="yes" if answer else "no"))
        return KernelOutcome.decided(answer, trace)

    if k < 0:
        return decided(False, "trivial")
    if is_member(GraphClass.TRIVIALLY_PERFECT, g):
        return decided(True, "member")

    w = WorkGraph(g)
    cur_k = k
    while True:
        counts = _diagonal_counts(w.adj, _work_edges(w))
        pick = min((p for p, c in counts.items() if c >= cur_k + 1), default=None)
        if pick is None:
            break
        w.add_edge(*pick)
        cur_k -= 1
        trace.add(RuleRecord("diagonal", "add-edges", edges=(pick,), k_delta=-1))
        if cur_k < 0:
            return decided(False, "diagonal")

    keep = _modulator_from(w.adj, _work_edges(w))
    victims = tuple(v for v in sorted(w.alive) if v not in keep)
    if victims:
        for v in victims:
            w.delete_vertex(v)
        trace.add(RuleRecord("modulator", "delete-vertices", vertices=victims))

    if len(keep) > 2 * cur_k * cur_k + 2 * cur_k:
        return decided(False, "size-rejection")
    if not keep:
        return decided(True, "modulator-empty")

    out, remap = w.to_graph()
    trace.add(RuleRecord("compact", "compact", remap=tuple(sorted(remap.items()))))
    return KernelOutcome.reduced_to(ProblemInstance(Problem.TP_ADD, out, cur_k), trace)
