"""Reduction traces, kernel outcomes, and the mutable working graph.

Every kernel reports its work as an ordered list of rule records.  A
record either notes a rule firing (label moves, decisions) or describes
a graph mutation (vertex deletions, edge edits, merges, fresh vertices,
final id compaction).  Records speak the id space of the working graph
at the time they are emitted: vertices keep their original ids until the
single terminal "compact" record maps the survivors to dense ids.

`replay_trace` re-executes the mutation records against the original
graph, which is how tests certify that a trace fully explains a kernel's
output.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from emkernel.graph import Edge, Graph
from emkernel.oracle import ProblemInstance

# record actions understood by replay
ACTIONS = (
    "note",
    "delete-vertices",
    "delete-edges",
    "add-edges",
    "add-vertices",
    "merge",
    "compact",
)


@dataclass(frozen=True)
class RuleRecord:
    rule: str
    action: str = "note"
    vertices: tuple[int, ...] = ()
    edges: tuple[Edge, ...] = ()
    k_delta: int = 0
    # old-id -> new-id pairs, only on "compact" and "merge" records
    remap: tuple[tuple[int, int], ...] | None = None
    detail: str = ""

    def __post_init__(self):
        if self.action not in ACTIONS:
            raise ValueError(f"unknown trace action {self.action!r}")

    def to_jsonable(self) -> dict:
        out: dict = {"rule": self.rule, "action": self.action}
        if self.vertices:
            out["vertices"] = list(self.vertices)
        if self.edges:
            out["edges"] = [list(e) for e in self.edges]
        if self.k_delta:
            out["k_delta"] = self.k_delta
        if self.remap is not None:
            out["remap"] = [list(p) for p in self.remap]
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class ReductionTrace:
    records: list[RuleRecord] = field(default_factory=list)

    def add(self, record: RuleRecord) -> None:
        self.records.append(record)

    def firing_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for r in self.records:
            counts[r.rule] = counts.get(r.rule, 0) + 1
        return counts

    def to_jsonable(self) -> list[dict]:
        return [r.to_jsonable() for r in self.records]


@dataclass(frozen=True)
class KernelOutcome:
    """Either a final answer or a reduced instance, plus the trace."""

    answer: bool | None
    reduced: ProblemInstance | None
    trace: ReductionTrace

    def __post_init__(self):
        if (self.answer is None) == (self.reduced is None):
            raise ValueError("outcome must be exactly one of decided/reduced")

    @property
    def is_decided(self) -> bool:
        return self.answer is not None

    @classmethod
    def decided(cls, answer: bool, trace: ReductionTrace) -> "KernelOutcome":
        return cls(answer, None, trace)

    @classmethod
    def reduced_to(cls, inst: ProblemInstance, trace: ReductionTrace) -> "KernelOutcome":
        return cls(None, inst, trace)


class WorkGraph:
    """Mutable adjacency over original ids with an alive set.

    Kernels edit this in place and only pay for one id compaction at the
    end.  Fresh vertices (used by the split kernel's unlabeling) get ids
    past the original range.
    """

    def __init__(self, g: Graph):
        self.adj: list[set[int]] = g.copy_adjacency()
        self.alive: set[int] = set(range(g.n))
        self.m = g.m

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def delete_vertex(self, v: int) -> int:
        """Remove v and its incident edges; returns the degree it had."""
        assert v in self.alive
        d = len(self.adj[v])
        for u in self.adj[v]:
            self.adj[u].remove(v)
        self.adj[v] = set()
        self.alive.remove(v)
        self.m -= d
        return d

    def delete_edge(self, u: int, v: int) -> None:
        self.adj[u].remove(v)
        self.adj[v].remove(u)
        self.m -= 1

    def add_edge(self, u: int, v: int) -> None:
        assert v not in self.adj[u]
        self.adj[u].add(v)
        self.adj[v].add(u)
        self.m += 1

    def add_vertex(self) -> int:
        v = len(self.adj)
        self.adj.append(set())
        self.alive.add(v)
        return v

    def merge(self, s: set[int]) -> tuple[int, dict[int, int]]:
        """Identify the independent set s into min(s); see graph-core merge.

        Returns (kept vertex, old-id -> kept-id mapping over s).  Caller
        guarantees s independent and no outside vertex with two neighbors
        in s, so no loops or parallel edges can arise.
        """
        rep = min(s)
        union: set[int] = set()
        for v in s:
            union |= self.adj[v]
        assert not (union & s), "merge set not independent"
        removed_edges = sum(len(self.adj[v]) for v in s)
        for v in s:
            if v == rep:
                continue
            for u in self.adj[v]:
                self.adj[u].remove(v)
            self.adj[v] = set()
            self.alive.remove(v)
        for u in self.adj[rep]:
            self.adj[u].remove(rep)
        self.adj[rep] = union
        for u in union:
            self.adj[u].add(rep)
        self.m -= removed_edges - len(union)
        return rep, {v: rep for v in s}

    def to_graph(self) -> tuple[Graph, dict[int, int]]:
        """Compact the alive vertices to dense ids."""
        kept = sorted(self.alive)
        new_id = {old: i for i, old in enumerate(kept)}
        adj: list[set[int]] = [set() for _ in kept]
        for old in kept:
            i = new_id[old]
            adj[i] = {new_id[u] for u in self.adj[old]}
        return Graph(len(kept), adj, self.m), new_id


def replay_trace(g: Graph, k: int, trace: ReductionTrace) -> tuple[Graph, int]:
    """Re-execute the trace's mutation records against (g, k).

    Returns the resulting dense graph and budget; for a Reduced outcome
    this must equal the reduced instance.
    """
    w = WorkGraph(g)
    cur_k = k
    compacted: Graph | None = None
    for rec in trace.records:
        cur_k += rec.k_delta
        if rec.action == "note":
            continue
        if compacted is not None:
            raise ValueError("mutation record after compact")
        if rec.action == "delete-vertices":
            for v in rec.vertices:
                w.delete_vertex(v)
        elif rec.action == "delete-edges":
            for u, v in rec.edges:
                w.delete_edge(u, v)
        elif rec.action == "add-edges":
            for u, v in rec.edges:
                w.add_edge(u, v)
        elif rec.action == "add-vertices":
            fresh = [w.add_vertex() for _ in rec.vertices]
            if tuple(fresh) != rec.vertices:
                raise ValueError("fresh vertex ids diverge from trace")
            for u, v in rec.edges:
                w.add_edge(u, v)
        elif rec.action == "merge":
            rep, mapping = w.merge(set(rec.vertices))
            if rec.remap is not None and dict(rec.remap) != mapping:
                raise ValueError("merge mapping diverges from trace")
        elif rec.action == "compact":
            compacted, new_id = w.to_graph()
            if rec.remap is not None and dict(rec.remap) != new_id:
                raise ValueError("compaction mapping diverges from trace")
    if compacted is None:
        compacted, _ = w.to_graph()
    return compacted, cur_k
