"""Kernel for Starforest Deletion (delete edges until every component is
a star).

C holds the center candidates: vertices with a pendant (degree-1)
neighbor.  Some optimal solution keeps all of C as star centers, which
justifies deleting center-center edges, stripping all but one center
edge from outsiders, merging C into a single vertex, and capping its
pendant leaves at k+2.  Components of size one or two are stars already
and are dropped for free.
"""

from __future__ import annotations

from dataclasses import dataclass

from emkernel.graph import Graph, VertexSet, connected_components, induced_subgraph
from emkernel.oracle import Decision, Problem, ProblemInstance
from emkernel.recognizers import GraphClass, is_member
from emkernel.trace import KernelOutcome, ReductionTrace, RuleRecord, WorkGraph


def center_candidates(g: Graph) -> VertexSet:
    """Vertices adjacent to at least one degree-1 vertex."""
    return {
        next(iter(g.adj[v])) for v in range(g.n) if g.degree(v) == 1
    }


@dataclass(frozen=True)
class CenterCandidates:
    C: frozenset[int]

    @classmethod
    def of(cls, g: Graph) -> "CenterCandidates":
        return cls(frozenset(center_candidates(g)))


def _work_centers(w: WorkGraph) -> set[int]:
    return {next(iter(w.adj[v])) for v in w.alive if w.degree(v) == 1}


def _cleanup(w: WorkGraph, trace: ReductionTrace | None) -> bool:
    """Remove every connected component with at most two vertices."""
    seen: set[int] = set()
    victims: list[int] = []
    for v in sorted(w.alive):
        if v in seen:
            continue
        comp = [v]
        seen.add(v)
        stack = [v]
        while stack:
            x = stack.pop()
            for u in w.adj[x]:
                if u not in seen:
                    seen.add(u)
                    comp.append(u)
                    stack.append(u)
        if len(comp) <= 2:
            victims.extend(comp)
    if not victims:
        return False
    victims.sort()
    for v in victims:
        w.delete_vertex(v)
    if trace is not None:
        trace.add(RuleRecord("cleanup", "delete-vertices", vertices=tuple(victims)))
    return True


def apply_cleanup_rule(g: Graph) -> tuple[Graph, bool]:
    keep = [v for comp in connected_components(g) if len(comp) > 2 for v in comp]
    if len(keep) == g.n:
        return g, False
    out, _ = induced_subgraph(g, sorted(keep))
    return out, True


def _center_round(
    w: WorkGraph, k: int, trace: ReductionTrace | None
) -> tuple[int, bool, bool]:
    """One round of the center labeling rules; C is computed once.

    (b) every edge inside C is deleted at cost 1; (a) a vertex outside C
    with several C-neighbors keeps only the edge to the smallest one.
    Returns (k', changed, decided_no)."""
    centers = _work_centers(w)
    changed = False
    cc_edges = [
        (u, v)
        for u in sorted(centers)
        for v in sorted(w.adj[u])
        if v > u and v in centers
    ]
    if cc_edges:
        for u, v in cc_edges:
            w.delete_edge(u, v)
        k -= len(cc_edges)
        changed = True
        if trace is not None:
            trace.add(
                RuleRecord(
                    "center-cc-edge",
                    "delete-edges",
                    edges=tuple(cc_edges),
                    k_delta=-len(cc_edges),
                )
            )
        if k < 0:
            return k, True, True
    for v in sorted(w.alive - centers):
        cnbrs = sorted(u for u in w.adj[v] if u in centers)
        if len(cnbrs) < 2:
            continue
        drop = tuple((v, u) for u in cnbrs[1:])
        for _, u in drop:
            w.delete_edge(v, u)
        k -= len(drop)
        changed = True
        if trace is not None:
            trace.add(
                RuleRecord(
                    "center-extra-edge",
                    "delete-edges",
                    edges=drop,
                    k_delta=-len(drop),
                )
            )
        if k < 0:
            return k, True, True
    return k, changed, False


def apply_center_label_rules(
    g: Graph, k: int
) -> tuple[Graph, int, bool] | Decision:
    """Single round of rules (b) then (a) against the input's C; callers
    re-run together with cleanup until nothing changes."""
    w = WorkGraph(g)
    k2, changed, no = _center_round(w, k, None)
    if no:
        return Decision(False, None)
    out, _ = w.to_graph()
    return out, k2, changed


def _merge_and_trim(w: WorkGraph, k: int, trace: ReductionTrace | None) -> bool:
    """Merge all of C into one vertex, then keep at most k+2 pendant
    leaves (smallest ids).  Requires rules 1-2 at fixpoint, which makes C
    independent with pairwise disjoint neighborhoods, so the merge loses
    no edges and costs nothing."""
    centers = _work_centers(w)
    changed = False
    if len(centers) >= 2:
        for v in w.alive - centers:
            assert len(w.adj[v] & centers) <= 1, "center rules not at fixpoint"
        _, mapping = w.merge(centers)
        changed = True
        if trace is not None:
            trace.add(
                RuleRecord(
                    "center-merge",
                    "merge",
                    vertices=tuple(sorted(centers)),
                    remap=tuple(sorted(mapping.items())),
                )
            )
    leaves = sorted(v for v in w.alive if w.degree(v) == 1)
    if len(leaves) > k + 2:
        victims = tuple(leaves[k + 2 :])
        for v in victims:
            w.delete_vertex(v)
        changed = True
        if trace is not None:
            trace.add(RuleRecord("leaf-trim", "delete-vertices", vertices=victims))
    return changed


def apply_center_reduction(g: Graph, k: int) -> tuple[Graph, bool]:
    w = WorkGraph(g)
    changed = _merge_and_trim(w, k, None)
    out, _ = w.to_graph()
    return (out if changed else g), changed


def kernelize_star(g: Graph, k: int) -> KernelOutcome:
    trace = ReductionTrace()

    def decided(answer: bool, rule: str) -> KernelOutcome:
        trace.add(RuleRecord(rule, detail="yes" if answer else "no"))
        return KernelOutcome.decided(answer, trace)

    if k < 0:
        return decided(False, "trivial")
    if is_member(GraphClass.STARFOREST, g):
        return decided(True, "member")

    w = WorkGraph(g)
    cur_k = k
    changed = True
    while changed:
        changed = _cleanup(w, trace)
        cur_k, ch2, no = _center_round(w, cur_k, trace)
        if no:
            return decided(False, "center-negative")
        if ch2:
            changed = True
            continue  # cleanup must settle again before merging
        changed |= _merge_and_trim(w, cur_k, trace)

    if len(w.alive) > 4 * cur_k + 3:
        return decided(False, "size-rejection")

    out, remap = w.to_graph()
    trace.add(RuleRecord("compact", "compact", remap=tuple(sorted(remap.items()))))
    return KernelOutcome.reduced_to(
        ProblemInstance(Problem.STAR_DEL, out, cur_k), trace
    )
