"""Kernel for Clique+IS Deletion (delete edges so that the non-isolated
vertices form a clique).

Three rules, applied in order with restarts:

1. low-degree: a vertex with d(v) < sqrt(2(m-k)) - 1 cannot sit in any
   clique large enough to be worth keeping, so it loses all its edges;
   delete it and pay d(v).
2. log-degree: a vertex of degree at most 2*log2(k) either carries some
   clique S in N[v] with C(|S|,2) >= m-k, or it can be deleted the same
   way.  The candidate test is an exact small clique search.
3. high-degree: when the minimum degree reaches k/(2*log2(k)) the whole
   instance is decided exactly through a minimum vertex cover of the
   complement, searched by bounded branching with budget 4*log2(k).

All log/sqrt thresholds are evaluated in exact integer arithmetic.  The
rejection bound 2k/log2(k)+1 only applies for k above the configured
threshold (default 257).
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from math import isqrt

from emkernel.graph import Graph
from emkernel.oracle import (
    Decision,
    Problem,
    ProblemInstance,
    clique_of_size_exists,
    solve_exact,
)
from emkernel.recognizers import GraphClass, is_member
from emkernel.trace import KernelOutcome, ReductionTrace, RuleRecord, WorkGraph


@dataclass(frozen=True)
class CliqueISConfig:
    log_base: int = 2  # fixed; every threshold formula is a base-2 expression
    large_k_threshold: int = 257
    enable_size_rejection: bool = True
    small_k_solver_limit: int = 2048

    def __post_init__(self):
        if self.log_base != 2:
            raise ValueError("only log base 2 is supported")
        if self.large_k_threshold < 2:
            raise ValueError("large_k_threshold must be at least 2")


DEFAULT_CONFIG = CliqueISConfig()


def _cmp_weighted_log(a: int, k: int, c: int) -> int:
    """Sign of a*log2(k) - c, exact.  Requires k >= 2, a >= 0."""
    x = a * math.log2(k)
    if x > c + 0.5:
        return 1
    if x < c - 0.5:
        return -1
    lhs = k**a
    rhs = 1 << c if c >= 0 else None
    if rhs is None:
        return 1
    return (lhs > rhs) - (lhs < rhs)


def _degree_bound_ok(d: int, k: int) -> bool:
    """d <= 2*log2(k), exactly (i.e. 2^d <= k^2)."""
    return (1 << d) <= k * k


# ---------------------------------------------------------------------------
# rule 1: low degree


def _low_degree_phase(w: WorkGraph, k: int, trace: ReductionTrace) -> int:
    """Delete vertices with d(v) < sqrt(2(m-k)) - 1 until none remain.

    Each deletion drops m and k by the same amount, so the threshold
    2(m-k) is invariant across the whole phase.  Returns the new k;
    a negative return means Decided(no).
    """
    need2 = 2 * (w.m - k)
    if need2 <= 0:
        return k
    pending = [v for v in sorted(w.alive) if (w.degree(v) + 1) ** 2 < need2]
    queued = set(pending)
    queue = deque(pending)
    while queue:
        v = queue.popleft()
        queued.discard(v)
        if v not in w.alive or (w.degree(v) + 1) ** 2 >= need2:
            continue
        nbrs = sorted(w.adj[v])
        d = w.delete_vertex(v)
        k -= d
        trace.add(
            RuleRecord("low-degree", "delete-vertices", vertices=(v,), k_delta=-d)
        )
        if k < 0:
            return k
        for u in nbrs:
            if u in w.alive and u not in queued and (w.degree(u) + 1) ** 2 < need2:
                queued.add(u)
                queue.append(u)
    return k


def apply_low_degree_rule(g: Graph, k: int) -> tuple[Graph, int, bool]:
    """Public single-rule entry point; see _low_degree_phase.

    Returns (reduced graph, new k, changed).  A negative k signals that
    the instance is negative.
    """
    w = WorkGraph(g)
    trace = ReductionTrace()
    k2 = _low_degree_phase(w, k, trace)
    out, _ = w.to_graph()
    return out, k2, bool(trace.records)


# ---------------------------------------------------------------------------
# rule 2: log degree


def _clique_candidate(adj: list[set[int]], m: int, k: int, v: int) -> bool:
    need = m - k
    if need <= 0:
        return True
    d = len(adj[v])
    if (d + 1) * d // 2 < need:
        return False
    # smallest clique size t with C(t,2) >= need; v plus t-1 neighbors
    t = max(2, (1 + isqrt(8 * need)) // 2)
    while t * (t - 1) // 2 < need:
        t += 1
    while (t - 1) * (t - 2) // 2 >= need:
        t -= 1
    nbrs = sorted(adj[v])
    index = {u: i for i, u in enumerate(nbrs)}
    masks = [0] * len(nbrs)
    for i, u in enumerate(nbrs):
        mv = 0
        for x in adj[u]:
            j = index.get(x)
            if j is not None:
                mv |= 1 << j
        masks[i] = mv
    return clique_of_size_exists(masks, (1 << len(nbrs)) - 1, t - 1)


def clique_candidate_exists(g: Graph, k: int, v: int) -> bool:
    """True iff some clique S with v in S, S subset of N[v], has
    C(|S|,2) >= m-k.  Exponential in d(v) in the worst case; callers
    restrict to small degrees."""
    return _clique_candidate(g.adj, g.m, k, v)


def _log_degree_phase(
    w: WorkGraph, k: int, cfg: CliqueISConfig, trace: ReductionTrace
) -> tuple[int, bool]:
    """Delete low-log-degree vertices without a clique candidate.

    Returns (new k, changed).  Negative k means Decided(no).  Skipped
    entirely for k < 2 (the threshold needs log2(k) >= 1)."""
    changed = False
    while k >= 2:
        fired = False
        for v in sorted(w.alive):
            if k < 2:
                break
            d = w.degree(v)
            if not _degree_bound_ok(d, k):
                continue
            if _clique_candidate(w.adj, w.m, k, v):
                continue
            w.delete_vertex(v)
            k -= d
            trace.add(
                RuleRecord("log-degree", "delete-vertices", vertices=(v,), k_delta=-d)
            )
            fired = True
            changed = True
            if k < 0:
                return k, True
        if not fired:
            break
    return k, changed


def apply_log_degree_rule(
    g: Graph, k: int, cfg: CliqueISConfig = DEFAULT_CONFIG
) -> tuple[Graph, int, bool]:
    """Public single-rule entry point; see _log_degree_phase."""
    w = WorkGraph(g)
    trace = ReductionTrace()
    k2, changed = _log_degree_phase(w, k, cfg, trace)
    out, _ = w.to_graph()
    return out, k2, changed


# ---------------------------------------------------------------------------
# rule 3: high minimum degree -> exact decision via vertex cover of the
# complement


def min_vertex_cover_bounded(masks: list[int], budget: int) -> list[int] | None:
    """A minimum vertex cover of size <= budget, or None if none exists.

    Branching: peel degree-0/1 vertices, solve pure cycle remainders
    directly, otherwise branch on the max-degree vertex (take it, or take
    its whole neighborhood).  A greedy matching lower bound prunes."""
    best: list[int] | None = None

    def matching_lb(alive: int) -> int:
        mu = 0
        rest = alive
        while rest:
            v = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            nb = masks[v] & rest
            if nb:
                rest &= ~(nb & -nb)
                mu += 1
        return mu

    def cycle_cover(alive: int) -> list[int]:
        cover: list[int] = []
        rest = alive
        while rest:
            start = (rest & -rest).bit_length() - 1
            cyc = [start]
            prev, cur = -1, start
            while True:
                nbrs = masks[cur] & alive
                if prev >= 0:
                    nbrs &= ~(1 << prev)
                nxt = (nbrs & -nbrs).bit_length() - 1
                if nxt == start:
                    break
                cyc.append(nxt)
                prev, cur = cur, nxt
            cover.extend(cyc[i] for i in range(1, len(cyc), 2))
            if len(cyc) % 2 == 1:
                cover.append(cyc[-1])
            for v in cyc:
                rest &= ~(1 << v)
        return cover

    def solve(alive: int, chosen: list[int]) -> None:
        nonlocal best
        while True:
            bound = budget if best is None else min(budget, len(best) - 1)
            if len(chosen) > bound:
                return
            deg1 = -1
            maxdeg, maxv = 0, -1
            rest = alive
            while rest:
                v = (rest & -rest).bit_length() - 1
                rest &= rest - 1
                d = (masks[v] & alive).bit_count()
                if d == 0:
                    alive &= ~(1 << v)
                    continue
                if d == 1 and deg1 < 0:
                    deg1 = v
                if d > maxdeg:
                    maxdeg, maxv = d, v
            if maxv < 0:
                if best is None or len(chosen) < len(best):
                    best = list(chosen)
                return
            if deg1 < 0:
                break
            nb = masks[deg1] & alive
            u = (nb & -nb).bit_length() - 1
            chosen = chosen + [u]
            alive &= ~((1 << u) | (1 << deg1))
        bound = budget if best is None else min(budget, len(best) - 1)
        if len(chosen) + matching_lb(alive) > bound:
            return
        if maxdeg == 2:
            total = chosen + cycle_cover(alive)
            if len(total) <= bound and (best is None or len(total) < len(best)):
                best = total
            return
        v = maxv
        solve(alive & ~(1 << v), chosen + [v])
        nbrs = masks[v] & alive
        nb_list = []
        rest = nbrs
        while rest:
            u = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            nb_list.append(u)
        solve(alive & ~(nbrs | (1 << v)), chosen + nb_list)

    solve((1 << len(masks)) - 1, [])
    return sorted(best) if best is not None else None


def apply_high_degree_rule(
    g: Graph, k: int, cfg: CliqueISConfig = DEFAULT_CONFIG
) -> Decision | None:
    """Decide the instance exactly when min degree >= k/(2*log2(k)).

    Returns None when the degree precondition (or k >= 2) fails.  In a
    positive instance the vertices outside the kept clique form a vertex
    cover of the complement of size at most 4*log2(k), so if bounded
    branching finds no cover within that budget the answer is no;
    otherwise the minimum cover I is optimal and the answer compares the
    number of edges incident to I against k."""
    if k < 2 or g.n == 0:
        return None
    delta = min(g.degree(v) for v in range(g.n))
    if delta > 0 and _cmp_weighted_log(2 * delta, k, k) < 0:
        return None
    if delta == 0:
        # k/(2 log2 k) > 0 for k >= 2, so a degree-0 vertex fails the bar
        return None
    budget = (k**4).bit_length() - 1  # floor(4*log2(k))
    full = (1 << g.n) - 1
    cmasks = [0] * g.n
    for v in range(g.n):
        mv = 0
        for u in g.adj[v]:
            mv |= 1 << u
        cmasks[v] = full & ~mv & ~(1 << v)
    cover = min_vertex_cover_bounded(cmasks, budget)
    if cover is None:
        return Decision(False, None)
    cover_set = set(cover)
    cost = sum(g.degree(v) for v in cover)
    cost -= sum(1 for v in cover for u in g.adj[v] if u in cover_set) // 2
    if cost > k:
        return Decision(False, None)
    return Decision(
        True,
        frozenset(
            (min(v, u), max(v, u))
            for v in cover
            for u in g.adj[v]
            if u not in cover_set or u > v
        ),
    )


# ---------------------------------------------------------------------------
# pipeline


def _work_is_member(w: WorkGraph) -> bool:
    support = [v for v in w.alive if w.adj[v]]
    want = len(support) - 1
    return all(len(w.adj[v]) == want for v in support)


def kernelize_clique_is(
    g: Graph, k: int, cfg: CliqueISConfig = DEFAULT_CONFIG
) -> KernelOutcome:
    trace = ReductionTrace()

    def decided(answer: bool, rule: str) -> KernelOutcome:
        trace.add(RuleRecord(rule, detail="yes" if answer else "no"))
        return KernelOutcome.decided(answer, trace)

    if k < 0:
        return decided(False, "trivial")
    if k >= g.m:
        return decided(True, "trivial")
    if is_member(GraphClass.CLIQUE_PLUS_IS, g):
        return decided(True, "member")

    w = WorkGraph(g)
    cur_k = k
    while True:
        cur_k = _low_degree_phase(w, cur_k, trace)
        if cur_k < 0:
            return decided(False, "low-degree")
        cur_k, changed = _log_degree_phase(w, cur_k, cfg, trace)
        if cur_k < 0:
            return decided(False, "log-degree")
        if not changed:
            break
        # restart: re-run the trivial/membership exits on the new state
        if cur_k >= w.m:
            return decided(True, "trivial")
        if _work_is_member(w):
            return decided(True, "member")

    if _work_is_member(w):
        return decided(True, "member")

    current, remap = w.to_graph()
    dec = apply_high_degree_rule(current, cur_k, cfg)
    if dec is not None:
        return decided(dec.answer, "high-degree")

    if (
        cfg.enable_size_rejection
        and cur_k > cfg.large_k_threshold
        and _cmp_weighted_log(current.n - 1, cur_k, 2 * cur_k) > 0
    ):
        return decided(False, "size-rejection")

    if cur_k < 2 and current.n <= cfg.small_k_solver_limit:
        if cur_k == 0:
            ans = is_member(GraphClass.CLIQUE_PLUS_IS, current)
        else:
            ans = solve_exact(
                ProblemInstance(Problem.CLIQUE_IS_DEL, current, cur_k)
            ).answer
        return decided(ans, "small-k-oracle")

    trace.add(
        RuleRecord("compact", "compact", remap=tuple(sorted(remap.items())))
    )
    return KernelOutcome.reduced_to(
        ProblemInstance(Problem.CLIQUE_IS_DEL, current, cur_k), trace
    )
