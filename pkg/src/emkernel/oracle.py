"""Exact decision procedures for the four edge-modification problems.

`generic_solve` is the dumb reference: it enumerates every candidate edit
set of size at most k and tests membership.  It stays deliberately naive
so it can serve as independent ground truth for everything else.

`solve_exact` is the per-problem exact solver used by the harness and by
small-k fallbacks inside kernels: max-clique reasoning for Clique+IS
Deletion, an independent-set scan for Split Addition (and its complement
for Split Deletion), diagonal branching for Trivially Perfect Addition,
and a center-set scan for Starforest Deletion.

Both refuse oversized inputs explicitly instead of guessing.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass

from emkernel.graph import Edge, EdgeSet, Graph, apply_edits, complement
from emkernel.recognizers import (
    GraphClass,
    Obstruction,
    find_obstruction,
    is_member,
    obstruction_diagonals,
)


class Problem(enum.Enum):
    CLIQUE_IS_DEL = "clique-is-del"
    SPLIT_ADD = "split-add"
    SPLIT_DEL = "split-del"
    TP_ADD = "tp-add"
    STAR_DEL = "star-del"


# problem tag -> (target class, edit mode)
PROBLEM_TARGET: dict[Problem, tuple[GraphClass, str]] = {
    Problem.CLIQUE_IS_DEL: (GraphClass.CLIQUE_PLUS_IS, "delete"),
    Problem.SPLIT_ADD: (GraphClass.SPLIT, "add"),
    Problem.SPLIT_DEL: (GraphClass.SPLIT, "delete"),
    Problem.TP_ADD: (GraphClass.TRIVIALLY_PERFECT, "add"),
    Problem.STAR_DEL: (GraphClass.STARFOREST, "delete"),
}


@dataclass(frozen=True)
class ProblemInstance:
    problem: Problem
    graph: Graph
    k: int


@dataclass(frozen=True)
class Decision:
    """Answer plus, on yes, an edit set witnessing it."""

    answer: bool
    witness: frozenset[Edge] | None = None


class OracleSizeError(Exception):
    """Raised instead of attempting an enumeration that would not finish."""


def _yes(edits) -> Decision:
    return Decision(True, frozenset(edits))


_NO = Decision(False, None)


def generic_solve(inst: ProblemInstance, max_n: int = 7, max_k: int = 4) -> Decision:
    """Reference oracle: try every edit set of size 0..k, smallest first.

    Candidates are the non-edges for addition problems and the edges for
    deletion problems, scanned in lexicographic order, so the witness is
    the first valid edit set in (size, lex) order.
    """
    g, k = inst.graph, inst.k
    if g.n > max_n or inst.k > max_k:
        raise OracleSizeError(
            f"generic_solve limited to n<={max_n}, k<={max_k}; got n={g.n}, k={inst.k}"
        )
    if k < 0:
        return _NO
    target, mode = PROBLEM_TARGET[inst.problem]
    pool = sorted(g.non_edges() if mode == "add" else g.edges())
    for size in range(min(k, len(pool)) + 1):
        for f in itertools.combinations(pool, size):
            if is_member(target, apply_edits(g, f, mode)):
                return _yes(f)
    return _NO


def solve_exact(inst: ProblemInstance, max_n: int = 24) -> Decision:
    """Exact per-problem solver; see the module docstring for methods.

    The 2^n scans (split and starforest problems) refuse n > max_n.  The
    clique and diagonal-branching solvers scale further and take no n cap.
    """
    g, k = inst.graph, inst.k
    if k < 0:
        return _NO
    if inst.problem is Problem.CLIQUE_IS_DEL:
        return _solve_clique_is_del(g, k)
    if inst.problem is Problem.SPLIT_ADD:
        return _solve_split_add(g, k, max_n)
    if inst.problem is Problem.SPLIT_DEL:
        dec = _solve_split_add(complement(g), k, max_n)
        return dec  # same pair set: adding to the complement = deleting here
    if inst.problem is Problem.TP_ADD:
        return _solve_tp_add(g, k)
    if inst.problem is Problem.STAR_DEL:
        return _solve_star_del(g, k, max_n)
    raise ValueError(f"unknown problem {inst.problem!r}")


# ---------------------------------------------------------------------------
# Clique+IS Deletion: optimal solutions keep exactly the edges of one
# maximum clique, so the answer is C(omega, 2) >= m - k.


def adjacency_masks(g: Graph) -> list[int]:
    masks = [0] * g.n
    for u in range(g.n):
        mv = 0
        for v in g.adj[u]:
            mv |= 1 << v
        masks[u] = mv
    return masks


def max_clique(g: Graph) -> list[int]:
    """A maximum clique, deterministic, via branch and bound with greedy
    coloring bounds on bitmask candidate sets."""
    if g.n == 0:
        return []
    masks = adjacency_masks(g)
    best: list[int] = []
    current: list[int] = []

    def color_order(cand: int) -> list[tuple[int, int]]:
        # Greedy coloring; returns (vertex, color) with colors ascending.
        order = []
        color = 0
        rest = cand
        while rest:
            color += 1
            avail = rest
            while avail:
                v = (avail & -avail).bit_length() - 1
                order.append((v, color))
                avail &= ~(masks[v] | (1 << v))
                rest &= ~(1 << v)
        return order

    def expand(cand: int) -> None:
        nonlocal best
        order = color_order(cand)
        # Explore high-color vertices first; bound prunes the rest.
        for v, color in reversed(order):
            if len(current) + color <= len(best):
                return
            current.append(v)
            nxt = cand & masks[v]
            if nxt:
                expand(nxt)
            elif len(current) > len(best):
                best = current.copy()
            current.pop()
            cand &= ~(1 << v)

    expand((1 << g.n) - 1)
    return sorted(best)


def clique_of_size_exists(masks: list[int], sub: int, t: int) -> bool:
    """True iff the graph restricted to the vertex mask `sub` has a clique
    of at least t vertices. Early-exits as soon as one is found."""
    if t <= 0:
        return True
    if bin(sub).count("1") < t:
        return False

    def grow(cand: int, need: int) -> bool:
        if need == 0:
            return True
        while cand:
            if bin(cand).count("1") < need:
                return False
            v = (cand & -cand).bit_length() - 1
            cand &= ~(1 << v)
            if grow(cand & masks[v], need - 1):
                return True
        return False

    return grow(sub, t)


def _solve_clique_is_del(g: Graph, k: int) -> Decision:
    need = g.m - k
    clique = max_clique(g)
    if len(clique) * (len(clique) - 1) // 2 < need:
        return _NO
    inside = set(itertools.combinations(clique, 2))
    return _yes(e for e in g.edges() if e not in inside)


# ---------------------------------------------------------------------------
# Split Addition: pick the independent side T of the target partition;
# T must already be independent, and the additions fill V \ T into a
# clique, costing C(n-|T|, 2) - m + sum of degrees over T.


def _solve_split_add(g: Graph, k: int, max_n: int) -> Decision:
    if g.n > max_n:
        raise OracleSizeError(f"split scan limited to n<={max_n}, got n={g.n}")
    n = g.n
    found: list[int] | None = None

    def scan(v: int, chosen: list[int], cost_degrees: int) -> bool:
        nonlocal found
        rest = n - len(chosen)
        cost = rest * (rest - 1) // 2 - g.m + cost_degrees
        if cost <= k:
            found = chosen.copy()
            return True
        if v == n:
            return False
        if not any(u in g.adj[v] for u in chosen):
            chosen.append(v)
            if scan(v + 1, chosen, cost_degrees + g.degree(v)):
                return True
            chosen.pop()
        return scan(v + 1, chosen, cost_degrees)

    if not scan(0, [], 0):
        return _NO
    t = set(found)
    s = [v for v in range(n) if v not in t]
    return _yes(
        (u, v)
        for i, u in enumerate(s)
        for v in s[i + 1 :]
        if v not in g.adj[u]
    )


# ---------------------------------------------------------------------------
# Trivially Perfect Addition: every trivially perfect supergraph contains
# one of the two diagonals of each current obstruction, so branching on
# the diagonals to depth k is exact.


def _solve_tp_add(g: Graph, k: int) -> Decision:
    adj = g.copy_adjacency()
    n = g.n
    added: list[Edge] = []

    def branch(budget: int) -> bool:
        obs = find_obstruction(GraphClass.TRIVIALLY_PERFECT, Graph(n, adj, 0))
        if obs is None:
            return True
        if budget == 0:
            return False
        for u, v in obstruction_diagonals(obs):
            adj[u].add(v)
            adj[v].add(u)
            added.append((u, v))
            if branch(budget - 1):
                return True
            adj[u].remove(v)
            adj[v].remove(u)
            added.pop()
        return False

    if not branch(min(k, n * (n - 1) // 2 - g.m)):
        return _NO
    return _yes(added)


# ---------------------------------------------------------------------------
# Starforest Deletion: fixing the center set S, one edge per non-center
# vertex with a neighbor in S can be kept and everything else must go, so
# the minimum is m - max_S sum_{v not in S}[N(v) cap S nonempty].


def _solve_star_del(g: Graph, k: int, max_n: int) -> Decision:
    if g.n > max_n:
        raise OracleSizeError(f"center-set scan limited to n<={max_n}, got n={g.n}")
    n = g.n
    masks = adjacency_masks(g)
    best_kept = -1
    best_s = 0
    for s in range(1 << n):
        kept = 0
        for v in range(n):
            if not (s >> v) & 1 and masks[v] & s:
                kept += 1
        if kept > best_kept:
            best_kept = kept
            best_s = s
        if g.m - best_kept <= k:
            break
    if g.m - best_kept > k:
        return _NO
    keep: EdgeSet = set()
    for v in range(n):
        if not (best_s >> v) & 1:
            in_s = masks[v] & best_s
            if in_s:
                c = (in_s & -in_s).bit_length() - 1
                keep.add((v, c) if v < c else (c, v))
    return _yes(e for e in g.edges() if e not in keep)


# ---------------------------------------------------------------------------
# split decompositions and label compatibility


def enumerate_split_decompositions(
    h: Graph, max_n: int = 20
) -> list[tuple[set[int], set[int]]]:
    """All (clique, independent-set) partitions of a split graph.

    Backtracking over vertex assignments; invalid branches die fast, and
    split graphs only have a handful of decompositions, so this is cheap
    at its test-support scale.
    """
    if h.n > max_n:
        raise OracleSizeError(f"decomposition listing limited to n<={max_n}")
    if not is_member(GraphClass.SPLIT, h):
        raise ValueError("graph is not split")
    out: list[tuple[set[int], set[int]]] = []
    kside: list[int] = []
    iside: list[int] = []

    def assign(v: int) -> None:
        if v == h.n:
            out.append((set(kside), set(iside)))
            return
        if all(u in h.adj[v] for u in kside):
            kside.append(v)
            assign(v + 1)
            kside.pop()
        if not any(u in h.adj[v] for u in iside):
            iside.append(v)
            assign(v + 1)
            iside.pop()

    assign(0)
    return out


def is_compatible(
    p: tuple[set[int], set[int], set[int]], f: EdgeSet, g: Graph
) -> bool:
    """True iff some split decomposition of g+f extends the labeling p.

    p is a (K, I, D) partition; D (the unlabeled part) may land on either
    side.  Requires g+f to be split.
    """
    kset, iset, _ = p
    h = apply_edits(g, f, "add")
    return any(
        kset <= kstar and iset <= istar
        for kstar, istar in enumerate_split_decompositions(h)
    )
