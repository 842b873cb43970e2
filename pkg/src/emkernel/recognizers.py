"""Membership tests and witnesses for the four target graph classes.

Classes: clique plus isolated vertices ((P3,2K2)-free), split graphs
((2K2,C4,C5)-free), trivially perfect graphs ((P4,C4)-free), and
starforests (every component a star; (C3,P4,C4)-free).

Split recognition uses the degree-sequence splittance identity; trivially
perfect recognition peels universal vertices.  Obstruction extraction is
constructive and deterministic: scans run in ascending vertex order and
the first witness found is returned.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from emkernel.graph import Edge, Graph, VertexSet, canonical_edge


class GraphClass(enum.Enum):
    CLIQUE_PLUS_IS = "clique-plus-is"
    SPLIT = "split"
    TRIVIALLY_PERFECT = "trivially-perfect"
    STARFOREST = "starforest"


# kind -> (size, edge positions within the ordered tuple)
_PATTERNS: dict[str, tuple[int, frozenset[tuple[int, int]]]] = {
    "P3": (3, frozenset({(0, 1), (1, 2)})),
    "P4": (4, frozenset({(0, 1), (1, 2), (2, 3)})),
    "2K2": (4, frozenset({(0, 1), (2, 3)})),
    "C3": (3, frozenset({(0, 1), (1, 2), (0, 2)})),
    "C4": (4, frozenset({(0, 1), (1, 2), (2, 3), (0, 3)})),
    "C5": (5, frozenset({(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)})),
}


@dataclass(frozen=True)
class Obstruction:
    """A forbidden induced pattern located in a graph.

    `vertices` realizes the pattern in the stated order: for a path/cycle
    the tuple walks along it, for 2K2 the two edges are (v0,v1), (v2,v3).
    """

    kind: str
    vertices: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in _PATTERNS:
            raise ValueError(f"unknown obstruction kind {self.kind!r}")
        size = _PATTERNS[self.kind][0]
        if len(self.vertices) != size or len(set(self.vertices)) != size:
            raise ValueError(f"{self.kind} needs {size} distinct vertices")

    def matches(self, g: Graph) -> bool:
        """True iff the induced subgraph on the tuple equals the pattern."""
        size, pattern = _PATTERNS[self.kind]
        vs = self.vertices
        for i in range(size):
            for j in range(i + 1, size):
                present = g.has_edge(vs[i], vs[j])
                if present != ((i, j) in pattern):
                    return False
        return True


def obstruction_diagonals(obs: Obstruction) -> tuple[Edge, Edge]:
    """The two diagonals of a P4 or C4, as canonical pairs.

    For a P4 a-b-c-d these are {a,c} and {b,d}; the endpoint pair {a,d}
    is not a diagonal.  For a C4 they are the two chords.  Returned in
    sorted order for reproducibility.
    """
    if obs.kind not in ("P4", "C4"):
        raise ValueError(f"{obs.kind} has no diagonals")
    a, b, c, d = obs.vertices
    e1, e2 = canonical_edge(a, c), canonical_edge(b, d)
    return (e1, e2) if e1 <= e2 else (e2, e1)


# ---------------------------------------------------------------------------
# membership


def _is_clique_plus_is(g: Graph) -> bool:
    support = [v for v in range(g.n) if g.adj[v]]
    want = len(support) - 1
    return all(len(g.adj[v]) == want for v in support)


def splittance_partition(g: Graph) -> tuple[int, list[int], list[int]]:
    """Splittance and the top-degree candidate partition.

    Sorts vertices by descending degree (ties by id), takes
    h = max{i : d_i >= i-1}, and returns (splittance, first h vertices,
    rest).  The graph is split iff splittance is zero, in which case the
    two lists are a clique / independent-set partition.
    """
    order = sorted(range(g.n), key=lambda v: (-len(g.adj[v]), v))
    degs = [len(g.adj[v]) for v in order]
    h = 0
    for i in range(1, g.n + 1):
        if degs[i - 1] >= i - 1:
            h = i
    top = sum(degs[:h])
    rest = sum(degs[h:])
    # splittance = (h(h-1) + sum of low degrees - sum of high degrees) / 2
    gap = h * (h - 1) + rest - top
    assert gap % 2 == 0
    return gap // 2, order[:h], order[h:]


def _is_split(g: Graph) -> bool:
    return splittance_partition(g)[0] == 0


def _is_trivially_perfect(g: Graph) -> bool:
    # Peel all universal vertices of each connected piece and recurse on
    # the fragments; TP graphs are exactly the graphs where this never
    # gets stuck.  Universal vertices of one piece form a clique, so
    # removing them in a batch is equivalent to one-by-one peeling.
    stack = _components_within(g, set(range(g.n)))
    while stack:
        comp = stack.pop()
        if len(comp) <= 1:
            continue
        want = len(comp) - 1
        universal = {v for v in comp if len(g.adj[v] & comp) == want}
        if not universal:
            return False
        stack.extend(_components_within(g, comp - universal))
    return True


def _components_within(g: Graph, vs: VertexSet) -> list[set[int]]:
    comps = []
    left = set(vs)
    while left:
        start = left.pop()
        comp = {start}
        frontier = [start]
        while frontier:
            v = frontier.pop()
            for u in g.adj[v]:
                if u in left:
                    left.remove(u)
                    comp.add(u)
                    frontier.append(u)
        comps.append(comp)
    return comps


def _star_violation_edge(g: Graph) -> Edge | None:
    # A graph is a starforest iff no edge joins two vertices of degree >= 2.
    for u, v in g.edges():
        if len(g.adj[u]) >= 2 and len(g.adj[v]) >= 2:
            return (u, v)
    return None


def _is_starforest(g: Graph) -> bool:
    return _star_violation_edge(g) is None


def is_member(cls: GraphClass, g: Graph) -> bool:
    """Decide whether g belongs to the class."""
    if cls is GraphClass.CLIQUE_PLUS_IS:
        return _is_clique_plus_is(g)
    if cls is GraphClass.SPLIT:
        return _is_split(g)
    if cls is GraphClass.TRIVIALLY_PERFECT:
        return _is_trivially_perfect(g)
    if cls is GraphClass.STARFOREST:
        return _is_starforest(g)
    raise ValueError(f"unknown class {cls!r}")


# ---------------------------------------------------------------------------
# obstruction extraction


def _find_clique_plus_is_obstruction(g: Graph) -> Obstruction | None:
    support = sorted(v for v in range(g.n) if g.adj[v])
    for i, u in enumerate(support):
        for v in support[i + 1 :]:
            if v in g.adj[u]:
                continue
            # u, v non-adjacent, both with a neighbor: build P3 or 2K2.
            common = g.adj[u] & g.adj[v]
            if common:
                return Obstruction("P3", (u, min(common), v))
            a = min(g.adj[u] - {v})
            b = min(g.adj[v] - {u})
            if b in g.adj[a]:
                return Obstruction("P3", (u, a, b))
            return Obstruction("2K2", (u, a, v, b))
    return None


def _find_split_obstruction(g: Graph) -> Obstruction | None:
    if _is_split(g):
        return None
    edges = list(g.edges())
    for i, (a, b) in enumerate(edges):
        for c, d in edges[i + 1 :]:
            if c in (a, b) or d in (a, b):
                continue
            if (
                c not in g.adj[a]
                and c not in g.adj[b]
                and d not in g.adj[a]
                and d not in g.adj[b]
            ):
                return Obstruction("2K2", (a, b, c, d))
    for u in range(g.n):
        for v in range(u + 1, g.n):
            if v in g.adj[u]:
                continue
            common = sorted(g.adj[u] & g.adj[v])
            for i, a in enumerate(common):
                for b in common[i + 1 :]:
                    if b not in g.adj[a]:
                        return Obstruction("C4", (u, a, v, b))
    c5 = _find_induced_c5(g)
    if c5 is not None:
        return Obstruction("C5", c5)
    raise AssertionError("non-split graph without 2K2/C4/C5 witness")


def _find_induced_c5(g: Graph) -> tuple[int, int, int, int, int] | None:
    # DFS extension of induced paths v0-v1-v2-v3 closed by v4; v0 is the
    # smallest vertex on the cycle, so scans stay deterministic.
    for v0 in range(g.n):
        n0 = g.adj[v0]
        for v1 in sorted(n0):
            if v1 < v0:
                continue
            for v2 in sorted(g.adj[v1]):
                if v2 < v0 or v2 == v0 or v2 in n0:
                    continue
                for v3 in sorted(g.adj[v2]):
                    if v3 < v0 or v3 in n0 or v3 in g.adj[v1]:
                        continue
                    closers = (g.adj[v3] & n0) - g.adj[v1] - g.adj[v2]
                    closers.discard(v1)
                    closers = {w for w in closers if w > v0}
                    if closers:
                        return (v0, v1, v2, v3, min(closers))
    return None


def _find_tp_obstruction(g: Graph) -> Obstruction | None:
    # An edge uv with incomparable closed neighborhoods yields a P4 or C4,
    # and TP graphs are exactly the graphs without such an edge.
    for u, v in g.edges():
        only_u = g.adj[u] - g.adj[v] - {v}
        if not only_u:
            continue
        only_v = g.adj[v] - g.adj[u] - {u}
        if not only_v:
            continue
        a = min(only_u)
        b = min(only_v)
        if b in g.adj[a]:
            return Obstruction("C4", (u, a, b, v))
        return Obstruction("P4", (a, u, v, b))
    return None


def _find_star_obstruction(g: Graph) -> Obstruction | None:
    e = _star_violation_edge(g)
    if e is None:
        return None
    u, v = e
    common = g.adj[u] & g.adj[v]
    if common:
        return Obstruction("C3", (u, v, min(common)))
    a = min(g.adj[u] - {v})
    b = min(g.adj[v] - {u})
    if b in g.adj[a]:
        return Obstruction("C4", (u, a, b, v))
    return Obstruction("P4", (a, u, v, b))


def find_obstruction(cls: GraphClass, g: Graph) -> Obstruction | None:
    """Return one induced forbidden pattern, or None iff g is a member."""
    if cls is GraphClass.CLIQUE_PLUS_IS:
        return _find_clique_plus_is_obstruction(g)
    if cls is GraphClass.SPLIT:
        return _find_split_obstruction(g)
    if cls is GraphClass.TRIVIALLY_PERFECT:
        return _find_tp_obstruction(g)
    if cls is GraphClass.STARFOREST:
        return _find_star_obstruction(g)
    raise ValueError(f"unknown class {cls!r}")


def split_decomposition(g: Graph) -> tuple[VertexSet, VertexSet] | None:
    """One (clique, independent set) partition of a split graph, else None."""
    gap, top, rest = splittance_partition(g)
    if gap != 0:
        return None
    clique, indep = set(top), set(rest)
    for v in top:
        assert len(g.adj[v] & clique) == len(clique) - 1, "degree criterion broke"
    for v in rest:
        assert not (g.adj[v] & indep), "degree criterion broke"
    return clique, indep
