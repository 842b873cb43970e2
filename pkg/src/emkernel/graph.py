"""Simple undirected graphs over dense integer vertex ids.

The representation is an adjacency list of Python sets, with the edge
count cached.  Vertices are always 0..n-1; operations that drop vertices
re-compact the ids and hand back the mapping so callers can translate
traces.  Edges are unordered pairs stored canonically (smaller id first).
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Iterator

# An edge is a canonical pair (u, v) with u < v.  Edge sets are plain
# Python sets of such pairs; vertex sets are sets of ints.
Edge = tuple[int, int]
EdgeSet = set[Edge]
VertexSet = set[int]


def canonical_edge(u: int, v: int) -> Edge:
    """Return the pair as (min, max). Rejects self-loops."""
    if u == v:
        raise ValueError(f"self-loop on vertex {u}")
    return (u, v) if u < v else (v, u)


class Graph:
    """Immutable-by-convention simple undirected graph.

    Attributes
    ----------
    n : int
        Number of vertices, ids 0..n-1.
    adj : list[set[int]]
        adj[v] is the set of neighbors of v.  Callers must not mutate.
    m : int
        Number of edges, kept consistent with adj.
    """

    __slots__ = ("n", "adj", "m")

    def __init__(self, n: int, adj: list[set[int]], m: int):
        self.n = n
        self.adj = adj
        self.m = m

    @classmethod
    def from_adjacency(cls, adj: list[set[int]]) -> "Graph":
        """Wrap a trusted adjacency structure (symmetric, loop-free)."""
        m2 = sum(len(s) for s in adj)
        assert m2 % 2 == 0
        return cls(len(adj), adj, m2 // 2)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def neighbors(self, v: int) -> set[int]:
        return self.adj[v]

    def edges(self) -> Iterator[Edge]:
        """Yield all edges as canonical pairs, in lexicographic order."""
        for u in range(self.n):
            for v in sorted(self.adj[u]):
                if u < v:
                    yield (u, v)

    def edge_set(self) -> EdgeSet:
        return {(u, v) for u in range(self.n) for v in self.adj[u] if u < v}

    def non_edges(self) -> Iterator[Edge]:
        """Yield all non-adjacent pairs, in lexicographic order."""
        for u in range(self.n):
            au = self.adj[u]
            for v in range(u + 1, self.n):
                if v not in au:
                    yield (u, v)

    def copy_adjacency(self) -> list[set[int]]:
        """Fresh mutable adjacency copy for kernels that edit in place."""
        return [set(s) for s in self.adj]

    def check(self) -> None:
        """Validate the structural invariants. Used by tests and debugging."""
        assert self.n == len(self.adj)
        total = 0
        for v, nbrs in enumerate(self.adj):
            assert v not in nbrs, f"self-loop at {v}"
            for u in nbrs:
                assert 0 <= u < self.n, f"out-of-range neighbor {u}"
                assert v in self.adj[u], f"asymmetric edge ({v},{u})"
            total += len(nbrs)
        assert total == 2 * self.m, "cached m out of sync"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.adj == other.adj

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def build_graph(n: int, edges: Iterable[tuple[int, int]]) -> Graph:
    """Build a graph from a vertex count and an iterable of pairs.

    Rejects out-of-range ids, self-loops, and duplicate edges (duplicates
    are detected after canonicalization, so (0,1) and (1,0) collide).
    """
    if n < 0:
        raise ValueError(f"negative vertex count {n}")
    adj: list[set[int]] = [set() for _ in range(n)]
    m = 0
    for pair in edges:
        u, v = pair
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge {pair!r} has an id out of range 0..{n - 1}")
        if u == v:
            raise ValueError(f"edge {pair!r} is a self-loop")
        if v in adj[u]:
            raise ValueError(f"duplicate edge {canonical_edge(u, v)!r}")
        adj[u].add(v)
        adj[v].add(u)
        m += 1
    return Graph(n, adj, m)


def complement(g: Graph) -> Graph:
    """Graph on the same vertices whose edges are exactly the non-edges of g."""
    n = g.n
    full = set(range(n))
    adj = [full - g.adj[v] - {v} for v in range(n)]
    return Graph(n, adj, n * (n - 1) // 2 - g.m)


def apply_edits(g: Graph, f: Iterable[tuple[int, int]], mode: str) -> Graph:
    """Return g+F (mode="add") or g-F (mode="delete").

    Additions must be non-edges of g and deletions must be edges of g;
    a violating pair is reported in the error.
    """
    if mode not in ("add", "delete"):
        raise ValueError(f"mode must be 'add' or 'delete', got {mode!r}")
    adj = g.copy_adjacency()
    m = g.m
    seen: EdgeSet = set()
    for pair in f:
        e = canonical_edge(*pair)
        u, v = e
        if not (0 <= u and v < g.n):
            raise ValueError(f"edit {pair!r} has an id out of range 0..{g.n - 1}")
        if e in seen:
            raise ValueError(f"duplicate edit {e!r}")
        seen.add(e)
        if mode == "add":
            if v in adj[u]:
                raise ValueError(f"cannot add existing edge {e!r}")
            adj[u].add(v)
            adj[v].add(u)
            m += 1
        else:
            if v not in adj[u]:
                raise ValueError(f"cannot delete missing edge {e!r}")
            adj[u].remove(v)
            adj[v].remove(u)
            m -= 1
    return Graph(g.n, adj, m)


def non_edges_within(g: Graph, s: Iterable[int]) -> int:
    """Count unordered non-adjacent pairs inside the vertex set s."""
    sv = set(s)
    for v in sv:
        if not 0 <= v < g.n:
            raise ValueError(f"vertex {v} out of range 0..{g.n - 1}")
    size = len(sv)
    inside = sum(1 for v in sv for u in g.adj[v] if u in sv)  # counts twice
    return size * (size - 1) // 2 - inside // 2


def merge_vertices(g: Graph, s: Iterable[int]) -> tuple[Graph, dict[int, int]]:
    """Identify the vertices of s into one, re-compacting ids.

    Preconditions (checked): s nonempty and independent, and no vertex
    outside s has two neighbors in s.  Together these guarantee the merge
    creates no loops and no parallel edges.  Returns the new graph and a
    total mapping old-id -> new-id (every member of s maps to the merged
    vertex's new id, which sits at the position of min(s)).
    """
    sv = set(s)
    if not sv:
        raise ValueError("cannot merge an empty vertex set")
    for v in sv:
        if not 0 <= v < g.n:
            raise ValueError(f"vertex {v} out of range 0..{g.n - 1}")
        for u in g.adj[v]:
            if u in sv:
                raise ValueError(f"merge set is not independent: edge ({v},{u})")
    for v in range(g.n):
        if v not in sv and len(g.adj[v] & sv) > 1:
            raise ValueError(f"vertex {v} has multiple neighbors in the merge set")

    rep = min(sv)
    keep = [v for v in range(g.n) if v not in sv or v == rep]
    new_id = {old: i for i, old in enumerate(keep)}
    mapping = {v: (new_id[rep] if v in sv else new_id[v]) for v in range(g.n)}

    adj: list[set[int]] = [set() for _ in range(len(keep))]
    m = 0
    for u, v in g.edges():
        mu, mv = mapping[u], mapping[v]
        if mv not in adj[mu]:
            adj[mu].add(mv)
            adj[mv].add(mu)
            m += 1
    return Graph(len(keep), adj, m), mapping


def induced_subgraph(g: Graph, keep: Iterable[int]) -> tuple[Graph, dict[int, int]]:
    """Subgraph induced on `keep`, ids re-compacted in ascending order.

    Returns the subgraph and the old-id -> new-id mapping (defined only
    on kept vertices).
    """
    kept = sorted(set(keep))
    for v in kept:
        if not 0 <= v < g.n:
            raise ValueError(f"vertex {v} out of range 0..{g.n - 1}")
    new_id = {old: i for i, old in enumerate(kept)}
    adj: list[set[int]] = [set() for _ in kept]
    m = 0
    for old in kept:
        i = new_id[old]
        for u in g.adj[old]:
            j = new_id.get(u)
            if j is not None and i < j:
                adj[i].add(j)
                adj[j].add(i)
                m += 1
    return Graph(len(kept), adj, m), new_id


def connected_components(g: Graph) -> list[list[int]]:
    """Partition the vertices into maximal connected sets.

    Components are sorted internally and listed by smallest member, so
    the output is deterministic.
    """
    seen = [False] * g.n
    comps: list[list[int]] = []
    for start in range(g.n):
        if seen[start]:
            continue
        seen[start] = True
        comp = [start]
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for u in g.adj[v]:
                if not seen[u]:
                    seen[u] = True
                    comp.append(u)
                    queue.append(u)
        comp.sort()
        comps.append(comp)
    return comps
