import itertools

import pytest

from emkernel.graph import build_graph, complement
from emkernel.recognizers import (
    GraphClass,
    Obstruction,
    find_obstruction,
    is_member,
    obstruction_diagonals,
    split_decomposition,
    splittance_partition,
)

P4 = build_graph(4, [(0, 1), (1, 2), (2, 3)])
C4 = build_graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
C5 = build_graph(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)])
TWO_K2 = build_graph(4, [(0, 1), (2, 3)])
K3 = build_graph(3, [(0, 1), (0, 2), (1, 2)])
P3 = build_graph(3, [(0, 1), (1, 2)])


def small_graphs(max_n):
    for n in range(max_n + 1):
        pairs = list(itertools.combinations(range(n), 2))
        for mask in range(1 << len(pairs)):
            yield build_graph(n, [pairs[i] for i in range(len(pairs)) if mask >> i & 1])


# brute-force membership definitions, used as the reference


def _has_induced(g, pattern_edges, size):
    for sub in itertools.permutations(range(g.n), size):
        if all(
            g.has_edge(sub[i], sub[j]) == ((i, j) in pattern_edges or (j, i) in pattern_edges)
            for i in range(size)
            for j in range(i + 1, size)
        ):
            return True
    return False


_FORBIDDEN = {
    GraphClass.CLIQUE_PLUS_IS: [({(0, 1), (1, 2)}, 3), ({(0, 1), (2, 3)}, 4)],
    GraphClass.SPLIT: [
        ({(0, 1), (2, 3)}, 4),
        ({(0, 1), (1, 2), (2, 3), (0, 3)}, 4),
        ({(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)}, 5),
    ],
    GraphClass.TRIVIALLY_PERFECT: [
        ({(0, 1), (1, 2), (2, 3)}, 4),
        ({(0, 1), (1, 2), (2, 3), (0, 3)}, 4),
    ],
}


def _brute_member(cls, g):
    if cls is GraphClass.STARFOREST:
        return all(
            g.degree(u) == 1 or g.degree(v) == 1 for u, v in g.edges()
        )
    return not any(_has_induced(g, pat, size) for pat, size in _FORBIDDEN[cls])


def test_membership_micro_examples():
    assert is_member(GraphClass.CLIQUE_PLUS_IS, K3)
    assert not is_member(GraphClass.CLIQUE_PLUS_IS, P3)
    assert not is_member(GraphClass.CLIQUE_PLUS_IS, TWO_K2)
    assert is_member(GraphClass.SPLIT, K3)
    assert is_member(GraphClass.SPLIT, P4)
    assert not is_member(GraphClass.SPLIT, TWO_K2)
    assert not is_member(GraphClass.SPLIT, C4)
    assert not is_member(GraphClass.SPLIT, C5)
    assert is_member(GraphClass.TRIVIALLY_PERFECT, K3)
    assert not is_member(GraphClass.TRIVIALLY_PERFECT, P4)
    assert not is_member(GraphClass.TRIVIALLY_PERFECT, C4)
    assert is_member(GraphClass.STARFOREST, TWO_K2)
    assert is_member(GraphClass.STARFOREST, P3)
    assert not is_member(GraphClass.STARFOREST, P4)
    assert not is_member(GraphClass.STARFOREST, K3)
    for cls in GraphClass:
        assert is_member(cls, build_graph(0, []))
        assert is_member(cls, build_graph(1, []))


def test_membership_matches_brute_force_exhaustively():
    for g in small_graphs(5):
        for cls in GraphClass:
            assert is_member(cls, g) == _brute_member(cls, g), (
                cls,
                g.n,
                sorted(g.edges()),
            )


def test_find_obstruction_agrees_with_membership():
    for g in small_graphs(5):
        for cls in GraphClass:
            obs = find_obstruction(cls, g)
            if is_member(cls, g):
                assert obs is None
            else:
                assert obs is not None
                assert obs.matches(g)


def test_obstruction_validation():
    with pytest.raises(ValueError):
        Obstruction("K5", (0, 1, 2, 3, 4))
    with pytest.raises(ValueError):
        Obstruction("P4", (0, 1, 2))
    with pytest.raises(ValueError):
        Obstruction("P4", (0, 1, 2, 2))


def test_obstruction_matches():
    obs = Obstruction("P4", (0, 1, 2, 3))
    assert obs.matches(P4)
    assert not obs.matches(C4)
    assert Obstruction("C4", (0, 1, 2, 3)).matches(C4)
    assert Obstruction("2K2", (0, 1, 2, 3)).matches(TWO_K2)


def test_obstruction_diagonals():
    assert obstruction_diagonals(Obstruction("P4", (0, 1, 2, 3))) == ((0, 2), (1, 3))
    assert obstruction_diagonals(Obstruction("C4", (0, 1, 2, 3))) == ((0, 2), (1, 3))
    with pytest.raises(ValueError):
        obstruction_diagonals(Obstruction("C5", (0, 1, 2, 3, 4)))


def test_splittance_zero_iff_split():
    for g in small_graphs(5):
        s, top, rest = splittance_partition(g)
        assert (s == 0) == is_member(GraphClass.SPLIT, g)
        if s == 0:
            assert all(
                g.has_edge(u, v) for u, v in itertools.combinations(sorted(top), 2)
            )
            assert not any(
                g.has_edge(u, v) for u, v in itertools.combinations(sorted(rest), 2)
            )


def test_split_decomposition():
    got = split_decomposition(K3)
    assert got is not None
    kside, iside = got
    assert kside | iside == {0, 1, 2}
    assert split_decomposition(TWO_K2) is None
    got = split_decomposition(P4)
    assert got is not None


def test_split_closed_under_complement():
    for g in small_graphs(5):
        assert is_member(GraphClass.SPLIT, g) == is_member(
            GraphClass.SPLIT, complement(g)
        )
