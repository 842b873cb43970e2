import itertools

import pytest

from emkernel.graph import Graph, apply_edits, build_graph, complement
from emkernel.harness import DetRng, sampled_verify
from emkernel.kernel_split import (
    GeneralizedSplitInstance,
    apply_I_rules,
    apply_K_rules,
    apply_reduction_rules,
    apply_unlabeling,
    kernelize_split,
)
from emkernel.oracle import (
    Problem,
    ProblemInstance,
    enumerate_split_decompositions,
    solve_exact,
)
from emkernel.recognizers import GraphClass, is_member, split_decomposition

STAR4 = build_graph(5, [(0, 1), (0, 2), (0, 3), (0, 4)])
TWO_K2 = build_graph(4, [(0, 1), (2, 3)])
C4 = build_graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])


def fresh(g: Graph, k: int, **sets) -> GeneralizedSplitInstance:
    taken = set().union(*sets.values()) if sets else set()
    sets.setdefault("D", set(range(g.n)) - taken)
    return GeneralizedSplitInstance(g, k, **sets)


def test_instance_validation():
    inst = fresh(TWO_K2, 1)
    assert inst.D == {0, 1, 2, 3} and not inst.K and not inst.I
    with pytest.raises(ValueError):
        fresh(TWO_K2, 1, K={0}, I={0})
    with pytest.raises(ValueError):
        fresh(TWO_K2, 1, K={7})
    with pytest.raises(ValueError):
        GeneralizedSplitInstance(TWO_K2, 1, K={0}, I={1}, D={2})


def test_k_rule_moves_star_center():
    inst = fresh(STAR4, 1)
    assert apply_K_rules(inst)
    assert 0 in inst.K
    # and nothing fires on 2K2 with k=1: every count is at most 1
    inst = fresh(TWO_K2, 1)
    assert not apply_K_rules(inst)
    assert not apply_I_rules(inst)
    assert apply_reduction_rules(inst) is False


def test_i_rule_labels_isolated_far_vertices():
    # vertex 4 sees none of the k+1 = 2 disjoint non-edges among 0..3
    g = build_graph(5, [])
    inst = fresh(g, 1)
    assert apply_I_rules(inst)
    assert inst.I  # at least one vertex pinned to the independent side


def test_reduction_fills_forced_edge():
    g = build_graph(3, [(1, 2)])
    inst = fresh(g, 1, K={0, 1})
    res = apply_reduction_rules(inst)
    assert res is True
    assert inst.graph.has_edge(0, 1)
    assert inst.k == 0


def test_reduction_rejects_edge_inside_i():
    g = build_graph(4, [(2, 3)])
    inst = fresh(g, 1, I={2, 3})
    res = apply_reduction_rules(inst)
    assert res is not True and res is not False
    assert res.answer is False


def test_unlabeling_example():
    inst = fresh(STAR4, 1, K={0}, I={1, 2, 3, 4})
    out = apply_unlabeling(inst)
    assert (out.graph.n, out.graph.m, out.k) == (4, 3, 1)
    assert sorted(out.graph.edges()) == [(0, 1), (0, 2), (0, 3)]


def test_unlabeling_requires_fixpoint():
    # a K-labeled pair with a missing edge is not at fixpoint
    inst = fresh(build_graph(2, []), 1, K={0, 1})
    with pytest.raises(AssertionError):
        apply_unlabeling(inst)


def test_kernelize_examples():
    out = kernelize_split(TWO_K2, 1, "add")
    assert not out.is_decided
    inst = out.reduced
    assert (inst.graph.n, inst.graph.m, inst.k) == (4, 2, 1)

    # split inputs exit immediately as yes, whatever the budget
    out = kernelize_split(STAR4, 1, "add")
    assert out.is_decided and out.answer

    out = kernelize_split(C4, 0, "del")
    assert out.is_decided and not out.answer

    out = kernelize_split(C4, 1, "del")
    assert not out.is_decided  # nothing fires; handed back whole
    assert (out.reduced.graph.n, out.reduced.graph.m, out.reduced.k) == (4, 4, 1)
    assert out.trace.records[0].rule == "complement"

    assert kernelize_split(TWO_K2, -1).answer is False
    with pytest.raises(ValueError):
        kernelize_split(C4, 1, "swap")


def test_budget_never_grows():
    rng = DetRng(77)
    for _ in range(300):
        n = 2 + rng.randint(6)
        pairs = list(itertools.combinations(range(n), 2))
        mask = rng.next64() & ((1 << len(pairs)) - 1)
        g = build_graph(n, [pairs[i] for i in range(len(pairs)) if mask >> i & 1])
        k = rng.randint(4)
        out = kernelize_split(g, k, "add" if rng.coin() else "del")
        if not out.is_decided:
            assert 0 <= out.reduced.k <= k


def test_unlabel_forces_clique_side():
    """K4 whose members each see three pairwise non-adjacent outsiders,
    k=2: the whole K4 gets K-labeled, |K| exceeds k+1, so unlabeling swaps
    in a fresh K' of k vertices.  Every way of making the output split
    within budget must keep K' on the clique side of every decomposition."""
    edges = list(itertools.combinations(range(4), 2))
    edges += [(4, 0), (4, 1), (4, 2), (5, 0), (5, 1), (5, 3)]
    edges += [(6, 0), (6, 2), (6, 3), (7, 1), (7, 2), (7, 3), (4, 5)]
    g = build_graph(8, edges)
    assert not is_member(GraphClass.SPLIT, g)
    out = kernelize_split(g, 2, "add")
    assert not out.is_decided
    inst = out.reduced

    remap = {}
    kprime_raw = None
    for rec in out.trace.records:
        if rec.rule == "unlabel-K" and rec.action == "add-vertices":
            kprime_raw = set(rec.vertices)
        if rec.rule == "compact":
            remap = dict(rec.remap)
    assert kprime_raw is not None and len(kprime_raw) == 2
    kprime = {remap[v] for v in kprime_raw}

    h = inst.graph
    solutions = 0
    for size in range(inst.k + 1):
        for f in itertools.combinations(h.non_edges(), size):
            fixed = apply_edits(h, f, "add")
            if not is_member(GraphClass.SPLIT, fixed):
                continue
            solutions += 1
            for ks, _ in enumerate_split_decompositions(fixed):
                assert kprime <= set(ks)
    assert solutions > 0


def test_fixpoint_labels_partition_and_counts():
    rng = DetRng(90)
    for _ in range(200):
        n = 3 + rng.randint(6)
        pairs = list(itertools.combinations(range(n), 2))
        mask = rng.next64() & ((1 << len(pairs)) - 1)
        g = build_graph(n, [pairs[i] for i in range(len(pairs)) if mask >> i & 1])
        inst = fresh(g, 2)
        while True:
            res = apply_reduction_rules(inst)
            if res is True:
                continue
            if res is not False:
                break  # decided no, nothing more to check
            if apply_I_rules(inst) or apply_K_rules(inst):
                continue
            assert inst.K | inst.I | inst.D == set(range(n))
            assert not (inst.K & inst.I) and not (inst.K & inst.D)
            # K is a clique, I is independent (red rules at fixpoint)
            for a, b in itertools.combinations(sorted(inst.K), 2):
                assert inst.graph.has_edge(a, b)
            for a, b in itertools.combinations(sorted(inst.I), 2):
                assert not inst.graph.has_edge(a, b)
            break


def test_del_variant_matches_complement_of_add():
    rng = DetRng(14)
    for _ in range(150):
        n = 2 + rng.randint(5)
        pairs = list(itertools.combinations(range(n), 2))
        mask = rng.next64() & ((1 << len(pairs)) - 1)
        g = build_graph(n, [pairs[i] for i in range(len(pairs)) if mask >> i & 1])
        k = rng.randint(3)
        a = kernelize_split(complement(g), k, "add")
        d = kernelize_split(g, k, "del")
        assert a.is_decided == d.is_decided
        if a.is_decided:
            assert a.answer == d.answer
        else:
            assert d.reduced.graph == complement(a.reduced.graph)
            assert d.reduced.k == a.reduced.k


def test_against_oracle_sampled():
    for problem in (Problem.SPLIT_ADD, Problem.SPLIT_DEL):
        rep = sampled_verify(problem, 6, 4, samples=200, seed=55, deep=False)
        assert rep.passed, rep.mismatches[:3]


def test_kernel_output_still_equivalent():
    # spot-check: solving the kernel answers the original question
    rng = DetRng(61)
    for _ in range(80):
        n = 3 + rng.randint(4)
        pairs = list(itertools.combinations(range(n), 2))
        mask = rng.next64() & ((1 << len(pairs)) - 1)
        g = build_graph(n, [pairs[i] for i in range(len(pairs)) if mask >> i & 1])
        k = rng.randint(3)
        want = solve_exact(ProblemInstance(Problem.SPLIT_ADD, g, k)).answer
        out = kernelize_split(g, k, "add")
        if out.is_decided:
            assert out.answer == want
        else:
            got = solve_exact(out.reduced).answer
            assert got == want
