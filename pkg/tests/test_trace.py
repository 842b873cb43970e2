import itertools

import pytest

from emkernel.graph import build_graph, complement
from emkernel.harness import DetRng, kernelize_problem
from emkernel.oracle import Problem, ProblemInstance
from emkernel.trace import (
    KernelOutcome,
    ReductionTrace,
    RuleRecord,
    WorkGraph,
    replay_trace,
)


def test_rule_record_validation():
    with pytest.raises(ValueError):
        RuleRecord("x", action="teleport")
    rec = RuleRecord("cleanup", "delete-vertices", vertices=(1, 2))
    assert rec.k_delta == 0
    assert rec.to_jsonable()["action"] == "delete-vertices"


def test_outcome_exactly_one_of_answer_reduced():
    tr = ReductionTrace()
    out = KernelOutcome.decided(True, tr)
    assert out.is_decided and out.answer is True and out.reduced is None
    inst = ProblemInstance(Problem.TP_ADD, build_graph(1, []), 0)
    out = KernelOutcome.reduced_to(inst, tr)
    assert not out.is_decided and out.reduced is inst
    with pytest.raises(ValueError):
        KernelOutcome(answer=True, reduced=inst, trace=tr)
    with pytest.raises(ValueError):
        KernelOutcome(answer=None, reduced=None, trace=tr)


def test_firing_counts():
    tr = ReductionTrace()
    tr.add(RuleRecord("a"))
    tr.add(RuleRecord("a"))
    tr.add(RuleRecord("b", "delete-edges", edges=((0, 1),)))
    assert tr.firing_counts() == {"a": 2, "b": 1}


def test_workgraph_basic_ops():
    w = WorkGraph(build_graph(4, [(0, 1), (1, 2), (2, 3)]))
    assert w.m == 3
    assert w.degree(1) == 2
    assert w.delete_vertex(0) == 1
    assert w.m == 2 and 0 not in w.alive
    w.delete_edge(1, 2)
    w.add_edge(1, 2)
    with pytest.raises(AssertionError):
        w.add_edge(1, 2)
    v = w.add_vertex()
    assert v == 4
    w.add_edge(4, 1)
    g, remap = w.to_graph()
    assert g.n == 4
    assert set(remap) == {1, 2, 3, 4}


def test_workgraph_merge_requires_independence():
    w = WorkGraph(build_graph(3, [(0, 1)]))
    with pytest.raises(AssertionError):
        w.merge({0, 1})
    w2 = WorkGraph(build_graph(4, [(0, 2), (1, 3)]))
    rep, mapping = w2.merge({0, 1})
    assert rep == 0
    assert mapping[1] == 0
    assert w2.adj[0] == {2, 3}


def test_replay_handcrafted():
    g = build_graph(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
    tr = ReductionTrace()
    tr.add(RuleRecord("note-only"))
    tr.add(RuleRecord("del", "delete-vertices", vertices=(4,), k_delta=-1))
    tr.add(RuleRecord("cut", "delete-edges", edges=((0, 1),)))
    tr.add(RuleRecord("patch", "add-edges", edges=((0, 2),)))
    out, k = replay_trace(g, 3, tr)
    assert k == 2
    assert out == build_graph(4, [(1, 2), (0, 2), (2, 3)])


def test_replay_rejects_mutation_after_compact():
    g = build_graph(2, [(0, 1)])
    tr = ReductionTrace()
    tr.add(RuleRecord("compact", "compact", remap=((0, 0), (1, 1))))
    tr.add(RuleRecord("late", "delete-edges", edges=((0, 1),)))
    with pytest.raises(ValueError):
        replay_trace(g, 1, tr)


def test_replay_checks_remap_consistency():
    g = build_graph(2, [])
    tr = ReductionTrace()
    tr.add(RuleRecord("compact", "compact", remap=((0, 1), (1, 0))))
    with pytest.raises(ValueError):
        replay_trace(g, 0, tr)


def test_replay_reproduces_kernel_outputs():
    """The trace of every Reduced outcome replays to the reduced graph."""
    rng = DetRng(17)
    pairs_cache = {}
    checked = 0
    for _ in range(600):
        n = 1 + rng.randint(6)
        pairs = pairs_cache.setdefault(
            n, list(itertools.combinations(range(n), 2))
        )
        mask = rng.next64() & ((1 << len(pairs)) - 1)
        g = build_graph(n, [pairs[i] for i in range(len(pairs)) if mask >> i & 1])
        k = rng.randint(5)
        for p in Problem:
            out = kernelize_problem(p, g, k)
            if out.is_decided:
                continue
            # deletion-by-complement traces speak the complement graph
            base = complement(g) if p is Problem.SPLIT_DEL else g
            want = (
                complement(out.reduced.graph)
                if p is Problem.SPLIT_DEL
                else out.reduced.graph
            )
            got_g, got_k = replay_trace(base, k, out.trace)
            assert got_g == want and got_k == out.reduced.k, (p, sorted(g.edges()), k)
            checked += 1
    assert checked > 100
