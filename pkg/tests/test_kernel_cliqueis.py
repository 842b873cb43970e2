import itertools
import math

import pytest

from emkernel.graph import build_graph
from emkernel.harness import DetRng, kernel_size_ok, sampled_verify
from emkernel.kernel_cliqueis import (
    CliqueISConfig,
    _cmp_weighted_log,
    apply_high_degree_rule,
    apply_log_degree_rule,
    apply_low_degree_rule,
    clique_candidate_exists,
    kernelize_clique_is,
    min_vertex_cover_bounded,
)
from emkernel.oracle import Problem, ProblemInstance, generic_solve

K4_PENDANT = build_graph(5, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 4)])
C4 = build_graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
K3 = build_graph(3, [(0, 1), (0, 2), (1, 2)])
P3 = build_graph(3, [(0, 1), (1, 2)])
K5_MINUS_E = build_graph(
    5, [e for e in itertools.combinations(range(5), 2) if e != (0, 1)]
)
TWO_K2 = build_graph(4, [(0, 1), (2, 3)])


def test_config_validation():
    assert CliqueISConfig().large_k_threshold == 257
    with pytest.raises(ValueError):
        CliqueISConfig(log_base=10)
    with pytest.raises(ValueError):
        CliqueISConfig(large_k_threshold=1)


def test_cmp_weighted_log_against_bigints():
    rng = DetRng(23)
    for _ in range(300):
        a = 1 + rng.randint(40)
        k = 2 + rng.randint(2000)
        c = rng.randint(4000)
        want = (k**a > 1 << c) - (k**a < 1 << c)
        assert _cmp_weighted_log(a, k, c) == want
    # cases where floats would round the wrong way: a*log2(k) == c exactly
    assert _cmp_weighted_log(10, 1024, 100) == 0
    assert _cmp_weighted_log(10, 1024, 101) == -1
    assert _cmp_weighted_log(10, 1024, 99) == 1


def test_low_degree_rule_examples():
    g, k, changed = apply_low_degree_rule(K4_PENDANT, 1)
    assert changed and k == 0 and g.n == 4 and g.m == 6
    _, k, changed = apply_low_degree_rule(C4, 1)
    assert not changed and k == 1
    _, _, changed = apply_low_degree_rule(K3, 0)
    assert not changed


def test_low_degree_invariant_after_fixpoint():
    rng = DetRng(5)
    for _ in range(400):
        n = 2 + rng.randint(6)
        pairs = list(itertools.combinations(range(n), 2))
        mask = rng.next64() & ((1 << len(pairs)) - 1)
        g = build_graph(n, [pairs[i] for i in range(len(pairs)) if mask >> i & 1])
        k = rng.randint(5)
        g2, k2, _ = apply_low_degree_rule(g, k)
        if k2 < 0 or g2.n == 0 or g2.m <= k2:
            continue
        dmin = min(g2.degree(v) for v in range(g2.n))
        assert (dmin + 1) ** 2 >= 2 * (g2.m - k2)


def test_clique_candidate_examples():
    assert not clique_candidate_exists(K4_PENDANT, 1, 4)
    assert clique_candidate_exists(K3, 0, 0)
    assert clique_candidate_exists(P3, 1, 1)


def test_log_degree_rule_examples():
    _, k, changed = apply_log_degree_rule(K4_PENDANT, 4)
    assert changed and k == 3
    _, k, changed = apply_log_degree_rule(K3, 2)
    assert not changed and k == 2
    _, k, changed = apply_log_degree_rule(K4_PENDANT, 1)
    assert not changed  # guard: skipped below k=2


def test_high_degree_rule_examples():
    dec = apply_high_degree_rule(K5_MINUS_E, 3)
    assert dec is not None and dec.answer
    assert dec.witness is not None and len(dec.witness) <= 3
    dec = apply_high_degree_rule(K5_MINUS_E, 2)
    assert dec is not None and not dec.answer
    dec = apply_high_degree_rule(TWO_K2, 4)
    assert dec is not None and dec.answer
    # below the degree threshold the rule does not apply
    assert apply_high_degree_rule(build_graph(6, [(0, 1)]), 4) is None


def test_min_vertex_cover_bounded_against_brute_force():
    rng = DetRng(31)
    for _ in range(200):
        n = 1 + rng.randint(8)
        pairs = list(itertools.combinations(range(n), 2))
        mask = rng.next64() & ((1 << len(pairs)) - 1)
        edges = [pairs[i] for i in range(len(pairs)) if mask >> i & 1]
        masks = [0] * n
        for u, v in edges:
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        opt = None
        for size in range(n + 1):
            if any(
                all(u in c or v in c for u, v in edges)
                for c in itertools.combinations(range(n), size)
            ):
                opt = size
                break
        budget = rng.randint(n + 2)
        got = min_vertex_cover_bounded(masks, budget)
        if opt <= budget:
            assert got is not None and len(got) == opt
            cmask = 0
            for v in got:
                cmask |= 1 << v
            assert all(cmask >> u & 1 or cmask >> v & 1 for u, v in edges)
        else:
            assert got is None


def test_kernelize_examples():
    out = kernelize_clique_is(K4_PENDANT, 1)
    assert out.is_decided and out.answer
    assert kernelize_clique_is(P3, 1).answer is True
    assert kernelize_clique_is(P3, 0).answer is False
    assert kernelize_clique_is(build_graph(0, []), 0).answer is True
    assert kernelize_clique_is(K3, -1).answer is False
    # k >= m is trivially yes (delete everything)
    assert kernelize_clique_is(C4, 4).answer is True


def test_crafted_stall_instance_reduces():
    """Clique K_30 plus three low-degree attachments: no rule fires, the
    budget sits above the large-k threshold, so the kernel must hand back
    a Reduced instance satisfying the advertised size bound."""
    c = 30
    k = c * (c - 1) // 2  # 435
    edges = list(itertools.combinations(range(c), 2))
    for i in range(3):
        v = c + i
        for j in range(5):
            edges.append((i * 5 + j, v))
    g = build_graph(c + 3, edges)
    out = kernelize_clique_is(g, k)
    assert not out.is_decided
    inst = out.reduced
    assert inst.graph.n == c + 3 and inst.k == k
    assert kernel_size_ok(Problem.CLIQUE_IS_DEL, inst)
    # rule 1 cannot fire: every degree is at least sqrt(2(m-k))-1
    dmin = min(g.degree(v) for v in range(g.n))
    assert (dmin + 1) ** 2 >= 2 * (g.m - k)


def test_against_oracle_sampled():
    rep = sampled_verify(Problem.CLIQUE_IS_DEL, 6, 4, samples=250, seed=404)
    assert rep.passed, rep.mismatches[:3]


def test_size_rejection_regime():
    # a graph far larger than 2k/log2(k)+1 with k just over the threshold
    # must be rejected outright when nothing else decides it first
    k = 300
    bound = math.floor(2 * k / math.log2(k)) + 1
    cfg = CliqueISConfig(enable_size_rejection=False)
    out_keep = kernelize_clique_is(K3, 2, cfg)
    assert out_keep.is_decided  # tiny instance, decided by the rules
    assert kernel_size_ok(
        Problem.CLIQUE_IS_DEL,
        ProblemInstance(Problem.CLIQUE_IS_DEL, build_graph(bound, []), k),
    )
    assert not kernel_size_ok(
        Problem.CLIQUE_IS_DEL,
        ProblemInstance(Problem.CLIQUE_IS_DEL, build_graph(bound + 1, []), k),
    )
