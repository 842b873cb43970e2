"""Planted-instance generation and automated verification.

Verification has two layers.  The gate compares, for every instance in a
sweep, the kernelized outcome against the subset-enumeration reference
solver (a Reduced outcome is adjudicated by running the reference on the
kernel).  On top of that, a deep pass replays each kernel's trace one
record at a time and re-asks the reference solver after every rule
firing, so an unsafe rule is pinned to its name instead of surfacing as
an end-to-end mismatch.

Everything is deterministic: generators draw from a counter-based
splitmix64 stream keyed by the caller's seed, sweeps are partitioned into
fixed chunks whose reports merge in submission order, and no global RNG
state is touched.
"""

from __future__ import annotations

import itertools
import multiprocessing
import os
from dataclasses import dataclass, field

import numpy as np

from emkernel.graph import Edge, Graph, apply_edits, build_graph
from emkernel.kernel_cliqueis import _cmp_weighted_log, kernelize_clique_is
from emkernel.kernel_split import kernelize_split
from emkernel.kernel_star import kernelize_star
from emkernel.kernel_tp import kernelize_tp
from emkernel.oracle import (
    PROBLEM_TARGET,
    OracleSizeError,
    Problem,
    ProblemInstance,
    enumerate_split_decompositions,
    generic_solve,
)
from emkernel.recognizers import GraphClass, is_member
from emkernel.trace import KernelOutcome, WorkGraph

_M64 = (1 << 64) - 1


class DetRng:
    """splitmix64: a counter-based generator, stable across platforms and
    Python versions (unlike random.Random's sequence-level guarantees)."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _M64

    def next64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _M64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _M64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _M64
        return z ^ (z >> 31)

    def randint(self, n: int) -> int:
        """Uniform draw from [0, n), rejection-sampled (no modulo bias)."""
        if n <= 0:
            raise ValueError("randint needs a positive range")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            x = self.next64()
            if x < limit:
                return x % n

    def coin(self) -> int:
        return self.next64() >> 63

    def shuffled(self, items) -> list:
        xs = list(items)
        for i in range(len(xs) - 1, 0, -1):
            j = self.randint(i + 1)
            xs[i], xs[j] = xs[j], xs[i]
        return xs

    def sample_range(self, n: int, r: int) -> list[int]:
        """r distinct integers from [0, n), partial Fisher-Yates."""
        assert 0 <= r <= n
        swapped: dict[int, int] = {}
        out = []
        for i in range(r):
            j = i + self.randint(n - i)
            out.append(swapped.get(j, j))
            swapped[j] = swapped.get(i, i)
        return out


# ---------------------------------------------------------------------------
# generators


def generate_member(
    cls: GraphClass, n: int, seed: int, *, target_m: int | None = None
) -> Graph:
    """A seeded random member of the class.

    target_m only matters for split graphs: it picks the clique size so
    that the expected edge count lands near target_m (the coin-flip cross
    edges dominate), instead of a uniformly random clique size.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    rng = DetRng(seed)
    if cls is GraphClass.CLIQUE_PLUS_IS:
        perm = rng.shuffled(range(n))
        c = rng.randint(n + 1)
        return build_graph(n, itertools.combinations(sorted(perm[:c]), 2))
    if cls is GraphClass.SPLIT:
        if target_m is None:
            c = rng.randint(n + 1)
        else:
            c = min(n, max(1, round(2 * target_m / n)))
        perm = rng.shuffled(range(n))
        kside, iside = perm[:c], perm[c:]
        edges = list(itertools.combinations(sorted(kside), 2))
        for u in kside:
            for v in iside:
                if rng.coin():
                    edges.append((u, v) if u < v else (v, u))
        return build_graph(n, edges)
    if cls is GraphClass.TRIVIALLY_PERFECT:
        # random recursive forest; edges join every ancestor-descendant pair
        perm = rng.shuffled(range(n))
        ancestors: list[list[int]] = [[] for _ in range(n)]
        edges = []
        for v in range(1, n):
            if rng.randint(10) == 0:
                continue  # new root
            p = rng.randint(v)
            ancestors[v] = ancestors[p] + [p]
            pv = perm[v]
            for a in ancestors[v]:
                pa = perm[a]
                edges.append((pa, pv) if pa < pv else (pv, pa))
        return build_graph(n, edges)
    if cls is GraphClass.STARFOREST:
        perm = rng.shuffled(range(n))
        edges = []
        i = 0
        while i < n:
            size = 1 + rng.randint(n - i)
            center = perm[i]
            for j in range(i + 1, i + size):
                v = perm[j]
                edges.append((center, v) if center < v else (v, center))
            i += size
        return build_graph(n, edges)
    raise ValueError(f"unknown class {cls}")


@dataclass(frozen=True)
class PlantSpec:
    problem: Problem
    n: int
    r: int
    seed: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need n >= 1")
        if self.r < 0:
            raise ValueError("need r >= 0")


def plant_instance(spec: PlantSpec, *, target_m: int | None = None) -> ProblemInstance:
    """Perturb a class member r times against the problem's direction, so
    reverting the perturbation is a witness: the instance is positive at
    k = r.  r shrinks when fewer perturbations are available; the actual
    count is the returned k."""
    cls, mode = PROBLEM_TARGET[spec.problem]
    member = generate_member(cls, spec.n, spec.seed, target_m=target_m)
    rng = DetRng(spec.seed ^ 0x5DEECE66D)
    if mode == "delete":
        # breaking a deletion instance means adding non-class edges
        total = spec.n * (spec.n - 1) // 2
        avail = total - member.m
        r = min(spec.r, avail)
        chosen: set[Edge] = set()
        if r and total <= 4_000_000 and avail < total // 8:
            # dense member: rejection would stall, enumerate instead
            pool = list(member.non_edges())
            chosen = {pool[i] for i in rng.sample_range(len(pool), r)}
        else:
            while len(chosen) < r:
                u = rng.randint(spec.n)
                v = rng.randint(spec.n)
                if u == v:
                    continue
                e = (u, v) if u < v else (v, u)
                if e not in chosen and not member.has_edge(u, v):
                    chosen.add(e)
        g = apply_edits(member, sorted(chosen), "add")
    else:
        r = min(spec.r, member.m)
        want = sorted(rng.sample_range(member.m, r))
        drop = []
        it = iter(want)
        nxt = next(it, None)
        for i, e in enumerate(member.edges()):
            if i == nxt:
                drop.append(e)
                nxt = next(it, None)
        g = apply_edits(member, drop, "delete")
    return ProblemInstance(spec.problem, g, r)


# ---------------------------------------------------------------------------
# verification plumbing


def kernelize_problem(problem: Problem, g: Graph, k: int) -> KernelOutcome:
    if problem is Problem.CLIQUE_IS_DEL:
        return kernelize_clique_is(g, k)
    if problem is Problem.SPLIT_ADD:
        return kernelize_split(g, k, "add")
    if problem is Problem.SPLIT_DEL:
        return kernelize_split(g, k, "del")
    if problem is Problem.TP_ADD:
        return kernelize_tp(g, k)
    if problem is Problem.STAR_DEL:
        return kernelize_star(g, k)
    raise ValueError(f"unknown problem {problem}")


def kernel_size_ok(problem: Problem, inst: ProblemInstance) -> bool:
    """The size guarantee a Reduced output must satisfy."""
    n, k = inst.graph.n, inst.k
    if problem is Problem.STAR_DEL:
        return n <= 4 * k + 3
    if problem is Problem.TP_ADD:
        return n <= 2 * k * k + 2 * k
    if problem in (Problem.SPLIT_ADD, Problem.SPLIT_DEL):
        u = n - 11 * k - 8
        return u <= 0 or u * u <= 72 * k
    # clique+IS: n <= 2k/log2(k) + 1, claimed only for k > 257
    if k > 257:
        return _cmp_weighted_log(n - 1, k, 2 * k) <= 0
    return True


@dataclass(frozen=True)
class Mismatch:
    problem: str
    n: int
    edges: tuple[Edge, ...]
    k: int
    stage: str
    detail: str = ""
    seed: int | None = None


@dataclass
class VerificationReport:
    instances: int = 0
    skipped: int = 0
    mismatches: list[Mismatch] = field(default_factory=list)
    rule_firings: dict[str, int] = field(default_factory=dict)
    max_kernel_n: int = 0

    @property
    def passed(self) -> bool:
        return not self.mismatches

    def merge(self, other: "VerificationReport") -> None:
        self.instances += other.instances
        self.skipped += other.skipped
        self.mismatches.extend(other.mismatches)
        for rule, cnt in other.rule_firings.items():
            self.rule_firings[rule] = self.rule_firings.get(rule, 0) + cnt
        self.max_kernel_n = max(self.max_kernel_n, other.max_kernel_n)

    def to_jsonable(self) -> dict:
        return {
            "instances": self.instances,
            "skipped": self.skipped,
            "mismatches": [
                {
                    "problem": mm.problem,
                    "n": mm.n,
                    "edges": [list(e) for e in mm.edges],
                    "k": mm.k,
                    "stage": mm.stage,
                    "detail": mm.detail,
                    "seed": mm.seed,
                }
                for mm in self.mismatches
            ],
            "rule_firings": dict(sorted(self.rule_firings.items())),
            "max_kernel_n": self.max_kernel_n,
            "passed": self.passed,
        }


_PAIRS_CACHE: dict[int, tuple[list[Edge], dict[Edge, int]]] = {}


def _pairs(n: int) -> tuple[list[Edge], dict[Edge, int]]:
    got = _PAIRS_CACHE.get(n)
    if got is None:
        pairs = list(itertools.combinations(range(n), 2))
        got = (pairs, {p: i for i, p in enumerate(pairs)})
        _PAIRS_CACHE[n] = got
    return got


def _mask_of(g: Graph) -> int:
    _, index = _pairs(g.n)
    mask = 0
    for e in g.edges():
        mask |= 1 << index[e]
    return mask


_CANON_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _canon_tables(n: int) -> tuple[np.ndarray, np.ndarray]:
    got = _CANON_CACHE.get(n)
    if got is None:
        pairs, index = _pairs(n)
        perms = list(itertools.permutations(range(n)))
        maps = np.empty((len(perms), len(pairs)), dtype=np.int64)
        for pi, perm in enumerate(perms):
            for si, (u, v) in enumerate(pairs):
                a, b = perm[u], perm[v]
                maps[pi, si] = index[(a, b) if a < b else (b, a)]
        weights = 1 << np.arange(len(pairs), dtype=np.int64)
        got = (maps, weights)
        _CANON_CACHE[n] = got
    return got


def _canonical_key(n: int, mask: int) -> int:
    """Minimum edge-mask over all vertex relabelings (n <= 7)."""
    if n < 2:
        return 0
    maps, weights = _canon_tables(n)
    bits = (mask >> np.arange(maps.shape[1], dtype=np.int64)) & 1
    return int((bits[maps] * weights).sum(axis=1).min())


def _generic_answer(problem: Problem, g: Graph, k: int, memo: dict) -> bool:
    """Reference answer, memoized up to isomorphism for tiny graphs and by
    exact edge set above that."""
    if g.n <= 7:
        key = (0, problem.value, g.n, _canonical_key(g.n, _mask_of(g)), k)
    else:
        key = (1, problem.value, g.n, _mask_of(g), k)
    got = memo.get(key)
    if got is None:
        got = generic_solve(
            ProblemInstance(problem, g, k), max_n=32, max_k=max(4, k)
        ).answer
        memo[key] = got
    return got


def _split_positive(
    g: Graph, k: int, kset: set[int], iset: set[int], memo: dict
) -> bool:
    """Is the labeled split-addition state positive: some F with |F| <= k
    makes the graph split with a decomposition extending the labels?"""
    key = (2, _mask_of(g), k, frozenset(kset), frozenset(iset))
    got = memo.get(key)
    if got is not None:
        return got
    answer = False
    if k >= 0:
        nonedges = list(g.non_edges())
        for size in range(min(k, len(nonedges)) + 1):
            for f in itertools.combinations(nonedges, size):
                h = apply_edits(g, f, "add")
                if not is_member(GraphClass.SPLIT, h):
                    continue
                if any(
                    kset <= ks and iset <= istar
                    for ks, istar in enumerate_split_decompositions(h)
                ):
                    answer = True
                    break
            if answer:
                break
    memo[key] = answer
    return answer


def _record_mismatch(
    report: VerificationReport,
    problem: Problem,
    g: Graph,
    k: int,
    stage: str,
    detail: str,
    seed: int | None,
) -> None:
    report.mismatches.append(
        Mismatch(problem.value, g.n, tuple(g.edges()), k, stage, detail, seed)
    )


_SPLIT_LABEL_RULES = ("I-a", "I-b", "K-a", "K-b", "K-c")


def _check_steps_plain(
    problem: Problem,
    g: Graph,
    k: int,
    outcome: KernelOutcome,
    memo: dict,
    report: VerificationReport,
    seed: int | None,
) -> None:
    """Replay the trace record by record; every firing must preserve the
    reference answer, every decision note must state it."""
    w = WorkGraph(g)
    cur_k = k
    prev = _generic_answer(problem, g, cur_k, memo)
    for rec in outcome.trace.records:
        if rec.action == "note":
            cur_k += rec.k_delta
            if rec.detail in ("yes", "no") and prev != (rec.detail == "yes"):
                _record_mismatch(
                    report, problem, g, k, f"rule:{rec.rule}", "wrong decision", seed
                )
            continue
        if rec.action == "compact":
            break
        if rec.action == "delete-vertices":
            for v in rec.vertices:
                w.delete_vertex(v)
        elif rec.action == "delete-edges":
            for u, v in rec.edges:
                w.delete_edge(u, v)
        elif rec.action == "add-edges":
            for u, v in rec.edges:
                w.add_edge(u, v)
        elif rec.action == "merge":
            w.merge(set(rec.vertices))
        else:  # add-vertices only appears in split traces
            raise AssertionError(f"unexpected action {rec.action}")
        cur_k += rec.k_delta
        state, _ = w.to_graph()
        now = _generic_answer(problem, state, cur_k, memo)
        if now != prev:
            _record_mismatch(
                report, problem, g, k, f"rule:{rec.rule}", "answer flipped", seed
            )
        prev = now


def _check_steps_split(
    g: Graph,
    k: int,
    outcome: KernelOutcome,
    input_positive: bool,
    memo: dict,
    report: VerificationReport,
    seed: int | None,
) -> None:
    """Forward compatibility of the labeling pipeline: starting from a
    positive instance, every label move, budget-paying fill, and decision
    must leave a positive generalized state.  (The reverse directions are
    structural: removing labels or planned edges only loosens the
    constraint, and the end-to-end gate covers unlabeling.)"""
    if not input_positive:
        return
    problem = Problem.SPLIT_ADD
    w = WorkGraph(g)
    cur_k = k
    kset: set[int] = set()
    iset: set[int] = set()
    for rec in outcome.trace.records:
        if rec.rule in _SPLIT_LABEL_RULES:
            (kset if rec.rule.startswith("K") else iset).add(rec.vertices[0])
        elif rec.rule == "red-fill":
            for u, v in rec.edges:
                w.add_edge(u, v)
            cur_k += rec.k_delta
        elif rec.rule in ("red-negative", "red-conflict"):
            _record_mismatch(
                report, problem, g, k, f"rule:{rec.rule}", "no on positive state", seed
            )
            return
        elif rec.rule in ("unlabel-K", "unlabel-I", "compact"):
            return  # the gate adjudicates the unlabeled output
        else:
            continue  # trivial/member/labels notes
        state, _ = w.to_graph()
        if not _split_positive(state, cur_k, kset, iset, memo):
            _record_mismatch(
                report, problem, g, k, f"rule:{rec.rule}", "positivity lost", seed
            )
            return


def _verify_instance(
    problem: Problem,
    g: Graph,
    k: int,
    memo: dict,
    report: VerificationReport,
    deep: bool,
    seed: int | None = None,
) -> None:
    outcome = kernelize_problem(problem, g, k)
    for rule, cnt in outcome.trace.firing_counts().items():
        report.rule_firings[rule] = report.rule_firings.get(rule, 0) + cnt
    want = _generic_answer(problem, g, k, memo)
    if outcome.is_decided:
        got = outcome.answer
    else:
        inst = outcome.reduced
        assert inst is not None
        report.max_kernel_n = max(report.max_kernel_n, inst.graph.n)
        if not kernel_size_ok(problem, inst):
            _record_mismatch(
                report, problem, g, k, "size-bound", f"kernel n={inst.graph.n}", seed
            )
        got = _generic_answer(problem, inst.graph, inst.k, memo)
    if got != want:
        _record_mismatch(
            report, problem, g, k, "gate", f"want {want}, got {got}", seed
        )
    if deep:
        if problem is Problem.SPLIT_ADD:
            _check_steps_split(g, k, outcome, want, memo, report, seed)
        elif problem is not Problem.SPLIT_DEL:
            _check_steps_plain(problem, g, k, outcome, memo, report, seed)
        # split-del traces describe the complement; the add sweep covers
        # the same rule firings, the gate above covers the variant
    report.instances += 1


def _verify_chunk(args: tuple) -> VerificationReport:
    problem_value, n, lo, hi, k_max, deep = args
    problem = Problem(problem_value)
    report = VerificationReport()
    memo: dict = {}
    pairs, _ = _pairs(n)
    for mask in range(lo, hi):
        edges = [pairs[i] for i in range(len(pairs)) if (mask >> i) & 1]
        g = build_graph(n, edges)
        for k in range(k_max + 1):
            _verify_instance(problem, g, k, memo, report, deep)
    return report


def exhaustive_verify(
    problem: Problem,
    n_max: int,
    k_max: int,
    *,
    deep: bool = True,
    workers: int | None = None,
) -> VerificationReport:
    """Sweep every labeled graph with n <= n_max and every k <= k_max.

    deep=False checks only outcome agreement, skipping the per-rule
    replay.  Worker count never changes the report (chunks merge in
    order)."""
    if n_max > 7:
        raise ValueError("exhaustive sweep is limited to n <= 7")
    tasks = []
    for n in range(n_max + 1):
        total = 1 << (n * (n - 1) // 2)
        chunk = 4096 if n >= 6 else total
        for lo in range(0, total, chunk):
            tasks.append((problem.value, n, lo, min(lo + chunk, total), k_max, deep))
    if workers is None:
        workers = min(os.cpu_count() or 1, 8)
    report = VerificationReport()
    if workers <= 1 or len(tasks) <= 1:
        for t in tasks:
            report.merge(_verify_chunk(t))
        return report
    with multiprocessing.Pool(workers) as pool:
        for part in pool.imap(_verify_chunk, tasks):
            report.merge(part)
    return report


def sampled_verify(
    problem: Problem,
    n_max: int,
    k_max: int,
    samples: int,
    seed: int,
    *,
    deep: bool = True,
) -> VerificationReport:
    """Random labeled graphs and budgets instead of the full sweep."""
    if n_max > 7:
        raise ValueError("verification needs oracle-feasible sizes (n <= 7)")
    rng = DetRng(seed)
    report = VerificationReport()
    memo: dict = {}
    for _ in range(samples):
        n = 1 + rng.randint(n_max)
        slots = n * (n - 1) // 2
        mask = rng.next64() & ((1 << slots) - 1)
        pairs, _ = _pairs(n)
        g = build_graph(n, [pairs[i] for i in range(slots) if (mask >> i) & 1])
        k = rng.randint(k_max + 1)
        _verify_instance(problem, g, k, memo, report, deep, seed=seed)
    return report


def check_equivalence(problem: Problem, g: Graph, k: int) -> bool | None:
    """Gate check for one instance; None means the reference solver
    refused the size (skipped, which is never a pass)."""
    try:
        want = generic_solve(ProblemInstance(problem, g, k)).answer
    except OracleSizeError:
        return None
    outcome = kernelize_problem(problem, g, k)
    if outcome.is_decided:
        return outcome.answer == want
    inst = outcome.reduced
    assert inst is not None
    try:
        got = generic_solve(inst, max_n=16, max_k=max(4, inst.k)).answer
    except OracleSizeError:
        return None
    return got == want
