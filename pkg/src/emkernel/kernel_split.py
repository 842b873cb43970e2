"""Kernel for Split Addition and Split Deletion.

The pipeline labels vertices while the budget shrinks.  A vertex ends up

* in K when it must join the clique side of every cheap split completion,
* in I when it must join the independent side,
* in D (unlabeled) while undecided.

The I/K labeling rules and the reduction rules run to a joint fixpoint,
then the labeled sets are replaced by small gadgets that force the same
behaviour (unlabeling), and an instance whose unlabeled part is too large
is rejected outright.  Deletion is the same pipeline on the complement
graph, complementing the reduced output back.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import isqrt

from emkernel.graph import Graph, VertexSet, complement
from emkernel.oracle import Decision, Problem, ProblemInstance
from emkernel.recognizers import GraphClass, is_member
from emkernel.trace import KernelOutcome, ReductionTrace, RuleRecord, WorkGraph

_D, _K, _I = 0, 1, 2


@dataclass
class GeneralizedSplitInstance:
    """A split-addition instance with a partial labeling of the vertices."""

    graph: Graph
    k: int
    K: VertexSet = field(default_factory=set)
    I: VertexSet = field(default_factory=set)
    D: VertexSet = field(default_factory=set)

    def __post_init__(self):
        n = self.graph.n
        if not self.K and not self.I and not self.D:
            self.D = set(range(n))
            return
        for name, part in (("K", self.K), ("I", self.I), ("D", self.D)):
            for v in part:
                if not 0 <= v < n:
                    raise ValueError(f"label set {name} has out-of-range vertex {v}")
        if len(self.K) + len(self.I) + len(self.D) != n or (
            self.K | self.I | self.D
        ) != set(range(n)):
            raise ValueError("K, I, D must partition the vertex set")


class _Engine:
    """Mutable rule-application state: labels plus per-vertex counts of
    K/I/D neighbors, updated incrementally on every label move."""

    def __init__(self, g: Graph, k: int, inst: GeneralizedSplitInstance | None = None):
        self.w = WorkGraph(g)
        self.k = k
        n = g.n
        self.labels = [_D] * n
        if inst is not None:
            for v in inst.K:
                self.labels[v] = _K
            for v in inst.I:
                self.labels[v] = _I
        self.knc = [0] * n
        self.inc = [0] * n
        self.dnc = [0] * n
        for v in range(n):
            for u in self.w.adj[v]:
                lab = self.labels[u]
                if lab == _K:
                    self.knc[v] += 1
                elif lab == _I:
                    self.inc[v] += 1
                else:
                    self.dnc[v] += 1
        self.n_k = self.labels.count(_K)
        self.n_i = self.labels.count(_I)
        self.n_d = n - self.n_k - self.n_i
        # adjacency bitmasks, only for counting non-edges inside
        # neighborhoods; maintained across red fills, not past fixpoint
        nbytes = (n >> 3) + 1
        self.bits = []
        for v in range(n):
            row = bytearray(nbytes)
            for u in self.w.adj[v]:
                row[u >> 3] |= 1 << (u & 7)
            self.bits.append(int.from_bytes(row, "little"))
        self._nn_cache: dict[int, int] = {}

    def labeled(self, which: int) -> list[int]:
        return [v for v, lab in enumerate(self.labels) if lab == which]

    def move(self, v: int, to: int) -> None:
        frm = self.labels[v]
        assert frm == _D and to in (_K, _I)
        self.labels[v] = to
        if to == _K:
            self.n_k += 1
        else:
            self.n_i += 1
        self.n_d -= 1
        for u in self.w.adj[v]:
            self.dnc[u] -= 1
            if to == _K:
                self.knc[u] += 1
            else:
                self.inc[u] += 1

    # --- labeling rules ----------------------------------------------

    def i_pass(self, trace: ReductionTrace | None) -> bool:
        """Rule I: move v from D to I when (a) all of v's neighbors are
        in K (isolated vertices included), or (b) v misses at least k+1
        vertices of K."""
        changed = False
        for v in self.labeled(_D):
            if self.knc[v] == self.w.degree(v):
                sub = "I-a"
            elif self.n_k - self.knc[v] >= self.k + 1:
                sub = "I-b"
            else:
                continue
            self.move(v, _I)
            changed = True
            if trace is not None:
                trace.add(RuleRecord(sub, vertices=(v,)))
        return changed

    def _nbhd_nonedges(self, v: int) -> int:
        """Number of non-edges inside N(v), cached; the graph only gains
        edges during the fixpoint, so red fills invalidate affected
        entries and everything else stays exact."""
        got = self._nn_cache.get(v)
        if got is None:
            bv = self.bits[v]
            inner = 0
            for u in self.w.adj[v]:
                inner += (self.bits[u] & bv).bit_count()
            d = len(self.w.adj[v])
            got = d * (d - 1) // 2 - inner // 2
            self._nn_cache[v] = got
        return got

    def k_pass(self, trace: ReductionTrace | None) -> bool:
        """Rule K: move v from D to K when (a) v has a neighbor in I, or
        (b) N(v) spans at least k+1 non-edges, or (c) v dominates K ∪ D."""
        changed = False
        for v in self.labeled(_D):
            d = len(self.w.adj[v])
            if self.inc[v] >= 1:
                sub = "K-a"
            elif d * (d - 1) >= 2 * (self.k + 1) and self._nbhd_nonedges(
                v
            ) >= self.k + 1:
                sub = "K-b"
            elif self.knc[v] == self.n_k and self.dnc[v] == self.n_d - 1:
                sub = "K-c"
            else:
                continue
            self.move(v, _K)
            changed = True
            if trace is not None:
                trace.add(RuleRecord(sub, vertices=(v,)))
        return changed

    # --- reduction rules ---------------------------------------------

    def red_pass(self, trace: ReductionTrace | None) -> Decision | bool:
        """Rule red: complete K (1 budget per missing edge); k < 0 or an
        edge inside I decides no."""
        kset = self.labeled(_K)
        kmask = 0
        for v in kset:
            kmask |= 1 << v
        missing: list[tuple[int, int]] = []
        for u in kset:
            gaps = kmask & ~self.bits[u] & ~((1 << (u + 1)) - 1)
            while gaps:
                low = gaps & -gaps
                missing.append((u, low.bit_length() - 1))
                gaps ^= low
        for u, v in missing:
            self.w.add_edge(u, v)
            self.knc[u] += 1
            self.knc[v] += 1
            self.bits[u] |= 1 << v
            self.bits[v] |= 1 << u
        if missing and self._nn_cache:
            for x in list(self._nn_cache):
                ax = self.w.adj[x]
                for u, v in missing:
                    if u in ax and v in ax:
                        del self._nn_cache[x]
                        break
        if missing:
            self.k -= len(missing)
            if trace is not None:
                trace.add(
                    RuleRecord(
                        "red-fill",
                        "add-edges",
                        edges=tuple(missing),
                        k_delta=-len(missing),
                    )
                )
        if self.k < 0:
            if trace is not None:
                trace.add(RuleRecord("red-negative", detail="no"))
            return Decision(False, None)
        for v in self.labeled(_I):
            if self.inc[v]:
                if trace is not None:
                    trace.add(RuleRecord("red-conflict", detail="no"))
                return Decision(False, None)
        return bool(missing)

    def fixpoint(self, trace: ReductionTrace | None) -> Decision | None:
        while True:
            changed = self.i_pass(trace)
            changed |= self.k_pass(trace)
            res = self.red_pass(trace)
            if isinstance(res, Decision):
                return res
            changed |= res
            if not changed:
                return None

    # --- unlabeling ----------------------------------------------------

    def assert_fixpoint(self) -> None:
        kset = self.labeled(_K)
        kmask = 0
        for v in kset:
            kmask |= 1 << v
        for u in kset:
            assert kmask & ~self.bits[u] == 1 << u, "K not a clique"
        for v in self.labeled(_I):
            assert self.inc[v] == 0, "edge inside I"
            assert self.dnc[v] == 0, "I vertex with unlabeled neighbor"
        for v in self.labeled(_D):
            assert self.n_k - self.knc[v] <= self.k, "D vertex too far from K"

    def unlabel(self, trace: ReductionTrace) -> None:
        """Swap the labeled sets for small forcing gadgets.

        A big K (> k) becomes a k-clique K' where each unlabeled v misses
        exactly as many K' vertices as it missed in K, capped at k; a
        small K stays.  I is always discarded: its vertices only see K,
        and an independent set I' with s(s-1)/2 > k, complete to the
        clique label set, re-imposes the side constraint."""
        kset = self.labeled(_K)
        iset = self.labeled(_I)
        dset = self.labeled(_D)
        for which, verts in (("K", kset), ("I", iset), ("D", dset)):
            trace.add(RuleRecord("labels", detail=which, vertices=tuple(verts)))

        clique_side: list[int] = kset
        if len(kset) >= self.k + 1:
            tvals = {v: self.n_k - self.knc[v] for v in dset}
            for v in kset:
                self.w.delete_vertex(v)
            trace.add(
                RuleRecord("unlabel-K", "delete-vertices", vertices=tuple(kset))
            )
            fresh = [self.w.add_vertex() for _ in range(self.k)]
            new_edges: list[tuple[int, int]] = []
            for i, u in enumerate(fresh):
                for v in fresh[i + 1 :]:
                    new_edges.append((u, v))
            for v in sorted(dset):
                for j in range(tvals[v], self.k):
                    new_edges.append((v, fresh[j]))
            for u, v in new_edges:
                self.w.add_edge(u, v)
            trace.add(
                RuleRecord(
                    "unlabel-K",
                    "add-vertices",
                    vertices=tuple(fresh),
                    edges=tuple(new_edges),
                )
            )
            clique_side = fresh

        if iset:
            for v in iset:
                self.w.delete_vertex(v)
            trace.add(
                RuleRecord("unlabel-I", "delete-vertices", vertices=tuple(iset))
            )
        if clique_side:
            s = max(2, (1 + isqrt(1 + 8 * self.k)) // 2)
            while s * (s - 1) <= 2 * self.k:
                s += 1
            fresh_i = [self.w.add_vertex() for _ in range(s)]
            cross = tuple((u, v) for u in fresh_i for v in clique_side)
            for u, v in cross:
                self.w.add_edge(u, v)
            trace.add(
                RuleRecord(
                    "unlabel-I", "add-vertices", vertices=tuple(fresh_i), edges=cross
                )
            )

    def write_back(self, inst: GeneralizedSplitInstance) -> None:
        out, _ = self.w.to_graph()  # labels only move, ids are stable
        inst.graph = out
        inst.k = self.k
        inst.K = set(self.labeled(_K))
        inst.I = set(self.labeled(_I))
        inst.D = set(self.labeled(_D))


# ---------------------------------------------------------------------------
# public per-rule entry points


def apply_I_rules(inst: GeneralizedSplitInstance) -> bool:
    eng = _Engine(inst.graph, inst.k, inst)
    changed = eng.i_pass(None)
    if changed:
        eng.write_back(inst)
    return changed


def apply_K_rules(inst: GeneralizedSplitInstance) -> bool:
    eng = _Engine(inst.graph, inst.k, inst)
    changed = eng.k_pass(None)
    if changed:
        eng.write_back(inst)
    return changed


def apply_reduction_rules(inst: GeneralizedSplitInstance) -> Decision | bool:
    eng = _Engine(inst.graph, inst.k, inst)
    res = eng.red_pass(None)
    if isinstance(res, Decision):
        return res
    if res:
        eng.write_back(inst)
    return res


def apply_unlabeling(inst: GeneralizedSplitInstance) -> ProblemInstance:
    """Replace the labeled sets by gadgets; requires the rules to be at
    fixpoint (asserted)."""
    eng = _Engine(inst.graph, inst.k, inst)
    eng.assert_fixpoint()
    trace = ReductionTrace()
    eng.unlabel(trace)
    out, _ = eng.w.to_graph()
    return ProblemInstance(Problem.SPLIT_ADD, out, eng.k)


# ---------------------------------------------------------------------------
# pipeline


def _reject_unlabeled_count(dd: int, k: int) -> bool:
    """|D| > 10k + 5*sqrt(2k) + 4, compared in integers."""
    t = dd - 10 * k - 4
    return t > 0 and t * t > 50 * k


def _kernelize_split_add(g: Graph, k: int, problem: Problem) -> KernelOutcome:
    trace = ReductionTrace()

    def decided(answer: bool, rule: str) -> KernelOutcome:
        trace.add(RuleRecord(rule, detail="yes" if answer else "no"))
        return KernelOutcome.decided(answer, trace)

    if k < 0:
        return decided(False, "trivial")
    if is_member(GraphClass.SPLIT, g):
        return decided(True, "member")
    if k == 0:
        return decided(False, "trivial")  # not split, no budget

    eng = _Engine(g, k)
    res = eng.fixpoint(trace)
    if res is not None:
        return KernelOutcome.decided(res.answer, trace)

    if _reject_unlabeled_count(eng.n_d, eng.k):
        return decided(False, "size-rejection")

    eng.assert_fixpoint()
    eng.unlabel(trace)
    out, remap = eng.w.to_graph()
    trace.add(RuleRecord("compact", "compact", remap=tuple(sorted(remap.items()))))
    return KernelOutcome.reduced_to(ProblemInstance(problem, out, eng.k), trace)


def kernelize_split(g: Graph, k: int, variant: str = "add") -> KernelOutcome:
    """Kernelize Split Addition, or Split Deletion via the complement.

    For variant="del" the trace describes the complemented graph; a
    leading note record marks the translation."""
    if variant == "add":
        return _kernelize_split_add(g, k, Problem.SPLIT_ADD)
    if variant != "del":
        raise ValueError(f"unknown split variant {variant!r}")
    outcome = _kernelize_split_add(complement(g), k, Problem.SPLIT_DEL)
    outcome.trace.records.insert(
        0, RuleRecord("complement", detail="records speak the complement graph")
    )
    if outcome.is_decided:
        return outcome
    inner = outcome.reduced
    assert inner is not None
    return KernelOutcome.reduced_to(
        ProblemInstance(Problem.SPLIT_DEL, complement(inner.graph), inner.k),
        outcome.trace,
    )
