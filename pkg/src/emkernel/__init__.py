"""Kernelization toolkit for parameterized graph edge-modification problems.

Four problems are covered: turning a graph into a clique plus isolated
vertices by edge deletions, into a split graph by additions or deletions,
into a trivially perfect graph by additions, and into a disjoint union of
stars by deletions.  Each problem ships with safe reduction rules that
shrink an instance to a small kernel, an exact oracle for ground truth at
small scale, instance generators, and a verification harness.
"""

from emkernel.graph import (
    Graph,
    build_graph,
    complement,
    apply_edits,
    non_edges_within,
    merge_vertices,
    connected_components,
    induced_subgraph,
)
from emkernel.recognizers import (
    GraphClass,
    Obstruction,
    is_member,
    find_obstruction,
    split_decomposition,
    splittance_partition,
)
from emkernel.oracle import (
    Problem,
    ProblemInstance,
    Decision,
    OracleSizeError,
    solve_exact,
    generic_solve,
    enumerate_split_decompositions,
    is_compatible,
)
from emkernel.kernel_cliqueis import CliqueISConfig, kernelize_clique_is
from emkernel.kernel_split import GeneralizedSplitInstance, kernelize_split
from emkernel.kernel_tp import kernelize_tp
from emkernel.kernel_star import kernelize_star
from emkernel.trace import (
    KernelOutcome,
    ReductionTrace,
    RuleRecord,
    WorkGraph,
    replay_trace,
)
from emkernel.harness import (
    DetRng,
    Mismatch,
    PlantSpec,
    VerificationReport,
    generate_member,
    plant_instance,
    kernelize_problem,
    kernel_size_ok,
    exhaustive_verify,
    sampled_verify,
    check_equivalence,
)

__all__ = [
    "Graph",
    "build_graph",
    "complement",
    "apply_edits",
    "non_edges_within",
    "merge_vertices",
    "connected_components",
    "induced_subgraph",
    "GraphClass",
    "Obstruction",
    "is_member",
    "find_obstruction",
    "split_decomposition",
    "splittance_partition",
    "Problem",
    "ProblemInstance",
    "Decision",
    "OracleSizeError",
    "solve_exact",
    "generic_solve",
    "enumerate_split_decompositions",
    "is_compatible",
    "CliqueISConfig",
    "kernelize_clique_is",
    "GeneralizedSplitInstance",
    "kernelize_split",
    "kernelize_tp",
    "kernelize_star",
    "KernelOutcome",
    "ReductionTrace",
    "RuleRecord",
    "WorkGraph",
    "replay_trace",
    "DetRng",
    "Mismatch",
    "PlantSpec",
    "VerificationReport",
    "generate_member",
    "plant_instance",
    "kernelize_problem",
    "kernel_size_ok",
    "exhaustive_verify",
    "sampled_verify",
    "check_equivalence",
]

__version__ = "0.1.0"
