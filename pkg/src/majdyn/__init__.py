"""Deterministic threshold opinion dynamics on graphs.

Simulation of synchronous majority and two-threshold dynamics with influence
and stubbornness factors, random graph generators, elite-power scans and
countermeasures, phase sweeps, and exact-rational verification of the
stabilization theory (potential descent on the bipartite lift, expander
mixing, cycle bounds).
"""

from .analysis import (
    AlternatingPathBound,
    EliteQuery,
    MixingReport,
    PhaseReport,
    PhaseRow,
    StubbornnessBound,
    SweepSpec,
    alternating_path_bound,
    apply_cm1,
    apply_cm2,
    conjecture_experiment,
    density_sweep,
    min_winning_elite_fraction,
    stubbornness_bound,
    verify_mixing,
)
from .datasets import DatasetManifest, ParseError, ValidationError, load_edge_list
from .dynamics import (
    ModelConfig,
    OutcomeLabel,
    RunResult,
    StabilizationTimeout,
    Variant,
    classify_outcome,
    count_bichromatic,
    exact_fraction,
    random_coloring,
    run,
    step,
    weighted_tally,
    write_trajectory,
)
from .generators import (
    CalibrationError,
    GenSpec,
    gen_cycle,
    gen_er,
    gen_hrg,
    gen_pa,
    gen_rrg,
    generate,
    match_params,
)
from .graph import (
    DegreeStats,
    Graph,
    as_node_ids,
    build_graph,
    degree_stats,
    edges_between,
    is_connected,
    spectral_expansion,
    top_degree_nodes,
    top_degree_order,
    union,
)
from .potential import (
    DescentCertificate,
    PeriodicTieError,
    PotentialValue,
    WeightedBipartiteGraph,
    build_lifted_graph,
    certify_descent,
    periodic_step,
    potential,
    write_certificate_csv,
)

__version__ = "0.1.0"

__all__ = [
    "AlternatingPathBound",
    "CalibrationError",
    "DatasetManifest",
    "DegreeStats",
    "DescentCertificate",
    "EliteQuery",
    "GenSpec",
    "Graph",
    "MixingReport",
    "ModelConfig",
    "OutcomeLabel",
    "ParseError",
    "PeriodicTieError",
    "PhaseReport",
    "PhaseRow",
    "PotentialValue",
    "RunResult",
    "StabilizationTimeout",
    "StubbornnessBound",
    "SweepSpec",
    "ValidationError",
    "Variant",
    "WeightedBipartiteGraph",
    "alternating_path_bound",
    "apply_cm1",
    "apply_cm2",
    "as_node_ids",
    "build_graph",
    "build_lifted_graph",
    "certify_descent",
    "classify_outcome",
    "conjecture_experiment",
    "count_bichromatic",
    "degree_stats",
    "density_sweep",
    "edges_between",
    "exact_fraction",
    "gen_cycle",
    "gen_er",
    "gen_hrg",
    "gen_pa",
    "gen_rrg",
    "generate",
    "is_connected",
    "load_edge_list",
    "match_params",
    "min_winning_elite_fraction",
    "periodic_step",
    "potential",
    "random_coloring",
    "run",
    "spectral_expansion",
    "step",
    "stubbornness_bound",
    "top_degree_nodes",
    "top_degree_order",
    "union",
    "verify_mixing",
    "weighted_tally",
    "write_certificate_csv",
]
