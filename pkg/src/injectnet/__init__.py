"""Bypass-link injection for partitioned ad hoc networks.

Generates partitioned unit-disk snapshots, scores them with
small-world metrics (clustering coefficient, characteristic path
length) and evolves minimal bypass-link sets with generational or
steady-state GAs.
"""
from .errors import (
    DegenerateScenarioError,
    ExperimentConfigError,
    InfeasibleGeometryError,
    LineFormatError,
    ScenarioFormatError,
    ScenarioVersionError,
)
from .fitness import (
    FitnessValue,
    FitnessWeights,
    ScenarioEvaluator,
    decode,
    evaluate,
    genome_from_string,
    genome_to_string,
)
from .ga import (
    CrossoverKind,
    GaConfig,
    GaVariant,
    RunResult,
    bit_flip_mutation,
    run,
    tournament_select,
    two_point_crossover,
    uniform_crossover,
)
from .graph import (
    EdgeKind,
    Graph,
    MetricsReport,
    UNREACHABLE,
    all_pairs_distances,
    characteristic_path_length,
    clustering_coefficient,
    connected_components,
    local_clustering,
    metrics,
)
from .experiment import (
    ComboStats,
    ExperimentConfig,
    ExperimentReport,
    default_scenarios,
    emit_convergence_svg,
    emit_csv,
    parse_experiment_config,
    rank_combos,
    run_experiment,
    scenario_label,
)
from .scenario import (
    CandidatePolicy,
    Scenario,
    ScenarioParams,
    candidate_pairs,
    generate_scenario,
    load_scenario,
    save_scenario,
)

__version__ = "0.1.0"

__all__ = [
    "CandidatePolicy",
    "ComboStats",
    "CrossoverKind",
    "DegenerateScenarioError",
    "EdgeKind",
    "ExperimentConfig",
    "ExperimentConfigError",
    "ExperimentReport",
    "FitnessValue",
    "FitnessWeights",
    "GaConfig",
    "GaVariant",
    "Graph",
    "InfeasibleGeometryError",
    "LineFormatError",
    "MetricsReport",
    "RunResult",
    "Scenario",
    "ScenarioEvaluator",
    "ScenarioFormatError",
    "ScenarioParams",
    "ScenarioVersionError",
    "UNREACHABLE",
    "all_pairs_distances",
    "bit_flip_mutation",
    "candidate_pairs",
    "characteristic_path_length",
    "clustering_coefficient",
    "connected_components",
    "decode",
    "default_scenarios",
    "emit_convergence_svg",
    "emit_csv",
    "evaluate",
    "generate_scenario",
    "genome_from_string",
    "genome_to_string",
    "load_scenario",
    "local_clustering",
    "metrics",
    "parse_experiment_config",
    "rank_combos",
    "run",
    "run_experiment",
    "save_scenario",
    "scenario_label",
    "tournament_select",
    "two_point_crossover",
    "uniform_crossover",
    "__version__",
]
