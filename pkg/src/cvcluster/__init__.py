"""Exact Gaussian simulation of staged two-mode-squeezing schedules and
closest continuous-variable cluster-state analysis.

The public surface re-exported here covers the full pipeline: build a
schedule (scenarios), evolve the vacuum exactly in the graph-matrix
representation (gaussian), find and characterize the closest cluster
state (analysis), and serialize results (report).
"""

from .analysis import (
    AnalysisReport,
    Edge,
    EdgeClassification,
    PhasedState,
    TargetComparison,
    approximation_error,
    build_report,
    classify_edges,
    closest_cvcs,
    compare_to_target,
    connected_components,
    cz_apply,
    is_bipartite_self_inverse,
    target_graph,
)
from .gaussian import (
    CovarianceMatrix,
    GraphZ,
    HGraph,
    NumericalDegeneracyError,
    Symplectic,
    apply_symplectic,
    covariance_from_graph,
    graph_from_covariance,
    hgraph_state,
    phase_shift_symplectic,
    tms_symplectic,
    vacuum_state,
)
from .report import (
    GraphExport,
    export_dot,
    export_graph,
    export_to_json,
    format_text_report,
    graph_from_export,
    import_graph,
    main,
    squeezing_db,
)
from .scenarios import (
    ALT_LATTICE_STAGE_ORDER,
    ConfigError,
    Schedule,
    ScenarioConfig,
    Stage,
    build_schedule,
    ladder_schedule,
    lattice_schedule,
    parse_scenario_config,
    run_schedule,
    schedule_symplectic,
    schedule_union_adjacency,
)

__version__ = "0.1.0"

__all__ = [
    "ALT_LATTICE_STAGE_ORDER",
    "AnalysisReport",
    "ConfigError",
    "CovarianceMatrix",
    "Edge",
    "EdgeClassification",
    "GraphExport",
    "GraphZ",
    "HGraph",
    "NumericalDegeneracyError",
    "PhasedState",
    "Schedule",
    "ScenarioConfig",
    "Stage",
    "Symplectic",
    "TargetComparison",
    "__version__",
    "apply_symplectic",
    "approximation_error",
    "build_report",
    "classify_edges",
    "closest_cvcs",
    "compare_to_target",
    "connected_components",
    "covariance_from_graph",
    "cz_apply",
    "export_dot",
    "export_graph",
    "export_to_json",
    "format_text_report",
    "graph_from_covariance",
    "graph_from_export",
    "hgraph_state",
    "import_graph",
    "is_bipartite_self_inverse",
    "ladder_schedule",
    "lattice_schedule",
    "main",
    "parse_scenario_config",
    "phase_shift_symplectic",
    "run_schedule",
    "schedule_symplectic",
    "schedule_union_adjacency",
    "squeezing_db",
    "target_graph",
    "tms_symplectic",
    "vacuum_state",
]
