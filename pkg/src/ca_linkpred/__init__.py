"""Clustering-ability link prediction with CN/AA/RA baselines."""

from ca_linkpred.errors import ConfigError, ConsistencyError, InputError, ParseError
from ca_linkpred.graph import (
    DegreeClusteringProfile,
    Graph,
    GraphStats,
    build_graph,
    clustering_profile,
    common_neighbors,
    giant_component,
    graph_stats,
)
from ca_linkpred.similarity import (
    INDICES,
    ScoredCandidates,
    score_aa,
    score_all,
    score_ca,
    score_cn,
    score_ra,
)
from ca_linkpred.evaluation import (
    EdgeSplit,
    EvaluationResult,
    auc_exact,
    auc_sampled,
    precision_at_l,
    run_experiment,
    split_edges,
)
from ca_linkpred.psgen import PSParams, calibrate_temperature_check, generate_ps

__version__ = "0.1.0"
