"""Goodness-of-fit testing for stochastic block models, plain and
degree-corrected, via maximum entry-wise standardized deviations."""

from .detect import ClusteringConfig, score, spectral_clustering
from .gof import (
    GUMBEL_LOCATION,
    GUMBEL_SCALE,
    DeviationField,
    GumbelNull,
    TestReport,
    deviation_field_dcsbm,
    deviation_field_sbm,
    gumbel_cdf,
    gumbel_quantile,
    statistic_L,
    statistic_T,
    test_membership,
    test_num_communities,
)
from .graphs import (
    EdgeListParseError,
    Graph,
    WeightedDigraph,
    largest_connected_component,
    load_edge_list,
    load_weighted_edge_list,
    symmetrize_and_threshold,
    write_edge_list,
)
from .harness import (
    CSV_COLUMNS,
    EXPERIMENT_IDS,
    ExperimentResult,
    ExperimentSpec,
    corrupt_labels,
    ks_distance_to_gumbel,
    run_experiment,
    write_experiment_csv,
)
from .models import (
    BlockCounts,
    BlockMatrix,
    DegreeParams,
    Membership,
    block_counts,
    block_matrix_from_pattern,
    estimate_block_matrix,
    estimate_degree_params,
    load_block_matrix,
    load_degree_params,
    load_membership,
    sample_dcsbm,
    sample_degree_params_sim4,
    sample_membership_balanced,
    sample_membership_multinomial,
    sample_sbm,
    save_block_matrix,
    save_degree_params,
    save_membership,
)
from .power import (
    AlternativeAssessment,
    assess_alternative,
    blockwise_average,
    er_separation_asymptotic,
    separation_ell,
)

__version__ = "0.1.0"

__all__ = [
    "AlternativeAssessment",
    "BlockCounts",
    "BlockMatrix",
    "CSV_COLUMNS",
    "ClusteringConfig",
    "DegreeParams",
    "DeviationField",
    "EXPERIMENT_IDS",
    "EdgeListParseError",
    "ExperimentResult",
    "ExperimentSpec",
    "GUMBEL_LOCATION",
    "GUMBEL_SCALE",
    "Graph",
    "GumbelNull",
    "Membership",
    "TestReport",
    "WeightedDigraph",
    "assess_alternative",
    "block_counts",
    "block_matrix_from_pattern",
    "blockwise_average",
    "corrupt_labels",
    "deviation_field_dcsbm",
    "deviation_field_sbm",
    "er_separation_asymptotic",
    "estimate_block_matrix",
    "estimate_degree_params",
    "gumbel_cdf",
    "gumbel_quantile",
    "ks_distance_to_gumbel",
    "largest_connected_component",
    "load_block_matrix",
    "load_degree_params",
    "load_edge_list",
    "load_membership",
    "load_weighted_edge_list",
    "run_experiment",
    "sample_dcsbm",
    "sample_degree_params_sim4",
    "sample_membership_balanced",
    "sample_membership_multinomial",
    "sample_sbm",
    "save_block_matrix",
    "save_degree_params",
    "save_membership",
    "score",
    "separation_ell",
    "spectral_clustering",
    "statistic_L",
    "statistic_T",
    "symmetrize_and_threshold",
    "test_membership",
    "test_num_communities",
    "write_edge_list",
    "write_experiment_csv",
]
