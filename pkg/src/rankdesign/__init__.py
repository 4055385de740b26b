"""Spectral design of pairwise-comparison experiments for least-squares ranking."""

from .bounds import (BoundReport, best_cut_bound_exhaustive, cut_bound, degree_bound,
                     edge_connectivity_bound, er_bound, er_bound_edges)
from .design import (CriteriaReport, DesignResult, best_single_edge, criteria, greedy_augment,
                     random_augment)
from .errors import (DegenerateDatasetError, DegenerateDegreeError, DimensionError, ExhaustedError,
                     HypothesisViolation, InvalidEdgeError, InvalidInputError, InvalidSubsetError,
                     NotIdentifiableError, ParseError, RankDesignError, SizeError, SolverFailure)
from .experiments import (ExperimentReport, SyntheticModel, active_vs_random, covariance_check,
                          er_ensemble, er_sample, increment_observation, synth_scores)
from .graph import (EdgeKey, MultiGraph, add_weight, bridged_cliques, complete_bipartite,
                    complete_graph, cycle_graph, degree_stats, edge_index, edge_pair,
                    global_min_cut, is_connected, laplacian_apply, path_graph, star_graph)
from .ingest import (LabeledPairwiseData, RatingTriplets, ratings_to_pairwise, read_edge_list,
                     read_ratings_csv, read_schedule, write_edge_list)
from .ranking import PairwiseData, RankingEstimate, kendall_tau, l2_error, lsq_rank, residual_histogram
from .spectral import ClusterResult, SpectralPair, fiedler, full_spectrum, smallest_eigs, spectral_cluster

__version__ = "0.1.0"
