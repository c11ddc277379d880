"""Bipartite consensus analysis for signed matrix-weighted networks."""
from .balance import (BalanceReport, BalancingSet, Bipartition, balancing_set,
                      canonical_bipartitions, enumerate_nbs, gauge_matrix,
                      is_structurally_balanced, merge_check, path_null_space, path_sign,
                      pn_spanning_tree)
from .dynamics import (Prediction, SteadyStateClass, Trajectory, classify_steady_state,
                       predict_from_nbs, simulate, steady_state_exact)
from .graph import (MatrixWeightedGraph, SignClass, WeightMatrix, classify_weight,
                    laplacian, laplacian_via_incidence, load_graph, signed_incidence,
                    validate_graph)
from .kernels import BACKEND as PARTITION_BACKEND
from .subspace import (Subspace, contains, equals, intersect, intersect_nulls, null_space,
                       project, span_sum)

__version__ = "0.1.0"
