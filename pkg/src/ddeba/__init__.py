"""Estimation by analogy with adaptive neighbour counts (DD-EbA) and the LOOCV-EbA baseline."""

from .dataset import (
    MISSING,
    Dataset,
    Feature,
    FeatureKind,
    ProjectRecord,
    Schema,
    load_schema,
    ordinal_to_unit_interval,
    parse_csv,
    parse_schema,
    write_csv,
)
from .dissimilarity import (
    DistanceMatrix,
    distance_matrix,
    distances_to_query,
    gower_distance,
    per_feature_dissimilarity,
)
from .distributions import DistanceDistribution, ks_statistic, nearest_distribution, row_distribution
from .errors import (
    DDEbAError,
    DegenerateRangeError,
    EmptyRankingError,
    EmptySampleError,
    EstimationError,
    UndefinedDistanceError,
    ValidationError,
)
from .estimator import (
    EstimationConfig,
    NeighborRanking,
    Prediction,
    dd_select_k,
    eba_estimate,
    loocv_select_k,
    predict,
    rank_neighbors,
)
from .evaluation import (
    GlobalMeasures,
    LocalErrors,
    compare,
    global_measures,
    local_errors,
    loo_evaluate,
    wilcoxon_signed_rank,
)
from .kernels import BACKEND

__version__ = "0.1.0"
