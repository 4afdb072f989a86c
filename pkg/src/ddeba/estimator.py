"""Estimation by analogy with fixed, LOOCV-selected, or DD-selected ``k``.

LOOCV selection picks one global ``k`` by holding out each historical project
in turn and minimising the median absolute error.  DD selection matches the
query's distance distribution to the closest matrix row, finds the ``k`` that
best estimates that matched project from the others, and reuses it for the
query.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .dataset import Dataset, ProjectRecord
from .dissimilarity import DistanceMatrix, distance_matrix, distances_to_query
from .distributions import DistanceDistribution, nearest_distribution
from .errors import EmptyRankingError, ValidationError
from .ops import OpCounter, tally

METHODS = ("fixed-k", "loocv", "dd")
STATISTICS = ("mean", "median")
DEFAULT_K_MAX = 10


@dataclass(frozen=True)
class EstimationConfig:
    method: str = "dd"
    k: int | None = None
    k_max: int | None = None
    statistic: str = "mean"

    def __post_init__(self):
        method = self.method.replace("_", "-")
        object.__setattr__(self, "method", method)
        if method not in METHODS:
            raise ValidationError(f"unknown method {self.method!r}; expected one of {METHODS}")
        if self.statistic not in STATISTICS:
            raise ValidationError(f"unknown statistic {self.statistic!r}")
        if method == "fixed-k" and (self.k is None or self.k < 1):
            raise ValidationError("fixed-k needs k >= 1")
        if self.k_max is not None and self.k_max < 1:
            raise ValidationError("k_max must be >= 1")

    def resolve_k_max(self, n: int) -> int:
        """Effective ``k_max`` for a training set of ``n`` projects (validated)."""
        limit = n - 1 if self.method == "loocv" else n - 2
        k_max = self.k_max if self.k_max is not None else min(DEFAULT_K_MAX, limit)
        if k_max < 1 or k_max > limit:
            raise ValidationError(
                f"k_max={k_max} out of range for method {self.method} with n={n} "
                f"(allowed 1..{limit})"
            )
        return k_max


@dataclass(frozen=True, eq=False)
class NeighborRanking:
    """Candidate neighbours sorted by distance, ties by index."""

    indices: np.ndarray
    distances: np.ndarray

    def __len__(self) -> int:
        return len(self.indices)

    @property
    def entries(self) -> list[tuple[int, float]]:
        return [(int(i), float(d)) for i, d in zip(self.indices, self.distances)]


@dataclass(frozen=True)
class Prediction:
    estimate: float
    k_used: int
    neighbor_indices: tuple[int, ...]
    method: str
    matched_index: int | None = None
    ks_statistic: float | None = None
    k_errors: tuple[float, ...] = field(default=(), repr=False)


class LoocvSelection(NamedTuple):
    k_star: int
    mdae_per_k: np.ndarray


class DDSelection(NamedTuple):
    k_star: int
    matched_index: int
    ks_statistic: float
    ae_per_k: np.ndarray


def rank_neighbors(query_distances, exclude: int | None = None,
                   counter: OpCounter | None = None) -> NeighborRanking:
    """Sort candidates by distance; drops ``exclude`` and infinite distances."""
    d = np.asarray(query_distances, dtype=np.float64)
    keep = np.isfinite(d)
    if exclude is not None:
        if not 0 <= exclude < len(d):
            raise IndexError(f"exclude index {exclude} out of range")
        keep[exclude] = False
    idx = np.flatnonzero(keep)
    if len(idx) == 0:
        raise EmptyRankingError("no candidate neighbours left to rank")
    order = np.argsort(d[idx], kind="stable")
    tally(counter, "neighbor_rankings")
    return NeighborRanking(idx[order], d[idx][order])


def _mean(values: np.ndarray) -> float:
    # Left-to-right sum, matching the cumulative sums used for prefix estimates.
    return float(np.cumsum(values)[-1] / len(values))


def eba_estimate(ranking: NeighborRanking, efforts, k: int, statistic: str = "mean",
                 counter: OpCounter | None = None) -> float:
    """Mean or median effort of the ``k`` nearest ranked neighbours."""
    if not 1 <= k <= len(ranking):
        raise ValidationError(f"k={k} out of range 1..{len(ranking)}")
    values = np.asarray(efforts, dtype=np.float64)[ranking.indices[:k]]
    tally(counter, "eba_estimates")
    if statistic == "mean":
        return _mean(values)
    if statistic == "median":
        return float(np.median(values))
    raise ValidationError(f"unknown statistic {statistic!r}")


def _prefix_estimates(ranking: NeighborRanking, efforts: np.ndarray, k_max: int,
                      statistic: str, counter: OpCounter | None) -> np.ndarray:
    """Estimates for every ``k`` in ``1..k_max`` from one ranking."""
    if k_max > len(ranking):
        raise ValidationError(f"k_max={k_max} exceeds the {len(ranking)} ranked neighbours")
    values = efforts[ranking.indices[:k_max]]
    tally(counter, "eba_estimates", k_max)
    if statistic == "mean":
        return np.cumsum(values) / np.arange(1, k_max + 1)
    return np.array([np.median(values[:k]) for k in range(1, k_max + 1)])


def loocv_select_k(dataset: Dataset, matrix: DistanceMatrix, config: EstimationConfig,
                   counter: OpCounter | None = None) -> LoocvSelection:
    """Global ``k`` minimising the leave-one-out median absolute error.

    Ties go to the smallest ``k``.  The query is never consulted, so the
    result is the same for every project estimated against ``dataset``.
    """
    n = dataset.n
    if matrix.n != n:
        raise ValidationError("distance matrix does not match the dataset")
    k_max = _loocv_k_max(config, n)
    efforts = dataset.efforts
    errors = np.empty((n, k_max))
    for i in range(n):
        ranking = rank_neighbors(matrix[i], exclude=i, counter=counter)
        errors[i] = np.abs(efforts[i] - _prefix_estimates(ranking, efforts, k_max,
                                                          config.statistic, counter))
    mdae = np.median(errors, axis=0)
    return LoocvSelection(int(np.argmin(mdae)) + 1, mdae)


def _loocv_k_max(config: EstimationConfig, n: int) -> int:
    return EstimationConfig("loocv", k_max=config.k_max,
                            statistic=config.statistic).resolve_k_max(n)


def dd_select_k(dataset: Dataset, matrix: DistanceMatrix, query_distances,
                config: EstimationConfig, counter: OpCounter | None = None) -> DDSelection:
    """Per-query ``k`` borrowed from the project with the closest distance distribution.

    The matched project is estimated from the other historical projects for
    each ``k`` in ``1..k_max``; the ``k`` with the smallest absolute error
    (smallest ``k`` on ties) is returned together with the match.
    """
    n = dataset.n
    if matrix.n != n:
        raise ValidationError("distance matrix does not match the dataset")
    query_distances = np.asarray(query_distances, dtype=np.float64)
    if query_distances.shape != (n,):
        raise ValidationError(f"query distances must have length {n}")
    k_max = EstimationConfig("dd", k_max=config.k_max,
                             statistic=config.statistic).resolve_k_max(n)
    f_new = DistanceDistribution.from_values(query_distances)
    matched, stat = nearest_distribution(matrix, f_new, counter)
    efforts = dataset.efforts
    ranking = rank_neighbors(matrix[matched], exclude=matched, counter=counter)
    ae = np.abs(efforts[matched] - _prefix_estimates(ranking, efforts, k_max,
                                                     config.statistic, counter))
    return DDSelection(int(np.argmin(ae)) + 1, matched, stat, ae)


def predict(dataset: Dataset, query: ProjectRecord, config: EstimationConfig,
            matrix: DistanceMatrix | None = None,
            counter: OpCounter | None = None) -> Prediction:
    """Estimate the effort of ``query`` from its own nearest historical projects."""
    qd = distances_to_query(query, dataset)
    tally(counter, "distance_pairs", dataset.n)
    if config.method != "fixed-k" and matrix is None:
        matrix = distance_matrix(dataset)
        tally(counter, "distance_pairs", dataset.n * (dataset.n - 1) // 2)

    matched = stat = None
    k_errors: tuple[float, ...] = ()
    if config.method == "fixed-k":
        k = config.k
    elif config.method == "loocv":
        k, mdae = loocv_select_k(dataset, matrix, config, counter)
        k_errors = tuple(float(v) for v in mdae)
    else:
        sel = dd_select_k(dataset, matrix, qd, config, counter)
        k, matched, stat = sel.k_star, sel.matched_index, sel.ks_statistic
        k_errors = tuple(float(v) for v in sel.ae_per_k)

    ranking = rank_neighbors(qd, counter=counter)
    if k > len(ranking):
        raise EmptyRankingError(f"k={k} but only {len(ranking)} comparable neighbours")
    estimate = eba_estimate(ranking, dataset.efforts, k, config.statistic, counter)
    return Prediction(
        estimate=estimate,
        k_used=k,
        neighbor_indices=tuple(int(i) for i in ranking.indices[:k]),
        method=config.method,
        matched_index=matched,
        ks_statistic=stat,
        k_errors=k_errors,
    )
