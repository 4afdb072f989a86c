"""Distance distributions and two-sample Kolmogorov-Smirnov matching."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .dissimilarity import DistanceMatrix
from .errors import EmptySampleError, ValidationError
from .ops import OpCounter, tally


@dataclass(frozen=True, eq=False)
class DistanceDistribution:
    """Empirical sample of one project's (or the query's) distances.

    ``source_index`` is ``None`` for a query.  Samples are stored sorted;
    infinite distances are dropped and counted in ``excluded_count``.
    """

    source_index: int | None
    samples: np.ndarray
    excluded_count: int = 0

    @classmethod
    def from_values(cls, values, source_index: int | None = None) -> "DistanceDistribution":
        values = np.asarray(values, dtype=np.float64).ravel()
        if np.any(np.isnan(values)) or np.any(values < 0):
            raise ValidationError("distances must be non-negative numbers")
        finite = np.isfinite(values)
        samples = np.ascontiguousarray(np.sort(values[finite]))
        samples.flags.writeable = False
        return cls(source_index, samples, int((~finite).sum()))

    def __len__(self) -> int:
        return len(self.samples)


def row_distribution(matrix: DistanceMatrix, i: int) -> DistanceDistribution:
    """Row ``i`` of the matrix with the self-distance removed."""
    if not 0 <= i < matrix.n:
        raise IndexError(f"row {i} out of range for n={matrix.n}")
    return DistanceDistribution(i, matrix.sorted_rows[i])


def _as_sorted(sample) -> np.ndarray:
    if isinstance(sample, DistanceDistribution):
        arr = sample.samples
    else:
        arr = DistanceDistribution.from_values(sample).samples
    if len(arr) == 0:
        raise EmptySampleError("KS statistic needs non-empty samples")
    return arr


def ks_statistic(a, b) -> float:
    """``sup |F_a - F_b|`` of the right-continuous empirical CDFs.

    Accepts :class:`DistanceDistribution` objects or plain sequences.
    """
    return float(kernels.ks_sorted(_as_sorted(a), _as_sorted(b)))


def ks_profile(matrix: DistanceMatrix, query: DistanceDistribution,
               counter: OpCounter | None = None) -> np.ndarray:
    """KS statistic of every matrix row against ``query``."""
    if len(query) == 0:
        raise EmptySampleError("query distance distribution is empty")
    if matrix.n < 2:
        raise ValidationError("need at least two projects")
    tally(counter, "ks_comparisons", matrix.n)
    return np.asarray(kernels.ks_rows(matrix.sorted_rows, query.samples))


def nearest_distribution(matrix: DistanceMatrix, query: DistanceDistribution,
                         counter: OpCounter | None = None) -> tuple[int, float]:
    """Row whose distance distribution is closest to ``query``; ties go to the smaller index."""
    stats = ks_profile(matrix, query, counter)
    index = int(np.argmin(stats))
    return index, float(stats[index])
