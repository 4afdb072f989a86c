"""Kaufman-Rousseeuw (Gower) dissimilarity for mixed-type project records.

``per_feature_dissimilarity`` and ``gower_distance`` are scalar reference
implementations working on raw cells.  ``distance_matrix`` and
``distances_to_query`` run the compiled/numpy kernels on the dataset's float
encoding; both routes add the per-feature terms in schema order, so their
results agree bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from . import kernels
from .dataset import Cell, Dataset, Feature, FeatureKind, ProjectRecord
from .errors import DegenerateRangeError, UndefinedDistanceError, ValidationError


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """Symmetric ``n x n`` dissimilarities with a zero diagonal."""

    entries: np.ndarray

    def __post_init__(self):
        entries = np.ascontiguousarray(self.entries, dtype=np.float64)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ValidationError("distance matrix must be square")
        if not np.all(np.isfinite(entries)) or np.any(entries < 0):
            raise ValidationError("distance matrix entries must be finite and non-negative")
        if not np.array_equal(entries, entries.T) or np.any(np.diag(entries) != 0):
            raise ValidationError("distance matrix must be symmetric with a zero diagonal")
        entries.flags.writeable = False
        object.__setattr__(self, "entries", entries)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __getitem__(self, key):
        return self.entries[key]

    @cached_property
    def sorted_rows(self) -> np.ndarray:
        """Row ``i`` without its diagonal entry, sorted ascending (``n x (n - 1)``)."""
        n = self.n
        mask = ~np.eye(n, dtype=bool)
        rows = self.entries[mask].reshape(n, n - 1)
        return np.ascontiguousarray(np.sort(rows, axis=1))

    def to_csv(self, path: str | Path) -> None:
        """Dump entries with 17 significant digits (round-trips exactly)."""
        np.savetxt(path, self.entries, fmt="%.17g", delimiter=",")


def per_feature_dissimilarity(
    feature: Feature, a: Cell, b: Cell, value_range: float | None = None
) -> tuple[int, float]:
    """Return ``(delta, d)`` for one feature.

    ``value_range`` is the frozen range of an interval feature and is ignored
    for other kinds.  Ordinal levels are mapped to ``[0, 1]`` through the
    feature's declared level order and then compared with range 1.
    """
    if a is None or b is None:
        return 0, 0.0
    if feature.kind is FeatureKind.NOMINAL:
        return 1, (1.0 if a != b else 0.0)
    if feature.kind is FeatureKind.ORDINAL:
        top = len(feature.levels) - 1
        try:
            za = feature.levels.index(a) / top if top else 0.0
            zb = feature.levels.index(b) / top if top else 0.0
        except ValueError:
            raise ValidationError(f"feature {feature.name!r}: unknown level") from None
        return 1, abs(zb - za) / 1.0
    diff = abs(float(b) - float(a))
    if value_range is None or value_range != value_range:
        raise ValidationError(f"feature {feature.name!r} has no frozen range")
    if value_range == 0.0:
        if diff != 0.0:
            raise DegenerateRangeError(
                f"feature {feature.name!r} is constant in the training data "
                f"but the compared values differ ({a!r} vs {b!r})",
                feature.name,
            )
        return 1, 0.0
    return 1, diff / value_range


def gower_distance(x: ProjectRecord, y: ProjectRecord, dataset: Dataset) -> float:
    """Mean of the per-feature dissimilarities over features present in both records."""
    ranges = dataset.feature_ranges
    num = 0.0
    den = 0
    for f, a, b in zip(dataset.schema.features, x.values, y.values):
        rng = None
        if f.kind is FeatureKind.INTERVAL and ranges[f.name] is not None:
            lo, hi = ranges[f.name]
            rng = hi - lo
        delta, d = per_feature_dissimilarity(f, a, b, rng)
        if delta:
            num += d
            den += 1
    if den == 0:
        raise UndefinedDistanceError("records share no non-missing feature")
    return num / den


def _raise_status(dataset: Dataset, status: int, where: tuple[int, int, int], query: bool):
    i, j, m = where
    if status == kernels.STATUS_DEGENERATE:
        name = dataset.schema.features[m].name
        who = f"query vs project {j}" if query else f"projects {i} and {j}"
        raise DegenerateRangeError(
            f"feature {name!r} has zero range but differs for {who}", name
        )
    if status == kernels.STATUS_UNDEFINED:
        raise UndefinedDistanceError(
            f"projects {i} and {j} share no non-missing feature", (i, j)
        )


def distance_matrix(dataset: Dataset) -> DistanceMatrix:
    """Pairwise dissimilarities of all historical records.

    Each unordered pair is computed once and mirrored.  A pair without any
    jointly present feature is a construction error.
    """
    D, status, where = kernels.gower_pairwise(dataset.encoded, dataset.kinds, dataset.scales)
    _raise_status(dataset, status, where, query=False)
    return DistanceMatrix(D)


def distances_to_query(query: ProjectRecord, dataset: Dataset) -> np.ndarray:
    """Dissimilarity of ``query`` to every historical record.

    Pairs without overlapping features get ``inf`` so that they drop out of
    neighbour rankings and distance distributions.
    """
    query = dataset.validate_query(query)
    q = dataset.encode(query)
    out, status, where = kernels.gower_to_query(q, dataset.encoded, dataset.kinds, dataset.scales)
    _raise_status(dataset, status, where, query=True)
    return np.asarray(out)
