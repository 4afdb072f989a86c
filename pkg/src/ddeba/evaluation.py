"""Accuracy measures, the leave-one-out harness and the Wilcoxon comparison."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .dataset import Dataset
from .errors import EstimationError, ValidationError
from .estimator import EstimationConfig, predict
from .ops import OpCounter

EXACT_WILCOXON_MAX_N = 20


@dataclass(frozen=True, eq=False)
class LocalErrors:
    """Per-project MRE, MER and AE.  Undefined relative errors are NaN."""

    actual: np.ndarray
    estimate: np.ndarray
    mre: np.ndarray
    mer: np.ndarray
    ae: np.ndarray

    def __len__(self) -> int:
        return len(self.actual)

    @property
    def undefined_mre(self) -> int:
        return int(np.isnan(self.mre).sum())

    @property
    def undefined_mer(self) -> int:
        return int(np.isnan(self.mer).sum())


@dataclass(frozen=True)
class GlobalMeasures:
    mmre: float
    mdmre: float
    mmer: float
    mdmer: float
    mae: float
    mdae: float

    def as_dict(self) -> dict[str, float]:
        return {
            "MMRE": self.mmre, "MdMRE": self.mdmre, "MMER": self.mmer,
            "MdMER": self.mdmer, "MAE": self.mae, "MdAE": self.mdae,
        }


def local_errors(actuals, estimates) -> LocalErrors:
    actual = np.asarray(actuals, dtype=np.float64)
    estimate = np.asarray(estimates, dtype=np.float64)
    if actual.shape != estimate.shape or actual.ndim != 1:
        raise ValidationError("actuals and estimates must be equal-length vectors")
    ae = np.abs(actual - estimate)
    with np.errstate(divide="ignore", invalid="ignore"):
        mre = np.where(actual > 0, ae / actual, np.nan)
        mer = np.where(estimate != 0, ae / np.abs(estimate), np.nan)
    mer[np.isnan(estimate)] = np.nan
    return LocalErrors(actual, estimate, mre, mer, ae)


def _mean_median(values: np.ndarray, name: str) -> tuple[float, float]:
    values = values[~np.isnan(values)]
    if len(values) == 0:
        raise ValidationError(f"no defined {name} values")
    return float(np.mean(values)), float(np.median(values))


def global_measures(locals_: LocalErrors) -> GlobalMeasures:
    """Means and medians of the defined local errors."""
    if len(locals_) == 0:
        raise ValidationError("no projects to aggregate")
    mmre, mdmre = _mean_median(locals_.mre, "MRE")
    mmer, mdmer = _mean_median(locals_.mer, "MER")
    mae, mdae = _mean_median(locals_.ae, "AE")
    return GlobalMeasures(mmre, mdmre, mmer, mdmer, mae, mdae)


@dataclass
class EvaluationReport:
    config: EstimationConfig
    locals: LocalErrors
    globals: GlobalMeasures
    wall_time: float
    k_used: list[int | None]
    matched_index: list[int | None]
    failures: dict[int, str] = field(default_factory=dict)
    op_counts: OpCounter = field(default_factory=OpCounter)

    @property
    def n(self) -> int:
        return len(self.locals)


def loo_evaluate(dataset: Dataset, config: EstimationConfig) -> EvaluationReport:
    """Hold out each project, re-freeze ranges on the rest, and predict it.

    A project whose prediction fails is recorded in ``failures`` and its
    errors are NaN, which keeps it out of the global measures.
    """
    n = dataset.n
    if n < 3:
        raise ValidationError(f"leave-one-out evaluation needs n >= 3, got {n}")
    counter = OpCounter()
    estimates = np.full(n, np.nan)
    k_used: list[int | None] = [None] * n
    matched: list[int | None] = [None] * n
    failures: dict[int, str] = {}
    start = time.perf_counter()
    for i in range(n):
        try:
            train = dataset.without(i)
            pred = predict(train, dataset.records[i], config, counter=counter)
        except (EstimationError, ValidationError) as exc:
            failures[i] = str(exc)
            continue
        estimates[i] = pred.estimate
        k_used[i] = pred.k_used
        if pred.matched_index is not None:
            # Report the match as an index into the full dataset.
            matched[i] = pred.matched_index + (pred.matched_index >= i)
    wall = time.perf_counter() - start
    if len(failures) == n:
        raise EstimationError("every leave-one-out prediction failed")
    locs = local_errors(dataset.efforts, estimates)
    return EvaluationReport(config, locs, global_measures(locs), wall, k_used, matched,
                            failures, counter)


# ---------------------------------------------------------------------------
# Wilcoxon signed-rank test

@dataclass(frozen=True, eq=False)
class ComparisonResult:
    ae_a: np.ndarray
    ae_b: np.ndarray
    wilcoxon_statistic: float
    p_value: float
    n_effective: int
    method: str
    degenerate: bool = False


def _average_ranks(values: np.ndarray) -> np.ndarray:
    """1-based ranks with ties sharing their average rank."""
    order = np.argsort(values, kind="stable")
    sorted_vals = values[order]
    ranks = np.empty(len(values))
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and sorted_vals[j + 1] == sorted_vals[i]:
            j += 1
        ranks[order[i:j + 1]] = (i + j + 2) / 2.0
        i = j + 1
    return ranks


def _exact_lower_tail(doubled_ranks: list[int], w2: int) -> float:
    """P(T+ <= w) under the null; ranks and ``w`` are doubled to stay integral."""
    total = sum(doubled_ranks)
    counts = [0] * (total + 1)
    counts[0] = 1
    reach = 0
    for r in doubled_ranks:
        reach += r
        for s in range(reach, r - 1, -1):
            counts[s] += counts[s - r]
    hits = sum(counts[: w2 + 1])
    return hits / 2 ** len(doubled_ranks)


def wilcoxon_signed_rank(a, b) -> ComparisonResult:
    """Two-sided paired Wilcoxon signed-rank test on ``a - b``.

    Zero differences are dropped and tied magnitudes get average ranks.  The
    p-value is exact (full sign-assignment distribution) for up to 20
    non-zero differences and uses the tie-corrected normal approximation with
    continuity correction beyond that.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1 or len(a) == 0:
        raise ValidationError("paired samples must be non-empty equal-length vectors")
    if np.isnan(a).any() or np.isnan(b).any():
        raise ValidationError("paired samples contain NaN")
    diff = a - b
    diff = diff[diff != 0]
    n = len(diff)
    if n == 0:
        return ComparisonResult(a, b, 0.0, 1.0, 0, "degenerate", degenerate=True)
    ranks = _average_ranks(np.abs(diff))
    w_plus = float(ranks[diff > 0].sum())
    w_minus = float(ranks[diff < 0].sum())
    w = min(w_plus, w_minus)

    if n <= EXACT_WILCOXON_MAX_N:
        doubled = [int(round(2 * r)) for r in ranks]
        p = 2.0 * _exact_lower_tail(doubled, int(round(2 * w)))
        return ComparisonResult(a, b, w, min(1.0, p), n, "exact")

    mean = n * (n + 1) / 4.0
    _, tie_counts = np.unique(np.abs(diff), return_counts=True)
    var = n * (n + 1) * (2 * n + 1) / 24.0 - float(np.sum(tie_counts**3 - tie_counts)) / 48.0
    z = max(abs(w - mean) - 0.5, 0.0) / math.sqrt(var)
    p = math.erfc(z / math.sqrt(2.0))
    return ComparisonResult(a, b, w, min(1.0, p), n, "normal")


@dataclass
class Comparison:
    loocv: EvaluationReport
    dd: EvaluationReport
    wilcoxon: ComparisonResult


def compare(dataset: Dataset, k_max: int | None = None, statistic: str = "mean") -> Comparison:
    """Leave-one-out evaluation of LOOCV and DD selection plus a paired AE test."""
    loocv = loo_evaluate(dataset, EstimationConfig("loocv", k_max=k_max, statistic=statistic))
    dd = loo_evaluate(dataset, EstimationConfig("dd", k_max=k_max, statistic=statistic))
    both = ~np.isnan(loocv.locals.ae) & ~np.isnan(dd.locals.ae)
    result = wilcoxon_signed_rank(loocv.locals.ae[both], dd.locals.ae[both])
    return Comparison(loocv, dd, result)
