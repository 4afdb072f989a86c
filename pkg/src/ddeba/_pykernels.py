"""Pure-Python (numpy) kernels.

Results are bitwise identical to ``_ckernels``: per-pair sums run over the
features in schema order, and KS gaps are computed on integer numerators.
"""

from __future__ import annotations

import numpy as np

STATUS_OK = 0
STATUS_UNDEFINED = 1
STATUS_DEGENERATE = 2

KIND_NOMINAL = 0


def _accumulate(q, Y, kinds, scales):
    """Numerator, denominator and degenerate-range flags of ``q`` against each row of ``Y``."""
    rows, p = Y.shape
    num = np.zeros(rows)
    den = np.zeros(rows)
    bad = np.full(rows, -1, dtype=np.int64)
    for m in range(p):
        a = q[m]
        if a != a:
            continue
        col = Y[:, m]
        present = col == col
        if kinds[m] == KIND_NOMINAL:
            d = (col != a).astype(np.float64)
        else:
            diff = np.abs(col - a)
            scale = scales[m]
            if scale == 0.0:
                hit = present & (diff != 0.0) & (bad < 0)
                bad[hit] = m
                d = np.zeros(rows)
            else:
                d = diff / scale
        num[present] += d[present]
        den[present] += 1.0
    return num, den, bad


def gower_pairwise(X, kinds, scales):
    """Return ``(D, status, (i, j, feature))`` for the records in ``X``."""
    n = X.shape[0]
    D = np.zeros((n, n))
    for i in range(n - 1):
        num, den, bad = _accumulate(X[i], X[i + 1:], kinds, scales)
        problem = (bad >= 0) | (den == 0.0)
        if problem.any():
            off = int(np.argmax(problem))
            j = i + 1 + off
            if bad[off] >= 0:
                return D, STATUS_DEGENERATE, (i, j, int(bad[off]))
            return D, STATUS_UNDEFINED, (i, j, -1)
        row = num / den
        D[i, i + 1:] = row
        D[i + 1:, i] = row
    return D, STATUS_OK, (-1, -1, -1)


def gower_to_query(q, X, kinds, scales):
    """Distances from ``q`` to every row of ``X``; ``inf`` where no feature overlaps."""
    num, den, bad = _accumulate(q, X, kinds, scales)
    if (bad >= 0).any():
        j = int(np.argmax(bad >= 0))
        return None, STATUS_DEGENERATE, (-1, j, int(bad[j]))
    out = np.full(X.shape[0], np.inf)
    ok = den > 0.0
    out[ok] = num[ok] / den[ok]
    return out, STATUS_OK, (-1, -1, -1)


def ks_sorted(a, b):
    """Two-sample KS statistic of two sorted, non-empty samples."""
    na, nb = len(a), len(b)
    pooled = np.concatenate((a, b))
    ca = np.searchsorted(a, pooled, side="right").astype(np.int64)
    cb = np.searchsorted(b, pooled, side="right").astype(np.int64)
    gap = int(np.max(np.abs(ca * nb - cb * na)))
    return gap / (na * nb)


def ks_rows(rows, q):
    """KS statistic of every row of the row-sorted matrix ``rows`` against sorted ``q``."""
    return np.array([ks_sorted(r, q) for r in rows], dtype=np.float64)
