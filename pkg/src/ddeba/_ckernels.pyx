# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; see ``_pykernels`` for the reference semantics."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, isnan, INFINITY

cnp.import_array()

STATUS_OK = 0
STATUS_UNDEFINED = 1
STATUS_DEGENERATE = 2

cdef enum:
    KIND_NOMINAL = 0


cdef inline int _pair(const double[:, ::1] X, Py_ssize_t i, const double[::1] q,
                      const int[::1] kinds, const double[::1] scales,
                      double *out, Py_ssize_t *bad_feature) noexcept nogil:
    # Returns 0 ok, 1 undefined, 2 degenerate.
    cdef Py_ssize_t m, p = X.shape[1]
    cdef double a, b, d, diff, num = 0.0, den = 0.0
    for m in range(p):
        a = q[m]
        b = X[i, m]
        if isnan(a) or isnan(b):
            continue
        if kinds[m] == KIND_NOMINAL:
            d = 1.0 if a != b else 0.0
        else:
            diff = fabs(b - a)
            if scales[m] == 0.0:
                if diff != 0.0:
                    bad_feature[0] = m
                    return 2
                d = 0.0
            else:
                d = diff / scales[m]
        num += d
        den += 1.0
    if den == 0.0:
        return 1
    out[0] = num / den
    return 0


def gower_pairwise(const double[:, ::1] X, const int[::1] kinds, const double[::1] scales):
    cdef Py_ssize_t n = X.shape[0], i, j, bad = -1
    cdef int status
    cdef double value
    D_arr = np.zeros((n, n), dtype=np.float64)
    cdef double[:, ::1] D = D_arr
    with nogil:
        for i in range(n - 1):
            for j in range(i + 1, n):
                status = _pair(X, j, X[i], kinds, scales, &value, &bad)
                if status != 0:
                    with gil:
                        return D_arr, status, (i, j, bad if status == 2 else -1)
                D[i, j] = value
                D[j, i] = value
    return D_arr, STATUS_OK, (-1, -1, -1)


def gower_to_query(const double[::1] q, const double[:, ::1] X, const int[::1] kinds,
                   const double[::1] scales):
    cdef Py_ssize_t n = X.shape[0], j, bad = -1
    cdef int status
    cdef double value
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    with nogil:
        for j in range(n):
            status = _pair(X, j, q, kinds, scales, &value, &bad)
            if status == 2:
                with gil:
                    return None, STATUS_DEGENERATE, (-1, j, bad)
            out[j] = INFINITY if status == 1 else value
    return out_arr, STATUS_OK, (-1, -1, -1)


cdef inline double _ks(const double *a, Py_ssize_t na, const double *b, Py_ssize_t nb) noexcept nogil:
    cdef Py_ssize_t i = 0, j = 0
    cdef long long gap, best = 0
    cdef double x
    while i < na and j < nb:
        x = a[i] if a[i] < b[j] else b[j]
        while i < na and a[i] <= x:
            i += 1
        while j < nb and b[j] <= x:
            j += 1
        gap = <long long>i * nb - <long long>j * na
        if gap < 0:
            gap = -gap
        if gap > best:
            best = gap
    return <double>best / (<double>na * <double>nb)


def ks_sorted(const double[::1] a, const double[::1] b):
    if a.shape[0] == 0 or b.shape[0] == 0:
        raise ValueError("empty sample")
    return _ks(&a[0], a.shape[0], &b[0], b.shape[0])


def ks_rows(const double[:, ::1] rows, const double[::1] q):
    cdef Py_ssize_t r, n = rows.shape[0], m = rows.shape[1], nq = q.shape[0]
    if m == 0 or nq == 0:
        raise ValueError("empty sample")
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    with nogil:
        for r in range(n):
            out[r] = _ks(&rows[r, 0], m, &q[0], nq)
    return out_arr
