# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled triple-scan kernel.

Scores every triple {i, j, k} with i_lo <= i < i_hi < j < k by the smallest
eigenvalue of the centered scatter matrix and accumulates pair co-incidence
counts for accepted triples (score strictly below t2). The floating-point
expression mirrors linecluster.tls.scatter operation-for-operation and the
module is compiled with FP contraction off, so scores match the scalar and
numpy routes bit-for-bit. Runs without the GIL; callers may drive disjoint
index ranges from several threads with per-thread buffers.
"""

from libc.math cimport sqrt

import numpy as np

compiled = True


def scan_triples(
    double[::1] x,
    double[::1] y,
    z_arr,
    double t2,
    Py_ssize_t i_lo,
    Py_ssize_t i_hi,
    int[::1] w,
    long long[::1] counts,
):
    """Same contract as the numpy backend's ``scan_triples``."""
    cdef Py_ssize_t n = x.shape[0]
    cdef bint have_z = z_arr is not None
    cdef const signed char[::1] z = z_arr if have_z else np.empty(0, dtype=np.int8)
    cdef Py_ssize_t i, j, k
    cdef double xi, yi, xj, yj, xk, yk, cx, cy
    cdef double dx0, dx1, dx2, dy0, dy1, dy2
    cdef double sxx, sxy, syy, mean, diff, root, lam
    cdef long long acc = 0, win = 0

    with nogil:
        for i in range(i_lo, i_hi):
            xi = x[i]
            yi = y[i]
            for j in range(i + 1, n):
                xj = x[j]
                yj = y[j]
                for k in range(j + 1, n):
                    xk = x[k]
                    yk = y[k]
                    cx = (xi + xj + xk) / 3.0
                    cy = (yi + yj + yk) / 3.0
                    dx0 = xi - cx
                    dx1 = xj - cx
                    dx2 = xk - cx
                    dy0 = yi - cy
                    dy1 = yj - cy
                    dy2 = yk - cy
                    sxx = dx0 * dx0 + dx1 * dx1 + dx2 * dx2
                    sxy = dx0 * dy0 + dx1 * dy1 + dx2 * dy2
                    syy = dy0 * dy0 + dy1 * dy1 + dy2 * dy2
                    mean = 0.5 * (sxx + syy)
                    diff = 0.5 * (sxx - syy)
                    root = sqrt(diff * diff + sxy * sxy)
                    lam = mean - root
                    if lam < 0.0:
                        lam = 0.0
                    if lam < t2:
                        acc += 1
                        w[i * n + j] += 1
                        w[i * n + k] += 1
                        w[j * n + k] += 1
                        if have_z and z[i] == z[j] and z[j] == z[k]:
                            win += 1
    counts[0] += acc
    counts[1] += win
