# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops. See ``memqec._pykernels`` for the reference versions."""

import numpy as np

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil


def restricted_traces(const double complex[:, :, ::1] bras,
                      const double complex[:, ::1] kets,
                      const long long[::1] x_masks,
                      const long long[::1] z_masks):
    cdef Py_ssize_t L = bras.shape[0]
    cdef Py_ssize_t n_code = kets.shape[0]
    cdef Py_ssize_t N = kets.shape[1]
    cdef Py_ssize_t K = x_masks.shape[0]
    cdef Py_ssize_t l, k, i, b, e, nnz = 0
    cdef unsigned long long x, z
    cdef double complex amp

    # nonzero ket amplitudes only; codewords are often very sparse
    nz_i = np.empty(n_code * N, dtype=np.intp)
    nz_b = np.empty(n_code * N, dtype=np.intp)
    nz_a = np.empty(n_code * N, dtype=np.complex128)
    cdef Py_ssize_t[::1] ii = nz_i
    cdef Py_ssize_t[::1] bb = nz_b
    cdef double complex[::1] aa = nz_a
    for i in range(n_code):
        for b in range(N):
            if kets[i, b] != 0:
                ii[nnz] = i
                bb[nnz] = b
                aa[nnz] = kets[i, b]
                nnz += 1

    # l innermost so each update is a contiguous axpy
    cdef double complex[:, :, ::1] bt = np.ascontiguousarray(np.transpose(np.asarray(bras), (1, 2, 0)))
    out = np.zeros((K, L), dtype=np.complex128)
    cdef double complex[:, ::1] res = out
    with nogil:
        for k in range(K):
            x = <unsigned long long>x_masks[k]
            z = <unsigned long long>z_masks[k]
            for e in range(nnz):
                b = bb[e]
                amp = aa[e]
                if __builtin_popcountll(z & <unsigned long long>b) & 1:
                    amp = -amp
                i = ii[e]
                b = <Py_ssize_t>(<unsigned long long>b ^ x)
                for l in range(L):
                    res[k, l] = res[k, l] + bt[i, b, l] * amp
    return out.T.copy()


def poly_eval_grid(const double[:, ::1] coeffs,
                   const double[::1] mu,
                   const double[::1] p):
    cdef Py_ssize_t dm = coeffs.shape[0]
    cdef Py_ssize_t dp = coeffs.shape[1]
    cdef Py_ssize_t m = mu.shape[0]
    cdef Py_ssize_t t, i, j
    cdef double inner, outer
    out = np.empty(m, dtype=np.float64)
    cdef double[::1] res = out
    with nogil:
        for t in range(m):
            outer = 0.0
            for i in range(dm - 1, -1, -1):
                inner = 0.0
                for j in range(dp - 1, -1, -1):
                    inner = inner * p[t] + coeffs[i, j]
                outer = outer * mu[t] + inner
            res[t] = outer
    return out
