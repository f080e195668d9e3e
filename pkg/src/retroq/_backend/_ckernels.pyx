# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled implementations of the hot numeric kernels.

Same contract as :mod:`retroq._backend.pykernels`: C-contiguous complex128
inputs, no validation. Matrices here are small (side <= a few dozen), so
plain nested loops beat vectorized dispatch.
"""

import numpy as np

NAME = "compiled"

ctypedef double complex zcomplex


def kraus_apply(const zcomplex[:, :, ::1] kraus, const zcomplex[:, ::1] rho):
    """Sum_k K_k rho K_k^dag for a (n, d_out, d_in) Kraus stack."""
    cdef Py_ssize_t n = kraus.shape[0]
    cdef Py_ssize_t dout = kraus.shape[1]
    cdef Py_ssize_t din = kraus.shape[2]
    out_arr = np.zeros((dout, dout), dtype=np.complex128)
    tmp_arr = np.empty((dout, din), dtype=np.complex128)
    cdef zcomplex[:, ::1] out = out_arr
    cdef zcomplex[:, ::1] tmp = tmp_arr
    cdef Py_ssize_t k, i, j, l
    cdef zcomplex acc
    for k in range(n):
        for i in range(dout):
            for j in range(din):
                acc = 0
                for l in range(din):
                    acc = acc + kraus[k, i, l] * rho[l, j]
                tmp[i, j] = acc
        for i in range(dout):
            for j in range(dout):
                acc = 0
                for l in range(din):
                    acc = acc + tmp[i, l] * kraus[k, j, l].conjugate()
                out[i, j] = out[i, j] + acc
    return out_arr


def kraus_adjoint_apply(const zcomplex[:, :, ::1] kraus, const zcomplex[:, ::1] y):
    """Sum_k K_k^dag y K_k for a (n, d_out, d_in) Kraus stack."""
    cdef Py_ssize_t n = kraus.shape[0]
    cdef Py_ssize_t dout = kraus.shape[1]
    cdef Py_ssize_t din = kraus.shape[2]
    out_arr = np.zeros((din, din), dtype=np.complex128)
    tmp_arr = np.empty((din, dout), dtype=np.complex128)
    cdef zcomplex[:, ::1] out = out_arr
    cdef zcomplex[:, ::1] tmp = tmp_arr
    cdef Py_ssize_t k, i, j, l
    cdef zcomplex acc
    for k in range(n):
        for i in range(din):
            for j in range(dout):
                acc = 0
                for l in range(dout):
                    acc = acc + kraus[k, l, i].conjugate() * y[l, j]
                tmp[i, j] = acc
        for i in range(din):
            for j in range(din):
                acc = 0
                for l in range(dout):
                    acc = acc + tmp[i, l] * kraus[k, l, j]
                out[i, j] = out[i, j] + acc
    return out_arr


def partial_trace(const zcomplex[:, ::1] m, dims, keep):
    """Trace out every tensor factor of ``m`` not listed in ``keep``."""
    cdef Py_ssize_t nfac = len(dims)
    cdef Py_ssize_t[::1] dim_arr = np.asarray(dims, dtype=np.intp)
    keep_set = set(int(i) for i in keep)

    # Row strides of each factor in the flat index.
    stride_arr = np.empty(nfac, dtype=np.intp)
    cdef Py_ssize_t[::1] strides = stride_arr
    cdef Py_ssize_t i, s = 1
    for i in range(nfac - 1, -1, -1):
        strides[i] = s
        s *= dim_arr[i]

    cdef Py_ssize_t nkeep = 1, ntrace = 1
    for i in range(nfac):
        if i in keep_set:
            nkeep *= dim_arr[i]
        else:
            ntrace *= dim_arr[i]

    # Flat offsets contributed by the kept / traced digit combinations.
    kmap_arr = np.zeros(nkeep, dtype=np.intp)
    tmap_arr = np.zeros(ntrace, dtype=np.intp)
    cdef Py_ssize_t[::1] kmap = kmap_arr
    cdef Py_ssize_t[::1] tmap = tmap_arr
    cdef Py_ssize_t blk, idx, digit, d
    blk = 1
    for i in range(nfac):
        if i not in keep_set:
            continue
        d = dim_arr[i]
        for idx in range(nkeep):
            digit = (idx // max(nkeep // (blk * d), 1)) % d
            kmap[idx] += digit * strides[i]
        blk *= d
    blk = 1
    for i in range(nfac):
        if i in keep_set:
            continue
        d = dim_arr[i]
        for idx in range(ntrace):
            digit = (idx // max(ntrace // (blk * d), 1)) % d
            tmap[idx] += digit * strides[i]
        blk *= d

    out_arr = np.zeros((nkeep, nkeep), dtype=np.complex128)
    cdef zcomplex[:, ::1] out = out_arr
    cdef Py_ssize_t a, b, t
    cdef zcomplex acc
    for a in range(nkeep):
        for b in range(nkeep):
            acc = 0
            for t in range(ntrace):
                acc = acc + m[kmap[a] + tmap[t], kmap[b] + tmap[t]]
            out[a, b] = acc
    return out_arr


def petz_sandwich(const zcomplex[:, ::1] sqrt_belief, const zcomplex[:, ::1] core,
                  Py_ssize_t dim_s, Py_ssize_t dim_r):
    """sqrt_belief (core (x) identity_R) sqrt_belief on an S(x)R space, S major."""
    cdef Py_ssize_t d = dim_s * dim_r
    left_arr = np.empty((d, d), dtype=np.complex128)
    out_arr = np.empty((d, d), dtype=np.complex128)
    cdef zcomplex[:, ::1] left = left_arr
    cdef zcomplex[:, ::1] out = out_arr
    cdef Py_ssize_t x, s2, r2, s1, y
    cdef zcomplex acc
    # left = sqrt_belief @ (core (x) 1_R): contraction only over the S factor.
    for x in range(d):
        for s2 in range(dim_s):
            for r2 in range(dim_r):
                acc = 0
                for s1 in range(dim_s):
                    acc = acc + sqrt_belief[x, s1 * dim_r + r2] * core[s1, s2]
                left[x, s2 * dim_r + r2] = acc
    for x in range(d):
        for y in range(d):
            acc = 0
            for s1 in range(d):
                acc = acc + left[x, s1] * sqrt_belief[s1, y]
            out[x, y] = acc
    return out_arr


def signature_sum(const zcomplex[:, ::1] sqrt_belief, Py_ssize_t dim_s, Py_ssize_t dim_r):
    """Sum_{k,k'} Tr_R[sqrt_belief (|k><k'| (x) 1_R) sqrt_belief] (x) |k><k'|."""
    cdef Py_ssize_t d2 = dim_s * dim_s
    out_arr = np.zeros((d2, d2), dtype=np.complex128)
    cdef zcomplex[:, ::1] out = out_arr
    cdef Py_ssize_t i, k, n, m, j, l
    cdef zcomplex acc
    # out[(i,k), (n,m)] = sum_{j,l} A[(i,j), (k,l)] * A[(m,l), (n,j)]
    for i in range(dim_s):
        for k in range(dim_s):
            for n in range(dim_s):
                for m in range(dim_s):
                    acc = 0
                    for j in range(dim_r):
                        for l in range(dim_r):
                            acc = acc + (sqrt_belief[i * dim_r + j, k * dim_r + l]
                                         * sqrt_belief[m * dim_r + l, n * dim_r + j])
                    out[i * dim_s + k, n * dim_s + m] = acc
    return out_arr
