# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels for elimination modulo a word-sized prime p < 2**31."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t, uint64_t

cnp.import_array()


cdef inline uint64_t _splitmix(uint64_t z) nogil:
    z = z + <uint64_t>0x9E3779B97F4A7C15
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EB
    return z ^ (z >> 31)


cdef inline int64_t _inv(int64_t a, int64_t p) nogil:
    cdef int64_t t = 0, newt = 1, r = p, newr = a, q, tmp
    while newr != 0:
        q = r // newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += p
    return t


def dense_rank(int64_t[:, ::1] a, int64_t p):
    """Rank of ``a`` over F_p.  ``a`` holds reduced residues and is destroyed."""
    cdef Py_ssize_t nr = a.shape[0], nc = a.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, piv
    cdef int64_t inv, f, tmp
    with nogil:
        for c in range(nc):
            if r == nr:
                break
            piv = -1
            for i in range(r, nr):
                if a[i, c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for j in range(c, nc):
                    tmp = a[r, j]
                    a[r, j] = a[piv, j]
                    a[piv, j] = tmp
            inv = _inv(a[r, c], p)
            for j in range(c, nc):
                a[r, j] = (a[r, j] * inv) % p
            for i in range(r + 1, nr):
                f = a[i, c]
                if f != 0:
                    f = p - f
                    for j in range(c, nc):
                        if a[r, j] != 0:
                            a[i, j] = (a[i, j] + f * a[r, j]) % p
            r += 1
    return r


def compress(const int64_t[::1] indptr, const int64_t[::1] indices, const int64_t[::1] data,
             Py_ssize_t ncols, Py_ssize_t k, int64_t p, uint64_t seed):
    """Return the ``ncols x k`` product ``(R @ A).T mod p`` for the CSR matrix ``A``.

    ``R[t, r] = splitmix64(seed + r*k + t) mod p`` is generated on the fly, so
    the result only depends on ``(A, k, p, seed)``.
    """
    cdef Py_ssize_t nrows = indptr.shape[0] - 1
    out_arr = np.zeros((ncols, k), dtype=np.int64)
    cdef int64_t[:, ::1] out = out_arr
    rvec_arr = np.empty(k, dtype=np.int64)
    cdef int64_t[::1] rvec = rvec_arr
    cdef Py_ssize_t r, t, e, c
    cdef int64_t v
    cdef uint64_t base
    with nogil:
        for r in range(nrows):
            if indptr[r] == indptr[r + 1]:
                continue
            base = seed + <uint64_t>r * <uint64_t>k
            for t in range(k):
                rvec[t] = <int64_t>(_splitmix(base + <uint64_t>t) % <uint64_t>p)
            for e in range(indptr[r], indptr[r + 1]):
                c = indices[e]
                v = data[e]
                for t in range(k):
                    out[c, t] = (out[c, t] + rvec[t] * v) % p
    return out_arr
