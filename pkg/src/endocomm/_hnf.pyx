# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Hermite normal form kernel (int64 arithmetic).

Same algorithm as ``_hnf_py.hnf_mod``.  Entries are kept in ``[0, modulus)``
so every intermediate product stays below ``modulus**2``; moduli at or above
``2**31`` are rejected with OverflowError and the caller falls back to the
exact Python path.
"""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t

cnp.import_array()

_MAX_MODULUS = 2**31


cdef inline int64_t _mod(int64_t x, int64_t n) nogil:
    cdef int64_t r = x % n
    if r < 0:
        r += n
    return r


cdef inline void _xgcd(int64_t a, int64_t b, int64_t* g, int64_t* s, int64_t* t) nogil:
    cdef int64_t s0 = 1, s1 = 0, t0 = 0, t1 = 1, q, tmp
    while b != 0:
        q = a // b
        if (a % b != 0) and ((a < 0) != (b < 0)):
            q -= 1
        tmp = a - q * b
        a = b
        b = tmp
        tmp = s0 - q * s1
        s0 = s1
        s1 = tmp
        tmp = t0 - q * t1
        t0 = t1
        t1 = tmp
    if a < 0:
        g[0] = -a
        s[0] = -s0
        t[0] = -t0
    else:
        g[0] = a
        s[0] = s0
        t[0] = t0


def hnf_mod(rows, Py_ssize_t ncols, modulus):
    if modulus < 1 or modulus >= _MAX_MODULUS:
        raise OverflowError("modulus outside the 64-bit kernel range")
    cdef int64_t N = modulus
    cdef Py_ssize_t n = ncols
    cdef cnp.ndarray[cnp.int64_t, ndim=2] R
    if n == 0:
        return []
    R = np.ascontiguousarray(np.asarray(rows, dtype=np.int64).reshape(-1, n))
    cdef Py_ssize_t nr = R.shape[0]
    cdef cnp.ndarray[cnp.int64_t, ndim=2] H = np.zeros((n, n), dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] v = np.zeros(n, dtype=np.int64)
    cdef int64_t[:, ::1] Hv = H
    cdef int64_t[:, ::1] Rv = R
    cdef int64_t[::1] vv = v
    cdef Py_ssize_t i, j, k, c
    cdef int64_t a, b, q, g, s, t, ag, bg, pk, vk, piv
    with nogil:
        for j in range(n):
            Hv[j, j] = N
        for i in range(nr):
            for k in range(n):
                vv[k] = _mod(Rv[i, k], N)
            for j in range(n):
                a = vv[j]
                if a == 0:
                    continue
                b = Hv[j, j]
                if a % b == 0:
                    q = a // b
                    for k in range(j, n):
                        vv[k] = _mod(vv[k] - _mod(q * Hv[j, k], N), N)
                    continue
                _xgcd(b, a, &g, &s, &t)
                ag = a // g
                bg = b // g
                s = _mod(s, N)
                t = _mod(t, N)
                for k in range(j, n):
                    pk = Hv[j, k]
                    vk = vv[k]
                    Hv[j, k] = _mod(_mod(s * pk, N) + _mod(t * vk, N), N)
                    vv[k] = _mod(_mod(ag * pk, N) - _mod(bg * vk, N), N)
                Hv[j, j] = g
        for k in range(n):
            piv = Hv[k, k]
            for i in range(k):
                q = Hv[i, k] // piv
                if q != 0:
                    Hv[i, k] = Hv[i, k] - q * piv
                    for c in range(k + 1, n):
                        Hv[i, c] = _mod(Hv[i, c] - _mod(q * Hv[k, c], N), N)
    return H.tolist()
