# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled single-site heat-bath updates for the Ising model.

Spins are int8 (+1/-1). The neighbourhood is CSR: the neighbours of ``v``
are ``nbr_idx[nbr_ptr[v]:nbr_ptr[v+1]]``. ``prob_plus[S + max_deg]`` holds
the heat-bath probability of a +1 spin given neighbour sum ``S``. A block
holds two uniforms per step: site chooser, then spin threshold.
"""

cimport cython
from libc.stdint cimport int8_t, int64_t


cdef inline int64_t _pick(double u, int64_t n) nogil:
    cdef int64_t v = <int64_t>(u * n)
    if v >= n:
        v = n - 1
    return v


def heatbath_apply(int8_t[::1] spins, int64_t[::1] nbr_ptr, int64_t[::1] nbr_idx,
                   double[::1] prob_plus, int64_t max_deg, double[::1] block):
    cdef int64_t n = spins.shape[0]
    cdef int64_t steps = block.shape[0] // 2
    cdef int64_t k, v, j, s
    with nogil:
        for k in range(steps):
            v = _pick(block[2 * k], n)
            s = 0
            for j in range(nbr_ptr[v], nbr_ptr[v + 1]):
                s += spins[nbr_idx[j]]
            spins[v] = 1 if block[2 * k + 1] < prob_plus[s + max_deg] else -1


def heatbath_apply_pair(int8_t[::1] lo, int8_t[::1] hi, int64_t[::1] nbr_ptr,
                        int64_t[::1] nbr_idx, double[::1] prob_plus, int64_t max_deg,
                        double[::1] block):
    """Evolve two chains under one block; return -1, or the first bad step."""
    cdef int64_t n = lo.shape[0]
    cdef int64_t steps = block.shape[0] // 2
    cdef int64_t k, v, j, s_lo, s_hi, w
    cdef int64_t bad = -1
    cdef double thr
    with nogil:
        for k in range(steps):
            v = _pick(block[2 * k], n)
            thr = block[2 * k + 1]
            s_lo = 0
            s_hi = 0
            for j in range(nbr_ptr[v], nbr_ptr[v + 1]):
                w = nbr_idx[j]
                s_lo += lo[w]
                s_hi += hi[w]
            lo[v] = 1 if thr < prob_plus[s_lo + max_deg] else -1
            hi[v] = 1 if thr < prob_plus[s_hi + max_deg] else -1
            if lo[v] > hi[v]:
                bad = k
                break
    return bad
