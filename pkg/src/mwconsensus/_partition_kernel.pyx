# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled scan over all canonical node bipartitions.

Partition ``k`` puts node ``j`` (0-based, j >= 1) on side
``(k >> (n - 1 - j)) & 1``; node 0 is always on side 0. Edge ``e`` violates
the partition when ``side[u] ^ side[v] ^ neg[e]`` is 1.
"""
import numpy as np
from libc.stdint cimport int64_t


cdef inline int _violates(int64_t k, int su, int sv, int neg) nogil:
    return <int>(((k >> su) ^ (k >> sv) ^ neg) & 1)


def candidate_partitions(int n, const int[::1] eu, const int[::1] ev,
                         const unsigned char[::1] eneg,
                         const unsigned char[::1] edef,
                         const int[:, ::1] conflicts):
    """Indices of partitions that violate no definite edge and no conflict pair."""
    cdef Py_ssize_t m = eu.shape[0]
    cdef Py_ssize_t nc = conflicts.shape[0]
    cdef int[::1] su = np.empty(m, dtype=np.intc)
    cdef int[::1] sv = np.empty(m, dtype=np.intc)
    cdef int[::1] defs = np.empty(m, dtype=np.intc)
    cdef Py_ssize_t e, t, c, ndef = 0
    for e in range(m):
        su[e] = 62 if eu[e] == 0 else n - 1 - eu[e]
        sv[e] = 62 if ev[e] == 0 else n - 1 - ev[e]
        if edef[e]:
            defs[ndef] = e
            ndef += 1

    cdef int64_t total = (<int64_t>1) << (n - 1)
    cdef Py_ssize_t cap = 1024 if total > 1024 else total
    out = np.empty(cap, dtype=np.int64)
    cdef int64_t[::1] outv = out
    cdef Py_ssize_t count = 0
    cdef int64_t k
    cdef int ok, a, b
    for k in range(total):
        ok = 1
        for t in range(ndef):
            e = defs[t]
            if _violates(k, su[e], sv[e], eneg[e]):
                ok = 0
                break
        if ok:
            for c in range(nc):
                a = conflicts[c, 0]
                b = conflicts[c, 1]
                if (_violates(k, su[a], sv[a], eneg[a])
                        and _violates(k, su[b], sv[b], eneg[b])):
                    ok = 0
                    break
        if ok:
            if count == cap:
                cap *= 2
                out = np.resize(out, cap)
                outv = out
            outv[count] = k
            count += 1
    return out[:count].copy()
