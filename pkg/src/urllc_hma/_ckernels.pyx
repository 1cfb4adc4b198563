# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the kernels in ``_pykernels``; same semantics."""
import numpy as np
cimport numpy as cnp

cnp.import_array()

def count_failures(x, splits, double threshold, int combining=0):
    # combining: 0 = selection, 1 = sum rate
    cdef const double[:, ::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef const double[:, ::1] sv = np.ascontiguousarray(splits, dtype=np.float64)
    cdef Py_ssize_t n_rrb = xv.shape[0]
    cdef Py_ssize_t n = xv.shape[1]
    cdef Py_ssize_t n_splits = sv.shape[0]
    cdef cnp.ndarray[cnp.int64_t, ndim=1] counts = np.zeros(n_splits, dtype=np.int64)
    cdef long long[::1] cv = counts
    cdef Py_ssize_t k, j, i
    cdef int fail
    cdef double prod
    cdef double limit = 1.0 + threshold
    # one pass over the samples; every split is tested while a sample is hot
    for j in range(n):
        for k in range(n_splits):
            if combining == 0:
                fail = 1
                for i in range(n_rrb):
                    fail &= sv[k, i] * xv[i, j] < threshold
                cv[k] += fail
            else:
                prod = 1.0 + sv[k, 0] * xv[0, j]
                for i in range(1, n_rrb):
                    prod = prod * (1.0 + sv[k, i] * xv[i, j])
                cv[k] += prod < limit
    return counts


cdef inline bint _before(long a, long b, long[:] bud, double[:] key):
    if bud[a] != bud[b]:
        return bud[a] < bud[b]
    if key[a] != key[b]:
        return key[a] < key[b]
    return a < b


def schedule_slots(budget, int n_slots, interference_key, admissible, rate,
                   int n_ded_ns, int n_ded_s, int n_shared, int delay_budget):
    cdef Py_ssize_t n_users = len(budget)
    cdef int n_rrb = n_ded_ns + n_ded_s + n_shared
    cdef int ded_end = n_ded_ns + n_ded_s
    cdef long[:] bud = np.array(budget, dtype=np.int_)
    cdef double[:] key = np.array(interference_key, dtype=np.float64)
    cdef unsigned char[:] adm = np.array(admissible, dtype=np.uint8)
    cdef double[:] rates = np.array(rate, dtype=np.float64)
    grants_arr = np.full((n_slots, n_rrb), -1, dtype=np.int32)
    goodput_arr = np.zeros(n_slots, dtype=np.float64)
    cdef int[:, ::1] grants = grants_arr
    cdef double[:] goodput = goodput_arr
    cdef long[:] order = np.zeros(n_users, dtype=np.int_)
    cdef unsigned char[:] served = np.zeros(n_users, dtype=np.uint8)
    cdef long violations = 0
    cdef Py_ssize_t t, i, j, pos
    cdef long u, tmp
    cdef int rrb, r
    cdef double g
    for t in range(n_slots):
        for i in range(n_users):
            order[i] = i
            served[i] = 0
        # insertion sort: n_users is small
        for i in range(1, n_users):
            tmp = order[i]
            j = i - 1
            while j >= 0 and _before(tmp, order[j], bud, key):
                order[j + 1] = order[j]
                j -= 1
            order[j + 1] = tmp
        pos = 0
        for rrb in range(n_ded_ns, ded_end):
            if pos >= n_users:
                break
            u = order[pos]
            pos += 1
            grants[t, rrb] = <int>u
            served[u] = 1
        rrb = ded_end
        while rrb < n_rrb and pos < n_users:
            u = order[pos]
            pos += 1
            if adm[u]:
                grants[t, rrb] = <int>u
                served[u] = 1
                rrb += 1
        g = 0.0
        for r in range(n_rrb):
            u = grants[t, r]
            if u >= 0:
                g += rates[u]
        goodput[t] = g
        for i in range(n_users):
            if served[i]:
                bud[i] = delay_budget
            else:
                bud[i] -= 1
                if bud[i] <= 0:
                    violations += 1
                    bud[i] = delay_budget
    for i in range(n_users):
        budget[i] = bud[i]
    return grants_arr, goodput_arr, int(violations)
