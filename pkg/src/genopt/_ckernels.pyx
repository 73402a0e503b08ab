# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the loops in ``_pykernels``.

Operation order matches the interpreted module exactly; do not reorder sums.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, pow

cnp.import_array()


def eliminate_rounds(keys, protected, Py_ssize_t n_keep, uniforms, double q):
    cdef double[::1] k = np.ascontiguousarray(keys, dtype=np.float64)
    cdef cnp.uint8_t[::1] prot = np.ascontiguousarray(protected, dtype=np.uint8)
    cdef double[:, ::1] u = np.ascontiguousarray(uniforms, dtype=np.float64)
    cdef Py_ssize_t n = k.shape[0]
    keep_arr = np.ones(n, dtype=np.uint8)
    cdef cnp.uint8_t[::1] keep = keep_arr
    alive_arr = np.empty(n, dtype=np.intp)
    cdef Py_ssize_t[::1] alive = alive_arr
    cdef Py_ssize_t n_alive = 0, idx, r, i, j, a, b, better_pos, worse_pos, pos
    for idx in range(n):
        if not prot[idx]:
            alive[n_alive] = idx
            n_alive += 1
    for r in range(n - n_keep):
        i = <Py_ssize_t>(u[r, 0] * n_alive)
        j = <Py_ssize_t>(u[r, 1] * (n_alive - 1))
        if j >= i:
            j += 1
        a = alive[i]
        b = alive[j]
        if k[a] <= k[b]:
            better_pos = i
            worse_pos = j
        else:
            better_pos = j
            worse_pos = i
        pos = worse_pos if u[r, 2] < q else better_pos
        keep[alive[pos]] = 0
        alive[pos] = alive[n_alive - 1]
        n_alive -= 1
    return keep_arr.astype(bool)


def niche_counts(z, double sigma, double alpha):
    cdef double[:, ::1] zz = np.ascontiguousarray(z, dtype=np.float64)
    cdef Py_ssize_t n = zz.shape[0], p = zz.shape[1], i, j, c
    out = np.zeros(n)
    cdef double[::1] m = out
    cdef double d2, diff, d, ratio, sh
    for i in range(n):
        for j in range(n):
            d2 = 0.0
            for c in range(p):
                diff = zz[i, c] - zz[j, c]
                d2 = d2 + diff * diff
            d = sqrt(d2)
            if d < sigma:
                ratio = d / sigma
                if alpha != 1.0:
                    ratio = pow(ratio, alpha)
                sh = 1.0 - ratio
            else:
                sh = 0.0
            m[i] = m[i] + sh
    return out


def front_ranks(objs):
    cdef double[:, ::1] f = np.ascontiguousarray(objs, dtype=np.float64)
    cdef Py_ssize_t n = f.shape[0], kk = f.shape[1], i, j, c, r, n_done
    cdef bint le, lt
    count_arr = np.zeros(n, dtype=np.intp)
    cdef Py_ssize_t[::1] count = count_arr
    dom_arr = np.zeros((n, n), dtype=np.uint8)
    cdef cnp.uint8_t[:, ::1] dom = dom_arr
    rank_arr = np.full(n, -1, dtype=np.int64)
    cdef cnp.int64_t[::1] rank = rank_arr
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            le = True
            lt = False
            for c in range(kk):
                if f[i, c] > f[j, c]:
                    le = False
                    break
                if f[i, c] < f[j, c]:
                    lt = True
            if le and lt:
                dom[i, j] = 1
                count[j] += 1
    current = [i for i in range(n) if count[i] == 0]
    r = 0
    while current:
        for i in current:
            rank[i] = r
        nxt = []
        for i in current:
            for j in range(n):
                if dom[i, j]:
                    count[j] -= 1
                    if count[j] == 0:
                        nxt.append(j)
        nxt.sort()
        current = nxt
        r += 1
    return rank_arr


def mean_pairwise_distance(z):
    cdef double[:, ::1] zz = np.ascontiguousarray(z, dtype=np.float64)
    cdef Py_ssize_t n = zz.shape[0], p = zz.shape[1], i, j, c
    cdef double total = 0.0, d2, diff
    if n < 2:
        return 0.0
    for i in range(n - 1):
        for j in range(i + 1, n):
            d2 = 0.0
            for c in range(p):
                diff = zz[j, c] - zz[i, c]
                d2 = d2 + diff * diff
            total = total + sqrt(d2)
    return total / (n * (n - 1) / 2.0)
