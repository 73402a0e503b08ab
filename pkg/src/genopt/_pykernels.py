"""Reference (interpreted) versions of the hot loops.

Each function here has a twin in ``_ckernels.pyx`` with the same signature and
the same floating-point operation order, so both backends give bit-identical
results on the same inputs.
"""
import math

import numpy as np


def eliminate_rounds(keys, protected, n_keep, uniforms, q):
    """Run tournament elimination until ``n_keep`` members remain.

    ``uniforms`` is a (rounds, 3) array: two entries pick a distinct pair among
    the unprotected survivors, the third decides whether the worse (prob. q)
    or the better member of the pair is removed. Returns a boolean keep-mask.
    """
    keys = np.asarray(keys, dtype=np.float64)
    n = keys.shape[0]
    keep = np.ones(n, dtype=bool)
    alive = [i for i in range(n) if not protected[i]]
    rounds = n - n_keep
    u = np.asarray(uniforms, dtype=np.float64)
    for r in range(rounds):
        n_alive = len(alive)
        i = int(u[r, 0] * n_alive)
        j = int(u[r, 1] * (n_alive - 1))
        if j >= i:
            j += 1
        a = alive[i]
        b = alive[j]
        # ties: the first-drawn member counts as the better one
        if keys[a] <= keys[b]:
            better_pos, worse_pos = i, j
        else:
            better_pos, worse_pos = j, i
        pos = worse_pos if u[r, 2] < q else better_pos
        keep[alive[pos]] = False
        alive[pos] = alive[n_alive - 1]
        alive.pop()
    return keep


def niche_counts(z, sigma, alpha):
    """Sharing niche count of every point of ``z`` (already range-normalized)."""
    z = np.asarray(z, dtype=np.float64)
    n, p = z.shape
    d2 = np.zeros((n, n))
    for k in range(p):
        diff = z[:, k][:, None] - z[:, k][None, :]
        d2 += diff * diff
    d = np.sqrt(d2)
    ratio = d / sigma
    if alpha != 1.0:
        # libm pow, as in the compiled kernel; numpy's vector power may round differently
        ratio = np.array([[math.pow(r, alpha) for r in row] for row in ratio.tolist()]).reshape(n, n)
    sh = np.where(d < sigma, 1.0 - ratio, 0.0)
    m = np.zeros(n)
    for j in range(n):
        m += sh[:, j]
    return m


def front_ranks(objs):
    """Non-dominated front index of every row of ``objs`` (minimization)."""
    f = np.asarray(objs, dtype=np.float64)
    n = f.shape[0]
    le = np.all(f[:, None, :] <= f[None, :, :], axis=2)
    lt = np.any(f[:, None, :] < f[None, :, :], axis=2)
    dom = le & lt  # dom[i, j]: i dominates j
    count = dom.sum(axis=0)
    rank = np.full(n, -1, dtype=np.int64)
    current = np.flatnonzero(count == 0)
    r = 0
    while current.size:
        rank[current] = r
        count = count - dom[current].sum(axis=0)
        count[rank >= 0] = -1
        current = np.flatnonzero(count == 0)
        r += 1
    return rank


def mean_pairwise_distance(z):
    """Mean Euclidean distance over all unordered pairs of rows of ``z``."""
    z = np.asarray(z, dtype=np.float64)
    n, p = z.shape
    if n < 2:
        return 0.0
    total = 0.0
    for i in range(n - 1):
        diff = z[i + 1:] - z[i]
        d2 = np.zeros(n - 1 - i)
        for k in range(p):
            d2 += diff[:, k] * diff[:, k]
        for v in np.sqrt(d2).tolist():
            total += v
    return total / (n * (n - 1) / 2)
