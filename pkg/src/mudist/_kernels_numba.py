"""Compiled inner loops.

Every function here has a twin with the same name and signature in
``_kernels_numpy``; ``_accel`` picks one module at import time.
Inputs are assumed to be C-contiguous float64 arrays already validated
by the public wrappers in ``indicators``.
"""
import numpy as np
from numba import njit

SENTINEL = np.finfo(np.float64).max


@njit(cache=True)
def _nondominated(P):
    # minimization; exact duplicates keep their lowest index
    n, k = P.shape
    keep = np.ones(n, dtype=np.bool_)
    for i in range(n):
        for j in range(n):
            if i == j or not keep[j]:
                continue
            weak = True
            equal = True
            for t in range(k):
                if P[j, t] > P[i, t]:
                    weak = False
                    break
                if P[j, t] != P[i, t]:
                    equal = False
            if weak and (not equal or j < i):
                keep[i] = False
                break
    return P[keep]


@njit(cache=True)
def _hv2(P, ref):
    order = np.argsort(P[:, 0])
    vol = 0.0
    ymin = ref[1]
    for idx in range(P.shape[0]):
        x = P[order[idx], 0]
        y = P[order[idx], 1]
        if y < ymin:
            vol += (ref[0] - x) * (ymin - y)
            ymin = y
    return vol


@njit(cache=True)
def _hv_rec(P, ref):
    n, k = P.shape
    if n == 0:
        return 0.0
    if n == 1:
        v = 1.0
        for t in range(k):
            v *= ref[t] - P[0, t]
        return v
    if k == 2:
        return _hv2(P, ref)
    # slice along the last objective; points sorted so earlier ones are better in it
    order = np.argsort(P[:, k - 1])
    vol = 0.0
    for idx in range(n):
        p = P[order[idx]]
        excl = 1.0
        for t in range(k - 1):
            excl *= ref[t] - p[t]
        if idx > 0:
            L = np.empty((idx, k - 1))
            for s in range(idx):
                q = P[order[s]]
                for t in range(k - 1):
                    L[s, t] = max(q[t], p[t])
            excl -= _hv_rec(_nondominated(L), ref)
        vol += (ref[k - 1] - p[k - 1]) * excl
    return vol


@njit(cache=True)
def hv(A, ref):
    n, m = A.shape
    inside = np.ones(n, dtype=np.bool_)
    for i in range(n):
        for t in range(m):
            if A[i, t] >= ref[t]:
                inside[i] = False
                break
    P = A[inside]
    if P.shape[0] == 0:
        return 0.0
    return _hv_rec(_nondominated(P), ref)


@njit(cache=True)
def igd(A, R):
    total = 0.0
    for r in range(R.shape[0]):
        best = np.inf
        for a in range(A.shape[0]):
            s = 0.0
            for t in range(A.shape[1]):
                diff = A[a, t] - R[r, t]
                s += diff * diff
            if s < best:
                best = s
        total += np.sqrt(best)
    return total / R.shape[0]


@njit(cache=True)
def igd_plus(A, R):
    total = 0.0
    for r in range(R.shape[0]):
        best = np.inf
        for a in range(A.shape[0]):
            s = 0.0
            for t in range(A.shape[1]):
                diff = A[a, t] - R[r, t]
                if diff > 0.0:
                    s += diff * diff
            if s < best:
                best = s
        total += np.sqrt(best)
    return total / R.shape[0]


@njit(cache=True)
def eps_plus(A, R):
    worst = -np.inf
    for r in range(R.shape[0]):
        best = np.inf
        for a in range(A.shape[0]):
            shift = -np.inf
            for t in range(A.shape[1]):
                diff = A[a, t] - R[r, t]
                if diff > shift:
                    shift = diff
            if shift < best:
                best = shift
        if best > worst:
            worst = best
    return worst


@njit(cache=True)
def r2(A, W, z):
    total = 0.0
    for w in range(W.shape[0]):
        best = np.inf
        for a in range(A.shape[0]):
            g = -np.inf
            for t in range(A.shape[1]):
                v = W[w, t] * abs(A[a, t] - z[t])
                if v > g:
                    g = v
            if g < best:
                best = g
        total += best
    return total / W.shape[0]


@njit(cache=True)
def nr2(A, W, q):
    m = A.shape[1]
    total = 0.0
    for w in range(W.shape[0]):
        best = -np.inf
        for a in range(A.shape[0]):
            g = np.inf
            for t in range(m):
                wt = W[w, t]
                if wt == 0.0:
                    wt = 1e-6
                v = abs(q[t] - A[a, t]) / wt
                if v < g:
                    g = v
            if g > best:
                best = g
        total += best ** m
    return total / W.shape[0]


@njit(cache=True)
def s_energy(A, s):
    n, m = A.shape
    total = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            d2 = 0.0
            for t in range(m):
                diff = A[i, t] - A[j, t]
                d2 += diff * diff
            if d2 == 0.0:
                return SENTINEL
            total += 2.0 * np.sqrt(d2) ** (-s)
    return total


@njit(cache=True)
def nearest_other(A):
    """Euclidean distance from each member to its nearest other member (by index)."""
    n, m = A.shape
    out = np.full(n, np.inf)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            d2 = 0.0
            for t in range(m):
                diff = A[i, t] - A[j, t]
                d2 += diff * diff
            if d2 < out[i]:
                out[i] = d2
    return np.sqrt(out)


@njit(cache=True)
def nearest_in(X, A):
    """Euclidean distance from each row of X to its nearest member of A."""
    out = np.empty(X.shape[0])
    for i in range(X.shape[0]):
        best = np.inf
        for j in range(A.shape[0]):
            d2 = 0.0
            for t in range(X.shape[1]):
                diff = X[i, t] - A[j, t]
                d2 += diff * diff
            if d2 < best:
                best = d2
        out[i] = np.sqrt(best)
    return out


@njit(cache=True)
def _find(parent, i):
    while parent[i] != i:
        parent[i] = parent[parent[i]]
        i = parent[i]
    return i


@njit(cache=True)
def pd_greedy(A, p):
    n, m = A.shape
    if n < 2:
        return 0.0
    D = np.empty((n, n))
    for i in range(n):
        D[i, i] = np.inf
        for j in range(i + 1, n):
            s = 0.0
            for t in range(m):
                s += abs(A[i, t] - A[j, t]) ** p
            D[i, j] = s ** (1.0 / p)
            D[j, i] = D[i, j]
    parent = np.arange(n)
    score = 0.0
    for _ in range(n - 1):
        while True:
            # row with the largest nearest-neighbour distance; first index wins ties
            bi = -1
            bd = -np.inf
            bj = 0
            for r in range(n):
                dr = np.inf
                jr = 0
                for c in range(n):
                    if D[r, c] < dr:
                        dr = D[r, c]
                        jr = c
                if bi < 0 or dr > bd:
                    bi = r
                    bd = dr
                    bj = jr
            if D[bj, bi] != -np.inf:
                D[bj, bi] = np.inf
            if D[bi, bj] != -np.inf:
                D[bi, bj] = np.inf
            ri = _find(parent, bi)
            rj = _find(parent, bj)
            if ri != rj:
                break
        parent[ri] = rj
        for c in range(n):
            D[bi, c] = -np.inf
        score += bd
    return score
