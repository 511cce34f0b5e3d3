"""Vectorized NumPy twins of the compiled kernels in ``_kernels_numba``."""
import numpy as np

SENTINEL = np.finfo(np.float64).max


def _nondominated(P):
    if P.shape[0] < 2:
        return P
    le = np.all(P[:, None, :] <= P[None, :, :], axis=2)  # le[j, i]: j weakly dominates i
    eq = np.all(P[:, None, :] == P[None, :, :], axis=2)
    idx = np.arange(P.shape[0])
    strict = le & ~eq
    dup_before = eq & (idx[:, None] < idx[None, :])
    dominated = np.any(strict | dup_before, axis=0)
    return P[~dominated]


def _hv2(P, ref):
    P = P[np.argsort(P[:, 0], kind="stable")]
    ymin = np.minimum.accumulate(np.r_[ref[1], P[:, 1]])
    gain = np.maximum(ymin[:-1] - P[:, 1], 0.0)
    return float(np.sum((ref[0] - P[:, 0]) * gain))


def _hv_rec(P, ref):
    n, k = P.shape
    if n == 0:
        return 0.0
    if n == 1:
        return float(np.prod(ref[:k] - P[0]))
    if k == 2:
        return _hv2(P, ref)
    P = P[np.argsort(P[:, k - 1], kind="stable")]
    head = P[:, : k - 1]
    incl = np.prod(ref[: k - 1] - head, axis=1)
    vol = 0.0
    for idx in range(n):
        excl = incl[idx]
        if idx > 0:
            L = np.maximum(head[:idx], head[idx])
            excl -= _hv_rec(_nondominated(L), ref)
        vol += (ref[k - 1] - P[idx, k - 1]) * excl
    return vol


def hv(A, ref):
    P = A[np.all(A < ref, axis=1)]
    if P.shape[0] == 0:
        return 0.0
    return _hv_rec(_nondominated(P), ref)


def _sqdist(X, Y):
    diff = X[:, None, :] - Y[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def igd(A, R):
    return float(np.mean(np.sqrt(_sqdist(R, A).min(axis=1))))


def igd_plus(A, R):
    diff = np.maximum(A[None, :, :] - R[:, None, :], 0.0)
    d2 = np.einsum("ijk,ijk->ij", diff, diff)
    return float(np.mean(np.sqrt(d2.min(axis=1))))


def eps_plus(A, R):
    shift = (A[None, :, :] - R[:, None, :]).max(axis=2)
    return float(shift.min(axis=1).max())


def r2(A, W, z):
    g = (W[:, None, :] * np.abs(A - z)[None, :, :]).max(axis=2)
    return float(np.mean(g.min(axis=1)))


def nr2(A, W, q):
    m = A.shape[1]
    W = np.where(W == 0.0, 1e-6, W)
    g = (np.abs(q - A)[None, :, :] / W[:, None, :]).min(axis=2)
    return float(np.mean(g.max(axis=1) ** m))


def s_energy(A, s):
    n = A.shape[0]
    iu = np.triu_indices(n, k=1)
    d2 = _sqdist(A, A)[iu]
    if np.any(d2 == 0.0):
        return SENTINEL
    return float(2.0 * np.sum(np.sqrt(d2) ** (-s)))


def nearest_other(A):
    d2 = _sqdist(A, A)
    np.fill_diagonal(d2, np.inf)
    return np.sqrt(d2.min(axis=1))


def nearest_in(X, A):
    return np.sqrt(_sqdist(X, A).min(axis=1))


def pd_greedy(A, p):
    n = A.shape[0]
    if n < 2:
        return 0.0
    D = (np.abs(A[:, None, :] - A[None, :, :]) ** p).sum(axis=2) ** (1.0 / p)
    np.fill_diagonal(D, np.inf)
    label = np.arange(n)
    rows = np.arange(n)
    score = 0.0
    for _ in range(n - 1):
        while True:
            J = np.argmin(D, axis=1)
            d = D[rows, J]
            i = int(np.argmax(d))
            j = int(J[i])
            if D[j, i] != -np.inf:
                D[j, i] = np.inf
            if D[i, j] != -np.inf:
                D[i, j] = np.inf
            if label[i] != label[j]:
                break
        label[label == label[i]] = label[j]
        D[i, :] = -np.inf
        score += d[i]
    return float(score)
