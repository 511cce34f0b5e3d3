"""Quality indicators for a set ``A`` of objective vectors (minimization).

Public functions validate their inputs and then call the backend kernels
chosen by ``mudist._accel``. ``evaluate`` dispatches on an
``IndicatorSpec`` and also returns the minimization-oriented value;
``set_objective`` builds the ``theta -> value`` function the optimizer
minimizes.
"""
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import fronts, refsets
from ._accel import kernels as K
from .errors import ConfigurationError, InvalidInputError
from .optimizer import death_penalty

SENTINEL = K.SENTINEL

KINDS = ("HV", "IGD", "IGDplus", "R2", "NR2", "EpsPlus", "SE", "Delta", "PD", "DCI")
MAXIMIZE = frozenset({"HV", "NR2", "PD", "DCI"})
#: the nine indicators whose optimal distributions are approximated (DCI only scores)
OPTIMIZED = ("HV", "IGD", "IGDplus", "EpsPlus", "R2", "NR2", "SE", "Delta", "PD")

_REQUIRED = {
    "HV": ("q",),
    "IGD": ("R",),
    "IGDplus": ("R",),
    "EpsPlus": ("R",),
    "R2": ("W", "z_star"),
    "NR2": ("W", "q"),
    "SE": (),
    "Delta": ("R",),
    "PD": (),
    "DCI": ("R",),
}

PD_MAX_EXACT = 9


def _as_set(A, name="A", m=None):
    A = np.ascontiguousarray(A, dtype=np.float64)
    if A.ndim == 1 and A.size:
        A = A[None, :]
    if A.ndim != 2 or A.shape[0] == 0 or A.shape[1] == 0:
        raise InvalidInputError(f"{name} must be a non-empty (n, m) array, got shape {A.shape}")
    if m is not None and A.shape[1] != m:
        raise InvalidInputError(f"{name} has {A.shape[1]} objectives, expected {m}")
    if not np.all(np.isfinite(A)):
        raise InvalidInputError(f"{name} contains non-finite values")
    return A


def _as_point(v, name, m):
    v = np.ascontiguousarray(v, dtype=np.float64).reshape(-1)
    if v.shape[0] != m:
        raise InvalidInputError(f"{name} must have {m} components, got {v.shape[0]}")
    return v


def hv(A, q):
    """Hypervolume of the region dominated by ``A`` and bounded by ``q``.

    Members that do not strictly dominate ``q`` contribute nothing.
    """
    A = _as_set(A)
    return float(K.hv(A, _as_point(q, "q", A.shape[1])))


def igd(A, R):
    A = _as_set(A)
    return float(K.igd(A, _as_set(R, "R", A.shape[1])))


def igd_plus(A, R):
    A = _as_set(A)
    return float(K.igd_plus(A, _as_set(R, "R", A.shape[1])))


def eps_plus(A, R):
    """Additive epsilon: smallest shift making ``A`` weakly dominate every ``r``."""
    A = _as_set(A)
    return float(K.eps_plus(A, _as_set(R, "R", A.shape[1])))


def r2(A, W, z_star):
    A = _as_set(A)
    W = _as_set(W, "W", A.shape[1])
    return float(K.r2(A, W, _as_point(z_star, "z_star", A.shape[1])))


def nr2(A, W, q):
    """R2 variant anchored at ``q`` (maximized); zero weights become 1e-6."""
    A = _as_set(A)
    W = _as_set(W, "W", A.shape[1])
    return float(K.nr2(A, W, _as_point(q, "q", A.shape[1])))


def s_energy(A, s=None):
    """Riesz s-energy over ordered pairs; duplicates give ``SENTINEL``."""
    A = _as_set(A)
    if s is None:
        s = A.shape[1] - 1
    return float(K.s_energy(A, float(s)))


def _extremes(R):
    # first member of R with the largest value of each objective
    return np.ascontiguousarray(R[np.argmax(R, axis=0)])


def _spread(A, ext):
    n, m = A.shape
    d_ext = float(np.sum(K.nearest_in(ext, A)))
    dist = K.nearest_other(A) if n > 1 else np.zeros(1)
    d_avg = float(np.mean(dist))
    num = d_ext + float(np.sum(np.abs(dist - d_avg)))
    den = d_ext + d_avg * (n - m)
    if den == 0.0:
        return 0.0 if num == 0.0 else SENTINEL
    return num / den


def spread_delta(A, R):
    """Generalized spread of ``A``; extremes are taken from ``R``.

    Nearest-neighbour distances exclude the member itself by index, so an
    exact duplicate has distance 0.
    """
    A = _as_set(A)
    R = _as_set(R, "R", A.shape[1])
    return _spread(A, _extremes(R))


def pd_greedy(A, p=0.1):
    """Pure diversity by greedy tree construction under the L_p quasi-norm.

    Order-sensitive by design: ties in the greedy choice go to the lowest
    member index.
    """
    A = _as_set(A)
    return float(K.pd_greedy(A, float(p)))


def pd_exact(A, p=0.1):
    """Recursive ``max_a [PD(A - a) + d(a, A - a)]`` by memoized brute force (|A| <= 9)."""
    A = _as_set(A)
    n = A.shape[0]
    if n > PD_MAX_EXACT:
        raise InvalidInputError(f"pd_exact is limited to {PD_MAX_EXACT} members, got {n}")
    D = (np.abs(A[:, None, :] - A[None, :, :]) ** p).sum(axis=2) ** (1.0 / p)

    @lru_cache(maxsize=None)
    def rec(mask):
        members = [i for i in range(n) if mask >> i & 1]
        if len(members) < 2:
            return 0.0
        best = -np.inf
        for i in members:
            rest = mask & ~(1 << i)
            d = min(D[i, j] for j in members if j != i)
            best = max(best, rec(rest) + d)
        return best

    return float(rec((1 << n) - 1))


def _cells(P, lb, width):
    idx = np.zeros(P.shape, dtype=np.int64)
    live = width > 0
    # cells are shifted by half a width so the box edges sit at cell centres
    idx[:, live] = np.floor((P[:, live] - lb[live]) / width[live] + 0.5).astype(np.int64)
    return np.unique(idx, axis=0)


def _dci(A_cells, R_cells, m):
    diff = R_cells[:, None, :] - A_cells[None, :, :]
    gd2 = np.einsum("ijk,ijk->ij", diff, diff).min(axis=1)
    cd = np.where(gd2 < m + 1, 1.0 - gd2 / (m + 1.0), 0.0)
    return float(np.mean(cd))


def dci_unary(A, R, div=19):
    """Grid-based diversity of ``A`` measured on the cells occupied by ``R``.

    The grid spans the joint bounding box of ``A`` and ``R`` with ``div``
    divisions per objective; the result lies in [0, 1].
    """
    A = _as_set(A)
    R = _as_set(R, "R", A.shape[1])
    if int(div) != div or div < 1:
        raise InvalidInputError(f"div must be a positive integer, got {div}")
    both = np.vstack([A, R])
    lb, ub = both.min(axis=0), both.max(axis=0)
    width = (ub - lb) / div
    return _dci(_cells(A, lb, width), _cells(R, lb, width), A.shape[1])


@dataclass(frozen=True, eq=False)
class IndicatorSpec:
    """An indicator and its parameters; unused fields stay ``None``.

    ``s=None`` means ``m - 1`` at evaluation time.
    """

    kind: str
    q: np.ndarray = None
    z_star: np.ndarray = None
    R: np.ndarray = None
    W: np.ndarray = None
    s: float = None
    p: float = 0.1
    div: int = 19

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigurationError(f"unknown indicator {self.kind!r}; expected one of {KINDS}")

    @property
    def orientation(self):
        return "maximize" if self.kind in MAXIMIZE else "minimize"

    def check(self):
        missing = [f for f in _REQUIRED[self.kind] if getattr(self, f) is None]
        if missing:
            raise ConfigurationError(f"{self.kind} needs parameter(s) {', '.join(missing)}")
        return self


def raw_value(spec, A):
    spec.check()
    kind = spec.kind
    if kind == "HV":
        return hv(A, spec.q)
    if kind == "IGD":
        return igd(A, spec.R)
    if kind == "IGDplus":
        return igd_plus(A, spec.R)
    if kind == "EpsPlus":
        return eps_plus(A, spec.R)
    if kind == "R2":
        return r2(A, spec.W, spec.z_star)
    if kind == "NR2":
        return nr2(A, spec.W, spec.q)
    if kind == "SE":
        return s_energy(A, spec.s)
    if kind == "Delta":
        return spread_delta(A, spec.R)
    if kind == "PD":
        return pd_greedy(A, spec.p)
    return dci_unary(A, spec.R, spec.div)


def to_minimization(spec, value):
    return -value if spec.kind in MAXIMIZE else value


def evaluate(spec, A):
    """Return ``(raw, minimized)``; ``minimized`` is ``-raw`` for maximized indicators."""
    v = raw_value(spec, A)
    return v, to_minimization(spec, v)


def default_spec(kind, front, R=None, W=None):
    """Spec with the experiment defaults: q = 1.2 per axis, z* = 0, default ``R`` and ``W``."""
    m = front.m
    need = _REQUIRED.get(kind, ())
    if R is None and "R" in need:
        R = refsets.default_reference_set(front)
    if W is None and "W" in need:
        W = refsets.default_weights(m).members
    return IndicatorSpec(
        kind,
        q=np.full(m, 1.2) if "q" in need else None,
        z_star=np.zeros(m) if "z_star" in need else None,
        R=None if R is None else np.ascontiguousarray(R, dtype=np.float64),
        W=None if W is None else np.ascontiguousarray(W, dtype=np.float64),
        s=float(m - 1) if kind == "SE" else None,
    ).check()


def set_kernel(spec, m):
    """Unvalidated ``A -> minimized value`` for the inner optimization loop."""
    spec.check()
    kind = spec.kind
    f64 = lambda x: np.ascontiguousarray(x, dtype=np.float64)
    if kind == "HV":
        q = f64(spec.q)
        return lambda A: -K.hv(A, q)
    if kind in ("IGD", "IGDplus", "EpsPlus"):
        R = f64(spec.R)
        fn = {"IGD": K.igd, "IGDplus": K.igd_plus, "EpsPlus": K.eps_plus}[kind]
        return lambda A: fn(A, R)
    if kind == "R2":
        W, z = f64(spec.W), f64(spec.z_star)
        return lambda A: K.r2(A, W, z)
    if kind == "NR2":
        W, q = f64(spec.W), f64(spec.q)
        return lambda A: -K.nr2(A, W, q)
    if kind == "SE":
        s = float(m - 1 if spec.s is None else spec.s)
        return lambda A: K.s_energy(A, s)
    if kind == "Delta":
        ext = _extremes(f64(spec.R))
        return lambda A: _spread(A, ext)
    if kind == "PD":
        p = float(spec.p)
        return lambda A: -K.pd_greedy(A, p)
    R = f64(spec.R)

    def dci(A):
        both = np.vstack([A, R])
        lb, ub = both.min(axis=0), both.max(axis=0)
        width = (ub - lb) / spec.div
        return -_dci(_cells(A, lb, width), _cells(R, lb, width), m)

    return dci


def set_objective(spec, front, mu):
    """``theta -> minimized indicator value`` on ``front``, with the death penalty applied."""
    score = set_kernel(spec, front.m)
    constraint = (lambda A: fronts.constraint_value(front, A)) if front.constrained else None
    penalized = death_penalty(lambda A: float(score(A)), constraint)
    return lambda theta: penalized(fronts.decode(front, theta, mu))
