"""Parametric Pareto fronts in normalized objective space.

A candidate set of ``mu`` objective vectors is encoded as a flat vector
``theta`` in ``[0, 1]^(mu*(m-1))``. ``decode`` turns it into an ``(mu, m)``
array on the chosen front: each ``(m-1)``-chunk is first translated onto
the unit simplex and then pushed through the front-shape map. All fronts
are defined directly on ``[0, 1]^m`` (ideal point 0, nadir point 1).
"""
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError

KINDS = (
    "linear",
    "concave",
    "convex",
    "i-linear",
    "i-concave",
    "i-convex",
    "disconnected",
    "c-concave",
    "2d-dtlz1",
    "2d-dtlz2",
    "2d-zdt1",
)

#: Pareto-optimal parts of each of the first m-1 coordinates of the
#: disconnected (DTLZ7) front, i.e. the record highs of
#: x * (1 + sin(3*pi*x)) / 2 on [0, 1]. Regenerated by
#: ``scripts/disconnected_constants.py``.
DISCONNECTED_INTERVALS = (
    (0.0, 0.25141183608891715),
    (0.6316265307000613, 0.859400856644724),
)
#: maximum of x * (1 + sin(3*pi*x)) / 2 on [0, 1], attained at the upper end above
DISCONNECTED_H_MAX = 0.8464978172492112

_TWO_D = {
    # kind: (theta_lo, theta_hi, f2, f2 nadir)
    "2d-dtlz1": (0.0, 0.5, lambda t: 0.5 - t, 0.5),
    "2d-dtlz2": (0.0, 1.0, lambda t: np.sqrt(np.maximum(1.0 - t * t, 0.0)), 1.0),
    "2d-zdt1": (0.0, 1.0, lambda t: 1.0 - np.sqrt(t), 1.0),
}


@dataclass(frozen=True)
class FrontShape:
    """A front-shape function on ``m`` normalized objectives.

    ``radius`` is only used by ``c-concave`` (C2-DTLZ2 feasibility radius).
    """

    kind: str
    m: int = 3
    radius: float = 0.4

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidInputError(f"unknown front kind {self.kind!r}; expected one of {KINDS}")
        if self.m < 2:
            raise InvalidInputError(f"m must be >= 2, got {self.m}")
        if self.kind.startswith("2d-") and self.m != 2:
            raise InvalidInputError(f"{self.kind} is a two-objective front, got m={self.m}")

    @property
    def ideal(self):
        return np.zeros(self.m)

    @property
    def nadir(self):
        return np.ones(self.m)

    @property
    def constrained(self):
        return self.kind == "c-concave"


def _chunks(theta, m):
    theta = np.asarray(theta, dtype=np.float64)
    if theta.ndim != 1 or theta.size == 0 or theta.size % (m - 1):
        raise InvalidInputError(
            f"theta of length {theta.size} cannot be split into chunks of m-1={m - 1}"
        )
    if np.any(theta < 0.0) or np.any(theta > 1.0) or not np.all(np.isfinite(theta)):
        raise InvalidInputError("theta components must lie in [0, 1]")
    return theta.reshape(-1, m - 1)


def translate(theta, m, mu=None):
    """Map ``theta`` to ``mu`` points of the unit simplex (Jaszkiewicz's construction).

    Parameters
    ----------
    theta : array_like, shape (mu*(m-1),)
    m : int
        Number of objectives.
    mu : int, optional
        Checked against ``len(theta) / (m-1)`` when given.

    Returns
    -------
    B : ndarray, shape (mu, m)
        Rows are non-negative and sum to one.
    """
    if m < 2:
        raise InvalidInputError(f"m must be >= 2, got {m}")
    Y = _chunks(theta, m)
    if mu is not None and Y.shape[0] != mu:
        raise InvalidInputError(f"theta has length {Y.size}, expected mu*(m-1) = {mu * (m - 1)}")
    B = np.empty((Y.shape[0], m))
    used = np.zeros(Y.shape[0])
    for j in range(m - 1):
        B[:, j] = (1.0 - used) * (1.0 - Y[:, j] ** (1.0 / (m - 1 - j)))
        used = used + B[:, j]
    B[:, m - 1] = np.maximum(1.0 - used, 0.0)
    return B


def _sphere(B):
    return B / np.linalg.norm(B, axis=1, keepdims=True)


def _convex(B):
    S = _sphere(B)
    A = S**4
    A[:, -1] = S[:, -1] ** 2
    return A


def map_front(front, B):
    """Push simplex points ``B`` (shape ``(n, m)``) onto ``front``."""
    B = np.asarray(B, dtype=np.float64)
    if B.ndim != 2 or B.shape[1] != front.m:
        raise InvalidInputError(f"expected an (n, {front.m}) array of simplex points, got {B.shape}")
    kind = front.kind
    if kind == "disconnected":
        raise InvalidInputError("the disconnected front is decoded with map_disconnected")
    if kind == "linear":
        return B.copy()
    if kind in ("concave", "c-concave"):
        return _sphere(B)
    if kind == "convex":
        return _convex(B)
    if kind == "i-linear":
        return 1.0 - B
    if kind == "i-convex":
        return 1.0 - _sphere(B)
    if kind == "i-concave":
        return 1.0 - _convex(B)
    lo, hi, f2, nadir2 = _TWO_D[kind]
    t = lo + B[:, 1] * (hi - lo)
    return np.column_stack([(t - lo) / (hi - lo), f2(t) / nadir2])


def _h(x):
    return x * (1.0 + np.sin(3.0 * np.pi * x)) / 2.0


def _union_position(u):
    """Arc-length map of ``u`` in [0, 1] onto the union of the disconnected intervals."""
    (a0, a1), (b0, b1) = DISCONNECTED_INTERVALS
    first = a1 - a0
    t = u * (first + (b1 - b0))
    return np.where(t <= first, a0 + t, b0 + (t - first))


def disconnected_f_range(m):
    """Raw range of the last objective of the disconnected front."""
    return 2.0 * (m - (m - 1) * DISCONNECTED_H_MAX), 2.0 * m


def map_disconnected(theta, m=3):
    """Decode ``theta`` onto the disconnected (DTLZ7) front.

    Each ``(m-1)``-chunk gives the first ``m-1`` raw objectives directly,
    spread over the Pareto-optimal intervals in proportion to their length,
    so every ``theta`` decodes to a point on one of the ``2**(m-1)`` patches.
    """
    U = _chunks(theta, m)
    F = _union_position(U)
    last = 2.0 * (m - np.sum(_h(F), axis=1))
    lo, hi = disconnected_f_range(m)
    A = np.empty((F.shape[0], m))
    A[:, :-1] = F / DISCONNECTED_INTERVALS[1][1]
    A[:, -1] = (last - lo) / (hi - lo)
    return A


def constraint_values(front, A):
    """Per-member C2-DTLZ2 constraint value; ``<= 0`` means feasible."""
    A = np.atleast_2d(np.asarray(A, dtype=np.float64))
    if not front.constrained:
        return np.zeros(A.shape[0])
    m = A.shape[1]
    r2 = front.radius**2
    sq = np.sum(A**2, axis=1)
    caps = ((A - 1.0) ** 2 - A**2 + sq[:, None]).min(axis=1) - r2
    centre = np.sum((A - 1.0 / np.sqrt(m)) ** 2, axis=1) - r2
    return np.minimum(caps, centre)


def constraint_value(front, A):
    """``G(A)``: the worst member constraint value (``0`` for unconstrained fronts)."""
    c = constraint_values(front, A)
    return float(c.max()) if c.size else 0.0


def decode(front, theta, mu=None):
    """Decode ``theta`` into an ``(mu, m)`` objective set on ``front``."""
    if front.kind == "disconnected":
        A = map_disconnected(theta, front.m)
        if mu is not None and A.shape[0] != mu:
            raise InvalidInputError(f"theta encodes {A.shape[0]} members, expected {mu}")
        return A
    return map_front(front, translate(theta, front.m, mu))


def front_residual(front, A):
    """Per-member violation of the front's defining relation (0 on the front).

    The disconnected residual also counts the distance of each of the first
    ``m-1`` coordinates from the Pareto-optimal intervals.
    """
    A = np.atleast_2d(np.asarray(A, dtype=np.float64))
    kind = front.kind
    if kind == "linear":
        return np.abs(A.sum(axis=1) - 1.0)
    if kind in ("concave", "c-concave"):
        return np.abs(np.sum(A**2, axis=1) - 1.0)
    if kind == "convex":
        return np.abs(np.sqrt(A[:, :-1]).sum(axis=1) + A[:, -1] - 1.0)
    if kind == "i-linear":
        return np.abs((1.0 - A).sum(axis=1) - 1.0)
    if kind == "i-convex":
        return np.abs(np.sum((1.0 - A) ** 2, axis=1) - 1.0)
    if kind == "i-concave":
        C = 1.0 - A
        return np.abs(np.sqrt(C[:, :-1]).sum(axis=1) + C[:, -1] - 1.0)
    if kind == "disconnected":
        m = front.m
        F = A[:, :-1] * DISCONNECTED_INTERVALS[1][1]
        lo, hi = disconnected_f_range(m)
        last = (2.0 * (m - np.sum(_h(F), axis=1)) - lo) / (hi - lo)
        (a0, a1), (b0, b1) = DISCONNECTED_INTERVALS
        gap = np.where(F <= a1, 0.0, np.where(F < b0, np.minimum(F - a1, b0 - F), np.maximum(F - b1, 0.0)))
        return np.abs(A[:, -1] - last) + gap.sum(axis=1)
    if kind == "2d-dtlz1":
        return np.abs(A.sum(axis=1) - 1.0)
    if kind == "2d-dtlz2":
        return np.abs(np.sum(A**2, axis=1) - 1.0)
    return np.abs(A[:, 1] - (1.0 - np.sqrt(A[:, 0])))
