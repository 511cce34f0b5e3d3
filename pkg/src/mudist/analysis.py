"""Cross-indicator comparison: rank tables, Kendall tau and set statistics."""
import itertools
from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from . import fronts, indicators, refsets
from .errors import InvalidInputError
from .io import format_row

DUPLICATE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class RankTable:
    """``ranks[i, j]``: rank of set ``columns[j]`` under indicator ``rows[i]`` (1 = best)."""

    rows: tuple
    columns: tuple
    ranks: np.ndarray
    values: np.ndarray

    @property
    def averages(self):
        return self.ranks.mean(axis=0)

    def to_csv(self):
        lines = ["indicator," + ",".join(self.columns)]
        for label, r in zip(self.rows, self.ranks):
            lines.append(label + "," + format_row(r))
        lines.append("Avg.," + format_row(self.averages))
        return "\n".join(lines) + "\n"

    def to_dict(self):
        return {
            "rows": list(self.rows),
            "columns": list(self.columns),
            "ranks": self.ranks.tolist(),
            "values": self.values.tolist(),
            "averages": self.averages.tolist(),
        }

    @classmethod
    def from_csv(cls, text):
        lines = [ln for ln in text.splitlines() if ln.strip()]
        columns = tuple(lines[0].split(",")[1:])
        rows, ranks = [], []
        for ln in lines[1:]:
            label, *vals = ln.split(",")
            if label == "Avg.":
                continue
            if len(vals) != len(columns):
                raise InvalidInputError(f"rank row {label!r} has {len(vals)} entries, expected {len(columns)}")
            rows.append(label)
            ranks.append([float(v) for v in vals])
        R = np.array(ranks, dtype=np.float64).reshape(len(rows), len(columns))
        return cls(tuple(rows), columns, R, np.full_like(R, np.nan))


@dataclass(frozen=True, eq=False)
class TauMatrix:
    labels: tuple
    values: np.ndarray

    def to_csv(self):
        lines = ["indicator," + ",".join(self.labels)]
        for label, r in zip(self.labels, self.values):
            lines.append(label + "," + format_row(r))
        return "\n".join(lines) + "\n"

    def to_dict(self):
        return {"labels": list(self.labels), "tau": self.values.tolist()}


def rank_values(minimized):
    """Average ranks (1 = smallest) of minimization-oriented values."""
    return rankdata(np.asarray(minimized, dtype=np.float64), method="average")


def rank_sets(specs, sets, row_labels=None):
    """Evaluate every spec on every named set and rank within each row.

    ``sets`` maps column label to objective set (insertion order kept).
    """
    columns = tuple(sets)
    rows = tuple(row_labels) if row_labels is not None else tuple(s.kind for s in specs)
    vals = np.empty((len(specs), len(columns)))
    mins = np.empty_like(vals)
    for i, spec in enumerate(specs):
        for j, name in enumerate(columns):
            try:
                vals[i, j], mins[i, j] = indicators.evaluate(spec, sets[name])
            except Exception as exc:
                raise type(exc)(f"[{rows[i]}, {name}] {exc}") from exc
    ranks = np.vstack([rank_values(r) for r in mins]) if len(specs) else np.empty((0, len(columns)))
    return RankTable(rows, columns, ranks, vals)


def kendall_tau(rank_a, rank_b):
    """Tie-adjusted Kendall tau (tau-b) by direct pair counting."""
    a = np.asarray(rank_a, dtype=np.float64)
    b = np.asarray(rank_b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise InvalidInputError(f"rank vectors differ in shape: {a.shape} vs {b.shape}")
    conc = disc = ties_a = ties_b = 0
    for i, j in itertools.combinations(range(a.size), 2):
        da = np.sign(a[i] - a[j])
        db = np.sign(b[i] - b[j])
        if da == 0 and db == 0:
            continue
        if da == 0:
            ties_a += 1
        elif db == 0:
            ties_b += 1
        elif da == db:
            conc += 1
        else:
            disc += 1
    den = np.sqrt(float(conc + disc + ties_a) * float(conc + disc + ties_b))
    if den == 0.0:
        return float("nan")
    return float((conc - disc) / den)


def tau_matrix(table):
    k = len(table.rows)
    T = np.eye(k)
    for i, j in itertools.combinations(range(k), 2):
        T[i, j] = T[j, i] = kendall_tau(table.ranks[i], table.ranks[j])
    return TauMatrix(table.rows, T)


def set_distance(A, B):
    """Mean nearest-member distance between two sets, averaged over both directions."""
    A = indicators._as_set(A)
    B = indicators._as_set(B, "B", A.shape[1])
    K = indicators.K
    return 0.5 * (float(np.mean(K.nearest_in(A, B))) + float(np.mean(K.nearest_in(B, A))))


def front_extremes(front):
    """Reference-set members maximizing each objective."""
    return indicators._extremes(refsets.default_reference_set(front))


def front_edge(front, resolution=None):
    """Dense sample of the front's boundary: images of simplex points with a zero coordinate.

    For the disconnected front the sample is the image of the parameter
    box boundary; for ``c-concave`` only feasible boundary points are kept.
    """
    m = front.m
    if front.kind == "disconnected":
        n = resolution or (400 if m == 3 else 12)
        G = refsets.grid(m, n).members
        G = G[np.any((G == 0.0) | (G == 1.0), axis=1)]
        return fronts.map_disconnected(G.ravel(), m)
    H = resolution or {2: 1, 3: 400, 4: 60, 5: 24}.get(m, 10)
    W = refsets.sld(m, H).members
    W = W[np.any(W == 0.0, axis=1)]
    E = fronts.map_front(front, W)
    if front.constrained:
        E = E[fronts.constraint_values(front, E) <= 0.0]
    return E


def distribution_stats(A, front=None, edge_tol=0.05):
    """Summary of where the members of ``A`` sit.

    Always reports nearest-neighbour distance statistics and the number of
    members that duplicate an earlier member (distance below 1e-9). With a
    ``front`` it adds per-extreme min/max distances and edge distances.
    """
    A = indicators._as_set(A)
    K = indicators.K
    n = A.shape[0]
    nn = K.nearest_other(A) if n > 1 else np.zeros(1)
    D = np.sqrt(((A[:, None, :] - A[None, :, :]) ** 2).sum(axis=2))
    dup = int(sum(np.any(D[i, :i] < DUPLICATE_TOL) for i in range(n)))
    out = {
        "size": n,
        "nn_min": float(nn.min()),
        "nn_max": float(nn.max()),
        "nn_mean": float(nn.mean()),
        "nn_std": float(nn.std()),
        "duplicates": dup,
    }
    if front is not None:
        ext = front_extremes(front)
        de = np.sqrt(((ext[:, None, :] - A[None, :, :]) ** 2).sum(axis=2))
        out["extreme_min"] = de.min(axis=1).tolist()
        out["extreme_max"] = de.max(axis=1).tolist()
        edge = K.nearest_in(A, np.ascontiguousarray(front_edge(front)))
        out["edge_distance"] = edge.tolist()
        out["near_edge"] = int(np.sum(edge <= edge_tol))
    return out
