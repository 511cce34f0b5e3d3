"""Weight-vector sets and reference sets ``R = F(W)``."""
import itertools
from dataclasses import dataclass
from math import comb

import numpy as np

from . import fronts
from .errors import InvalidInputError

#: SLD resolution whose feasible C2-DTLZ2 image has exactly 1087 members (m=3)
C_CONCAVE_H = 60
#: points per coordinate of the disconnected grid; 33**2 = 1089 for m=3
DISCONNECTED_GRID = 33
#: default single-layer resolution per m (|W| = 1035, 1035, 3060); m=8 uses
#: TWO_LAYER (|W| = 5148); other m take the largest lattice with <= 1035 vectors
DEFAULT_H = {2: 1034, 3: 44, 5: 14}
TWO_LAYER = {8: (7, 6)}


@dataclass(frozen=True, eq=False)
class WeightSet:
    """Lattice or grid points used as ``W`` (or as the pre-image of ``R``).

    ``layout`` is ``"sld"``, ``"two-layer"`` or ``"grid"``; ``H`` is the
    resolution (an int, an ``(H1, H2)`` pair, or points per grid axis).
    """

    members: np.ndarray
    H: object
    layout: str = "sld"

    def __len__(self):
        return self.members.shape[0]


def sld_size(m, H):
    return comb(H + m - 1, m - 1)


def _compositions(m, H):
    # lexicographic on (i_1, ..., i_m) with i_1 descending first, stable across runs
    for bars in itertools.combinations(range(H + m - 1), m - 1):
        prev = -1
        parts = []
        for b in bars:
            parts.append(b - prev - 1)
            prev = b
        parts.append(H + m - 2 - prev)
        yield parts


def sld(m, H):
    """Simplex-lattice design: all ``(i_1/H, ..., i_m/H)`` with ``sum(i) = H``."""
    if H < 1:
        raise InvalidInputError(f"lattice resolution H must be >= 1, got {H}")
    if m < 2:
        raise InvalidInputError(f"m must be >= 2, got {m}")
    counts = np.array(list(_compositions(m, H)), dtype=np.float64)
    return WeightSet(counts / H, H, "sld")


def sld_two_layer(m, H1, H2):
    """Boundary lattice ``sld(m, H1)`` plus an inner lattice shrunk halfway to the centroid."""
    outer = sld(m, H1).members
    if H2 == 0:
        return WeightSet(outer, (H1, 0), "two-layer")
    inner = sld(m, H2).members / 2.0 + 1.0 / (2.0 * m)
    W = np.vstack([outer, inner])
    _, first = np.unique(W, axis=0, return_index=True)
    return WeightSet(W[np.sort(first)], (H1, H2), "two-layer")


def sld_resolution(m, size):
    """Return ``H`` with ``|sld(m, H)| == size``, or raise naming the neighbouring sizes."""
    H = 1
    while sld_size(m, H) < size:
        H += 1
    if sld_size(m, H) == size:
        return H
    below = (sld_size(m, H - 1), H - 1) if H > 1 else None
    above = (sld_size(m, H), H)
    options = [f"{n} (H={h})" for n, h in (below, above) if n is not None]
    raise InvalidInputError(
        f"no single-layer simplex-lattice design has {size} vectors for m={m}; "
        f"nearest achievable sizes: {', '.join(options)}"
    )


def two_layer_resolution(m, size, max_h=20):
    """Smallest-``H1`` pair ``(H1, H2)``, ``H1 >= H2 >= 1``, whose two-layer set has ``size`` members."""
    for H1 in range(1, max_h + 1):
        for H2 in range(1, H1 + 1):
            if sld_size(m, H1) + sld_size(m, H2) == size:
                return H1, H2
    raise InvalidInputError(f"no two-layer design with H1 <= {max_h} has {size} vectors for m={m}")


def grid(m, n):
    """Regular ``n**(m-1)`` grid on ``[0, 1]^(m-1)``, first coordinate slowest."""
    if n < 2:
        raise InvalidInputError(f"grid needs at least 2 points per axis, got {n}")
    axis = np.linspace(0.0, 1.0, n)
    pts = np.array(list(itertools.product(axis, repeat=m - 1)))
    return WeightSet(pts, n, "grid")


def reference_set(front, W):
    """Map ``W`` onto ``front`` exactly as ``decode`` maps translated simplex points.

    For the disconnected front ``W`` must be a ``grid`` (it is decoded
    coordinate-wise); for ``c-concave`` infeasible images are dropped.
    """
    if front.kind == "disconnected":
        if W.layout != "grid":
            raise InvalidInputError("the disconnected front needs a grid WeightSet (see refsets.grid)")
        return fronts.map_disconnected(W.members.ravel(), front.m)
    R = fronts.map_front(front, W.members)
    if front.constrained:
        R = R[fronts.constraint_values(front, R) <= 0.0]
    return R


def default_weights(m):
    """The weight set ``W`` used for R2/NR2 and as the pre-image of ``R``."""
    if m in TWO_LAYER:
        return sld_two_layer(m, *TWO_LAYER[m])
    H = DEFAULT_H.get(m)
    if H is None:
        H = 1
        while sld_size(m, H + 1) <= 1035:
            H += 1
    return sld(m, H)


def default_preimage(front):
    """The grid or lattice whose image is the default reference set."""
    if front.kind == "disconnected":
        return grid(front.m, DISCONNECTED_GRID)
    if front.constrained and front.m == 3:
        return sld(3, C_CONCAVE_H)
    return default_weights(front.m)


def default_reference_set(front):
    """Reference set with the experiment's sizes (1035, 1089 or 1087 members for m=3)."""
    return reference_set(front, default_preimage(front))


def reference_set_of_size(front, size, layers=1):
    """Build ``(W, R)`` for a requested ``|R|``; the pre-image resolution is inferred."""
    m = front.m
    if front.kind == "disconnected":
        n = round(size ** (1.0 / (m - 1)))
        if n ** (m - 1) != size:
            lo, hi = int(np.floor(size ** (1.0 / (m - 1)))), int(np.ceil(size ** (1.0 / (m - 1))))
            raise InvalidInputError(
                f"the disconnected grid has k**{m - 1} members; nearest achievable sizes: "
                f"{lo ** (m - 1)} (k={lo}), {hi ** (m - 1)} (k={hi})"
            )
        W = grid(m, n)
        return W, reference_set(front, W)
    if front.constrained:
        # feasible counts are not monotone in H, so scan a window instead of bisecting
        seen = []
        H = 1
        while sld_size(m, H) <= 4 * size:
            W = sld(m, H)
            n = int(np.sum(fronts.constraint_values(front, fronts.map_front(front, W.members)) <= 0.0))
            if n == size:
                return W, reference_set(front, W)
            seen.append((abs(n - size), n, H))
            H += 1
        near = ", ".join(f"{n} (H={h})" for _, n, h in sorted(seen)[:2])
        raise InvalidInputError(
            f"no lattice resolution gives exactly {size} feasible members; nearest achievable sizes: {near}"
        )
    if layers == 2:
        W = sld_two_layer(m, *two_layer_resolution(m, size))
    else:
        W = sld(m, sld_resolution(m, size))
    return W, reference_set(front, W)
