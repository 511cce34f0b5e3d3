"""Recompute the constants of the disconnected (DTLZ7) front.

The first m-1 objectives of a Pareto-optimal DTLZ7 point are Pareto-optimal
coordinate by coordinate for the pair (x, -h(x)), h(x) = x(1 + sin 3*pi*x)/2,
i.e. x is a record high of h. Two routes are printed: a dense 1-D scan over
10**6 samples and root refinement of the scan's brackets. The refined values
are the ones stored in ``mudist.fronts``.

    python scripts/disconnected_constants.py
"""
import numpy as np
from scipy.optimize import brentq


def h(x):
    return x * (1.0 + np.sin(3.0 * np.pi * x)) / 2.0


def scan(n=1_000_001):
    x = np.linspace(0.0, 1.0, n)
    y = h(x)
    record = np.r_[True, y[1:] > np.maximum.accumulate(y)[:-1]]
    idx = np.flatnonzero(record)
    cut = np.flatnonzero(np.diff(idx) > 1)
    starts = np.r_[idx[0], idx[cut + 1]]
    ends = np.r_[idx[cut], idx[-1]]
    return [(x[s], x[e]) for s, e in zip(starts, ends)], float(y.max())


def dh(x):
    return (1.0 + np.sin(3.0 * np.pi * x)) / 2.0 + 1.5 * np.pi * x * np.cos(3.0 * np.pi * x)


def refine(intervals):
    (_, a1), (b0, b1) = intervals
    step = 1e-5
    a1 = brentq(dh, a1 - step, a1 + step, xtol=1e-16)
    b1 = brentq(dh, b1 - step, b1 + step, xtol=1e-16)
    b0 = brentq(lambda x: h(x) - h(a1), b0 - step, b0 + step, xtol=1e-16)
    return ((0.0, a1), (b0, b1)), float(h(b1))


if __name__ == "__main__":
    coarse, hmax = scan()
    print("scan:   ", coarse, hmax)
    fine, hmax = refine(coarse)
    print("refined:", [(repr(float(a)), repr(float(b))) for a, b in fine], repr(hmax))
