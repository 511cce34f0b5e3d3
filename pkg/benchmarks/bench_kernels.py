"""Time the compiled kernels against their NumPy twins.

    python3 benchmarks/bench_kernels.py [--repeat 200] [--mu 10] [--m 3]

Shapes default to the experiment's inner loop: one mu-member set scored
against the 1035-member reference / weight set.
"""
import argparse
import timeit

import numpy as np

from mudist import _kernels_numba as NB
from mudist import _kernels_numpy as NP
from mudist import refsets


def cases(mu, m, rng):
    A = np.ascontiguousarray(rng.random((mu, m)))
    R = np.ascontiguousarray(refsets.default_weights(m).members)
    q = np.full(m, 1.2)
    z = np.zeros(m)
    return {
        "hv": (A, q),
        "igd": (A, R),
        "igd_plus": (A, R),
        "eps_plus": (A, R),
        "r2": (A, R, z),
        "nr2": (A, R, q),
        "s_energy": (A, float(m - 1)),
        "nearest_other": (A,),
        "pd_greedy": (A, 0.1),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=200)
    ap.add_argument("--mu", type=int, default=10)
    ap.add_argument("--m", type=int, default=3)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(0)
    print(f"mu={args.mu} m={args.m} repeat={args.repeat}")
    print(f"{'kernel':<14}{'numba us':>12}{'numpy us':>12}{'speedup':>10}")
    for name, call_args in cases(args.mu, args.m, rng).items():
        fast, slow = getattr(NB, name), getattr(NP, name)
        a, b = fast(*call_args), slow(*call_args)  # compile once and compare outputs
        assert np.allclose(a, b, rtol=1e-10), name
        t_fast = min(timeit.repeat(lambda: fast(*call_args), number=args.repeat, repeat=3)) / args.repeat
        t_slow = min(timeit.repeat(lambda: slow(*call_args), number=args.repeat, repeat=3)) / args.repeat
        print(f"{name:<14}{t_fast * 1e6:>12.1f}{t_slow * 1e6:>12.1f}{t_slow / t_fast:>10.1f}")


if __name__ == "__main__":
    main()
