"""Box-constrained minimizers over ``[0, 1]^d``.

``lshade_minimize`` is L-SHADE (success-history adaptive DE with linear
population size reduction); ``de_rand1_minimize`` is the plain
DE/rand/1/bin baseline. Both are single-threaded, deterministic for a
given seed and never spend more than ``budget`` evaluations.

Random streams come from ``numpy.random.Philox`` seeded with a 64-bit
integer. ``run_seed`` derives the seed of run ``k`` of an experiment cell
from one master seed, so the whole protocol replays from that number.
"""
import json
import zlib
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import ConfigurationError

SENTINEL = np.finfo(np.float64).max
#: value of the CR memory once it has collapsed to "always CR = 0"
TERMINAL = -1.0


def death_penalty(objective, constraint=None):
    """Wrap ``objective`` so inputs with ``constraint(x) > 0`` score ``SENTINEL``.

    Without a constraint the objective is returned unchanged.
    """
    if constraint is None:
        return objective

    def penalized(x):
        if constraint(x) > 0.0:
            return SENTINEL
        return objective(x)

    return penalized


def run_seed(master_seed, label, run_index):
    """64-bit seed of run ``run_index`` in the experiment cell named ``label``."""
    ss = np.random.SeedSequence(int(master_seed), spawn_key=(zlib.crc32(label.encode()), int(run_index)))
    return int(ss.generate_state(1, np.uint64)[0])


def make_rng(seed):
    return np.random.Generator(np.random.Philox(int(seed)))


@dataclass(frozen=True)
class OptimizerConfig:
    """L-SHADE settings; ``None`` budget / n_init mean ``10**4 * d`` / ``18 * d``."""

    d: int
    budget: int = None
    n_init: int = None
    n_min: int = 4
    memory_size: int = 6
    p_best_rate: float = 0.11
    archive_rate: float = 2.6
    seed: int = 0

    def __post_init__(self):
        if self.d < 1:
            raise ConfigurationError(f"dimension d must be >= 1, got {self.d}")
        if self.budget is None:
            object.__setattr__(self, "budget", 10_000 * self.d)
        if self.n_init is None:
            object.__setattr__(self, "n_init", 18 * self.d)
        if self.n_min < 4:
            raise ConfigurationError(f"n_min must be >= 4, got {self.n_min}")
        if self.n_init < self.n_min:
            raise ConfigurationError(f"n_init={self.n_init} is below n_min={self.n_min}")
        if not 0.0 < self.p_best_rate <= 1.0:
            raise ConfigurationError(f"p_best_rate must lie in (0, 1], got {self.p_best_rate}")
        if self.memory_size < 1:
            raise ConfigurationError(f"memory_size must be >= 1, got {self.memory_size}")
        if self.archive_rate < 0:
            raise ConfigurationError(f"archive_rate must be >= 0, got {self.archive_rate}")
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigurationError(f"seed must be an unsigned 64-bit integer, got {self.seed}")


@dataclass
class RunRecord:
    best_theta: np.ndarray
    best_value: float
    history: list
    seed: int
    evaluations_used: int
    pop_sizes: list = field(default_factory=list)
    algorithm: str = "lshade"
    config: dict = field(default_factory=dict)

    def decimated_history(self, max_points=200):
        h = self.history
        if len(h) <= max_points:
            return list(h)
        keep = np.unique(np.linspace(0, len(h) - 1, max_points).round().astype(int))
        return [h[i] for i in keep]

    def to_dict(self, max_points=200):
        return {
            "algorithm": self.algorithm,
            "seed": int(self.seed),
            "config": self.config,
            "evaluations_used": int(self.evaluations_used),
            "best_value": float(self.best_value),
            "best_theta": [float(x) for x in self.best_theta],
            "history": [[int(n), float(v)] for n, v in self.decimated_history(max_points)],
        }

    def to_json(self, max_points=200):
        return json.dumps(self.to_dict(max_points), indent=1)

    @classmethod
    def from_dict(cls, doc):
        return cls(
            best_theta=np.array(doc["best_theta"], dtype=np.float64),
            best_value=float(doc["best_value"]),
            history=[(int(n), float(v)) for n, v in doc["history"]],
            seed=int(doc["seed"]),
            evaluations_used=int(doc["evaluations_used"]),
            algorithm=doc.get("algorithm", "lshade"),
            config=doc.get("config", {}),
        )


def _round_half_up(x):
    return int(np.floor(x + 0.5))


def _repair(u, parent):
    # out-of-range components move halfway from the violated bound to the parent
    u = np.where(u < 0.0, parent / 2.0, u)
    return np.where(u > 1.0, (1.0 + parent) / 2.0, u)


def _distinct(rng, high, avoid):
    """One index in ``[0, high)`` per row, different from every column of ``avoid``."""
    out = rng.integers(0, high, avoid.shape[0])
    bad = np.any(out[:, None] == avoid, axis=1)
    while bad.any():
        out[bad] = rng.integers(0, high, int(bad.sum()))
        bad = np.any(out[:, None] == avoid, axis=1)
    return out


def _cauchy_f(rng, loc):
    F = loc + 0.1 * rng.standard_cauchy(loc.shape[0])
    bad = F <= 0.0
    while bad.any():
        F[bad] = loc[bad] + 0.1 * rng.standard_cauchy(int(bad.sum()))
        bad = F <= 0.0
    return np.minimum(F, 1.0)


def _lehmer(weights, values):
    return float(np.sum(weights * values**2) / np.sum(weights * values))


def lshade_minimize(objective, config):
    """Minimize ``objective`` over ``[0, 1]^config.d`` with L-SHADE.

    ``objective`` maps a length-``d`` array to a float and must be total
    (infeasible points should return ``SENTINEL``).
    """
    cfg = config
    d, budget, n_init = cfg.d, cfg.budget, cfg.n_init
    if budget < n_init:
        raise ConfigurationError(f"budget={budget} is smaller than the initial population n_init={n_init}")
    rng = make_rng(cfg.seed)

    N = n_init
    X = rng.random((N, d))
    fit = np.array([float(objective(x)) for x in X])
    nfe = N
    b = int(np.argmin(fit))
    best_x, best_f = X[b].copy(), float(fit[b])
    history = [(nfe, best_f)]
    pop_sizes = []

    archive = np.empty((0, d))
    M_F = np.full(cfg.memory_size, 0.5)
    M_CR = np.full(cfg.memory_size, 0.5)
    k = 0
    rows = np.arange(N)

    while nfe < budget:
        pop_sizes.append(N)
        rows = np.arange(N)
        r = rng.integers(0, cfg.memory_size, N)
        mcr = M_CR[r]
        CR = np.where(mcr == TERMINAL, 0.0, np.clip(rng.normal(mcr, 0.1), 0.0, 1.0))
        F = _cauchy_f(rng, M_F[r])

        order = np.argsort(fit, kind="stable")
        top = max(_round_half_up(cfg.p_best_rate * N), 2)
        pbest = order[rng.integers(0, min(top, N), N)]
        r1 = _distinct(rng, N, rows[:, None])
        pool = np.vstack([X, archive])
        r2 = _distinct(rng, pool.shape[0], np.column_stack([rows, r1]))

        V = X + F[:, None] * (X[pbest] - X) + F[:, None] * (X[r1] - pool[r2])
        mask = rng.random((N, d)) < CR[:, None]
        mask[rows, rng.integers(0, d, N)] = True
        U = _repair(np.where(mask, V, X), X)

        n_eval = min(N, budget - nfe)
        S_F, S_CR, S_df, losers = [], [], [], []
        for i in range(n_eval):
            fu = float(objective(U[i]))
            if fu < best_f:
                best_f, best_x = fu, U[i].copy()
            if fu <= fit[i]:
                if fu < fit[i]:
                    S_F.append(F[i])
                    S_CR.append(CR[i])
                    S_df.append(fit[i] - fu)
                    losers.append(X[i].copy())
                X[i] = U[i]
                fit[i] = fu
        nfe += n_eval
        history.append((nfe, best_f))

        if losers:
            archive = np.vstack([archive, np.array(losers)])
        if S_F:
            df = np.array(S_df)
            w = df / df.max()
            w = w / w.sum()
            S_F, S_CR = np.array(S_F), np.array(S_CR)
            M_F[k] = _lehmer(w, S_F)
            if M_CR[k] == TERMINAL or S_CR.max() == 0.0:
                M_CR[k] = TERMINAL
            else:
                M_CR[k] = _lehmer(w, S_CR)
            k = (k + 1) % cfg.memory_size

        N_next = _round_half_up(n_init - (n_init - cfg.n_min) * nfe / budget)
        N_next = max(N_next, cfg.n_min)
        if N_next < N:
            keep = np.sort(np.argsort(fit, kind="stable")[:N_next])
            X, fit, N = X[keep], fit[keep], N_next
        cap = _round_half_up(cfg.archive_rate * N)
        if archive.shape[0] > cap:
            archive = archive[np.sort(rng.choice(archive.shape[0], cap, replace=False))]

    return RunRecord(best_x, best_f, history, int(cfg.seed), nfe, pop_sizes, "lshade", asdict(cfg))


def de_rand1_minimize(objective, config, F=0.5, CR=0.9):
    """Classic DE/rand/1/bin with population ``10 * d``; ``config`` supplies d, budget, seed."""
    cfg = config
    d, budget = cfg.d, cfg.budget
    NP = max(10 * d, 4)
    if budget < NP:
        raise ConfigurationError(f"budget={budget} is smaller than the population {NP}")
    rng = make_rng(cfg.seed)
    X = rng.random((NP, d))
    fit = np.array([float(objective(x)) for x in X])
    nfe = NP
    b = int(np.argmin(fit))
    best_x, best_f = X[b].copy(), float(fit[b])
    history = [(nfe, best_f)]
    rows = np.arange(NP)
    while nfe < budget:
        r1 = _distinct(rng, NP, rows[:, None])
        r2 = _distinct(rng, NP, np.column_stack([rows, r1]))
        r3 = _distinct(rng, NP, np.column_stack([rows, r1, r2]))
        V = X[r1] + F * (X[r2] - X[r3])
        mask = rng.random((NP, d)) < CR
        mask[rows, rng.integers(0, d, NP)] = True
        U = _repair(np.where(mask, V, X), X)
        n_eval = min(NP, budget - nfe)
        for i in range(n_eval):
            fu = float(objective(U[i]))
            if fu < best_f:
                best_f, best_x = fu, U[i].copy()
            if fu <= fit[i]:
                X[i], fit[i] = U[i], fu
        nfe += n_eval
        history.append((nfe, best_f))
    return RunRecord(best_x, best_f, history, int(cfg.seed), nfe, [NP] * (len(history) - 1), "de-rand-1-bin", asdict(cfg))
