"""The seeded optimization protocol and its on-disk layout.

For every (front, mu, indicator) cell, ``runs`` independent L-SHADE runs
minimize the indicator over decoded sets. Output tree under ``out``::

    manifest.json
    <front>/mu<mu>/<indicator>/run_<k>.json
    <front>/mu<mu>/<indicator>/best_set.csv      best of the runs
    <front>/mu<mu>/<indicator>/scatter.csv       best set + reference set, series-labelled
    <front>/mu<mu>/rank_table.{csv,json}         written by ``rank``
    <front>/mu<mu>/tau_matrix.{csv,json}

Nothing in the tree depends on wall-clock time, paths or worker count, so
the same configuration and master seed reproduce it byte for byte.
"""
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from . import analysis, fronts, indicators, refsets
from ._accel import BACKEND
from .errors import ConfigurationError, MudistError
from .io import format_row, read_set, sha256, write_json, write_set
from .optimizer import OptimizerConfig, RunRecord, lshade_minimize, run_seed

DEFAULT_MUS = (10, 15, 21, 28, 36, 45)
TIE_RULE = "best-of-runs ties go to the lowest run index"
WORKERS_ENV = "MUDIST_WORKERS"


@dataclass
class ExperimentConfig:
    fronts: tuple = ("linear",)
    m: int = 3
    mus: tuple = DEFAULT_MUS
    indicators: tuple = indicators.OPTIMIZED
    runs: int = 31
    budget_per_dim: int = 10_000
    master_seed: int = 0
    optimizer: dict = field(default_factory=dict)

    def __post_init__(self):
        if isinstance(self.fronts, str):
            self.fronts = (self.fronts,)
        self.fronts = tuple(self.fronts)
        self.mus = tuple(int(x) for x in self.mus)
        self.indicators = tuple(self.indicators)
        for kind in self.fronts:
            fronts.FrontShape(kind, self.m)
        for mu in self.mus:
            if mu < 2:
                raise ConfigurationError(f"mu must be >= 2, got {mu}")
        if self.runs < 1:
            raise ConfigurationError(f"runs must be >= 1, got {self.runs}")
        if self.budget_per_dim < 1:
            raise ConfigurationError(f"budget_per_dim must be >= 1, got {self.budget_per_dim}")
        for name in self.indicators:
            if name not in indicators.KINDS:
                raise ConfigurationError(f"unknown indicator {name!r}; expected one of {indicators.KINDS}")
        unknown = set(self.optimizer) - {"n_init", "n_min", "memory_size", "p_best_rate", "archive_rate"}
        if unknown:
            raise ConfigurationError(f"unknown optimizer option(s): {', '.join(sorted(unknown))}")

    @classmethod
    def from_dict(cls, doc, desk=False, seed=None):
        known = {f for f in cls.__dataclass_fields__}
        extra = set(doc) - known
        if extra:
            raise ConfigurationError(f"unknown config key(s): {', '.join(sorted(extra))}")
        cfg = cls(**doc)
        if desk:
            cfg = cfg.desk()
        if seed is not None:
            cfg = replace(cfg, master_seed=int(seed))
        return cfg

    def desk(self):
        """Reduced profile: 10**3 evaluations per dimension and 5 runs."""
        return replace(self, budget_per_dim=1_000, runs=5)

    def echo(self):
        doc = asdict(self)
        for k in ("fronts", "mus", "indicators"):
            doc[k] = list(doc[k])
        return doc


def worker_count():
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        n = int(raw)
    except ValueError:
        raise ConfigurationError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from None
    return max(n, 1)


def cell_label(kind, m, mu, indicator):
    return f"{kind}/m{m}/mu{mu}/{indicator}"


def _one_run(args):
    kind, m, mu, indicator, run, cfg = args
    front = fronts.FrontShape(kind, m)
    spec = indicators.default_spec(indicator, front)
    d = mu * (m - 1)
    seed = run_seed(cfg.master_seed, cell_label(kind, m, mu, indicator), run)
    oc = OptimizerConfig(d=d, budget=cfg.budget_per_dim * d, seed=seed, **cfg.optimizer)
    return lshade_minimize(indicators.set_objective(spec, front, mu), oc)


def run_cell(kind, m, mu, indicator, cfg, pool=None):
    """All seeded runs of one cell, in run-index order."""
    jobs = [(kind, m, mu, indicator, k, cfg) for k in range(cfg.runs)]
    if pool is None:
        return [_one_run(j) for j in jobs]
    return list(pool.map(_one_run, jobs))


def best_run(records):
    """Index of the lowest ``best_value``; ties go to the lowest index."""
    values = [r.best_value for r in records]
    return int(np.argmin(values))


def _rel(out, path):
    return os.path.relpath(path, out).replace(os.sep, "/")


class Manifest:
    """Tracks written artifacts and cell status; rewritten after every cell."""

    def __init__(self, out, cfg):
        self.out = out
        self.cfg = cfg
        self.entries = {}
        self.files = set()

    def add_file(self, path):
        self.files.add(_rel(self.out, path))

    def write(self):
        doc = {
            "config": self.cfg.echo(),
            "defaults": {
                "q": 1.2,
                "z_star": 0.0,
                "pd_p": 0.1,
                "dci_div": 19,
                "se_s": "m-1",
                "optimizer": {k: v for k, v in asdict(OptimizerConfig(d=1)).items() if k not in ("d", "budget", "seed")},
                "n_init": "18*d",
            },
            "tie_rule": TIE_RULE,
            "backend": BACKEND,
            "entries": [self.entries[k] for k in sorted(self.entries)],
            "artifacts": [
                {"path": p, "sha256": sha256(os.path.join(self.out, p))} for p in sorted(self.files)
            ],
        }
        write_json(os.path.join(self.out, "manifest.json"), doc)


def write_scatter(path, series):
    """CSV of labeled point series for external plotting."""
    m = next(iter(series.values())).shape[1]
    with open(path, "w", newline="\n") as fh:
        fh.write("series," + ",".join(f"f{i + 1}" for i in range(m)) + "\n")
        for label, P in series.items():
            for row in P:
                fh.write(label + "," + format_row(row) + "\n")


def run_experiment(cfg, out, workers=None):
    """Execute every cell of ``cfg`` and write the output tree under ``out``."""
    os.makedirs(out, exist_ok=True)
    manifest = Manifest(out, cfg)
    cells = [(k, mu, ind) for k in cfg.fronts for mu in cfg.mus for ind in cfg.indicators]
    for k, mu, ind in cells:
        manifest.entries[cell_label(k, cfg.m, mu, ind)] = {
            "cell": cell_label(k, cfg.m, mu, ind),
            "status": "incomplete",
        }
    manifest.write()
    workers = worker_count() if workers is None else workers
    pool = ProcessPoolExecutor(workers) if workers > 1 else None
    try:
        for k, mu, ind in cells:
            front = fronts.FrontShape(k, cfg.m)
            label = cell_label(k, cfg.m, mu, ind)
            records = run_cell(k, cfg.m, mu, ind, cfg, pool)
            cell_dir = os.path.join(out, k, f"mu{mu}", ind)
            os.makedirs(cell_dir, exist_ok=True)
            for i, rec in enumerate(records):
                path = os.path.join(cell_dir, f"run_{i:02d}.json")
                write_json(path, rec.to_dict())
                manifest.add_file(path)
            b = best_run(records)
            A = fronts.decode(front, records[b].best_theta, mu)
            path = os.path.join(cell_dir, "best_set.csv")
            write_set(path, A)
            manifest.add_file(path)
            path = os.path.join(cell_dir, "scatter.csv")
            write_scatter(path, {f"A_{ind}": A, "R": refsets.default_reference_set(front)})
            manifest.add_file(path)
            manifest.entries[label].update(
                status="complete",
                best_run=b,
                best_value=float(records[b].best_value),
                run_values=[float(r.best_value) for r in records],
            )
            manifest.write()
    finally:
        if pool is not None:
            pool.shutdown(cancel_futures=True)
        manifest.write()
    return manifest


def load_run(path):
    import json

    with open(path) as fh:
        return RunRecord.from_dict(json.load(fh))


def sld_set(front, mu):
    """The lattice set with ``mu`` members mapped onto ``front`` (single-layer SLD)."""
    H = refsets.sld_resolution(front.m, mu)
    return refsets.reference_set(front, refsets.sld(front.m, H))


def rank_cell(out, kind, m, mu, indicator_list=indicators.OPTIMIZED, include_sld=True, write=True):
    """Rank the best sets of one (front, mu) slice and compute its tau matrix."""
    front = fronts.FrontShape(kind, m)
    sets = {}
    for ind in indicator_list:
        path = os.path.join(out, kind, f"mu{mu}", ind, "best_set.csv")
        if not os.path.exists(path):
            raise MudistError(f"missing best set for {ind}: {path}")
        sets[f"A_{ind}"] = read_set(path, m)
    if include_sld:
        sets["A_SLD"] = sld_set(front, mu)
    specs = [indicators.default_spec(ind, front) for ind in indicator_list]
    table = analysis.rank_sets(specs, sets)
    tau = analysis.tau_matrix(table)
    if write:
        base = os.path.join(out, kind, f"mu{mu}")
        write_tables(base, table, tau)
    return table, tau


def write_tables(base, table, tau):
    os.makedirs(base, exist_ok=True)
    with open(os.path.join(base, "rank_table.csv"), "w", newline="\n") as fh:
        fh.write(table.to_csv())
    write_json(os.path.join(base, "rank_table.json"), table.to_dict())
    with open(os.path.join(base, "tau_matrix.csv"), "w", newline="\n") as fh:
        fh.write(tau.to_csv())
    write_json(os.path.join(base, "tau_matrix.json"), tau.to_dict())


def register_artifacts(out, paths):
    """Add files to an existing ``manifest.json`` under ``out`` (no-op without one)."""
    import json

    mpath = os.path.join(out, "manifest.json")
    if not os.path.exists(mpath):
        return
    with open(mpath) as fh:
        doc = json.load(fh)
    known = {a["path"]: a for a in doc.get("artifacts", [])}
    for p in paths:
        rel = _rel(out, p)
        known[rel] = {"path": rel, "sha256": sha256(p)}
    doc["artifacts"] = [known[k] for k in sorted(known)]
    write_json(mpath, doc)
