"""Command-line entry point: ``mudist <command> [options]``.

Commands: ``gen-refset``, ``eval``, ``optimize``, ``rank``, ``tau``. Every
command accepts ``--config``, ``--seed``, ``--desk`` and ``--out``. On
failure a one-line JSON error goes to stderr and the exit code is nonzero
(2 for invalid input or configuration, 130 on interrupt, 1 otherwise).
"""
import argparse
import json
import os
import sys

import numpy as np

from . import analysis, experiment, fronts, indicators, refsets
from .errors import ConfigurationError, MudistError
from .io import read_set, write_json, write_set


def _load_config(path):
    if not path:
        return {}
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"{path}:{exc.lineno}: invalid JSON ({exc.msg})") from None
    if not isinstance(doc, dict):
        raise ConfigurationError(f"{path}: config must be a JSON object")
    return doc


def _out_dir(args, default="."):
    out = args.out or default
    os.makedirs(out, exist_ok=True)
    return out


def _front(args, doc):
    kind = args.front or doc.get("front") or "linear"
    m = args.m or doc.get("m") or 3
    return fronts.FrontShape(kind, int(m))


def cmd_gen_refset(args):
    doc = _load_config(args.config)
    front = _front(args, doc)
    size = args.size if args.size is not None else doc.get("size")
    if size is None:
        W = refsets.default_preimage(front)
        R = refsets.reference_set(front, W)
    else:
        W, R = refsets.reference_set_of_size(front, int(size), layers=args.layers)
    out = _out_dir(args)
    stem = f"{front.kind}_m{front.m}"
    w_path = os.path.join(out, f"W_{stem}.csv")
    r_path = os.path.join(out, f"R_{stem}.csv")
    write_set(w_path, W.members)
    write_set(r_path, R)
    return {"W": w_path, "R": r_path, "H": W.H, "layout": W.layout, "W_size": len(W), "R_size": int(R.shape[0])}


def _spec_from_config(doc, front, kind):
    """Build a spec from explicit config fields; ``"defaults": true`` fills the rest."""

    def arr(key):
        v = doc.get(key)
        if v is None:
            return None
        if isinstance(v, str):
            return read_set(v, front.m)
        return np.asarray(v, dtype=np.float64)

    fields = {k: arr(k) for k in ("q", "z_star", "R", "W")}
    if doc.get("defaults"):
        base = indicators.default_spec(kind, front)
        fields = {k: (getattr(base, k) if v is None else v) for k, v in fields.items()}
    extra = {k: doc[k] for k in ("s", "p", "div") if k in doc}
    return indicators.IndicatorSpec(kind, **fields, **extra).check()


def cmd_eval(args):
    doc = _load_config(args.config)
    kind = args.indicator or doc.get("indicator")
    if kind is None:
        raise ConfigurationError("no indicator given (use --indicator or the config's 'indicator')")
    front = _front(args, doc)
    A = read_set(args.set)
    if A.shape[1] != front.m:
        raise ConfigurationError(f"{args.set} has {A.shape[1]} objectives but the config says m={front.m}")
    mu = doc.get("mu")
    if mu is not None and A.shape[0] != int(mu):
        raise ConfigurationError(f"{args.set} has {A.shape[0]} members but the config says mu={mu}")
    spec = _spec_from_config(doc, front, kind) if args.config else indicators.default_spec(kind, front)
    raw, minimized = indicators.evaluate(spec, A)
    has_front = args.front is not None or "front" in doc
    return {
        "indicator": kind,
        "orientation": spec.orientation,
        "value": raw,
        "minimized": minimized,
        "stats": analysis.distribution_stats(A, front if has_front else None),
    }


def _experiment_config(args):
    doc = _load_config(args.config)
    if args.front:
        doc["fronts"] = [args.front]
    if args.m:
        doc["m"] = args.m
    if args.mu:
        doc["mus"] = args.mu
    if args.indicators:
        doc["indicators"] = args.indicators
    if args.runs:
        doc["runs"] = args.runs
    return experiment.ExperimentConfig.from_dict(doc, desk=args.desk, seed=args.seed)


def cmd_optimize(args):
    cfg = _experiment_config(args)
    out = _out_dir(args, "results")
    manifest = experiment.run_experiment(cfg, out)
    done = sum(e["status"] == "complete" for e in manifest.entries.values())
    return {"out": out, "cells": len(manifest.entries), "complete": done}


def cmd_rank(args):
    if args.sets:
        sets = {}
        for item in args.sets:
            name, _, path = item.partition("=")
            if not path:
                raise ConfigurationError(f"--sets entries look like NAME=PATH, got {item!r}")
            if not os.path.exists(path):
                raise MudistError(f"missing set file for {name}: {path}")
            sets[name] = read_set(path)
        doc = _load_config(args.config)
        front = _front(args, doc)
        if args.sld:
            sets["A_SLD"] = experiment.sld_set(front, next(iter(sets.values())).shape[0])
        kinds = args.indicators or list(indicators.OPTIMIZED)
        specs = [indicators.default_spec(k, front) for k in kinds]
        table = analysis.rank_sets(specs, sets)
        tau = analysis.tau_matrix(table)
        base = _out_dir(args)
        experiment.write_tables(base, table, tau)
    else:
        cfg = _experiment_config(args)
        out = args.out or "results"
        written = []
        for kind in cfg.fronts:
            for mu in cfg.mus:
                table, tau = experiment.rank_cell(out, kind, cfg.m, mu, cfg.indicators, include_sld=args.sld)
                base = os.path.join(out, kind, f"mu{mu}")
                written += [os.path.join(base, f) for f in ("rank_table.csv", "rank_table.json", "tau_matrix.csv", "tau_matrix.json")]
        experiment.register_artifacts(out, written)
        base = os.path.join(out, cfg.fronts[-1], f"mu{cfg.mus[-1]}")
    return {"rank_table": os.path.join(base, "rank_table.csv"), "columns": list(table.columns),
            "averages": table.averages.tolist()}


def cmd_tau(args):
    if not args.table or not os.path.exists(args.table):
        raise MudistError(f"missing rank table: {args.table}")
    with open(args.table) as fh:
        table = analysis.RankTable.from_csv(fh.read())
    tau = analysis.tau_matrix(table)
    out = _out_dir(args, os.path.dirname(args.table) or ".")
    with open(os.path.join(out, "tau_matrix.csv"), "w", newline="\n") as fh:
        fh.write(tau.to_csv())
    write_json(os.path.join(out, "tau_matrix.json"), tau.to_dict())
    return tau.to_dict()


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file")
    common.add_argument("--seed", type=int, help="master seed (unsigned 64-bit)")
    common.add_argument("--desk", action="store_true", help="desk profile: 10^3 evaluations per dimension, 5 runs")
    common.add_argument("--out", help="output directory")
    common.add_argument("--front", choices=fronts.KINDS)
    common.add_argument("--m", type=int, help="number of objectives")

    ap = argparse.ArgumentParser(prog="mudist", description="Optimal mu-distributions of quality indicators.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-refset", parents=[common], help="write weight and reference sets")
    p.add_argument("--size", type=int, help="requested |R| (resolution is inferred)")
    p.add_argument("--layers", type=int, choices=(1, 2), default=1)
    p.set_defaults(func=cmd_gen_refset)

    p = sub.add_parser("eval", parents=[common], help="evaluate one indicator on a set CSV")
    p.add_argument("set", help="objective-set CSV (no header)")
    p.add_argument("--indicator", choices=indicators.KINDS)
    p.set_defaults(func=cmd_eval)

    for name, func, helptext in (
        ("optimize", cmd_optimize, "run the seeded L-SHADE protocol"),
        ("rank", cmd_rank, "rank best sets and compute Kendall tau"),
    ):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--mu", type=int, nargs="+")
        p.add_argument("--indicators", nargs="+", choices=indicators.KINDS)
        p.add_argument("--runs", type=int)
        p.set_defaults(func=func)
        if name == "rank":
            p.add_argument("--sets", nargs="+", metavar="NAME=PATH", help="rank explicit set files")
            p.add_argument("--sld", action="store_true", help="add the lattice set as column A_SLD")

    p = sub.add_parser("tau", parents=[common], help="Kendall tau matrix of a rank-table CSV")
    p.add_argument("--table", required=True)
    p.set_defaults(func=cmd_tau)
    return ap


def _fail(kind, message, code):
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")
    return code


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        result = args.func(args)
    except KeyboardInterrupt:
        return _fail("Interrupted", "interrupted; completed cells are flushed and the rest marked incomplete", 130)
    except (MudistError, ValueError) as exc:
        return _fail(type(exc).__name__, str(exc), 2)
    except Exception as exc:  # noqa: BLE001 - report anything else as JSON too
        return _fail(type(exc).__name__, str(exc), 1)
    json.dump(result, sys.stdout, indent=1, default=str)
    sys.stdout.write("\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
