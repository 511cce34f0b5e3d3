"""Plain-text persistence.

An objective-vector set is a headerless CSV with one member per line and
one column per objective, written with ``repr`` floats (shortest decimal
that round-trips binary64), so files are byte-stable.
"""
import hashlib
import json

import numpy as np

from .errors import InvalidInputError


def format_row(values):
    return ",".join(repr(float(v)) for v in values)


def write_set(path, A):
    A = np.atleast_2d(np.asarray(A, dtype=np.float64))
    with open(path, "w", newline="\n") as fh:
        for row in A:
            fh.write(format_row(row) + "\n")


def read_set(path, m=None):
    """Load a set written by ``write_set``; malformed rows raise with their line number."""
    rows = []
    width = m
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                row = [float(tok) for tok in line.split(",")]
            except ValueError:
                raise InvalidInputError(f"{path}:{lineno}: non-numeric field in {line!r}") from None
            if not all(np.isfinite(row)):
                raise InvalidInputError(f"{path}:{lineno}: non-finite value")
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise InvalidInputError(f"{path}:{lineno}: expected {width} columns, found {len(row)}")
            rows.append(row)
    if not rows:
        raise InvalidInputError(f"{path}: no members")
    return np.array(rows, dtype=np.float64)


def write_json(path, doc):
    with open(path, "w", newline="\n") as fh:
        json.dump(doc, fh, indent=1, sort_keys=True)
        fh.write("\n")


def sha256(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()
