"""Kernel backend selection.

``MUDIST_BACKEND=numpy`` forces the vectorized NumPy kernels; the default
is ``numba`` and silently degrades to NumPy when numba cannot be imported.
"""
import importlib
import os

BACKENDS = ("numba", "numpy")


def load(name=None):
    """Return the kernel module for ``name`` (default: the configured backend)."""
    name = (name or os.environ.get("MUDIST_BACKEND", "numba")).strip().lower()
    if name not in BACKENDS:
        raise ValueError(f"unknown kernel backend {name!r}; expected one of {BACKENDS}")
    if name == "numba":
        try:
            return importlib.import_module("mudist._kernels_numba")
        except ImportError:
            name = "numpy"
    return importlib.import_module("mudist._kernels_numpy")


kernels = load()
BACKEND = kernels.__name__.rsplit("_", 1)[-1]
