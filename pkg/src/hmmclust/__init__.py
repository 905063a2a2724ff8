"""Clustering of hidden-state sequences by smoothing posteriors.

Subpackages are imported lazily so the command-line entry point can configure
thread pools before any numerical library loads.
"""

import importlib

__version__ = "0.1.0"

_SUBMODULES = ("model", "partitions", "inference", "oracle", "bounds",
               "spectral", "clusterers", "experiments", "serialize", "cli")

__all__ = list(_SUBMODULES)


def __getattr__(name):
    if name in _SUBMODULES:
        return importlib.import_module(f".{name}", __name__)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")


def __dir__():
    return sorted(list(globals()) + list(_SUBMODULES))
