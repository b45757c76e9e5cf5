"""Kernel backend selection.

The compiled extension is used when it imports and ``GRAPHLET_LDP_PURE_PYTHON``
is unset; otherwise the numpy fallback is used. Both expose
``subset_partial_sums`` and ``count_injective`` with identical contracts.
"""

from __future__ import annotations

import os

from . import _pykernels

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

COMPILED_AVAILABLE = _compiled is not None

if COMPILED_AVAILABLE and not os.environ.get("GRAPHLET_LDP_PURE_PYTHON"):
    default = _compiled
else:
    default = _pykernels

BACKEND = default.NAME


def get(name: str | None = None):
    """Return the kernel module for ``name`` (``"compiled"``, ``"python"``, or default)."""
    if name is None:
        return default
    if name == "python":
        return _pykernels
    if name == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not built; run `pip install -e .`")
        return _compiled
    raise ValueError(f"unknown kernel backend {name!r}")


def available() -> list[str]:
    return ["compiled", "python"] if COMPILED_AVAILABLE else ["python"]
