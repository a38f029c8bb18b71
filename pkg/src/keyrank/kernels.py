"""Selection-kernel backend dispatch.

The hot loops live in a compiled extension (keyrank._kernels) with a
pure numpy twin (keyrank._kernels_py). The compiled backend is used when
importable unless KEYRANK_PURE_PYTHON is set to a non-empty value other
than "0". Both backends produce identical output; `keyrank bench` can
time them side by side.
"""

from __future__ import annotations

import os

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:
    _compiled = None


def available_backends() -> dict:
    """Name -> kernel module for every importable backend."""
    backends = {"python": _kernels_py}
    if _compiled is not None:
        backends["compiled"] = _compiled
    return backends


def _pure_python_forced() -> bool:
    return os.environ.get("KEYRANK_PURE_PYTHON", "0") not in ("", "0")


def get_backend(name: str | None = None):
    """Resolve a kernel module by name, or the active default for None."""
    backends = available_backends()
    if name is None:
        if _pure_python_forced() or _compiled is None:
            return backends["python"]
        return backends["compiled"]
    try:
        return backends[name]
    except KeyError:
        raise ValueError(
            f"unknown kernel backend {name!r}; available: "
            f"{sorted(backends)}") from None


def active_backend_name() -> str:
    return get_backend().BACKEND_NAME
