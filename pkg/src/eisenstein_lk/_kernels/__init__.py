"""Backend selection for the hot loops.

The compiled extension is used when it was built; otherwise the numpy
implementation is used.  Setting ``EISENSTEIN_LK_BACKEND=python`` forces the
fallback, and :func:`set_backend` switches at runtime (used by the tests and
the benchmark to compare the two).
"""

from __future__ import annotations

import os

from . import _pure

try:
    from . import _core
except ImportError:  # extension not built
    _core = None

_BACKENDS = {"python": _pure}
if _core is not None:
    _BACKENDS["cython"] = _core

_active = "python" if os.environ.get("EISENSTEIN_LK_BACKEND") == "python" or _core is None else "cython"


def available_backends() -> list[str]:
    return sorted(_BACKENDS)


def get_backend() -> str:
    return _active


def set_backend(name: str) -> None:
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"backend {name!r} unavailable; choose from {available_backends()}")
    _active = name


def accumulate_modes(a, b, w, lam, N, L):
    return _BACKENDS[_active].accumulate_modes(a, b, w, float(lam), int(N), int(L))


def evolve_paths(*args):
    return _BACKENDS[_active].evolve_paths(*args)
