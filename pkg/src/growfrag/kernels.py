"""Selects the time-stepping backend.

The compiled extension is used when it imports; ``GROWFRAG_BACKEND=python``
forces the numpy version. Both expose ``semi_implicit_step`` and ``iterate``
with identical signatures.
"""
import os

from . import _kernels_py

BACKENDS = {"python": _kernels_py}
try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None
else:
    BACKENDS["cython"] = _compiled


def _select():
    wanted = os.environ.get("GROWFRAG_BACKEND", "").strip().lower()
    if wanted:
        if wanted not in BACKENDS:
            raise ImportError(f"GROWFRAG_BACKEND={wanted!r} is not available; "
                              f"choose from {sorted(BACKENDS)}")
        return wanted
    return "cython" if _compiled is not None else "python"


BACKEND = _select()
_impl = BACKENDS[BACKEND]
semi_implicit_step = _impl.semi_implicit_step
iterate = _impl.iterate


def get_backend(name=None):
    """Module implementing the kernels; ``None`` means the active one."""
    if name is None:
        return _impl
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"unknown or unavailable backend {name!r}") from None
