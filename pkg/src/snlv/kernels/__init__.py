"""Kernel backend selection.

The compiled module is used when it was built and ``SNLV_PURE`` is unset;
otherwise the pure-Python twin is used. Both expose the same functions.
"""

import os

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    BACKENDS["cython"] = _ckernels


def get_backend(name=None):
    """Return the kernel module called ``name`` (default: the active one)."""
    if name is None:
        return active
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"kernel backend {name!r} is not available") from None


if _ckernels is not None and not os.environ.get("SNLV_PURE"):
    active = _ckernels
else:
    active = _pykernels

__all__ = ["BACKENDS", "active", "get_backend"]
