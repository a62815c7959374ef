"""Backend selection for the hot loops.

The compiled extension ``_ckernels`` is used when it has been built; otherwise
the numpy implementation in ``_pykernels`` is used.  Setting the environment
variable ``BOUSSINESQ_DEI_PURE=1`` forces the numpy backend.
"""
import importlib
import os

from . import _pykernels

BACKENDS = ("cython", "numpy")


def load_backend(name):
    if name == "numpy":
        return _pykernels
    if name == "cython":
        return importlib.import_module("._ckernels", __package__)
    raise ValueError(f"unknown backend {name!r}; choose from {BACKENDS}")


def available_backends():
    names = []
    for name in BACKENDS:
        try:
            load_backend(name)
        except ImportError:
            continue
        names.append(name)
    return names


if os.environ.get("BOUSSINESQ_DEI_PURE", "").strip() not in ("", "0"):
    _impl, BACKEND = _pykernels, "numpy"
else:
    try:
        _impl, BACKEND = load_backend("cython"), "cython"
    except ImportError:
        _impl, BACKEND = _pykernels, "numpy"

advance_position = _impl.advance_position
advance_velocity = _impl.advance_velocity
rk4_reference = _impl.rk4_reference
