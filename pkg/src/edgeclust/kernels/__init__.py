"""Backend selection for the hot kernels.

``EDGECLUST_BACKEND=numpy`` (or ``EDGECLUST_DISABLE_NUMBA=1``) selects the
pure numpy/scipy path; otherwise numba is used when importable.  Both
backends expose the same functions and produce identical results.
"""
import importlib
import logging
import os

log = logging.getLogger(__name__)

BACKENDS = ("numba", "numpy")


def _default() -> str:
    name = os.environ.get("EDGECLUST_BACKEND", "").strip().lower()
    if os.environ.get("EDGECLUST_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes"):
        name = "numpy"
    if name and name not in BACKENDS:
        raise ValueError(f"EDGECLUST_BACKEND must be one of {BACKENDS}, got {name!r}")
    return name or "numba"


def load(name: str):
    if name not in BACKENDS:
        raise ValueError(f"unknown backend {name!r}; expected one of {BACKENDS}")
    if name == "numba":
        try:
            return importlib.import_module("._numba", __name__)
        except ImportError:
            log.warning("numba is not importable; falling back to the numpy backend")
            name = "numpy"
    return importlib.import_module("._numpy", __name__)


_active = None


def get():
    global _active
    if _active is None:
        _active = load(_default())
    return _active


def use(name: str):
    """Switch the process-wide backend; returns the previously active one's name."""
    global _active
    previous = get().NAME
    _active = load(name)
    return previous
