"""Kernel backend selection.

The compiled extension ``mcbound._ckernels`` is used when it imports; the
pure-Python module otherwise. ``MCB_KERNELS=python`` forces the fallback,
``MCB_KERNELS=compiled`` makes a missing extension an import error.
"""
import os

from mcbound import _pykernels

_choice = os.environ.get("MCB_KERNELS", "auto").lower()
if _choice not in {"auto", "compiled", "python"}:
    raise ImportError(f"MCB_KERNELS must be auto, compiled or python, not {_choice!r}")

_impl = _pykernels
BACKEND = "python"
if _choice != "python":
    try:
        from mcbound import _ckernels as _impl  # noqa: F811

        BACKEND = "compiled"
    except ImportError:
        if _choice == "compiled":
            raise
        _impl = _pykernels

jacobi_eigh = _impl.jacobi_eigh
wootters_batch = _impl.wootters_batch
swap_family_sums = _impl.swap_family_sums


def backends():
    """Map of importable backend name -> module, for tests and benchmarks."""
    found = {"python": _pykernels}
    try:
        from mcbound import _ckernels

        found["compiled"] = _ckernels
    except ImportError:
        pass
    return found
