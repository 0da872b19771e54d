"""Kernel backend selection.

The compiled extension is used when present; otherwise the numpy fallback.
Set VIDMARK_PURE_PYTHON=1 before import to force the fallback (used by the
benchmark and the backend parity tests).
"""

import os

if os.environ.get("VIDMARK_PURE_PYTHON"):
    from vidmark._kernels import _pykernels as _impl
else:
    try:
        from vidmark._kernels import _native as _impl  # type: ignore[attr-defined]
    except ImportError:
        from vidmark._kernels import _pykernels as _impl

BACKEND = "native" if _impl.__name__.endswith("_native") else "python"

fwt97_rows = _impl.fwt97_rows
iwt97_rows = _impl.iwt97_rows
block_mad = _impl.block_mad
mots_descent = _impl.mots_descent


def kernel_backend():
    """Name of the active kernel backend: 'native' or 'python'."""
    return BACKEND
