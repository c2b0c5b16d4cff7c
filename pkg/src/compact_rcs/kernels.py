"""Backend selection for the numerical kernels.

The compiled extension ``_ckernels`` is used when it imports; otherwise the
pure-Python ``_pykernels`` module is used. Set ``COMPACT_RCS_PURE_PYTHON=1``
to force the fallback (useful for benchmarks and cross-backend tests).
"""
import os

from . import _pykernels

if os.environ.get("COMPACT_RCS_PURE_PYTHON", "").strip() not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        _impl = _pykernels

BACKEND = "cython" if _impl is not _pykernels else "python"

riccati_hankel2 = _impl.riccati_hankel2
mie_backscatter_sum = _impl.mie_backscatter_sum
mie_backscatter_sums = _impl.mie_backscatter_sums
coherent_field = _impl.coherent_field
gev_nll = _impl.gev_nll


def available_backends():
    """Return ``{name: module}`` for every importable backend."""
    out = {"python": _pykernels}
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        out["cython"] = _ckernels
    return out
