"""Select the compiled kernels when available, else the numpy fallback.

Set ``ENTANGLESWAP_PURE_PYTHON=1`` to force the fallback.
"""
import os

if os.environ.get("ENTANGLESWAP_PURE_PYTHON", "") not in ("", "0"):
    from . import _kernels_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl

        BACKEND = "cython"
    except ImportError:
        from . import _kernels_py as _impl

        BACKEND = "python"

member_scores = _impl.member_scores
coordinate_sweep = _impl.coordinate_sweep
bound_batch = _impl.bound_batch

__all__ = ["BACKEND", "member_scores", "coordinate_sweep", "bound_batch"]
