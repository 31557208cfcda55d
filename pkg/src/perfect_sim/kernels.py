"""Backend selection for the heat-bath kernels.

The compiled extension is used when it imports; otherwise, or when the
environment variable ``PERFECT_SIM_PURE_PYTHON`` is set to a non-empty value
other than ``0``, the pure-Python versions are used. Both produce identical
results for identical inputs.
"""

import os

from . import _ising_fallback as fallback

compiled = None
if os.environ.get("PERFECT_SIM_PURE_PYTHON", "") in ("", "0"):
    try:
        from . import _ising_kernels as compiled
    except ImportError:
        compiled = None

_impl = compiled if compiled is not None else fallback
BACKEND = "cython" if compiled is not None else "python"

heatbath_apply = _impl.heatbath_apply
heatbath_apply_pair = _impl.heatbath_apply_pair
