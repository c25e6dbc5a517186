"""Pick the compiled kernels when importable, else the pure-Python ones.

Set ``ENCOUNTER_NET_PURE_PYTHON=1`` to force the fallback.
"""

import os

BACKEND = "python"

if os.environ.get("ENCOUNTER_NET_PURE_PYTHON", "") not in ("", "0"):
    from . import _pykernels as kernels
else:
    try:
        from . import _ckernels as kernels

        BACKEND = "cython"
    except ImportError:
        from . import _pykernels as kernels

__all__ = ["BACKEND", "kernels"]
