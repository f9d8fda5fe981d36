"""Backend selection for the hot kernels.

The compiled extension is preferred; the pure-Python module is used when the
extension is not built or ``GEAREVO_PURE_PYTHON=1``. Both produce
bit-identical results.
"""
import os

if os.environ.get("GEAREVO_PURE_PYTHON", "") not in ("", "0"):
    from gearevo._pykernels import *  # noqa: F401,F403
    BACKEND = "python"
else:
    try:
        from gearevo._ckernels import *  # noqa: F401,F403
        BACKEND = "cython"
    except ImportError:
        from gearevo._pykernels import *  # noqa: F401,F403
        BACKEND = "python"

from gearevo import _pykernels as python_backend  # noqa: E402

try:
    from gearevo import _ckernels as compiled_backend  # noqa: E402
except ImportError:
    compiled_backend = None
