"""Kernel backend selection.

The compiled extension is used when it imports; setting the environment
variable ``TAILSCORE_PURE_PYTHON=1`` forces the numpy fallback.
"""

import os

from . import _kernels_py

if os.environ.get("TAILSCORE_PURE_PYTHON", "") not in ("", "0"):
    _compiled = None
else:
    try:
        from . import _kernels as _compiled
    except ImportError:
        _compiled = None

NAME = "cython" if _compiled is not None else "python"
kernels = _compiled if _compiled is not None else _kernels_py
python_kernels = _kernels_py
compiled_kernels = _compiled
