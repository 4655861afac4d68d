"""Backend selection for the Schubert kernels.

The compiled extension is used when it was built; setting
``LLSKIT_PURE_PYTHON=1`` forces the pure-Python fallback.
"""

import os

from . import _kernels_py

BACKEND = "python"
horizontal_strips = _kernels_py.horizontal_strips
lr_coefficient = _kernels_py.lr_coefficient

if not os.environ.get("LLSKIT_PURE_PYTHON"):
    try:
        from . import _kernels_c
    except ImportError:  # extension not built
        _kernels_c = None
    else:
        horizontal_strips = _kernels_c.horizontal_strips
        lr_coefficient = _kernels_c.lr_coefficient
        BACKEND = "cython"


def available_backends():
    """Name -> module for every backend importable in this environment."""
    backends = {"python": _kernels_py}
    try:
        from . import _kernels_c as compiled
    except ImportError:
        pass
    else:
        backends["cython"] = compiled
    return backends
