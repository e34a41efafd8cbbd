"""Kernel selection: compiled extension when available, else pure Python.

Set PTFISHER_PURE=1 to force the interpreted kernel (used by the benchmark
and by tests that compare the two implementations).
"""

import os

from . import _rk4_py

if os.environ.get("PTFISHER_PURE", "") not in ("", "0"):
    kernel = _rk4_py
else:
    try:
        from . import _rk4 as kernel  # type: ignore[no-redef]
    except ImportError:
        kernel = _rk4_py

rk4_feedback = kernel.rk4_feedback
BACKEND = kernel.BACKEND


def available_backends():
    """Names of importable kernels (the compiled one may be absent)."""
    names = [_rk4_py.BACKEND]
    try:
        from . import _rk4
        names.insert(0, _rk4.BACKEND)
    except ImportError:
        pass
    return names
