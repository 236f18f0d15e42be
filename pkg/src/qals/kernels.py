"""Backend selection for the hot loops.

The compiled extension is used when it imports; otherwise the NumPy twin
takes over. Setting ``QALS_PURE_PYTHON=1`` forces the fallback.
``QALS_THREADS`` caps the threads the compiled annealer may use.
"""

from __future__ import annotations

import os

from . import _pykernels

python_backend = _pykernels
compiled_backend = None

if not os.environ.get("QALS_PURE_PYTHON"):
    try:
        from . import _kernels as compiled_backend
    except ImportError:  # extension not built
        compiled_backend = None

backend = compiled_backend or python_backend
BACKEND = "compiled" if backend is compiled_backend else "python"


def available_backends() -> dict:
    out = {"python": python_backend}
    if compiled_backend is not None:
        out["compiled"] = compiled_backend
    return out


def thread_count() -> int:
    raw = os.environ.get("QALS_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return max(1, min(os.cpu_count() or 1, 8))
