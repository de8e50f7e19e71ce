"""Kernel backend selection.

The compiled extension is preferred when it has been built; the pure-Python
twin is used otherwise.  Set EXTDICKE_FORCE_PY=1 to force the fallback (used
by the benchmark and the backend-equivalence tests).
"""

import os

if os.environ.get("EXTDICKE_FORCE_PY") == "1":
    from . import _kernels_py as kernels

    COMPILED = False
else:
    try:
        from . import _kernels as kernels  # type: ignore[attr-defined]

        COMPILED = True
    except ImportError:
        from . import _kernels_py as kernels

        COMPILED = False


def backend_name():
    return "compiled" if COMPILED else "python"
