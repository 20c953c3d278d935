"""Select the compiled kernels when available, else the numpy fallback.

``REUR_PURE_PYTHON=1`` forces the fallback even when the extension is built.
"""
import os

from . import _kernels_py as python_kernels

compiled_kernels = None
if not os.environ.get("REUR_PURE_PYTHON"):
    try:
        from . import _kernels as compiled_kernels
    except ImportError:
        compiled_kernels = None

kernels = compiled_kernels if compiled_kernels is not None else python_kernels
BACKEND = "cython" if compiled_kernels is not None else "python"
