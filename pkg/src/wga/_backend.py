"""Kernel backend selection.

The compiled extension is used when it imports; ``WGA_BACKEND=python``
forces the numpy fallback.  ``BACKEND`` names the active choice.
"""

import os

from . import _pykernels

python_kernels = _pykernels

try:
    from . import _kernels as compiled_kernels
except ImportError:  # extension not built
    compiled_kernels = None

if compiled_kernels is not None and os.environ.get("WGA_BACKEND", "").lower() != "python":
    kernels = compiled_kernels
    BACKEND = "cython"
else:
    kernels = _pykernels
    BACKEND = "python"
