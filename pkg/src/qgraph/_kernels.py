"""Pick the compiled kernels when available, the numpy ones otherwise.

Set ``QGRAPH_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _pykernels

BACKEND = "python"
jacobi_eigh = _pykernels.jacobi_eigh
permanent_ryser = _pykernels.permanent_ryser
coates_sum = _pykernels.coates_sum

if os.environ.get("QGRAPH_PURE_PYTHON") != "1":
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        BACKEND = "cython"
        jacobi_eigh = _ckernels.jacobi_eigh
        permanent_ryser = _ckernels.permanent_ryser
        coates_sum = _ckernels.coates_sum
