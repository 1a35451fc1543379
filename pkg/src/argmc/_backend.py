"""Select the compiled kernels when available, else the pure-Python ones.

Set ``ARGMC_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _pykernels

COMPLETE, STABLE, PREFERRED = _pykernels.COMPLETE, _pykernels.STABLE, _pykernels.PREFERRED

BACKEND = "python"
if os.environ.get("ARGMC_PURE_PYTHON", "") in ("", "0"):
    try:
        from . import _ckernels as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
else:
    _impl = _pykernels

complete_search = _impl.complete_search
grounded = _impl.grounded
maximal_conflict_free = _impl.maximal_conflict_free
disjoint_rows = _impl.disjoint_rows
