"""Backend selection for the hot kernels.

The compiled extension is used when it imports; otherwise (or when the
environment variable ``FRAMEPOT_PURE`` is set to a non-empty value other than
``0``) the numpy implementation is used.  Both expose ``energy``,
``energy_grad`` and ``descend`` with identical signatures.
"""
import os

from . import _pykernels

pure = _pykernels

try:
    from . import _kernels as compiled
except ImportError:  # extension not built
    compiled = None

if compiled is not None and os.environ.get("FRAMEPOT_PURE", "0") in ("", "0"):
    backend = compiled
    BACKEND = "compiled"
else:
    backend = pure
    BACKEND = "python"

energy = backend.energy
energy_grad = backend.energy_grad
descend = backend.descend

CONVERGED = _pykernels.CONVERGED
MAX_ITERS = _pykernels.MAX_ITERS
LINE_SEARCH_FAILED = _pykernels.LINE_SEARCH_FAILED
NON_FINITE = _pykernels.NON_FINITE

STATUS_NAMES = {
    CONVERGED: "converged",
    MAX_ITERS: "max_iters",
    LINE_SEARCH_FAILED: "line_search_exhausted",
    NON_FINITE: "non_finite",
}
