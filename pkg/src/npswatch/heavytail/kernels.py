"""Kernel backend selection.

The hot path (Hurwitz-zeta sums, the exponent MLE, the candidate-xmin
scan) exists twice: a Cython extension (``_core``) and a pure numpy
twin (``_pure``).  The extension is preferred when importable; set
``NPSWATCH_PURE=1`` to force the fallback.  Cold helpers are shared
from the pure module regardless of backend.
"""

import os

from . import _pure

_impl = _pure
if os.environ.get("NPSWATCH_PURE", "") in ("", "0"):
    try:
        from . import _core as _impl  # type: ignore[no-redef]
    except ImportError:
        pass

BACKEND = _impl.BACKEND
NHEAD = _impl.NHEAD
MIN_TAIL_DEFAULT = _pure.MIN_TAIL_DEFAULT
GRID_CAP = _pure.GRID_CAP

zeta = _impl.zeta
zeta_logmoment = _impl.zeta_logmoment
mle_alpha = _impl.mle_alpha
xmin_scan = _impl.xmin_scan

# cold path, numpy is fine for these
powerlaw_cdf_at = _pure.powerlaw_cdf_at


def backend_name() -> str:
    return BACKEND
