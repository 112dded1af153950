"""Select the kernel backend at import time.

The compiled extension is used when it imports cleanly; set
``UNITRANS_PURE_PYTHON=1`` to force the pure-Python fallback.
"""

import os

from unitrans import _pykernels

if os.environ.get("UNITRANS_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from unitrans import _ckernels as _impl
    except ImportError:
        _impl = _pykernels

BACKEND = _impl.BACKEND
beam_search = _impl.beam_search
edit_distance = _impl.edit_distance

AVAILABLE = {"python": _pykernels}
try:
    from unitrans import _ckernels

    AVAILABLE["compiled"] = _ckernels
except ImportError:
    pass
