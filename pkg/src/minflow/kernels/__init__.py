"""Kernel backend selection.

The compiled extension is preferred when it imported cleanly; the pure
implementation is the fallback and the semantic reference.  Set
MINFLOW_PURE=1 to force the fallback (used by the parity tests and the
benchmark).
"""

import os

from . import _pure

if os.environ.get("MINFLOW_PURE") == "1":
    _impl = _pure
    BACKEND = "pure"
else:
    try:
        from . import _speedups as _impl
        BACKEND = "compiled"
    except ImportError:
        _impl = _pure
        BACKEND = "pure"

apply_rule = _impl.apply_rule
window_diffs = _impl.window_diffs
decode_blocks = _impl.decode_blocks


def backends():
    """Name -> module for every available backend (for parity tests)."""
    out = {"pure": _pure}
    try:
        from . import _speedups
        out["compiled"] = _speedups
    except ImportError:
        pass
    return out
