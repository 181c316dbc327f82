"""Kernel backend selection.

Imports the compiled extension when available and falls back to the numpy
implementation otherwise.  ``RINGCHAIN_PURE=1`` in the environment forces
the fallback (useful for benchmarking and backend-equivalence tests).
"""
from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("RINGCHAIN_PURE", "") not in ("", "0"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernels_py

BACKEND = _impl.BACKEND_NAME

loose_pos_abc = _impl.loose_pos_abc
tight_pos_abc = _impl.tight_pos_abc
merged_pos_abc = _impl.merged_pos_abc
loose_neg_abc = _impl.loose_neg_abc
tight_neg_abc = _impl.tight_neg_abc
merged_neg_abc = _impl.merged_neg_abc
torus_fraction_tight = _impl.torus_fraction_tight
torus_fraction_merged = _impl.torus_fraction_merged


def backends():
    """Return the available backends keyed by name."""
    out = {"python": _kernels_py}
    try:
        from . import _kernels
        out["compiled"] = _kernels
    except ImportError:
        pass
    return out
