"""Backend selection for the hot kernels.

The compiled extension is preferred; if it is missing (no compiler at install
time) the pure-Python reference is used instead.  Both are importable
explicitly as :data:`compiled` (possibly ``None``) and :data:`fallback`.
"""

from __future__ import annotations

from . import _kernels_py as fallback

try:
    from . import _kernels as compiled
except ImportError:  # pragma: no cover - exercised only without a build
    compiled = None

active = compiled if compiled is not None else fallback

BACKEND = active.BACKEND
MAX_WORD_LENGTH = fallback.MAX_WORD_LENGTH
encode = fallback.encode
decode = fallback.decode
canonical_code = active.canonical_code
enumerate_classes = active.enumerate_classes
crossing_measure = active.crossing_measure

__all__ = [
    "BACKEND",
    "MAX_WORD_LENGTH",
    "active",
    "compiled",
    "fallback",
    "encode",
    "decode",
    "canonical_code",
    "enumerate_classes",
    "crossing_measure",
]
