"""Backend selection for the posterior sampling kernel.

Imports the compiled Cython extension when present, otherwise the pure
Python reference implementation.  ``SHIELD_PURE_PYTHON=1`` forces the
fallback (used by the parity tests and the benchmark).  Both backends are
bitwise identical for the same substream state.
"""

from __future__ import annotations

import os

from . import _fallback

if os.environ.get("SHIELD_PURE_PYTHON") == "1":
    _impl = _fallback
else:
    try:
        from . import _core as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _fallback

BACKEND = _impl.BACKEND
posterior_ic_rr = _impl.posterior_ic_rr
gamma_stream = _impl.gamma_stream
uniform_stream = _impl.uniform_stream

_M64 = 0xFFFFFFFFFFFFFFFF
_PHI = 0x9E3779B97F4A7C15


def stream_state(seed: int, pt_index: int) -> int:
    """Substream state for one term: a splitmix64 hash of (seed, pt_index).

    Makes per-term sampling independent of evaluation order and thread
    count; negative seeds are taken as two's-complement 64-bit values.
    """
    h = _fallback._mix64(((seed & _M64) + _PHI) & _M64)
    return _fallback._mix64((h + (pt_index + 1) * _PHI) & _M64)
