"""Pure-Python posterior sampling kernel.

Reference implementation of the compiled kernel in ``_core.pyx``.  Every
arithmetic operation is written in the same order as the C code and all
transcendentals come from libm via :mod:`math`, so for a given substream
state the two backends return bitwise identical arrays.  This module is
selected automatically when the extension is unavailable (or when
``SHIELD_PURE_PYTHON=1``); it is much slower but numerically identical.
"""

from __future__ import annotations

from math import cos, log, log2, pow as fpow, sqrt

import numpy as np

BACKEND = "python"

_M64 = 0xFFFFFFFFFFFFFFFF
_PHI = 0x9E3779B97F4A7C15
_INV53 = 1.0 / 9007199254740992.0  # 2**-53
_TWO_PI = 6.283185307179586


def _mix64(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _M64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _M64
    return z ^ (z >> 31)


class _Stream:
    """splitmix64 sequence; yields doubles in the open interval (0, 1)."""

    __slots__ = ("state",)

    def __init__(self, state: int):
        self.state = state & _M64

    def unit(self) -> float:
        self.state = (self.state + _PHI) & _M64
        z = _mix64(self.state)
        return ((z >> 11) + 0.5) * _INV53

    def normal(self) -> float:
        u1 = self.unit()
        u2 = self.unit()
        return sqrt(-2.0 * log(u1)) * cos(_TWO_PI * u2)

    def gamma(self, shape: float) -> float:
        # Marsaglia-Tsang without the squeeze test; shape<1 boosted via
        # Gamma(shape+1) * U^(1/shape).
        boost = 1.0
        if shape < 1.0:
            u = self.unit()
            boost = fpow(u, 1.0 / shape)
            d = shape + 1.0 - 1.0 / 3.0
        else:
            d = shape - 1.0 / 3.0
        c = 1.0 / sqrt(9.0 * d)
        while True:
            x = self.normal()
            v = 1.0 + c * x
            if v <= 0.0:
                continue
            v = v * v * v
            u = self.unit()
            if log(u) < 0.5 * x * x + d * (1.0 - v + log(v)):
                return d * v * boost


def uniform_stream(n: int, state: int) -> np.ndarray:
    """n consecutive unit doubles of the substream starting at `state`."""
    st = _Stream(state)
    out = np.empty(n, dtype=np.float64)
    for i in range(n):
        out[i] = st.unit()
    return out


def gamma_stream(shape: float, n: int, state: int) -> np.ndarray:
    """n Gamma(shape, 1) draws from the substream starting at `state`."""
    st = _Stream(state)
    out = np.empty(n, dtype=np.float64)
    for i in range(n):
        out[i] = st.gamma(shape)
    return out


def posterior_ic_rr(shapes: np.ndarray, mu: np.ndarray, draws: int, state: int):
    """Monte Carlo posterior for one term.

    Draws Dirichlet vectors by normalizing Gamma(shapes[j], 1) variates and
    returns per-draw divergence (bits) and the draws x k relative-risk
    matrix against the null arm distribution `mu`.
    """
    shapes = np.ascontiguousarray(shapes, dtype=np.float64)
    mu = np.ascontiguousarray(mu, dtype=np.float64)
    k = shapes.shape[0]
    ic = np.empty(draws, dtype=np.float64)
    rr = np.empty((draws, k), dtype=np.float64)
    st = _Stream(state)
    y = [0.0] * k
    for s in range(draws):
        tot = 0.0
        for j in range(k):
            y[j] = st.gamma(shapes[j])
            tot = tot + y[j]
        acc = 0.0
        for j in range(k):
            pi = y[j] / tot
            r = pi / mu[j]
            rr[s, j] = r
            acc = acc + pi * log2(r)
        ic[s] = acc
    return ic, rr
