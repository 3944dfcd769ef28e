# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled posterior sampling kernel.

Mirrors ``_fallback.py`` operation for operation: splitmix64 substreams,
Box-Muller normals, squeeze-free Marsaglia-Tsang gamma rejection.  Compiled
with -ffp-contract=off so results are bitwise identical to the fallback.
"""

from libc.math cimport cos, log, log2, pow, sqrt
from libc.stdint cimport uint64_t

import numpy as np

BACKEND = "compiled"

cdef uint64_t _PHI = 0x9E3779B97F4A7C15
cdef double _INV53 = 1.0 / 9007199254740992.0
cdef double _TWO_PI = 6.283185307179586


cdef inline uint64_t _mix64(uint64_t z) noexcept nogil:
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EB
    return z ^ (z >> 31)


cdef inline double _unit(uint64_t *state) noexcept nogil:
    state[0] = state[0] + _PHI
    cdef uint64_t z = _mix64(state[0])
    return <double>((z >> 11) + 0.5) * _INV53


cdef inline double _normal(uint64_t *state) noexcept nogil:
    cdef double u1 = _unit(state)
    cdef double u2 = _unit(state)
    return sqrt(-2.0 * log(u1)) * cos(_TWO_PI * u2)


cdef double _gamma(uint64_t *state, double shape) noexcept nogil:
    cdef double boost = 1.0
    cdef double d, c, x, v, u
    if shape < 1.0:
        u = _unit(state)
        boost = pow(u, 1.0 / shape)
        d = shape + 1.0 - 1.0 / 3.0
    else:
        d = shape - 1.0 / 3.0
    c = 1.0 / sqrt(9.0 * d)
    while True:
        x = _normal(state)
        v = 1.0 + c * x
        if v <= 0.0:
            continue
        v = v * v * v
        u = _unit(state)
        if log(u) < 0.5 * x * x + d * (1.0 - v + log(v)):
            return d * v * boost


def uniform_stream(Py_ssize_t n, state):
    """n consecutive unit doubles of the substream starting at `state`."""
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] ov = out
    cdef uint64_t st = <uint64_t>(<object>state & 0xFFFFFFFFFFFFFFFF)
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            ov[i] = _unit(&st)
    return out


def gamma_stream(double shape, Py_ssize_t n, state):
    """n Gamma(shape, 1) draws from the substream starting at `state`."""
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] ov = out
    cdef uint64_t st = <uint64_t>(<object>state & 0xFFFFFFFFFFFFFFFF)
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            ov[i] = _gamma(&st, shape)
    return out


def posterior_ic_rr(shapes, mu, Py_ssize_t draws, state):
    """Monte Carlo posterior for one term; see the fallback docstring."""
    cdef double[::1] sh = np.ascontiguousarray(shapes, dtype=np.float64)
    cdef double[::1] m = np.ascontiguousarray(mu, dtype=np.float64)
    cdef Py_ssize_t k = sh.shape[0]
    ic = np.empty(draws, dtype=np.float64)
    rr = np.empty((draws, k), dtype=np.float64)
    cdef double[::1] icv = ic
    cdef double[:, ::1] rrv = rr
    ybuf = np.empty(k, dtype=np.float64)
    cdef double[::1] y = ybuf
    cdef uint64_t st = <uint64_t>(<object>state & 0xFFFFFFFFFFFFFFFF)
    cdef Py_ssize_t s, j
    cdef double tot, acc, pi, r
    with nogil:
        for s in range(draws):
            tot = 0.0
            for j in range(k):
                y[j] = _gamma(&st, sh[j])
                tot = tot + y[j]
            acc = 0.0
            for j in range(k):
                pi = y[j] / tot
                r = pi / m[j]
                rrv[s, j] = r
                acc = acc + pi * log2(r)
            icv[s] = acc
    return ic, rr
