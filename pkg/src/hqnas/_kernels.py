"""Compiled inner loops for the state-vector simulator.

All kernels take a 2-D ``(batch, 2**n)`` complex128 state and return a new
array; the caller owns reshaping.
"""

import numba
import numpy as np

_jit = numba.njit(cache=True, nogil=True)


@_jit
def apply_1q(state, u, q):
    b, d = state.shape
    out = np.empty_like(state)
    lo = 1 << q
    u00, u01, u10, u11 = u[0, 0], u[0, 1], u[1, 0], u[1, 1]
    for k in range(b):
        for base in range(0, d, 2 * lo):
            for j in range(base, base + lo):
                a0 = state[k, j]
                a1 = state[k, j + lo]
                out[k, j] = u00 * a0 + u01 * a1
                out[k, j + lo] = u10 * a0 + u11 * a1
    return out


@_jit
def apply_1q_batched(state, u, q):
    # u has shape (batch, 2, 2): one gate per sample
    b, d = state.shape
    out = np.empty_like(state)
    lo = 1 << q
    for k in range(b):
        u00, u01, u10, u11 = u[k, 0, 0], u[k, 0, 1], u[k, 1, 0], u[k, 1, 1]
        for base in range(0, d, 2 * lo):
            for j in range(base, base + lo):
                a0 = state[k, j]
                a1 = state[k, j + lo]
                out[k, j] = u00 * a0 + u01 * a1
                out[k, j + lo] = u10 * a0 + u11 * a1
    return out


@_jit
def cnot(state, control, target):
    b, d = state.shape
    out = state.copy()
    c, t = 1 << control, 1 << target
    for k in range(b):
        for i in range(d):
            if (i & c) and not (i & t):
                out[k, i] = state[k, i | t]
                out[k, i | t] = state[k, i]
    return out


@_jit
def cz(state, control, target):
    b, d = state.shape
    out = state.copy()
    mask = (1 << control) | (1 << target)
    for k in range(b):
        for i in range(d):
            if (i & mask) == mask:
                out[k, i] = -state[k, i]
    return out


@_jit
def pauli_overlap_imag(bra, ket, u, q):
    """Per-sample ``Im <bra| P |ket>`` for the 2x2 matrix ``u`` on qubit ``q``."""
    b, d = ket.shape
    res = np.zeros(b)
    lo = 1 << q
    u00, u01, u10, u11 = u[0, 0], u[0, 1], u[1, 0], u[1, 1]
    for k in range(b):
        acc = 0.0 + 0.0j
        for base in range(0, d, 2 * lo):
            for j in range(base, base + lo):
                a0 = ket[k, j]
                a1 = ket[k, j + lo]
                acc += np.conj(bra[k, j]) * (u00 * a0 + u01 * a1)
                acc += np.conj(bra[k, j + lo]) * (u10 * a0 + u11 * a1)
        res[k] = acc.imag
    return res
