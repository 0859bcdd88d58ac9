"""Dense state-vector simulator for the searched circuits.

States are complex numpy arrays whose last axis has length ``2**n``; any
leading axes are treated as a batch. Qubit ``q`` addresses bit ``q`` of the
basis-state index (qubit 0 is the least-significant bit).

Circuits are run as: encoding, then per layer one trainable rotation on every
qubit followed by the entangling stage, then per-qubit Pauli-Z readout.
Gradients are exact via the adjoint method; the parameter-shift rule is
provided as an independent route.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .genotype import Genotype

AMPLITUDE_EPS = 1e-12


class SimulationError(ValueError):
    pass


@dataclass(frozen=True)
class CircuitSpec:
    """Gate layout derived from a genotype."""

    num_qubits: int
    encoding: str
    layers: tuple[str, ...]
    entangler: str
    pairs: tuple[tuple[int, int], ...]

    @classmethod
    def from_genotype(cls, g: Genotype) -> "CircuitSpec":
        return cls(
            num_qubits=g.num_qubits,
            encoding=g.encoding,
            layers=g.active_rotations,
            entangler=g.entangler,
            pairs=entangling_pairs(g.num_qubits, g.topology),
        )

    @property
    def depth(self) -> int:
        return len(self.layers)

    @property
    def num_params(self) -> int:
        return self.num_qubits * self.depth

    @property
    def encoding_dim(self) -> int:
        return self.num_qubits if self.encoding == "angle" else 2**self.num_qubits


def entangling_pairs(n: int, topology: str) -> tuple[tuple[int, int], ...]:
    pairs = [(q, q + 1) for q in range(n - 1)]
    if topology == "circular":
        pairs.append((n - 1, 0))
    return tuple(pairs)


def num_qubits_of(state: np.ndarray) -> int:
    dim = state.shape[-1]
    n = dim.bit_length() - 1
    if dim < 2 or 1 << n != dim:
        raise SimulationError(f"state length {dim} is not a power of two")
    return n


def zero_state(n: int, batch: tuple[int, ...] = ()) -> np.ndarray:
    state = np.zeros(batch + (2**n,), dtype=complex)
    state[..., 0] = 1.0
    return state


def _as2d(state: np.ndarray, qubit: int | None = None) -> np.ndarray:
    n = num_qubits_of(state)
    if qubit is not None and not 0 <= qubit < n:
        raise SimulationError(f"qubit {qubit} out of range for {n} qubits")
    return np.ascontiguousarray(state, dtype=complex).reshape(-1, 2**n)


def rotation_matrix(axis: str, angle) -> np.ndarray:
    """``exp(-i angle/2 sigma)``; shape (2, 2), or (..., 2, 2) for array angles."""
    half = np.asarray(angle, dtype=float) / 2
    c, s = np.cos(half), np.sin(half)
    u = np.zeros(half.shape + (2, 2), dtype=complex)
    if axis == "Rx":
        u[..., 0, 0] = u[..., 1, 1] = c
        u[..., 0, 1] = u[..., 1, 0] = -1j * s
    elif axis == "Ry":
        u[..., 0, 0] = u[..., 1, 1] = c
        u[..., 0, 1] = -s
        u[..., 1, 0] = s
    elif axis == "Rz":
        u[..., 0, 0] = c - 1j * s
        u[..., 1, 1] = c + 1j * s
    else:
        raise SimulationError(f"unknown rotation axis {axis!r}")
    return u


PAULI = {
    "Rx": np.array([[0, 1], [1, 0]], dtype=complex),
    "Ry": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Rz": np.array([[1, 0], [0, -1]], dtype=complex),
}


def apply_matrix(state: np.ndarray, u: np.ndarray, qubit: int) -> np.ndarray:
    """Apply a 2x2 matrix (or one per batch sample) to ``qubit``."""
    flat = _as2d(state, qubit)
    u = np.asarray(u, dtype=complex)
    if u.ndim == 2:
        out = _kernels.apply_1q(flat, u, qubit)
    else:
        u = np.broadcast_to(u, state.shape[:-1] + (2, 2)).reshape(-1, 2, 2)
        out = _kernels.apply_1q_batched(flat, np.ascontiguousarray(u), qubit)
    return out.reshape(state.shape)


def apply_rotation(state: np.ndarray, axis: str, qubit: int, angle) -> np.ndarray:
    """Apply ``exp(-i angle/2 sigma_axis)`` to ``qubit``.

    ``angle`` may be a scalar or an array matching the batch shape.
    """
    return apply_matrix(state, rotation_matrix(axis, angle), qubit)


def apply_pauli(state: np.ndarray, axis: str, qubit: int) -> np.ndarray:
    """Apply the Pauli matrix generating rotation ``axis``."""
    if axis not in PAULI:
        raise SimulationError(f"unknown rotation axis {axis!r}")
    return apply_matrix(state, PAULI[axis], qubit)


def apply_entangler(state: np.ndarray, kind: str, control: int, target: int) -> np.ndarray:
    """Apply CNOT or CZ. Both are self-inverse."""
    n = num_qubits_of(state)
    if control == target:
        raise SimulationError("control and target must differ")
    for q in (control, target):
        if not 0 <= q < n:
            raise SimulationError(f"qubit {q} out of range for {n} qubits")
    flat = _as2d(state)
    if kind == "cnot":
        out = _kernels.cnot(flat, control, target)
    elif kind == "cz":
        out = _kernels.cz(flat, control, target)
    else:
        raise SimulationError(f"unknown entangler {kind!r}")
    return out.reshape(state.shape)


def angle_encode(features) -> np.ndarray:
    """Product state ``Ry(x_q)|0>`` on each qubit; the last axis holds features."""
    x = np.asarray(features, dtype=float)
    n = x.shape[-1]
    if n < 1:
        raise SimulationError("angle encoding needs at least one feature")
    state = zero_state(n, x.shape[:-1])
    for q in range(n):
        state = apply_rotation(state, "Ry", q, x[..., q])
    return state


def amplitude_encode(vec, num_qubits: int | None = None) -> np.ndarray:
    """Normalize ``vec`` into amplitudes; near-zero vectors map to ``|0...0>``."""
    v = np.asarray(vec, dtype=float)
    dim = v.shape[-1]
    if num_qubits is not None and dim != 2**num_qubits:
        raise SimulationError(f"expected {2**num_qubits} amplitudes, got {dim}")
    num_qubits_of(v)
    norm = np.linalg.norm(v, axis=-1, keepdims=True)
    degenerate = norm < AMPLITUDE_EPS
    state = np.where(degenerate, 0.0, v / np.where(degenerate, 1.0, norm)).astype(complex)
    state[..., 0] = np.where(degenerate[..., 0], 1.0, state[..., 0])
    return state


def _z_signs(n: int) -> np.ndarray:
    """(n, 2**n) array of +1/-1 by bit q of the basis index."""
    idx = np.arange(2**n)
    return 1.0 - 2.0 * ((idx[None, :] >> np.arange(n)[:, None]) & 1)


def expectation_z(state: np.ndarray, qubit: int | None = None) -> np.ndarray:
    """Pauli-Z expectation of one qubit, or of all qubits when ``qubit`` is None."""
    n = num_qubits_of(state)
    probs = np.abs(state) ** 2
    signs = _z_signs(n)
    if qubit is None:
        return probs @ signs.T
    if not 0 <= qubit < n:
        raise SimulationError(f"qubit {qubit} out of range for {n} qubits")
    return probs @ signs[qubit]


# -- circuits -----------------------------------------------------------------


def encode(spec: CircuitSpec, features) -> np.ndarray:
    x = np.asarray(features, dtype=float)
    if x.shape[-1] != spec.encoding_dim:
        raise SimulationError(
            f"{spec.encoding} encoding on {spec.num_qubits} qubits expects "
            f"{spec.encoding_dim} features, got {x.shape[-1]}"
        )
    if spec.encoding == "angle":
        return angle_encode(x)
    return amplitude_encode(x, spec.num_qubits)


def _check_params(spec: CircuitSpec, params) -> np.ndarray:
    p = np.asarray(params, dtype=float).ravel()
    if p.size != spec.num_params:
        raise SimulationError(f"expected {spec.num_params} parameters, got {p.size}")
    return p


def _entangle(spec: CircuitSpec, state: np.ndarray) -> np.ndarray:
    for c, t in spec.pairs:
        state = apply_entangler(state, spec.entangler, c, t)
    return state


def _disentangle(spec: CircuitSpec, state: np.ndarray) -> np.ndarray:
    for c, t in reversed(spec.pairs):
        state = apply_entangler(state, spec.entangler, c, t)
    return state


def run(spec: CircuitSpec, params, state: np.ndarray) -> np.ndarray:
    """Apply the variational layers to an already-encoded state."""
    p = _check_params(spec, params)
    n = spec.num_qubits
    for d, axis in enumerate(spec.layers):
        for q in range(n):
            state = apply_rotation(state, axis, q, p[d * n + q])
        state = _entangle(spec, state)
    return state


def forward(spec: CircuitSpec, params, features) -> np.ndarray:
    """Per-qubit ``<Z>`` after encoding ``features`` and running the circuit."""
    return expectation_z(run(spec, params, encode(spec, features)))


def grad_params_shift(spec: CircuitSpec, params, features) -> np.ndarray:
    """Jacobian ``d<Z_q>/d theta_k`` by the two-term parameter-shift rule.

    Returns shape ``(num_params,) + batch + (num_qubits,)``.
    """
    p = _check_params(spec, params)
    state0 = encode(spec, features)
    rows = []
    for k in range(p.size):
        shift = np.zeros_like(p)
        shift[k] = np.pi / 2
        plus = expectation_z(run(spec, p + shift, state0))
        minus = expectation_z(run(spec, p - shift, state0))
        rows.append((plus - minus) / 2)
    return np.stack(rows)


def grad_full_adjoint(spec: CircuitSpec, params, features, upstream):
    """Exact gradients of ``sum_q upstream_q <Z_q>`` by one backward sweep.

    ``features`` and ``upstream`` may carry a leading batch axis; parameter
    gradients are then summed over the batch while input gradients stay per
    sample. Input gradients are with respect to the raw encoder input (the
    rotation angles for angle encoding, the unnormalized vector for amplitude
    encoding).

    Returns:
        (param_grads, input_grads)
    """
    p = _check_params(spec, params)
    x = np.asarray(features, dtype=float)
    u = np.asarray(upstream, dtype=float)
    n = spec.num_qubits
    if u.shape[-1] != n:
        raise SimulationError(f"upstream must have {n} entries, got {u.shape[-1]}")

    state0 = encode(spec, x)
    psi = run(spec, p, state0)
    # bra = H psi with H = sum_q u_q Z_q (diagonal)
    bra = (u @ _z_signs(n))[..., :] * psi
    ket = psi

    pgrad = np.zeros(p.size)
    for d in reversed(range(spec.depth)):
        ket = _disentangle(spec, ket)
        bra = _disentangle(spec, bra)
        axis = spec.layers[d]
        for q in reversed(range(n)):
            k = d * n + q
            # d/dtheta <psi|H|psi> = Im <bra| sigma |ket> at the gate output
            g = _kernels.pauli_overlap_imag(_as2d(bra), _as2d(ket), PAULI[axis], q)
            pgrad[k] = np.sum(g)
            ket = apply_rotation(ket, axis, q, -p[k])
            bra = apply_rotation(bra, axis, q, -p[k])

    if spec.encoding == "angle":
        xgrad = np.empty(x.shape)
        for q in reversed(range(n)):
            g = _kernels.pauli_overlap_imag(_as2d(bra), _as2d(ket), PAULI["Ry"], q)
            xgrad[..., q] = g.reshape(x.shape[:-1])
            ket = apply_rotation(ket, "Ry", q, -x[..., q])
            bra = apply_rotation(bra, "Ry", q, -x[..., q])
    else:
        # state0 = x/|x| is real: dL/dstate0 = 2 Re(bra), then the normalization Jacobian
        g = 2 * np.real(bra)
        s = np.real(state0)
        norm = np.linalg.norm(x, axis=-1, keepdims=True)
        degenerate = norm < AMPLITUDE_EPS
        proj = g - s * np.sum(s * g, axis=-1, keepdims=True)
        xgrad = np.where(degenerate, 0.0, proj / np.where(degenerate, 1.0, norm))
    return pgrad, xgrad
