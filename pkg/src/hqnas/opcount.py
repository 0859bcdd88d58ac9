"""Instrumented circuit simulator that tallies real arithmetic operations.

The state is held as separate real and imaginary float arrays and every
arithmetic step goes through :class:`Counter`, which records one operation
per array element it produces. Gates are applied as full (dense) complex
matrices, zeros included, so the tally reflects what a naive dense simulator
actually executes. Used to cross-check :mod:`hqnas.flops`.
"""

from __future__ import annotations

import numpy as np

from .flops import TRANSCENDENTAL
from .genotype import Genotype
from .qsim import entangling_pairs


class Counter:
    def __init__(self):
        self.count = 0

    def _tally(self, out: np.ndarray, cost: int = 1) -> np.ndarray:
        self.count += cost * np.size(out)
        return out

    def add(self, a, b):
        return self._tally(np.add(a, b))

    def sub(self, a, b):
        return self._tally(np.subtract(a, b))

    def mul(self, a, b):
        return self._tally(np.multiply(a, b))

    def div(self, a, b):
        return self._tally(np.divide(a, b))

    def fma(self, a, b, c):
        return self._tally(np.add(np.multiply(a, b), c))

    def sqrt(self, a):
        return self._tally(np.sqrt(a), TRANSCENDENTAL)

    # complex helpers on (re, im) pairs
    def cmul(self, a, b):
        ar, ai = a
        br, bi = b
        return (
            self.sub(self.mul(ar, br), self.mul(ai, bi)),
            self.add(self.mul(ar, bi), self.mul(ai, br)),
        )

    def cadd(self, a, b):
        return self.add(a[0], b[0]), self.add(a[1], b[1])


def _rotation_matrix(axis: str, theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    if axis == "Rx":
        return np.array([[c, -1j * s], [-1j * s, c]])
    if axis == "Ry":
        return np.array([[c, -s], [s, c]], dtype=complex)
    if axis == "Rz":
        return np.array([[c - 1j * s, 0], [0, c + 1j * s]])
    raise ValueError(axis)


def _controlled_matrix(kind: str) -> np.ndarray:
    m = np.eye(4, dtype=complex)
    if kind == "cnot":
        m[2:, 2:] = [[0, 1], [1, 0]]
    else:
        m[3, 3] = -1
    return m


class CountingSimulator:
    """Dense simulator on (re, im) arrays with an operation tally.

    ``model="optimized"`` applies CNOT as an index permutation and CZ as a
    sign flip on the affected amplitudes instead of dense mat-vecs.
    """

    def __init__(self, num_qubits: int, model: str = "dense"):
        self.n = num_qubits
        self.model = model
        self.ops = Counter()
        self.re = np.zeros(2**num_qubits)
        self.im = np.zeros(2**num_qubits)
        self.re[0] = 1.0

    @property
    def state(self) -> np.ndarray:
        return self.re + 1j * self.im

    def _matvec(self, matrix: np.ndarray, groups: list[np.ndarray]) -> None:
        # groups[j] holds the basis indices of local basis state j, one per group
        ops = self.ops
        k = len(groups)
        old = [(self.re[g], self.im[g]) for g in groups]
        for row in range(k):
            acc = None
            for col in range(k):
                m = matrix[row, col]
                mr = np.full(old[col][0].shape, m.real)
                mi = np.full(old[col][0].shape, m.imag)
                term = ops.cmul((mr, mi), old[col])
                acc = term if acc is None else ops.cadd(acc, term)
            self.re[groups[row]], self.im[groups[row]] = acc

    def apply_single(self, matrix: np.ndarray, qubit: int) -> None:
        idx = np.arange(2**self.n)
        low = idx[(idx >> qubit) & 1 == 0]
        self._matvec(matrix, [low, low | (1 << qubit)])

    def apply_controlled(self, kind: str, control: int, target: int) -> None:
        idx = np.arange(2**self.n)
        base = idx[((idx >> control) & 1 == 0) & ((idx >> target) & 1 == 0)]
        c, t = 1 << control, 1 << target
        groups = [base, base | t, base | c, base | c | t]
        if self.model == "dense":
            self._matvec(_controlled_matrix(kind), groups)
        elif kind == "cnot":
            a, b = groups[2], groups[3]
            self.re[a], self.re[b] = self.re[b].copy(), self.re[a].copy()
            self.im[a], self.im[b] = self.im[b].copy(), self.im[a].copy()
        else:
            g = groups[3]
            self.re[g] = self.ops.sub(0.0, self.re[g])
            self.im[g] = self.ops.sub(0.0, self.im[g])

    def load_amplitudes(self, vec: np.ndarray) -> None:
        ops = self.ops
        v = np.asarray(vec, dtype=float)
        acc = np.zeros(1)
        for x in v:
            acc = ops.add(acc, ops.mul(x, x))
        norm = ops.sqrt(acc)
        if norm[0] < 1e-12:
            self.re = np.zeros_like(v)
            self.re[0] = 1.0
        else:
            self.re = ops.div(v, norm)
        self.im = np.zeros_like(self.re)

    def expectation_z(self, qubit: int) -> float:
        ops = self.ops
        idx = np.arange(2**self.n)
        bit = (idx >> qubit) & 1
        # |a|^2 as re*re then a fused im*im accumulate, then the signed sum
        p = ops.mul(self.re, self.re)
        p = ops.fma(self.im, self.im, p)
        acc = np.zeros(1)
        for i in idx:
            acc = ops.sub(acc, p[i]) if bit[i] else ops.add(acc, p[i])
        return float(acc[0])


def counted_forward(
    g: Genotype, params, features, model: str = "dense"
) -> tuple[np.ndarray, int]:
    """Run the genotype's circuit once, returning (per-qubit <Z>, op count)."""
    n = g.num_qubits
    sim = CountingSimulator(n, model)
    x = np.asarray(features, dtype=float)
    if g.encoding == "angle":
        for q in range(n):
            sim.apply_single(_rotation_matrix("Ry", x[q]), q)
    else:
        sim.load_amplitudes(x)
    p = np.asarray(params, dtype=float).ravel()
    pairs = entangling_pairs(n, g.topology)
    for d, axis in enumerate(g.active_rotations):
        for q in range(n):
            sim.apply_single(_rotation_matrix(axis, p[d * n + q]), q)
        for c, t in pairs:
            sim.apply_controlled(g.entangler, c, t)
    z = np.array([sim.expectation_z(q) for q in range(n)])
    return z, sim.ops.count
