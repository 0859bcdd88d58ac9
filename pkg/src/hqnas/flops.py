"""Analytic per-inference FLOPs for hybrid models.

Quantum FLOPs are the real arithmetic operations needed to simulate the
circuit on a dense state vector; classical FLOPs cover the dense layers,
activation, input scaling and softmax. Training cost is not counted.

Conventions (dense model):

* single-qubit gate: 2x2 complex mat-vec on each of the ``2**(n-1)`` amplitude
  pairs, ``14 * 2**n``
* controlled two-qubit gate: full 4x4 complex mat-vec on each of the
  ``2**(n-2)`` groups, ``30 * 2**n``
* readout: ``3 * 2**n`` per measured qubit
* amplitude encoding: square, accumulate and divide per amplitude plus one
  square root
* a square root or exponential costs ``TRANSCENDENTAL`` flops

The ``optimized`` model treats CNOT as a free permutation and CZ as
``2**(n-2)`` complex sign flips.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .genotype import Genotype

TRANSCENDENTAL = 20
FLOPS_MODELS = ("dense", "optimized")


@dataclass(frozen=True)
class FlopsReport:
    classical_flops: int
    quantum_flops: int
    breakdown: tuple[tuple[str, int], ...] = field(default=())

    @property
    def total_flops(self) -> int:
        return self.classical_flops + self.quantum_flops


def _check_model(model: str) -> None:
    if model not in FLOPS_MODELS:
        raise ValueError(f"flops model must be one of {FLOPS_MODELS}, got {model!r}")


def quantum_gate_flops(num_qubits: int, gate_class: str, model: str = "dense", kind: str = "cnot") -> int:
    """Cost of one gate on an ``num_qubits`` state vector.

    ``gate_class`` is ``"single"`` or ``"controlled-two"``; ``kind`` picks the
    entangler under the optimized model.
    """
    _check_model(model)
    n = num_qubits
    if gate_class == "single":
        if n < 1:
            raise ValueError(f"single-qubit gate needs n >= 1, got {n}")
        return 14 * 2**n
    if gate_class == "controlled-two":
        if n < 2:
            raise ValueError(f"two-qubit gate needs n >= 2, got {n}")
        if model == "dense":
            return 30 * 2**n
        return 0 if kind == "cnot" else 2 ** (n - 1)
    raise ValueError(f"unknown gate class {gate_class!r}")


def encoding_flops(g: Genotype) -> int:
    n = g.num_qubits
    if g.encoding == "angle":
        return n * quantum_gate_flops(n, "single")
    return 3 * 2**n + TRANSCENDENTAL


def measurement_flops(g: Genotype) -> int:
    return g.num_qubits * 3 * 2**g.num_qubits


def num_entanglers(g: Genotype) -> int:
    return g.num_qubits if g.topology == "circular" else g.num_qubits - 1


def layer_flops(g: Genotype, model: str = "dense") -> int:
    n = g.num_qubits
    return n * quantum_gate_flops(n, "single", model) + num_entanglers(g) * quantum_gate_flops(
        n, "controlled-two", model, g.entangler
    )


def circuit_flops(g: Genotype, model: str = "dense") -> int:
    return encoding_flops(g) + g.depth * layer_flops(g, model) + measurement_flops(g)


def dense_flops(in_dim: int, out_dim: int) -> int:
    return 2 * in_dim * out_dim + out_dim


def softmax_flops(num_classes: int) -> int:
    return 3 * num_classes + TRANSCENDENTAL


def classical_breakdown(g: Genotype, input_dim: int, num_classes: int) -> list[tuple[str, int]]:
    enc_dim = g.encoding_dim
    stages = [
        ("pre_dense", dense_flops(input_dim, enc_dim)),
        ("tanh", enc_dim),
    ]
    if g.encoding == "angle":
        stages.append(("angle_scale", enc_dim))
    stages += [
        ("post_dense", dense_flops(g.num_qubits, num_classes)),
        ("softmax", softmax_flops(num_classes)),
    ]
    return stages


def classical_flops(g: Genotype, input_dim: int, num_classes: int) -> int:
    return sum(f for _, f in classical_breakdown(g, input_dim, num_classes))


def flops_report(g: Genotype, input_dim: int, num_classes: int, model: str = "dense") -> FlopsReport:
    classical = classical_breakdown(g, input_dim, num_classes)
    quantum = [
        ("encoding", encoding_flops(g)),
        ("variational", g.depth * layer_flops(g, model)),
        ("measurement", measurement_flops(g)),
    ]
    return FlopsReport(
        classical_flops=sum(f for _, f in classical),
        quantum_flops=sum(f for _, f in quantum),
        breakdown=tuple(classical + quantum),
    )


def max_total_flops(input_dim: int, num_classes: int, model: str = "dense") -> int:
    """Largest total FLOPs over the full space.

    Cost is monotone in depth, qubits and circular topology, so only the
    encoding/entangler choices at the largest shape need checking.
    """
    best = 0
    for enc in ("angle", "amplitude"):
        for ent in ("cnot", "cz"):
            g = Genotype(10, enc, ("Rx",) * 4, ent, "circular", 4)
            best = max(best, flops_report(g, input_dim, num_classes, model).total_flops)
    return best
