"""
Where the FLOPs go
==================

Every candidate is costed by a closed-form count of real floating point
operations per inference, split into a classical and a quantum part.
"""

from hqnas import flops
from hqnas.genotype import from_token

# the cheapest Iris model, stage by stage
g = from_token("q2-ang-RxRxRxRx-cnot-lin-d1")
report = flops.flops_report(g, input_dim=4, num_classes=3)
for stage, f in report.breakdown:
    print(f"{stage:>12s} {f:8d}")
print(f"{'classical':>12s} {report.classical_flops:8d}")
print(f"{'quantum':>12s} {report.quantum_flops:8d}")

# the quantum share grows as 2**n, so width dominates cost
print("\nqubits  angle-d2  amplitude-d2")
for n in range(2, 11):
    a = flops.circuit_flops(from_token(f"q{n}-ang-RyRyRxRx-cnot-lin-d2"))
    b = flops.circuit_flops(from_token(f"q{n}-amp-RyRyRxRx-cnot-lin-d2"))
    print(f"{n:6d} {a:9d} {b:13d}")

# an optimized simulator treats CNOT as a permutation and CZ as a sign flip
g = from_token("q6-amp-RyRyRxRx-cz-circ-d4")
print("\ndense vs optimized:", flops.circuit_flops(g, "dense"), flops.circuit_flops(g, "optimized"))
