"""
A short tour of the state-vector simulator
==========================================

States are complex arrays of length 2**n with qubit 0 as the least
significant bit of the basis index.
"""

import numpy as np

from hqnas import qsim
from hqnas.genotype import from_token
from hqnas.qsim import CircuitSpec

# Rx(pi) flips |0> to |1>, up to a global phase
psi = qsim.zero_state(1)
psi = qsim.apply_rotation(psi, "Rx", 0, np.pi)
print("Rx(pi)|0> =", np.round(psi, 6))

# a Bell pair: Ry(pi/2) on qubit 0, then CNOT 0 -> 1
psi = qsim.apply_rotation(qsim.zero_state(2), "Ry", 0, np.pi / 2)
psi = qsim.apply_entangler(psi, "cnot", 0, 1)
print("Bell amplitudes:", np.round(psi.real, 6))
print("<Z> per qubit:", qsim.expectation_z(psi))

# the two encodings
print("angle encode [0, pi]:", np.round(qsim.angle_encode([0.0, np.pi]).real, 6))
print("amplitude encode [3, 4, 0, 0]:", qsim.amplitude_encode([3.0, 4.0, 0.0, 0.0]).real)

# a whole genotype as a circuit
g = from_token("q3-ang-RyRzRxRx-cnot-circ-d2")
spec = CircuitSpec.from_genotype(g)
rng = np.random.default_rng(0)
theta = rng.uniform(-np.pi, np.pi, spec.num_params)
x = rng.uniform(-1, 1, spec.encoding_dim)
print(g.token(), "->", np.round(qsim.forward(spec, theta, x), 4))

# gradients: the shift rule gives the full Jacobian, the adjoint pass a
# vector-Jacobian product, and both agree
jac = qsim.grad_params_shift(spec, theta, x)
u = np.ones(g.num_qubits)
vjp, _ = qsim.grad_full_adjoint(spec, theta, x, u)
print("shift vs adjoint max diff:", np.max(np.abs(jac @ u - vjp)))
