import numpy as np
import pytest

from hqnas import qsim
from hqnas.genotype import Genotype, random_genotype
from hqnas.qsim import CircuitSpec, SimulationError

import oracles


def small_genotype(rng, max_qubits=4):
    g = random_genotype(rng)
    return Genotype(
        int(rng.integers(2, max_qubits + 1)), g.encoding, g.rot_gates, g.entangler, g.topology, g.depth
    )


def random_state(rng, n, batch=()):
    s = rng.normal(size=batch + (2**n,)) + 1j * rng.normal(size=batch + (2**n,))
    return s / np.linalg.norm(s, axis=-1, keepdims=True)


# -- single gates --------------------------------------------------------------


def test_rx_pi_flips():
    s = qsim.apply_rotation(qsim.zero_state(1), "Rx", 0, np.pi)
    assert qsim.expectation_z(s, 0) == pytest.approx(-1.0, abs=1e-12)


@pytest.mark.parametrize("theta", [0.0, 0.3, np.pi, 5.0])
def test_rz_on_zero_keeps_population(theta):
    s = qsim.apply_rotation(qsim.zero_state(1), "Rz", 0, theta)
    assert qsim.expectation_z(s, 0) == pytest.approx(1.0, abs=1e-12)


def test_ry_half_pi():
    s = qsim.apply_rotation(qsim.zero_state(1), "Ry", 0, np.pi / 2)
    np.testing.assert_allclose(s, [np.cos(np.pi / 4), np.sin(np.pi / 4)], atol=1e-12)
    assert qsim.expectation_z(s, 0) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("axis", ["Rx", "Ry", "Rz"])
def test_rotation_matches_matrix(rng, axis):
    n = 3
    s = random_state(rng, n)
    for q in range(n):
        theta = rng.uniform(-4, 4)
        np.testing.assert_allclose(
            qsim.apply_rotation(s, axis, q, theta), oracles.embed(oracles.rot(axis, theta), q, n) @ s, atol=1e-12
        )


def test_rotation_batched_angles(rng):
    s = random_state(rng, 3, (5,))
    angles = rng.uniform(-3, 3, 5)
    out = qsim.apply_rotation(s, "Rx", 1, angles)
    for b in range(5):
        np.testing.assert_allclose(out[b], qsim.apply_rotation(s[b], "Rx", 1, angles[b]), atol=1e-14)


def test_rotation_bad_qubit():
    with pytest.raises(SimulationError):
        qsim.apply_rotation(qsim.zero_state(2), "Rx", 2, 0.1)
    with pytest.raises(SimulationError):
        qsim.apply_rotation(qsim.zero_state(2), "Rw", 0, 0.1)


def basis(n, index):
    s = np.zeros(2**n, dtype=complex)
    s[index] = 1
    return s


def test_cnot_examples():
    # |10>: qubit 1 (high) set, control = 1, target = 0
    np.testing.assert_allclose(qsim.apply_entangler(basis(2, 0b10), "cnot", 1, 0), basis(2, 0b11))
    np.testing.assert_allclose(qsim.apply_entangler(basis(2, 0b00), "cnot", 1, 0), basis(2, 0b00))


def test_cz_example():
    np.testing.assert_allclose(qsim.apply_entangler(basis(2, 0b11), "cz", 0, 1), -basis(2, 0b11))


@pytest.mark.parametrize("kind", ["cnot", "cz"])
def test_entangler_matches_matrix(rng, kind):
    n = 4
    s = random_state(rng, n)
    for c in range(n):
        for t in range(n):
            if c != t:
                np.testing.assert_allclose(
                    qsim.apply_entangler(s, kind, c, t), oracles.controlled(kind, c, t, n) @ s, atol=1e-14
                )


def test_entangler_errors():
    s = qsim.zero_state(2)
    with pytest.raises(SimulationError):
        qsim.apply_entangler(s, "cnot", 1, 1)
    with pytest.raises(SimulationError):
        qsim.apply_entangler(s, "cnot", 0, 2)
    with pytest.raises(SimulationError):
        qsim.apply_entangler(s, "swap", 0, 1)


def test_gates_preserve_inner_product(rng):
    n = 4
    s = random_state(rng, n)
    for _ in range(100):
        q = int(rng.integers(n))
        if rng.random() < 0.5:
            s = qsim.apply_rotation(s, ["Rx", "Ry", "Rz"][rng.integers(3)], q, rng.uniform(-5, 5))
        else:
            t = (q + 1 + int(rng.integers(n - 1))) % n
            s = qsim.apply_entangler(s, ["cnot", "cz"][rng.integers(2)], q, t)
        assert abs(np.vdot(s, s).real - 1) < 1e-12


# -- encodings and readout -------------------------------------------------------


def test_angle_encode_examples():
    np.testing.assert_allclose(qsim.angle_encode([0.0, 0.0]), basis(2, 0), atol=1e-15)
    assert qsim.expectation_z(qsim.angle_encode([np.pi]), 0) == pytest.approx(-1, abs=1e-12)
    np.testing.assert_allclose(qsim.angle_encode([np.pi / 2, np.pi / 2]), [0.5] * 4, atol=1e-12)


def test_amplitude_encode_examples():
    np.testing.assert_allclose(qsim.amplitude_encode([1, 0, 0, 0]), basis(2, 0))
    np.testing.assert_allclose(qsim.amplitude_encode([3, 4]), [0.6, 0.8])
    np.testing.assert_allclose(qsim.amplitude_encode(np.zeros(8)), basis(3, 0))
    with pytest.raises(SimulationError):
        qsim.amplitude_encode([1, 2, 3])
    with pytest.raises(SimulationError):
        qsim.amplitude_encode([1, 2, 3, 4], num_qubits=3)


def test_expectation_examples():
    assert qsim.expectation_z(basis(1, 0), 0) == 1
    assert qsim.expectation_z(basis(1, 1), 0) == -1
    assert qsim.expectation_z(np.array([1, 1]) / np.sqrt(2), 0) == pytest.approx(0, abs=1e-15)


def test_expectation_matches_summation(rng):
    s = random_state(rng, 2)
    for q in range(2):
        direct = sum((1 if not (i >> q) & 1 else -1) * abs(s[i]) ** 2 for i in range(4))
        assert qsim.expectation_z(s, q) == pytest.approx(direct, abs=1e-12)


# -- circuits ---------------------------------------------------------------------


def test_identity_circuit_outputs_one():
    g = Genotype(3, "angle", ("Rx",) * 4, "cnot", "circular", 1)
    spec = CircuitSpec.from_genotype(g)
    np.testing.assert_allclose(qsim.forward(spec, np.zeros(3), np.zeros(3)), np.ones(3), atol=1e-12)


def test_all_rz_outputs_one(rng):
    for ent in ("cnot", "cz"):
        g = Genotype(4, "angle", ("Rz",) * 4, ent, "linear", 4)
        spec = CircuitSpec.from_genotype(g)
        out = qsim.forward(spec, rng.uniform(-3, 3, 16), np.zeros(4))
        np.testing.assert_allclose(out, np.ones(4), atol=1e-12)


def test_forward_matches_unitary_oracle(rng):
    for _ in range(30):
        g = small_genotype(rng)
        spec = CircuitSpec.from_genotype(g)
        p = rng.uniform(-np.pi, np.pi, spec.num_params)
        x = rng.uniform(-2, 2, spec.encoding_dim)
        np.testing.assert_allclose(qsim.forward(spec, p, x), oracles.unitary_forward(g, p, x), atol=1e-10)


def test_forward_batched_equals_loop(rng):
    g = Genotype(3, "amplitude", ("Ry", "Rx", "Rz", "Rx"), "cz", "circular", 3)
    spec = CircuitSpec.from_genotype(g)
    p = rng.uniform(-3, 3, spec.num_params)
    x = rng.normal(size=(6, 8))
    batched = qsim.forward(spec, p, x)
    for b in range(6):
        np.testing.assert_allclose(batched[b], qsim.forward(spec, p, x[b]), atol=1e-13)


def test_forward_wrong_param_count():
    spec = CircuitSpec.from_genotype(Genotype(2, "angle", ("Rx",) * 4, "cnot", "linear", 2))
    with pytest.raises(SimulationError):
        qsim.forward(spec, np.zeros(3), np.zeros(2))
    with pytest.raises(SimulationError):
        qsim.forward(spec, np.zeros(4), np.zeros(3))


def test_outputs_in_range(rng):
    for _ in range(20):
        g = random_genotype(rng)
        spec = CircuitSpec.from_genotype(g)
        z = qsim.forward(spec, rng.uniform(-5, 5, spec.num_params), rng.normal(size=spec.encoding_dim))
        assert np.all(np.abs(z) <= 1 + 1e-12)


def test_circuit_layout():
    g = Genotype(4, "angle", ("Rx",) * 4, "cnot", "circular", 3)
    spec = CircuitSpec.from_genotype(g)
    assert spec.num_params == 12
    assert spec.pairs == ((0, 1), (1, 2), (2, 3), (3, 0))
    assert CircuitSpec.from_genotype(Genotype(4, "angle", ("Rx",) * 4, "cnot", "linear", 3)).pairs == (
        (0, 1),
        (1, 2),
        (2, 3),
    )


# -- gradients --------------------------------------------------------------------


def test_shift_rule_single_ry():
    spec = CircuitSpec.from_genotype(Genotype(2, "angle", ("Ry",) * 4, "cz", "linear", 1))
    # with zero encoding, qubit 0 sees cos(theta_0)
    for theta, expected in [(0.0, 0.0), (np.pi / 2, -1.0)]:
        jac = qsim.grad_params_shift(spec, [theta, 0.0], [0.0, 0.0])
        assert jac[0, 0] == pytest.approx(expected, abs=1e-12)


def test_shift_rule_matches_finite_differences(rng):
    for _ in range(5):
        g = small_genotype(rng, 3)
        spec = CircuitSpec.from_genotype(g)
        p = rng.uniform(-3, 3, spec.num_params)
        x = rng.uniform(-1, 1, spec.encoding_dim)
        fd = oracles.central_diff(lambda t: qsim.forward(spec, t, x), p)
        np.testing.assert_allclose(qsim.grad_params_shift(spec, p, x), fd, atol=1e-5)


def test_adjoint_params_match_shift(rng):
    for _ in range(10):
        g = small_genotype(rng)
        spec = CircuitSpec.from_genotype(g)
        p = rng.uniform(-3, 3, spec.num_params)
        x = rng.uniform(-1, 1, spec.encoding_dim)
        u = rng.normal(size=g.num_qubits)
        pg, _ = qsim.grad_full_adjoint(spec, p, x, u)
        np.testing.assert_allclose(pg, qsim.grad_params_shift(spec, p, x) @ u, atol=1e-8)


def test_adjoint_angle_inputs_match_shift(rng):
    # encoding rotations are Ry, so the shift rule applies to the features too
    for _ in range(10):
        g = small_genotype(rng)
        g = Genotype(g.num_qubits, "angle", g.rot_gates, g.entangler, g.topology, g.depth)
        spec = CircuitSpec.from_genotype(g)
        p = rng.uniform(-3, 3, spec.num_params)
        x = rng.uniform(-3, 3, spec.encoding_dim)
        u = rng.normal(size=g.num_qubits)
        f = lambda xx: qsim.forward(spec, p, xx) @ u
        shift = np.array([(f(x + e) - f(x - e)) / 2 for e in np.eye(len(x)) * np.pi / 2])
        _, xg = qsim.grad_full_adjoint(spec, p, x, u)
        np.testing.assert_allclose(xg, shift, atol=1e-8)


def test_adjoint_amplitude_inputs_match_fd(rng):
    for _ in range(10):
        g = small_genotype(rng)
        g = Genotype(g.num_qubits, "amplitude", g.rot_gates, g.entangler, g.topology, g.depth)
        spec = CircuitSpec.from_genotype(g)
        p = rng.uniform(-3, 3, spec.num_params)
        x = rng.normal(size=spec.encoding_dim)
        u = rng.normal(size=g.num_qubits)
        fd = oracles.central_diff(lambda xx: qsim.forward(spec, p, xx) @ u, x)
        _, xg = qsim.grad_full_adjoint(spec, p, x, u)
        np.testing.assert_allclose(xg, fd, atol=1e-5)


def test_adjoint_degenerate_amplitude_input():
    spec = CircuitSpec.from_genotype(Genotype(2, "amplitude", ("Rx",) * 4, "cnot", "linear", 1))
    _, xg = qsim.grad_full_adjoint(spec, [0.3, 0.4], np.zeros(4), [1.0, 1.0])
    np.testing.assert_array_equal(xg, np.zeros(4))


def test_adjoint_batch_sums_param_grads(rng):
    g = Genotype(3, "angle", ("Rx", "Ry", "Rz", "Rx"), "cnot", "circular", 3)
    spec = CircuitSpec.from_genotype(g)
    p = rng.uniform(-3, 3, spec.num_params)
    x = rng.uniform(-1, 1, (4, 3))
    u = rng.normal(size=(4, 3))
    pg, xg = qsim.grad_full_adjoint(spec, p, x, u)
    singles = [qsim.grad_full_adjoint(spec, p, x[b], u[b]) for b in range(4)]
    np.testing.assert_allclose(pg, sum(s[0] for s in singles), atol=1e-12)
    np.testing.assert_allclose(xg, np.stack([s[1] for s in singles]), atol=1e-12)
