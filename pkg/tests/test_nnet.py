import numpy as np
import pytest

from hqnas import nnet
from hqnas.nnet import AdamState, DenseLayer

import oracles


def test_identity_layer():
    layer = DenseLayer(np.eye(3), np.zeros(3))
    x = np.array([1.0, -2.0, 0.5])
    np.testing.assert_array_equal(nnet.dense_forward(layer, x), x)


def test_zero_weights_give_bias():
    layer = DenseLayer(np.zeros((4, 2)), np.array([0.3, -1.0]))
    np.testing.assert_array_equal(nnet.dense_forward(layer, np.ones(4)), [0.3, -1.0])


def test_dense_dimension_mismatch():
    layer = DenseLayer(np.zeros((4, 2)), np.zeros(2))
    with pytest.raises(ValueError):
        nnet.dense_forward(layer, np.ones(3))
    with pytest.raises(ValueError):
        nnet.dense_backward(layer, np.ones(4), np.ones(3))


def test_dense_backward_matches_fd(rng):
    layer = DenseLayer.glorot(5, 3, rng)
    layer.biases[:] = rng.normal(size=3)
    x = rng.normal(size=(4, 5))
    dy = rng.normal(size=(4, 3))
    dx, dw, db = nnet.dense_backward(layer, x, dy)

    def loss_x(xx):
        return np.sum(nnet.dense_forward(layer, xx) * dy)

    def loss_w(w):
        return np.sum(nnet.dense_forward(DenseLayer(w, layer.biases), x) * dy)

    def loss_b(b):
        return np.sum(nnet.dense_forward(DenseLayer(layer.weights, b), x) * dy)

    np.testing.assert_allclose(dx, oracles.central_diff(loss_x, x), rtol=1e-5, atol=1e-8)
    np.testing.assert_allclose(dw, oracles.central_diff(loss_w, layer.weights), rtol=1e-5, atol=1e-8)
    np.testing.assert_allclose(db, oracles.central_diff(loss_b, layer.biases), rtol=1e-5, atol=1e-8)


def test_glorot_bounds_and_determinism():
    a = DenseLayer.glorot(6, 4, np.random.default_rng(3))
    b = DenseLayer.glorot(6, 4, np.random.default_rng(3))
    np.testing.assert_array_equal(a.weights, b.weights)
    assert np.all(np.abs(a.weights) <= np.sqrt(6 / 10))
    np.testing.assert_array_equal(a.biases, 0)
    with pytest.raises(ValueError):
        DenseLayer.glorot(0, 3, np.random.default_rng())


@pytest.mark.parametrize("c", [2, 3, 10])
def test_xent_uniform_logits(c):
    loss, _ = nnet.softmax_xent(np.full(c, 1.7), 0)
    assert loss == pytest.approx(np.log(c), abs=1e-12)


def test_xent_confident():
    loss, _ = nnet.softmax_xent(np.array([10.0, -10.0]), 0)
    assert loss == pytest.approx(np.log1p(np.exp(-20.0)), abs=1e-10)
    assert loss == pytest.approx(2.06e-9, rel=1e-2)


def test_xent_grad_matches_fd(rng):
    for _ in range(10):
        logits = rng.normal(size=5) * 3
        label = int(rng.integers(5))
        _, d = nnet.softmax_xent(logits, label)
        fd = oracles.central_diff(lambda z: nnet.softmax_xent(z, label)[0], logits)
        np.testing.assert_allclose(d, fd, atol=1e-6)


def test_xent_batch_mean(rng):
    logits = rng.normal(size=(4, 3))
    labels = np.array([0, 2, 1, 1])
    loss, d = nnet.softmax_xent(logits, labels)
    singles = [nnet.softmax_xent(logits[i], labels[i]) for i in range(4)]
    assert loss == pytest.approx(np.mean([s[0] for s in singles]))
    np.testing.assert_allclose(d, np.stack([s[1] for s in singles]) / 4)


def test_xent_label_out_of_range():
    with pytest.raises(ValueError):
        nnet.softmax_xent(np.zeros(3), 3)


def test_softmax_properties(rng):
    p = nnet.softmax(rng.normal(size=(10, 7)) * 20)
    np.testing.assert_allclose(p.sum(axis=-1), 1, atol=1e-12)
    loss, _ = nnet.softmax_xent(rng.normal(size=(10, 7)), np.arange(10) % 7)
    assert loss >= 0


def test_adam_zero_gradient():
    p = np.array([1.0, -2.0])
    nnet.adam_step([p], [np.zeros(2)], AdamState())
    np.testing.assert_array_equal(p, [1.0, -2.0])


def test_adam_first_step_size():
    p = np.array([0.0, 0.0])
    nnet.adam_step([p], [np.array([3.0, -0.2])], AdamState(lr=0.01))
    np.testing.assert_allclose(p, [-0.01, 0.01], rtol=1e-6)


def test_adam_quadratic_converges():
    # f(x) = (x - 1)^2 from x = 0, lr 0.01, 500 steps
    x = np.array([0.0])
    state = AdamState(lr=0.01)
    for _ in range(500):
        nnet.adam_step([x], [2 * (x - 1.0)], state)
    assert abs(x[0] - 1.0) < 1e-3
    assert state.step == 500


def test_adam_shape_mismatch():
    with pytest.raises(ValueError):
        nnet.adam_step([np.zeros(2)], [np.zeros(3)], AdamState())
