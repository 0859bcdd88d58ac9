"""Small classical building blocks: dense layers, softmax cross-entropy, Adam."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class DenseLayer:
    weights: np.ndarray  # (in_dim, out_dim)
    biases: np.ndarray  # (out_dim,)

    @property
    def in_dim(self) -> int:
        return self.weights.shape[0]

    @property
    def out_dim(self) -> int:
        return self.weights.shape[1]

    @classmethod
    def glorot(cls, in_dim: int, out_dim: int, rng: np.random.Generator) -> "DenseLayer":
        """Uniform Glorot initialization with zero biases."""
        if in_dim <= 0 or out_dim <= 0:
            raise ValueError(f"layer dimensions must be positive, got {in_dim}x{out_dim}")
        limit = np.sqrt(6.0 / (in_dim + out_dim))
        w = rng.uniform(-limit, limit, size=(in_dim, out_dim))
        return cls(w, np.zeros(out_dim))

    def params(self) -> list[np.ndarray]:
        return [self.weights, self.biases]


def dense_forward(layer: DenseLayer, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != layer.in_dim:
        raise ValueError(f"expected input width {layer.in_dim}, got {x.shape[-1]}")
    return x @ layer.weights + layer.biases


def dense_backward(layer: DenseLayer, x: np.ndarray, dy: np.ndarray):
    """Gradients of a dense layer; weight/bias grads are summed over the batch.

    Returns:
        (dx, dW, db)
    """
    x = np.asarray(x, dtype=float)
    dy = np.asarray(dy, dtype=float)
    if dy.shape[-1] != layer.out_dim:
        raise ValueError(f"expected upstream width {layer.out_dim}, got {dy.shape[-1]}")
    if x.shape[-1] != layer.in_dim:
        raise ValueError(f"expected input width {layer.in_dim}, got {x.shape[-1]}")
    x2 = x.reshape(-1, layer.in_dim)
    dy2 = dy.reshape(-1, layer.out_dim)
    dx = dy @ layer.weights.T
    return dx, x2.T @ dy2, dy2.sum(axis=0)


def softmax(logits: np.ndarray) -> np.ndarray:
    z = logits - np.max(logits, axis=-1, keepdims=True)
    e = np.exp(z)
    return e / np.sum(e, axis=-1, keepdims=True)


def softmax_xent(logits, label):
    """Cross-entropy of softmax(logits) against integer ``label``.

    With a batch of logits ``(B, C)`` and labels ``(B,)`` the mean loss and the
    gradient of the mean are returned.
    """
    logits = np.asarray(logits, dtype=float)
    labels = np.asarray(label)
    num_classes = logits.shape[-1]
    if np.any(labels < 0) or np.any(labels >= num_classes):
        raise ValueError(f"label out of range for {num_classes} classes")
    z = logits - np.max(logits, axis=-1, keepdims=True)
    lse = np.log(np.sum(np.exp(z), axis=-1))
    probs = np.exp(z - lse[..., None])
    onehot = np.zeros_like(logits)
    if logits.ndim == 1:
        loss = float(lse - z[labels])
        onehot[labels] = 1.0
        return loss, probs - onehot
    rows = np.arange(logits.shape[0])
    onehot[rows, labels] = 1.0
    b = logits.shape[0]
    return float(np.mean(lse - z[rows, labels])), (probs - onehot) / b


@dataclass
class AdamState:
    lr: float = 0.01
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    step: int = 0
    m: list[np.ndarray] = field(default_factory=list)
    v: list[np.ndarray] = field(default_factory=list)


def adam_step(params: list[np.ndarray], grads: list[np.ndarray], state: AdamState) -> list[np.ndarray]:
    """One bias-corrected Adam update, in place on ``params`` and ``state``."""
    if len(params) != len(grads):
        raise ValueError("params and grads differ in length")
    if not state.m:
        state.m = [np.zeros_like(p) for p in params]
        state.v = [np.zeros_like(p) for p in params]
    state.step += 1
    t = state.step
    b1, b2 = state.beta1, state.beta2
    for p, g, m, v in zip(params, grads, state.m, state.v):
        if p.shape != g.shape or p.shape != m.shape:
            raise ValueError(f"shape mismatch: param {p.shape}, grad {g.shape}")
        m *= b1
        m += (1 - b1) * g
        v *= b2
        v += (1 - b2) * g * g
        m_hat = m / (1 - b1**t)
        v_hat = v / (1 - b2**t)
        p -= state.lr * m_hat / (np.sqrt(v_hat) + state.eps)
    return params
