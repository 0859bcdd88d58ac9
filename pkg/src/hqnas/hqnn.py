"""Hybrid model assembly, end-to-end training and fitness evaluation.

A model is ``pre dense -> tanh -> (x pi for angle encoding) -> circuit ->
per-qubit <Z> -> post dense -> softmax``. The layer shapes depend only on the
genotype and the dataset dimensions; their weights are trained jointly with
the circuit angles.
"""

from __future__ import annotations

import hashlib
import threading
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import nnet, qsim
from .data import Dataset, DatasetSplit, standardize, stratified_split
from .flops import FlopsReport, flops_report
from .genotype import Genotype, canonicalize, to_token
from .moo import EvaluationError


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 30
    batch_size: int = 16
    lr: float = 0.01
    seed: int = 0
    test_fraction: float = 0.2
    split_seed: int = 0

    def __post_init__(self):
        if self.epochs <= 0 or self.batch_size <= 0 or self.lr <= 0:
            raise ValueError("epochs, batch_size and lr must be positive")
        if not 0 < self.test_fraction < 1:
            raise ValueError("test_fraction must lie in (0, 1)")


@dataclass
class HybridModel:
    genotype: Genotype
    circuit: qsim.CircuitSpec
    pre: nnet.DenseLayer
    theta: np.ndarray
    post: nnet.DenseLayer

    @property
    def input_dim(self) -> int:
        return self.pre.in_dim

    @property
    def num_classes(self) -> int:
        return self.post.out_dim

    def params(self) -> list[np.ndarray]:
        return [self.pre.weights, self.pre.biases, self.theta, self.post.weights, self.post.biases]

    @property
    def num_params(self) -> int:
        return sum(p.size for p in self.params())


@dataclass(frozen=True)
class EvalResult:
    genotype: Genotype
    test_accuracy: float
    train_loss: float
    flops: FlopsReport
    seed: int
    wall_time: float = field(default=0.0, compare=False)


def build(genotype: Genotype, input_dim: int, num_classes: int, seed: int = 0) -> HybridModel:
    if input_dim <= 0 or num_classes <= 0:
        raise ValueError("input_dim and num_classes must be positive")
    rng = np.random.default_rng(seed)
    spec = qsim.CircuitSpec.from_genotype(genotype)
    pre = nnet.DenseLayer.glorot(input_dim, spec.encoding_dim, rng)
    theta = rng.uniform(-np.pi, np.pi, size=spec.num_params)
    post = nnet.DenseLayer.glorot(spec.num_qubits, num_classes, rng)
    return HybridModel(genotype, spec, pre, theta, post)


def _encoder_input(model: HybridModel, h: np.ndarray) -> np.ndarray:
    return np.pi * h if model.circuit.encoding == "angle" else h


def forward_batch(model: HybridModel, x: np.ndarray) -> np.ndarray:
    """Logits for one sample ``(input_dim,)`` or a batch ``(B, input_dim)``."""
    h = np.tanh(nnet.dense_forward(model.pre, x))
    z = qsim.forward(model.circuit, model.theta, _encoder_input(model, h))
    return nnet.dense_forward(model.post, z)


def forward_sample(model: HybridModel, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (model.input_dim,):
        raise ValueError(f"expected a sample of shape ({model.input_dim},), got {x.shape}")
    return forward_batch(model, x)


def predict(model: HybridModel, x: np.ndarray) -> np.ndarray:
    # argmax picks the lowest index on ties
    return np.argmax(forward_batch(model, x), axis=-1)


def loss_and_grads(model: HybridModel, x: np.ndarray, y: np.ndarray):
    """Mean cross-entropy over the batch and its gradient for every parameter.

    Gradients are returned in the order of :meth:`HybridModel.params`.
    """
    a = nnet.dense_forward(model.pre, x)
    h = np.tanh(a)
    e = _encoder_input(model, h)
    z = qsim.forward(model.circuit, model.theta, e)
    logits = nnet.dense_forward(model.post, z)
    loss, dlogits = nnet.softmax_xent(logits, y)

    dz, dw_post, db_post = nnet.dense_backward(model.post, z, dlogits)
    dtheta, de = qsim.grad_full_adjoint(model.circuit, model.theta, e, dz)
    dh = np.pi * de if model.circuit.encoding == "angle" else de
    da = dh * (1.0 - h * h)
    _, dw_pre, db_pre = nnet.dense_backward(model.pre, x, da)
    return loss, [dw_pre, db_pre, dtheta, dw_post, db_post]


def train(model: HybridModel, x: np.ndarray, y: np.ndarray, config: TrainConfig) -> list[float]:
    """Mini-batch Adam over all parameters, in place; returns per-epoch mean loss."""
    if len(x) == 0:
        raise ValueError("empty training set")
    rng = np.random.default_rng(config.seed)
    opt = nnet.AdamState(lr=config.lr)
    params = model.params()
    curve = []
    for _ in range(config.epochs):
        order = rng.permutation(len(x))
        total = 0.0
        for start in range(0, len(x), config.batch_size):
            idx = order[start : start + config.batch_size]
            loss, grads = loss_and_grads(model, x[idx], y[idx])
            nnet.adam_step(params, grads, opt)
            total += loss * len(idx)
        curve.append(total / len(x))
    return curve


def accuracy(model: HybridModel, x: np.ndarray, y: np.ndarray) -> float:
    if len(y) == 0:
        return 0.0
    return float(np.mean(predict(model, x) == y))


def candidate_seed(global_seed: int, genotype: Genotype) -> int:
    """Per-candidate seed, stable across processes and evaluation order."""
    key = f"{global_seed}|{to_token(canonicalize(genotype))}".encode()
    return int.from_bytes(hashlib.sha256(key).digest()[:4], "little")


def _evaluate(
    genotype: Genotype,
    dataset: Dataset,
    split: DatasetSplit,
    config: TrainConfig,
    flops_model: str,
) -> EvalResult:
    t0 = time.perf_counter()
    g = canonicalize(genotype)
    xtr, xte = standardize(dataset, split)
    ytr, yte = dataset.labels[split.train], dataset.labels[split.test]
    model = build(g, dataset.num_features, dataset.num_classes, config.seed)
    curve = train(model, xtr, ytr, config)
    return EvalResult(
        genotype=g,
        test_accuracy=accuracy(model, xte, yte),
        train_loss=curve[-1],
        flops=flops_report(g, dataset.num_features, dataset.num_classes, flops_model),
        seed=config.seed,
        wall_time=time.perf_counter() - t0,
    )


class Evaluator:
    """Memoizing fitness evaluator over one dataset and training setup.

    Every candidate is trained with ``candidate_seed(config.seed, g)`` and the
    data split is fixed by ``config.split_seed``, so a result depends only on
    the canonical genotype, never on evaluation order or parallelism.
    """

    def __init__(self, dataset: Dataset, config: TrainConfig = TrainConfig(), flops_model: str = "dense", jobs: int = 1):
        self.dataset = dataset
        self.config = config
        self.flops_model = flops_model
        self.jobs = max(1, int(jobs))
        self.split = stratified_split(dataset, config.test_fraction, config.split_seed)
        self.cache: dict[tuple, EvalResult] = {}
        self._lock = threading.Lock()
        self._dataset_id = dataset.digest()
        self.trained = 0

    def key(self, g: Genotype) -> tuple:
        c = self.config
        return (to_token(canonicalize(g)), self._dataset_id, c.seed, c.epochs, c.batch_size, c.lr, self.flops_model)

    def _job(self, g: Genotype):
        cfg = replace(self.config, seed=candidate_seed(self.config.seed, g))
        return (g, self.dataset, self.split, cfg, self.flops_model)

    def __call__(self, g: Genotype) -> EvalResult:
        return self.evaluate_many([g])[0]

    def evaluate_many(self, genotypes: list[Genotype]) -> list[EvalResult]:
        """Evaluate in order, training each uncached canonical genotype once."""
        todo: dict[tuple, Genotype] = {}
        for g in genotypes:
            k = self.key(g)
            if k not in self.cache and k not in todo:
                todo[k] = canonicalize(g)
        if todo:
            jobs = [self._job(g) for g in todo.values()]
            if self.jobs > 1 and len(jobs) > 1:
                with ProcessPoolExecutor(max_workers=self.jobs) as pool:
                    results = list(pool.map(_evaluate_job, jobs))
            else:
                results = [_evaluate_job(j) for j in jobs]
            with self._lock:
                for k, r in zip(todo, results):
                    self.cache.setdefault(k, r)
                self.trained += len(results)
        return [self.cache[self.key(g)] for g in genotypes]


def _evaluate_job(job) -> EvalResult:
    try:
        return _evaluate(*job)
    except Exception as exc:
        raise EvaluationError(f"evaluating {to_token(job[0])} failed: {exc}") from exc


_DEFAULT_EVALUATORS: dict[tuple, Evaluator] = {}


def evaluate(genotype: Genotype, dataset: Dataset, config: TrainConfig = TrainConfig(), flops_model: str = "dense") -> EvalResult:
    """Build, train and test ``genotype``; memoized per (canonical genotype, dataset, config)."""
    k = (dataset.digest(), config, flops_model)
    ev = _DEFAULT_EVALUATORS.get(k)
    if ev is None:
        ev = _DEFAULT_EVALUATORS[k] = Evaluator(dataset, config, flops_model)
    return ev(genotype)
