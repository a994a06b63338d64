"""Direction classifier: frozen SDAE encoder, two ReLU layers, softmax output."""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from .nn_core import (
    DenseLayer,
    Optimizer,
    network_forward,
    backward,
    softmax,
    softmax_cross_entropy_grad,
)
from .sdae import Corrupter, SdaeModel, corrupt

KINDS = ("sdae_dnn", "baseline_dnn")


@dataclass(frozen=True)
class TrainConfig:
    hidden: tuple = (12, 12)
    epochs: int = 300
    batch_size: int = 32
    optimizer: str = "adam"
    learning_rate: float = 1e-3
    corrupter: Corrupter = field(default_factory=Corrupter)
    seed: int = 0
    # baseline only: keep an M-wide sigmoid layer, trained from scratch
    baseline_wide_layer: int = 0

    def __post_init__(self):
        if self.epochs < 1 or self.batch_size < 1:
            raise ValueError("epochs and batch_size must be >= 1")
        if len(self.hidden) != 2 or min(self.hidden) < 1:
            raise ValueError(f"hidden must be two positive widths, got {self.hidden}")


@dataclass
class DfClassifier:
    layers: list
    kind: str = "sdae_dnn"
    loss_trace: list = field(default_factory=list)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown classifier kind {self.kind!r}")
        for lower, upper in zip(self.layers, self.layers[1:]):
            if lower.n_out != upper.n_in:
                raise ValueError("consecutive layer widths do not chain")

    @property
    def n_inputs(self) -> int:
        return self.layers[0].n_in

    @property
    def n_classes(self) -> int:
        return self.layers[-1].n_out

    @property
    def dims(self) -> tuple:
        return (self.n_inputs,) + tuple(l.n_out for l in self.layers)

    @property
    def encoder(self) -> DenseLayer | None:
        return self.layers[0] if self.kind == "sdae_dnn" else None

    @property
    def n_params(self) -> int:
        return sum(l.n_params for l in self.layers)

    def trainable(self) -> list[DenseLayer]:
        return [l for l in self.layers if not l.frozen]

    def parameters(self) -> list[np.ndarray]:
        out = []
        for l in self.trainable():
            out += [l.weights, l.bias]
        return out

    def logits(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if x.shape[-1] != self.n_inputs:
            raise ValueError(f"input length {x.shape[-1]} does not match model input {self.n_inputs}")
        out, _ = network_forward(self.layers, x)
        return out[0] if x.ndim == 1 else out


def parameter_hash(layers) -> str:
    h = hashlib.sha256()
    for l in layers:
        h.update(np.ascontiguousarray(l.weights, dtype="<f8").tobytes())
        h.update(np.ascontiguousarray(l.bias, dtype="<f8").tobytes())
    return h.hexdigest()


def classify(m: DfClassifier, x) -> np.ndarray:
    """Class probabilities for one feature vector or a batch."""
    return softmax(m.logits(x))


def predict(m: DfClassifier, x):
    """Most probable class; ``np.argmax`` already resolves ties to the lowest index."""
    return np.argmax(classify(m, x), axis=-1)


def build_sdae_dnn(encoder: SdaeModel, n_classes: int, hidden=(12, 12), rng=None) -> DfClassifier:
    rng = np.random.default_rng(rng)
    h3, h4 = hidden
    layers = [
        encoder.encoder_layer(),
        DenseLayer.glorot(encoder.n_hidden, h3, "relu", rng),
        DenseLayer.glorot(h3, h4, "relu", rng),
        DenseLayer.glorot(h4, n_classes, "identity", rng),
    ]
    return DfClassifier(layers, "sdae_dnn")


def build_baseline(n_inputs: int, n_classes: int, hidden=(12, 12), wide_layer: int = 0, rng=None) -> DfClassifier:
    rng = np.random.default_rng(rng)
    h3, h4 = hidden
    layers = []
    width = n_inputs
    if wide_layer:
        layers.append(DenseLayer.glorot(n_inputs, wide_layer, "sigmoid", rng))
        width = wide_layer
    layers += [
        DenseLayer.glorot(width, h3, "relu", rng),
        DenseLayer.glorot(h3, h4, "relu", rng),
        DenseLayer.glorot(h4, n_classes, "identity", rng),
    ]
    return DfClassifier(layers, "baseline_dnn")


def classifier_loss_and_grad(m: DfClassifier, x: np.ndarray, labels: np.ndarray):
    """Mean cross-entropy of a batch and gradients for trainable layers, in ``parameters()`` order."""
    logits, cache = network_forward(m.layers, x)
    loss, d_logits = softmax_cross_entropy_grad(logits, labels)
    grads = []
    for g in backward(m.layers, cache, d_logits):
        if g is not None:
            grads += list(g)
    return loss, grads


def _check_data(features, labels, n_classes):
    x = np.atleast_2d(np.asarray(features, dtype=np.float64))
    y = np.asarray(labels, dtype=np.int64)
    if x.shape[0] == 0 or y.size == 0:
        raise ValueError("cannot train on an empty dataset")
    if x.shape[0] != y.size:
        raise ValueError("features and labels differ in length")
    if y.min() < 0 or y.max() >= n_classes:
        raise ValueError(f"labels must lie in 0..{n_classes - 1}")
    return x, y


def fit(m: DfClassifier, features, labels, cfg: TrainConfig) -> DfClassifier:
    """Train ``m`` in place with fresh input corruption each epoch; frozen layers stay untouched."""
    x, y = _check_data(features, labels, m.n_classes)
    if x.shape[1] != m.n_inputs:
        raise ValueError(f"feature width {x.shape[1]} does not match model input {m.n_inputs}")
    rng = np.random.default_rng([cfg.seed, 1])
    params = m.parameters()
    opt = Optimizer(cfg.optimizer, cfg.learning_rate)
    for _ in range(cfg.epochs):
        order = rng.permutation(x.shape[0])
        noisy = corrupt(cfg.corrupter, x, rng)
        total = 0.0
        for start in range(0, x.shape[0], cfg.batch_size):
            idx = order[start:start + cfg.batch_size]
            loss, grads = classifier_loss_and_grad(m, noisy[idx], y[idx])
            opt.step(params, grads)
            total += loss * idx.size
        m.loss_trace.append(total / x.shape[0])
    return m


def train_dnn(encoder: SdaeModel, data, cfg: TrainConfig = TrainConfig()) -> DfClassifier:
    """Stack new ReLU/softmax layers on the frozen encoder and train them on ``data``."""
    m = build_sdae_dnn(encoder, data.q_classes, cfg.hidden, rng=[cfg.seed, 0])
    return fit(m, data.features, data.labels, cfg)


def train_baseline_dnn(data, cfg: TrainConfig = TrainConfig()) -> DfClassifier:
    m = build_baseline(data.n_antennas, data.q_classes, cfg.hidden, cfg.baseline_wide_layer, rng=[cfg.seed, 0])
    return fit(m, data.features, data.labels, cfg)
