"""Dense feed-forward building blocks with hand-written backpropagation.

Batches are row-major: an input batch has shape ``(B, in)`` and a layer's weight
matrix has shape ``(out, in)``, so ``z = x @ W.T + b``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

CE_EPS = 1e-12


def sigmoid(z):
    # split by sign so exp never overflows
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def relu(z):
    return np.maximum(z, 0.0)


def identity(z):
    return np.asarray(z, dtype=np.float64)


ACTIVATIONS = {"sigmoid": sigmoid, "relu": relu, "identity": identity}


def activation_grad(name: str, z: np.ndarray, a: np.ndarray) -> np.ndarray:
    """Derivative of the activation at pre-activation ``z`` (output ``a``)."""
    if name == "sigmoid":
        return a * (1.0 - a)
    if name == "relu":
        return (z > 0).astype(np.float64)
    if name == "identity":
        return np.ones_like(z)
    raise ValueError(f"unknown activation {name!r}")


@dataclass
class DenseLayer:
    weights: np.ndarray
    bias: np.ndarray
    activation: str = "sigmoid"
    frozen: bool = False

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=np.float64)
        self.bias = np.asarray(self.bias, dtype=np.float64)
        if self.weights.ndim != 2:
            raise ValueError(f"weights must be 2-D, got shape {self.weights.shape}")
        if self.bias.shape != (self.weights.shape[0],):
            raise ValueError(
                f"bias length {self.bias.shape} does not match weights rows {self.weights.shape[0]}"
            )
        if self.activation not in ACTIVATIONS:
            raise ValueError(f"unknown activation {self.activation!r}")
        if not (np.all(np.isfinite(self.weights)) and np.all(np.isfinite(self.bias))):
            raise ValueError("layer parameters must be finite")

    @property
    def n_in(self) -> int:
        return self.weights.shape[1]

    @property
    def n_out(self) -> int:
        return self.weights.shape[0]

    @property
    def n_params(self) -> int:
        return self.weights.size + self.bias.size

    def copy(self) -> "DenseLayer":
        return DenseLayer(self.weights.copy(), self.bias.copy(), self.activation, self.frozen)

    @classmethod
    def glorot(cls, n_in: int, n_out: int, activation: str, rng: np.random.Generator) -> "DenseLayer":
        """Uniform ``+-sqrt(6 / (fan_in + fan_out))`` weights, zero bias."""
        limit = np.sqrt(6.0 / (n_in + n_out))
        return cls(rng.uniform(-limit, limit, size=(n_out, n_in)), np.zeros(n_out), activation)


def dense_forward(layer: DenseLayer, x) -> np.ndarray:
    """``activation(W x + b)``; ``x`` may be one vector or a batch of rows."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] != layer.n_in:
        raise ValueError(f"input length {x.shape[-1]} does not match layer input {layer.n_in}")
    return ACTIVATIONS[layer.activation](x @ layer.weights.T + layer.bias)


def softmax(logits) -> np.ndarray:
    z = np.asarray(logits, dtype=np.float64)
    if z.size == 0:
        raise ValueError("softmax of an empty vector")
    e = np.exp(z - z.max(axis=-1, keepdims=True))
    return e / e.sum(axis=-1, keepdims=True)


def cross_entropy(probs, label) -> float:
    """``-log(probs[label] + eps)`` for one sample."""
    probs = np.asarray(probs, dtype=np.float64)
    if not 0 <= label < probs.shape[-1]:
        raise IndexError(f"label {label} out of range for {probs.shape[-1]} classes")
    return float(-np.log(probs[label] + CE_EPS))


def mean_cross_entropy(probs: np.ndarray, labels: np.ndarray) -> float:
    labels = np.asarray(labels)
    if labels.size and (labels.min() < 0 or labels.max() >= probs.shape[1]):
        raise IndexError(f"labels must lie in 0..{probs.shape[1] - 1}")
    picked = probs[np.arange(labels.size), labels]
    return float(np.mean(-np.log(picked + CE_EPS)))


@dataclass
class ForwardCache:
    inputs: list = field(default_factory=list)
    pre: list = field(default_factory=list)
    post: list = field(default_factory=list)


def network_forward(layers: list[DenseLayer], x: np.ndarray) -> tuple[np.ndarray, ForwardCache]:
    cache = ForwardCache()
    a = np.atleast_2d(np.asarray(x, dtype=np.float64))
    for layer in layers:
        if a.shape[1] != layer.n_in:
            raise ValueError(f"input width {a.shape[1]} does not match layer input {layer.n_in}")
        z = a @ layer.weights.T + layer.bias
        cache.inputs.append(a)
        cache.pre.append(z)
        a = ACTIVATIONS[layer.activation](z)
        cache.post.append(a)
    return a, cache


def backward(layers: list[DenseLayer], cache: ForwardCache, grad_out: np.ndarray):
    """Backpropagate ``dL/d(output)`` through ``layers``.

    Returns a list aligned with ``layers`` holding ``(dW, db)`` for trainable layers
    and ``None`` for frozen ones. Propagation stops at the first frozen layer from
    the input side, since nothing below it needs a gradient.
    """
    if len(cache.pre) != len(layers):
        raise ValueError("forward cache does not match the network")
    grads: list = [None] * len(layers)
    first_trainable = next((i for i, l in enumerate(layers) if not l.frozen), len(layers))
    delta = np.asarray(grad_out, dtype=np.float64)
    for i in range(len(layers) - 1, first_trainable - 1, -1):
        layer = layers[i]
        if delta.shape != cache.post[i].shape:
            raise ValueError(f"gradient shape {delta.shape} does not match layer output {cache.post[i].shape}")
        dz = delta * activation_grad(layer.activation, cache.pre[i], cache.post[i])
        if not layer.frozen:
            grads[i] = (dz.T @ cache.inputs[i], dz.sum(axis=0))
        if i > first_trainable:
            delta = dz @ layer.weights
    return grads


def softmax_cross_entropy_grad(logits: np.ndarray, labels: np.ndarray) -> tuple[float, np.ndarray]:
    """Mean cross-entropy over the batch and its gradient w.r.t. the logits."""
    probs = softmax(logits)
    loss = mean_cross_entropy(probs, labels)
    grad = probs.copy()
    grad[np.arange(labels.size), labels] -= 1.0
    return loss, grad / labels.size


def finite_difference_gradient(loss_fn, params: list[np.ndarray], h: float = 1e-6) -> list[np.ndarray]:
    """Central differences of ``loss_fn()`` w.r.t. every entry of ``params``, perturbed in place."""
    grads = []
    for p in params:
        g = np.zeros_like(p)
        flat, gflat = p.reshape(-1), g.reshape(-1)
        for j in range(flat.size):
            orig = flat[j]
            flat[j] = orig + h
            up = loss_fn()
            flat[j] = orig - h
            down = loss_fn()
            flat[j] = orig
            gflat[j] = (up - down) / (2.0 * h)
        grads.append(g)
    return grads


def max_relative_error(analytic: list[np.ndarray], numeric: list[np.ndarray], floor: float = 1e-8) -> float:
    """Largest ``|a - n| / max(|a| + |n|, floor)`` over all entries."""
    worst = 0.0
    for a, n in zip(analytic, numeric):
        denom = np.maximum(np.abs(a) + np.abs(n), floor)
        worst = max(worst, float(np.max(np.abs(a - n) / denom)))
    return worst


class Optimizer:
    """SGD or Adam over a fixed list of parameter arrays, updated in place."""

    def __init__(self, kind: str = "adam", learning_rate: float = 1e-3,
                 beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8):
        if kind not in ("sgd", "adam"):
            raise ValueError(f"unknown optimizer {kind!r}")
        if not learning_rate > 0:
            raise ValueError(f"learning_rate must be > 0, got {learning_rate}")
        self.kind = kind
        self.learning_rate = learning_rate
        self.beta1, self.beta2, self.eps = beta1, beta2, eps
        self.step_count = 0
        self._m: list[np.ndarray] | None = None
        self._v: list[np.ndarray] | None = None

    def step(self, params: list[np.ndarray], grads: list[np.ndarray]) -> None:
        if len(params) != len(grads):
            raise ValueError("params and grads differ in length")
        for p, g in zip(params, grads):
            if p.shape != g.shape:
                raise ValueError(f"gradient shape {g.shape} does not match parameter {p.shape}")
        self.step_count += 1
        lr = self.learning_rate
        if self.kind == "sgd":
            for p, g in zip(params, grads):
                p -= lr * g
            return
        if self._m is None:
            self._m = [np.zeros_like(p) for p in params]
            self._v = [np.zeros_like(p) for p in params]
        elif any(m.shape != p.shape for m, p in zip(self._m, params)):
            raise ValueError("parameter shapes changed between optimizer steps")
        t = self.step_count
        c1 = 1.0 - self.beta1**t
        c2 = 1.0 - self.beta2**t
        for p, g, m, v in zip(params, grads, self._m, self._v):
            m *= self.beta1
            m += (1.0 - self.beta1) * g
            v *= self.beta2
            v += (1.0 - self.beta2) * g * g
            p -= lr * (m / c1) / (np.sqrt(v / c2) + self.eps)
