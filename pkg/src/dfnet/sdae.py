"""Sparse denoising autoencoder with tied weights and a KL sparsity penalty."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .nn_core import DenseLayer, Optimizer, sigmoid

RHO_CLAMP = 1e-8
CORRUPTER_KINDS = ("additive_gaussian", "masking", "additive_power")


@dataclass(frozen=True)
class SparsityConfig:
    rho: float = 0.05
    beta: float = 0.1

    def __post_init__(self):
        if not 0.0 < self.rho < 1.0:
            raise ValueError(f"rho must lie in (0, 1), got {self.rho}")
        if not self.beta >= 0.0:
            raise ValueError(f"beta must be >= 0, got {self.beta}")


@dataclass(frozen=True)
class Corrupter:
    """Input noise model.

    ``additive_gaussian`` adds N(0, sigma_c**2) to every feature; ``masking`` zeroes
    each feature with probability ``mask_prob``; ``additive_power`` adds an
    exponential power with mean ``sigma_c`` (in units of the cycle total) to every
    antenna and renormalises, mimicking a raised noise floor plus interference.
    """

    kind: str = "additive_gaussian"
    sigma_c: float = 0.05
    mask_prob: float = 0.0

    def __post_init__(self):
        if self.kind not in CORRUPTER_KINDS:
            raise ValueError(f"unknown corrupter kind {self.kind!r}")
        if not self.sigma_c >= 0.0:
            raise ValueError(f"sigma_c must be >= 0, got {self.sigma_c}")
        if not 0.0 <= self.mask_prob < 1.0:
            raise ValueError(f"mask_prob must lie in [0, 1), got {self.mask_prob}")


def corrupt(c: Corrupter, x, rng: np.random.Generator) -> np.ndarray:
    """Apply the corrupter to one vector or a batch; each call consumes fresh draws from ``rng``."""
    x = np.asarray(x, dtype=np.float64)
    if c.kind == "additive_gaussian":
        if c.sigma_c == 0.0:
            return x.copy()
        return x + c.sigma_c * rng.standard_normal(x.shape)
    if c.kind == "additive_power":
        if c.sigma_c == 0.0:
            return x.copy()
        noisy = x + c.sigma_c * rng.exponential(1.0, x.shape)
        return noisy / noisy.sum(axis=-1, keepdims=True)
    if c.mask_prob == 0.0:
        return x.copy()
    return np.where(rng.random(x.shape) < c.mask_prob, 0.0, x)


@dataclass
class SdaeModel:
    """Encoder ``W`` (M x N) with biases; the decoder reuses ``W.T``, never a copy."""

    encoder_weights: np.ndarray
    encoder_bias: np.ndarray
    decoder_bias: np.ndarray
    loss_trace: list = field(default_factory=list)

    def __post_init__(self):
        self.encoder_weights = np.asarray(self.encoder_weights, dtype=np.float64)
        self.encoder_bias = np.asarray(self.encoder_bias, dtype=np.float64)
        self.decoder_bias = np.asarray(self.decoder_bias, dtype=np.float64)
        m, n = self.encoder_weights.shape
        if self.encoder_bias.shape != (m,) or self.decoder_bias.shape != (n,):
            raise ValueError("bias shapes do not match encoder weights")

    @property
    def n_inputs(self) -> int:
        return self.encoder_weights.shape[1]

    @property
    def n_hidden(self) -> int:
        return self.encoder_weights.shape[0]

    @classmethod
    def initialize(cls, n_inputs: int, n_hidden: int, rng: np.random.Generator) -> "SdaeModel":
        limit = np.sqrt(6.0 / (n_inputs + n_hidden))
        return cls(rng.uniform(-limit, limit, size=(n_hidden, n_inputs)),
                   np.zeros(n_hidden), np.zeros(n_inputs))

    def parameters(self) -> list[np.ndarray]:
        return [self.encoder_weights, self.encoder_bias, self.decoder_bias]

    def encoder_layer(self) -> DenseLayer:
        """Frozen copy of the encoder, ready to stack under a classifier."""
        return DenseLayer(self.encoder_weights.copy(), self.encoder_bias.copy(), "sigmoid", frozen=True)


def encode(m: SdaeModel, x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] != m.n_inputs:
        raise ValueError(f"input length {x.shape[-1]} does not match encoder input {m.n_inputs}")
    return sigmoid(x @ m.encoder_weights.T + m.encoder_bias)


def decode(m: SdaeModel, h) -> np.ndarray:
    h = np.asarray(h, dtype=np.float64)
    if h.shape[-1] != m.n_hidden:
        raise ValueError(f"hidden length {h.shape[-1]} does not match encoder width {m.n_hidden}")
    return sigmoid(h @ m.encoder_weights + m.decoder_bias)


def kl_divergence(rho: float, rho_m):
    """Bernoulli KL ``KL(rho || rho_m)`` in nats; ``rho_m`` is clamped away from 0 and 1."""
    if not 0.0 < rho < 1.0:
        raise ValueError(f"rho must lie in (0, 1), got {rho}")
    r = np.clip(rho_m, RHO_CLAMP, 1.0 - RHO_CLAMP)
    return rho * np.log(rho / r) + (1.0 - rho) * np.log((1.0 - rho) / (1.0 - r))


def _check_batch(m: SdaeModel, clean, corrupted):
    clean = np.atleast_2d(np.asarray(clean, dtype=np.float64))
    corrupted = np.atleast_2d(np.asarray(corrupted, dtype=np.float64))
    if clean.shape[0] == 0:
        raise ValueError("empty batch")
    if clean.shape != corrupted.shape:
        raise ValueError(f"clean {clean.shape} and corrupted {corrupted.shape} batches differ")
    if clean.shape[1] != m.n_inputs:
        raise ValueError(f"input width {clean.shape[1]} does not match encoder input {m.n_inputs}")
    return clean, corrupted


def sdae_loss(m: SdaeModel, s: SparsityConfig, clean, corrupted) -> float:
    """Summed squared reconstruction error against ``clean`` plus ``beta * sum_m KL(rho || rho_m)``.

    ``rho_m`` is the mean activation of hidden unit m over this batch, computed from
    the same (corrupted) forward pass that produces the reconstruction.
    """
    return sdae_loss_and_grad(m, s, clean, corrupted, need_grad=False)[0]


def sdae_loss_and_grad(m: SdaeModel, s: SparsityConfig, clean, corrupted, need_grad: bool = True):
    clean, corrupted = _check_batch(m, clean, corrupted)
    w = m.encoder_weights
    h = encode(m, corrupted)
    x_hat = decode(m, h)
    resid = x_hat - clean
    rho_hat = h.mean(axis=0)
    loss = float(np.sum(resid**2) + s.beta * np.sum(kl_divergence(s.rho, rho_hat)))
    if not need_grad:
        return loss, None

    d_out = 2.0 * resid * x_hat * (1.0 - x_hat)           # (B, N)
    grad_w = h.T @ d_out                                  # decoder path

    d_h = d_out @ w.T                                     # (B, M)
    inside = (rho_hat > RHO_CLAMP) & (rho_hat < 1.0 - RHO_CLAMP)
    d_rho = np.where(inside, -s.rho / rho_hat + (1.0 - s.rho) / (1.0 - rho_hat), 0.0)
    d_h = d_h + s.beta * d_rho / clean.shape[0]
    d_pre = d_h * h * (1.0 - h)
    grad_w = grad_w + d_pre.T @ corrupted                 # encoder path
    return loss, [grad_w, d_pre.sum(axis=0), d_out.sum(axis=0)]


@dataclass(frozen=True)
class SdaeTrainConfig:
    n_hidden: int = 200
    epochs: int = 200
    batch_size: int = 32
    optimizer: str = "adam"
    learning_rate: float = 1e-3
    seed: int = 0

    def __post_init__(self):
        for name in ("n_hidden", "epochs", "batch_size"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1, got {getattr(self, name)}")


def train_sdae(data, s: SparsityConfig, c: Corrupter, cfg: SdaeTrainConfig = SdaeTrainConfig()) -> SdaeModel:
    """Mini-batch training; a new corruption of every sample is drawn each epoch.

    The returned model carries ``loss_trace``: mean per-sample loss for each epoch.
    """
    x = np.atleast_2d(np.asarray(data, dtype=np.float64))
    if x.shape[0] == 0:
        raise ValueError("cannot train on an empty dataset")
    rng = np.random.default_rng(cfg.seed)
    model = SdaeModel.initialize(x.shape[1], cfg.n_hidden, rng)
    params = model.parameters()
    opt = Optimizer(cfg.optimizer, cfg.learning_rate)
    for _ in range(cfg.epochs):
        order = rng.permutation(x.shape[0])
        noisy = corrupt(c, x, rng)
        total = 0.0
        for start in range(0, x.shape[0], cfg.batch_size):
            idx = order[start:start + cfg.batch_size]
            loss, grads = sdae_loss_and_grad(model, s, x[idx], noisy[idx])
            opt.step(params, grads)
            total += loss
        model.loss_trace.append(total / x.shape[0])
    return model
