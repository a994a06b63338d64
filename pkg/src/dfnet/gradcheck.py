"""Analytic-vs-finite-difference gradient checks on small seeded models."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .classifier import DfClassifier, build_sdae_dnn, classifier_loss_and_grad
from .nn_core import DenseLayer, finite_difference_gradient, max_relative_error
from .sdae import Corrupter, SdaeModel, SparsityConfig, corrupt, sdae_loss_and_grad

TOLERANCE = 1e-5
FD_STEP = 1e-6


@dataclass
class GradcheckResult:
    name: str
    max_rel_error: float

    @property
    def passed(self) -> bool:
        return self.max_rel_error < TOLERANCE


def _toy_inputs(rng, batch, n):
    return rng.dirichlet(np.ones(n), size=batch)


def check_sdae(seed: int = 0, n_in: int = 4, n_hidden: int = 6, batch: int = 7,
               inject_error: bool = False) -> GradcheckResult:
    rng = np.random.default_rng(seed)
    model = SdaeModel(rng.normal(0, 0.8, (n_hidden, n_in)), rng.normal(0, 0.3, n_hidden),
                      rng.normal(0, 0.3, n_in))
    sparsity = SparsityConfig(rho=0.05, beta=0.7)
    clean = _toy_inputs(rng, batch, n_in)
    noisy = corrupt(Corrupter(sigma_c=0.05), clean, rng)
    _, analytic = sdae_loss_and_grad(model, sparsity, clean, noisy)
    if inject_error:
        analytic[0] = analytic[0] * 1.001
    numeric = finite_difference_gradient(
        lambda: sdae_loss_and_grad(model, sparsity, clean, noisy, need_grad=False)[0],
        model.parameters(), FD_STEP)
    return GradcheckResult("sdae 4->6 (reconstruction + KL)", max_relative_error(analytic, numeric))


def _check_classifier(model: DfClassifier, rng, batch, name, inject_error):
    x = _toy_inputs(rng, batch, model.n_inputs)
    y = rng.integers(0, model.n_classes, batch)
    _, analytic = classifier_loss_and_grad(model, x, y)
    if inject_error:
        analytic[-1] = analytic[-1] * 1.001
    numeric = finite_difference_gradient(
        lambda: classifier_loss_and_grad(model, x, y)[0], model.parameters(), FD_STEP)
    return GradcheckResult(name, max_relative_error(analytic, numeric))


def check_dnn(seed: int = 0, batch: int = 9, inject_error: bool = False) -> GradcheckResult:
    """Fully trainable 4->5->5->3 net: sigmoid, relu, identity+softmax."""
    rng = np.random.default_rng(seed)
    layers = [
        DenseLayer(rng.normal(0, 0.8, (5, 4)), rng.normal(0, 0.3, 5), "sigmoid"),
        DenseLayer(rng.normal(0, 0.8, (5, 5)), rng.normal(0.2, 0.3, 5), "relu"),
        DenseLayer(rng.normal(0, 0.8, (3, 5)), rng.normal(0, 0.3, 3), "identity"),
    ]
    return _check_classifier(DfClassifier(layers, "baseline_dnn"), rng, batch,
                             "dnn 4->5->5->3 (cross-entropy)", inject_error)


def check_frozen_stack(seed: int = 0, batch: int = 9, inject_error: bool = False) -> GradcheckResult:
    """Frozen 4->6 encoder under trainable 5/5/3 layers; only the upper layers are checked."""
    rng = np.random.default_rng(seed)
    enc = SdaeModel(rng.normal(0, 0.8, (6, 4)), rng.normal(0, 0.3, 6), np.zeros(4))
    model = build_sdae_dnn(enc, 3, hidden=(5, 5), rng=rng)
    # zero biases put dead-ReLU samples exactly on the kink
    for layer in model.trainable():
        layer.bias[:] = rng.normal(0.2, 0.3, layer.n_out)
    return _check_classifier(model, rng, batch, "frozen encoder + dnn 6->5->5->3", inject_error)


def run_all(seed: int = 0, inject_error: bool = False) -> list[GradcheckResult]:
    return [check_sdae(seed, inject_error=inject_error),
            check_dnn(seed, inject_error=inject_error),
            check_frozen_stack(seed, inject_error=inject_error)]
