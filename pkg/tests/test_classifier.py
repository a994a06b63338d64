import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dfnet.classifier import (
    DfClassifier,
    TrainConfig,
    build_baseline,
    build_sdae_dnn,
    fit,
    classify,
    parameter_hash,
    predict,
    train_baseline_dnn,
    train_dnn,
)
from dfnet.dataset import GenConfig, LabeledDataset, generate
from dfnet.nn_core import DenseLayer
from dfnet.preprocess import normalize_cycle
from dfnet.sdae import Corrupter, SdaeModel, SdaeTrainConfig, SparsityConfig, train_sdae


@pytest.fixture(scope="module")
def small_data():
    return generate(GenConfig(per_class=40, k_per_antenna=256, seed=3))


@pytest.fixture(scope="module")
def small_sdae(small_data):
    return train_sdae(small_data.features, SparsityConfig(), Corrupter(),
                      SdaeTrainConfig(n_hidden=30, epochs=20, seed=1))


FAST = TrainConfig(epochs=40, seed=2)


def _random_model(seed=0):
    rng = np.random.default_rng(seed)
    enc = SdaeModel(rng.normal(size=(200, 4)), rng.normal(size=200), np.zeros(4))
    return build_sdae_dnn(enc, 8, rng=rng)


def test_default_dims():
    m = _random_model()
    assert m.dims == (4, 200, 12, 12, 8)
    assert [l.activation for l in m.layers] == ["sigmoid", "relu", "relu", "identity"]
    assert m.layers[0].frozen and not any(l.frozen for l in m.layers[1:])


def test_baseline_parameter_count():
    full = _random_model()
    base = build_baseline(4, 8, rng=0)
    assert base.dims == (4, 12, 12, 8)
    # replacing 4->200->12 with 4->12 removes the 4x200 block, its bias and the 200x12 input
    diff = full.n_params - base.n_params
    assert diff == (4 * 200 + 200) + (200 * 12) - (4 * 12)
    wide = build_baseline(4, 8, wide_layer=200, rng=0)
    assert wide.dims == full.dims and not wide.layers[0].frozen


@given(st.lists(st.floats(1e-3, 1e3), min_size=4, max_size=4), st.floats(1e-3, 1e3))
@settings(max_examples=50)
def test_probabilities_and_power_invariance(powers, c):
    m = _random_model(1)
    p = np.array(powers)
    probs = classify(m, normalize_cycle(p))
    assert np.all(probs >= 0) and abs(probs.sum() - 1) < 1e-12
    assert predict(m, normalize_cycle(c * p)) == predict(m, normalize_cycle(p))


def test_predict_tie_break_and_one_hot():
    flat = DfClassifier([DenseLayer(np.zeros((5, 4)), np.zeros(5), "identity")], "baseline_dnn")
    assert predict(flat, [0.25] * 4) == 0
    bias = np.full(5, -50.0)
    bias[3] = 50.0
    hot = DfClassifier([DenseLayer(np.zeros((5, 4)), bias, "identity")], "baseline_dnn")
    assert predict(hot, [0.1, 0.2, 0.3, 0.4]) == 3


def test_predict_matches_manual_argmax_and_scaled_logits():
    m = _random_model(2)
    x = np.random.default_rng(0).dirichlet(np.ones(4), size=50)
    assert np.array_equal(predict(m, x), np.argmax(classify(m, x), axis=1))
    scaled = DfClassifier([l.copy() for l in m.layers], m.kind)
    scaled.layers[-1].weights *= 3.0
    scaled.layers[-1].bias *= 3.0
    assert np.array_equal(predict(scaled, x), predict(m, x))


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        classify(_random_model(), [0.5, 0.5])


def test_train_dnn_freezes_encoder(small_data, small_sdae):
    enc_hash = parameter_hash([small_sdae.encoder_layer()])
    m = train_dnn(small_sdae, small_data, FAST)
    assert parameter_hash([m.encoder]) == enc_hash
    assert np.array_equal(m.encoder.weights, small_sdae.encoder_weights)
    assert m.encoder.weights is not small_sdae.encoder_weights


def test_train_dnn_beats_uniform_and_is_deterministic(small_data, small_sdae):
    a = train_dnn(small_sdae, small_data, FAST)
    b = train_dnn(small_sdae, small_data, FAST)
    assert a.loss_trace[-1] < np.log(8)
    assert parameter_hash(a.layers) == parameter_hash(b.layers)


def test_baseline_trains(small_data):
    m = train_baseline_dnn(small_data, FAST)
    assert m.kind == "baseline_dnn" and m.dims == (4, 12, 12, 8)
    assert m.loss_trace[-1] < np.log(8)


def test_training_errors(small_sdae):
    empty = LabeledDataset(np.zeros((0, 4)), np.zeros(0, dtype=int))
    with pytest.raises(ValueError):
        train_dnn(small_sdae, empty, FAST)
    with pytest.raises(ValueError, match="labels"):
        fit(build_baseline(4, 2, rng=0), np.ones((3, 4)) / 4, [0, 1, 2], FAST)
    with pytest.raises(ValueError, match="width"):
        fit(build_baseline(3, 8, rng=0), np.ones((3, 4)) / 4, [0, 1, 2], FAST)
