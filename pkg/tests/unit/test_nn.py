# tests/unit/test_nn.py

"""
Testes unitários do MLP: formas, perda, gradientes e avaliação
"""

import math

import numpy as np
import pytest

from fedquant.data import Dataset, generate_synthetic
from fedquant.exceptions import DataError, DimensionError, ParameterError
from fedquant.ndcore import STREAM_DATA, STREAM_MODEL_INIT, RngStream
from fedquant.nn import MlpModel, create_mlp, evaluate, evaluate_with_loss, forward, loss_and_grads
from fedquant.nn.mlp import _forward_cache
from fedquant.optim import AdamHyper, OptimizerMode, adam_step, init_state
from fedquant.utils import setup_logging, get_logger

setup_logging(level="DEBUG")
logger = get_logger('test_nn')


def _small_model(dtype=np.float64) -> MlpModel:
    return create_mlp(RngStream(11, STREAM_MODEL_INIT), 8, 4, hidden=(6, 5)).astype(dtype)


def _batch(np_rng, n=10, features=8, classes=4):
    x = np_rng.normal(size=(n, features))
    y = np_rng.integers(0, classes, size=n)
    return x, y


def _relu_masks(model: MlpModel, x: np.ndarray):
    _, activations = _forward_cache(model, x)
    return [a > 0 for a in activations[1:]]


# ==================== Testes: construção ====================

@pytest.mark.unit
class TestMlpModel:
    """Testes para create_mlp e MlpModel"""

    def test_default_architecture(self):
        """64 → (128, 64) → 10: 17226 parâmetros"""
        model = create_mlp(RngStream(0, STREAM_MODEL_INIT), 64, 10)
        assert model.num_params == 17226
        assert model.layer_sizes == [64, 128, 64, 10]
        assert model.param_shapes() == [(128, 64), (128,), (64, 128), (64,), (10, 64), (10,)]
        assert all(p.dtype == np.float32 for p in model.params())
        assert all(not b.any() for b in model.biases)

    def test_he_init_scale(self):
        model = create_mlp(RngStream(0, STREAM_MODEL_INIT), 64, 10)
        assert abs(float(model.weights[0].std()) - math.sqrt(2 / 64)) < 0.02

    def test_deterministic(self):
        a = create_mlp(RngStream(5, STREAM_MODEL_INIT), 8, 3, hidden=(4,))
        b = create_mlp(RngStream(5, STREAM_MODEL_INIT), 8, 3, hidden=(4,))
        assert all(np.array_equal(p, q) for p, q in zip(a.params(), b.params()))

    def test_with_params_and_clone(self):
        model = _small_model(np.float32)
        doubled = model.with_params([2 * p for p in model.params()])
        assert np.array_equal(doubled.weights[0], 2 * model.weights[0])
        copy = model.clone()
        copy.weights[0][0, 0] += 1.0
        assert copy.weights[0][0, 0] != model.weights[0][0, 0]
        with pytest.raises(DimensionError):
            model.with_params(model.params()[:-1])

    def test_invalid_layers(self):
        with pytest.raises(DimensionError):
            MlpModel(weights=[np.zeros((3, 2)), np.zeros((2, 4))], biases=[np.zeros(3), np.zeros(2)])
        with pytest.raises(ParameterError):
            create_mlp(RngStream(0), 8, 4, hidden=(0,))


# ==================== Testes: forward / perda ====================

@pytest.mark.unit
class TestForwardAndLoss:
    """Testes para forward e loss_and_grads"""

    def test_logits_shape(self, np_rng):
        model = _small_model(np.float32)
        x, _ = _batch(np_rng)
        logits = forward(model, x.astype(np.float32))
        assert logits.shape == (10, 4)
        assert logits.dtype == np.float32

    def test_zero_weights_give_zero_logits(self, np_rng):
        model = _small_model()
        zero = model.with_params([np.zeros_like(p) for p in model.params()])
        x, y = _batch(np_rng)
        assert not forward(zero, x).any()
        loss, _ = loss_and_grads(zero, x, y)
        assert loss == pytest.approx(math.log(4), abs=1e-12)

    def test_shift_invariance(self, np_rng):
        """Somar c a todos os logits não muda perda nem gradientes"""
        model = _small_model()
        x, y = _batch(np_rng)
        shifted = model.clone()
        shifted.biases[-1] = shifted.biases[-1] + 7.5
        loss_a, grads_a = loss_and_grads(model, x, y)
        loss_b, grads_b = loss_and_grads(shifted, x, y)
        assert loss_b == pytest.approx(loss_a, abs=1e-12)
        for a, b in zip(grads_a, grads_b):
            np.testing.assert_allclose(a, b, atol=1e-12)

    def test_duplicated_batch(self, np_rng):
        """Perda média não muda ao duplicar o batch"""
        model = _small_model()
        x, y = _batch(np_rng)
        loss_a, grads_a = loss_and_grads(model, x, y)
        loss_b, grads_b = loss_and_grads(model, np.vstack([x, x]), np.concatenate([y, y]))
        assert loss_b == pytest.approx(loss_a, rel=1e-12)
        for a, b in zip(grads_a, grads_b):
            np.testing.assert_allclose(a, b, rtol=1e-10, atol=1e-14)

    def test_gradient_check(self, np_rng):
        """Diferenças finitas centrais em 100 coordenadas (float64)"""
        logger.info("=" * 60)
        logger.info("TEST: finite-difference gradient check")
        logger.info("=" * 60)
        model = _small_model()
        x, y = _batch(np_rng, n=16)
        _, grads = loss_and_grads(model, x, y)
        params = model.params()
        sizes = np.array([p.size for p in params])
        h = 1e-6

        checked = 0
        for _ in range(100):
            t = int(np_rng.choice(len(params), p=sizes / sizes.sum()))
            j = int(np_rng.integers(params[t].size))

            def perturbed(delta):
                tensors = [p.copy() for p in params]
                tensors[t].flat[j] += delta
                return model.with_params(tensors)

            plus, minus = perturbed(h), perturbed(-h)
            masks_plus, masks_minus = _relu_masks(plus, x), _relu_masks(minus, x)
            if any(not np.array_equal(a, b) for a, b in zip(masks_plus, masks_minus)):
                continue
            numeric = (loss_and_grads(plus, x, y)[0] - loss_and_grads(minus, x, y)[0]) / (2 * h)
            analytic = float(grads[t].flat[j])
            assert abs(numeric - analytic) <= 1e-6 + 1e-4 * abs(analytic), (t, j, numeric, analytic)
            checked += 1

        logger.info(f"✅ {checked} coordinates checked")
        assert checked >= 90

    def test_label_out_of_range(self, np_rng):
        model = _small_model()
        x, _ = _batch(np_rng, n=3)
        with pytest.raises(DataError):
            loss_and_grads(model, x, np.array([0, 1, 4]))
        with pytest.raises(DataError):
            loss_and_grads(model, x, np.array([0, -1, 2]))

    def test_shape_errors(self, np_rng):
        model = _small_model()
        x, y = _batch(np_rng, n=3)
        with pytest.raises(DimensionError):
            forward(model, x[:, :5])
        with pytest.raises(DimensionError):
            loss_and_grads(model, x, y[:2])
        with pytest.raises(ParameterError):
            loss_and_grads(model, np.zeros((0, 8)), np.zeros(0, np.int64))


# ==================== Testes: avaliação ====================

@pytest.mark.unit
class TestEvaluate:
    """Testes para evaluate / evaluate_with_loss"""

    def test_ties_go_to_lowest_class(self):
        model = _small_model(np.float32)
        zero = model.with_params([np.zeros_like(p) for p in model.params()])
        data = Dataset(x=np.ones((8, 8)), y=np.zeros(8, np.int64), num_classes=4)
        assert evaluate(zero, data) == 1.0
        accuracy, loss = evaluate_with_loss(zero, data.x, np.full(8, 2))
        assert accuracy == 0.0
        assert loss == pytest.approx(math.log(4), abs=1e-6)

    def test_evaluate_matches_argmax(self, np_rng):
        model = _small_model(np.float32)
        x, y = _batch(np_rng, n=50)
        x = x.astype(np.float32)
        expected = float(np.mean(np.argmax(forward(model, x), axis=1) == y))
        assert evaluate(model, x, y) == pytest.approx(expected)

    def test_empty_set(self):
        with pytest.raises(ParameterError):
            evaluate_with_loss(_small_model(), np.zeros((0, 8)), np.zeros(0, np.int64))


# ==================== Testes: treino ====================

@pytest.mark.unit
class TestTraining:
    """Comportamento estatístico e convergência do MLP"""

    def test_random_labels_give_chance_accuracy(self, np_rng):
        """Rótulos aleatórios: acurácia a menos de 3σ de 1/C"""
        model = create_mlp(RngStream(2, STREAM_MODEL_INIT), 8, 4, hidden=(16,))
        x = np_rng.normal(size=(10_000, 8)).astype(np.float32)
        y = np_rng.integers(0, 4, size=10_000)
        sigma = math.sqrt(0.25 * 0.75 / 10_000)
        assert abs(evaluate(model, x, y) - 0.25) < 3 * sigma

    def test_full_batch_adam_separates_blobs(self):
        """Adam FP32 em batch completo: 100% de acurácia de treino em até 200 passos"""
        data = generate_synthetic(RngStream(4, STREAM_DATA), 100, 16, 4, 8.0)
        model = create_mlp(RngStream(4, STREAM_MODEL_INIT), 16, 4, hidden=(32,))
        state = init_state(model.param_shapes(), OptimizerMode.FP32, AdamHyper(lr=0.01))
        params = model.params()
        for step in range(1, 201):
            _, grads = loss_and_grads(model.with_params(params), data.x, data.y)
            params, state = adam_step(state, params, grads, OptimizerMode.FP32)
            if evaluate(model.with_params(params), data) == 1.0:
                break
        logger.info(f"✅ separated after {step} steps")
        assert evaluate(model.with_params(params), data) == 1.0
