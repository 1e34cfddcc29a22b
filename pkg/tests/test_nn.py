import math

import numpy as np
import pytest

from curricula.core import Rng, dense_dataset, token_dataset
from curricula.errors import InvalidSpec, ShapeMismatch
from curricula.nn import (
    ModelSpec,
    TrainConfig,
    evaluate,
    gradient_check,
    init_model,
    per_sample_loss,
    train,
)


def blob_dataset(per_class=20, classes=2, dim=4, sigma=0.3, sep=2.0, seed=0):
    gen = np.random.default_rng(seed)
    feats, labels = [], []
    for c in range(classes):
        center = np.zeros(dim)
        center[c % dim] = sep
        for _ in range(per_class):
            feats.append(center + sigma * gen.normal(size=dim))
            labels.append(c)
    return dense_dataset(feats, labels, classes)


def reference_loss(params, x, y):
    """Straight-line recomputation: affine, rectifier, softmax, CE, in pure
    python. Independent of the vectorized forward pass."""
    h = list(x)
    n_layers = len(params.weights)
    for li in range(n_layers):
        w, b = params.weights[li], params.biases[li]
        z = [sum(h[i] * w[i][j] for i in range(len(h))) + b[j] for j in range(len(b))]
        h = z if li == n_layers - 1 else [max(v, 0.0) for v in z]
    m = max(h)
    exps = [math.exp(v - m) for v in h]
    total = sum(exps)
    return -math.log(max(exps[y] / total, 1e-12))


class TestInitModel:
    def test_deterministic(self):
        spec = ModelSpec((4, 8, 3))
        p1 = init_model(spec, Rng(42, "init"))
        p2 = init_model(spec, Rng(42, "init"))
        for a, b in zip(p1.arrays(), p2.arrays()):
            assert np.array_equal(a, b)

    def test_seeds_differ(self):
        spec = ModelSpec((4, 8, 3))
        p1 = init_model(spec, Rng(1, "init"))
        p2 = init_model(spec, Rng(2, "init"))
        assert any(not np.array_equal(a, b) for a, b in zip(p1.arrays(), p2.arrays()))

    def test_single_layer_spec_rejected(self):
        with pytest.raises(InvalidSpec):
            ModelSpec((4,))

    def test_finite(self):
        p = init_model(ModelSpec((4, 8, 3)), Rng(0, "init"))
        assert all(np.all(np.isfinite(a)) for a in p.arrays())


class TestPerSampleLoss:
    def test_uniform_predictor_gives_log_c(self):
        # zero weights and biases: logits all zero, softmax uniform
        spec = ModelSpec((3, 4))
        params = init_model(spec, Rng(0, "init"))
        for a in params.arrays():
            a[...] = 0.0
        d = dense_dataset([[1.0, 2.0, 3.0], [0.0, 1.0, 0.0]], [0, 3], 4)
        losses = per_sample_loss(params, d)
        assert np.allclose(losses, math.log(4), atol=1e-12)

    def test_confident_correct_prediction_near_zero(self):
        spec = ModelSpec((2, 2))
        params = init_model(spec, Rng(0, "init"))
        params.weights[0][...] = [[50.0, -50.0], [-50.0, 50.0]]
        params.biases[0][...] = 0.0
        d = dense_dataset([[1.0, 0.0], [0.0, 1.0]], [0, 1], 2)
        assert np.all(per_sample_loss(params, d) <= 1e-9)

    def test_matches_reference_recomputation(self):
        spec = ModelSpec((3, 5, 4))
        params = init_model(spec, Rng(7, "init"))
        d = dense_dataset(
            [[0.1, -0.2, 0.3], [1.0, 0.5, -1.0], [0.0, 0.0, 2.0]], [0, 2, 3], 4
        )
        losses = per_sample_loss(params, d)
        for i in range(3):
            expected = reference_loss(params, d.features[i], int(d.labels[i]))
            assert losses[i] == pytest.approx(expected, abs=1e-10)

    def test_shape_mismatch(self):
        params = init_model(ModelSpec((3, 2)), Rng(0, "init"))
        d = dense_dataset([[1.0, 2.0]], [0], 2)
        with pytest.raises(ShapeMismatch):
            per_sample_loss(params, d)

    def test_losses_nonnegative_finite(self):
        params = init_model(ModelSpec((4, 6, 3)), Rng(3, "init"))
        d = blob_dataset(10, 3)
        losses = per_sample_loss(params, d)
        assert np.all(losses >= 0) and np.all(np.isfinite(losses))


class TestEvaluate:
    def test_counting(self):
        # logits via identity-ish weights on 2 features
        spec = ModelSpec((2, 2))
        params = init_model(spec, Rng(0, "init"))
        params.weights[0][...] = np.eye(2)
        params.biases[0][...] = 0.0
        d = dense_dataset([[1, 0], [1, 0], [0, 1], [0, 1]], [0, 0, 1, 0], 2)
        assert evaluate(params, d) == 0.75

    def test_constant_predictor_on_balanced_set(self):
        spec = ModelSpec((2, 2))
        params = init_model(spec, Rng(0, "init"))
        for a in params.arrays():
            a[...] = 0.0
        params.biases[0][...] = [1.0, 0.0]
        d = dense_dataset([[0.5, 0.5]] * 4, [0, 0, 1, 1], 2)
        assert evaluate(params, d) == 0.5

    def test_argmax_tie_breaks_low(self):
        spec = ModelSpec((1, 3))
        params = init_model(spec, Rng(0, "init"))
        for a in params.arrays():
            a[...] = 0.0  # all classes tied; argmax picks class 0
        d = dense_dataset([[1.0]], [0], 3)
        assert evaluate(params, d) == 1.0


class TestTrain:
    def test_fits_separable_blobs(self):
        d = blob_dataset(20, 2, sep=3.0, sigma=0.2)
        spec = ModelSpec((4, 8, 2))
        cfg = TrainConfig(epochs=50, batch_size=8, learning_rate=1e-2, seed=1)
        params = train(init_model(spec, Rng(1, "init")), d, cfg)
        assert evaluate(params, d) == 1.0

    def test_deterministic(self):
        d = blob_dataset(10, 2)
        spec = ModelSpec((4, 6, 2))
        cfg = TrainConfig(epochs=5, batch_size=4, seed=11)
        p1 = train(init_model(spec, Rng(3, "init")), d, cfg)
        p2 = train(init_model(spec, Rng(3, "init")), d, cfg)
        for a, b in zip(p1.arrays(), p2.arrays()):
            assert np.array_equal(a, b)

    def test_zero_epochs_rejected(self):
        with pytest.raises(ValueError):
            TrainConfig(epochs=0)

    def test_loss_decreases_on_separable_data(self):
        d = blob_dataset(20, 2, sep=3.0)
        spec = ModelSpec((4, 8, 2))
        params0 = init_model(spec, Rng(5, "init"))
        cfg = TrainConfig(epochs=50, batch_size=8, seed=5)
        trained = train(params0, d, cfg)
        assert per_sample_loss(trained, d).mean() < per_sample_loss(params0, d).mean()

    def test_does_not_mutate_input_params(self):
        d = blob_dataset(5, 2)
        spec = ModelSpec((4, 2))
        params = init_model(spec, Rng(0, "init"))
        before = [a.copy() for a in params.arrays()]
        train(params, d, TrainConfig(epochs=2, seed=0))
        for a, b in zip(params.arrays(), before):
            assert np.array_equal(a, b)


class TestGradientCheck:
    def test_hidden_layer_net(self):
        d = blob_dataset(4, 3, dim=4, seed=2).subset(range(8))
        assert gradient_check(ModelSpec((4, 6, 3)), d, Rng(0, "gc")) < 1e-4

    def test_softmax_regression(self):
        d = blob_dataset(2, 2, dim=2, seed=3)
        assert gradient_check(ModelSpec((2, 3)), d, Rng(1, "gc")) < 1e-6

    def test_token_model(self):
        d = token_dataset([[0, 1, 2], [2, 3], [1], [0, 3, 3]], [0, 1, 0, 1], 2, 4)
        assert gradient_check(ModelSpec((5, 4, 2), vocab_size=4), d, Rng(2, "gc")) < 1e-4

    def test_zero_weights_inactive_rectifier(self):
        # all-zero parameters: hidden rectifier is at its kink but analytic
        # and numeric gradients still agree for the output layer
        d = blob_dataset(3, 2, dim=3, seed=4).subset(range(6))
        spec = ModelSpec((3, 4, 2))
        rng = Rng(0, "gc")
        from curricula import nn

        params = nn.init_model(spec, rng)
        for a in params.arrays():
            a[...] = 0.0
        grads, _ = nn._gradients(params, d, range(len(d)))
        # hidden weights get no gradient where the rectifier is inactive
        assert np.allclose(grads.weights[0], 0.0)
