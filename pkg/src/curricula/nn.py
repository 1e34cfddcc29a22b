"""Minimal dense network with exact gradients.

Rectifier hidden layers, softmax output, cross-entropy loss. Token-sequence
inputs go through a trainable embedding table whose per-sample average feeds
the dense stack. Used both as the model under training and as the scorer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .core import DENSE, TOKENS, Dataset, Rng
from .errors import InvalidSpec, NonFiniteLoss, ShapeMismatch

LOG_CLAMP = 1e-12


@dataclass(frozen=True)
class ModelSpec:
    """Architecture: layer_sizes[0] is the input dim (embedding dim for token
    data), layer_sizes[-1] the class count. vocab_size is set only for token
    inputs."""

    layer_sizes: tuple
    vocab_size: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "layer_sizes", tuple(int(s) for s in self.layer_sizes))
        if len(self.layer_sizes) < 2:
            raise InvalidSpec("need at least input and output layer sizes")
        if any(s < 1 for s in self.layer_sizes):
            raise InvalidSpec("layer sizes must be positive")
        if self.vocab_size is not None and self.vocab_size < 1:
            raise InvalidSpec("vocab_size must be positive")

    def param_count(self) -> int:
        n = 0
        if self.vocab_size is not None:
            n += self.vocab_size * self.layer_sizes[0]
        for fan_in, fan_out in zip(self.layer_sizes[:-1], self.layer_sizes[1:]):
            n += fan_in * fan_out + fan_out
        return n


@dataclass
class ModelParams:
    spec: ModelSpec
    weights: list  # per layer, shape (fan_in, fan_out)
    biases: list  # per layer, shape (fan_out,)
    embedding: np.ndarray | None = None

    def arrays(self) -> list:
        out = [] if self.embedding is None else [self.embedding]
        for w, b in zip(self.weights, self.biases):
            out.extend((w, b))
        return out

    def copy(self) -> "ModelParams":
        return ModelParams(
            spec=self.spec,
            weights=[w.copy() for w in self.weights],
            biases=[b.copy() for b in self.biases],
            embedding=None if self.embedding is None else self.embedding.copy(),
        )

    def flatten(self) -> np.ndarray:
        return np.concatenate([a.ravel() for a in self.arrays()])

    def with_flat(self, flat: np.ndarray) -> "ModelParams":
        out = self.copy()
        pos = 0
        for a in out.arrays():
            a[...] = flat[pos : pos + a.size].reshape(a.shape)
            pos += a.size
        return out


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 10
    batch_size: int = 32
    learning_rate: float = 1e-2
    optimizer: str = "adam"
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    seed: int = 0

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be > 0")
        if self.optimizer not in ("adam", "sgd"):
            raise ValueError(f"unknown optimizer {self.optimizer!r}")


def init_model(spec: ModelSpec, rng: Rng) -> ModelParams:
    """He-style fan-in scaled uniform init; biases start at zero."""
    gen = rng.generator
    embedding = None
    if spec.vocab_size is not None:
        limit = math.sqrt(3.0 / spec.layer_sizes[0])
        embedding = gen.uniform(-limit, limit, size=(spec.vocab_size, spec.layer_sizes[0]))
    weights, biases = [], []
    for fan_in, fan_out in zip(spec.layer_sizes[:-1], spec.layer_sizes[1:]):
        limit = math.sqrt(6.0 / fan_in)
        weights.append(gen.uniform(-limit, limit, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))
    return ModelParams(spec=spec, weights=weights, biases=biases, embedding=embedding)


def input_matrix(params: ModelParams, d: Dataset, indices) -> np.ndarray:
    """Dense rows, or per-sample averages of embedding rows for token data."""
    if d.kind == DENSE:
        dim = d.feature_dim()
        if dim != params.spec.layer_sizes[0]:
            raise ShapeMismatch(
                f"feature dim {dim} != model input dim {params.spec.layer_sizes[0]}"
            )
        return np.stack([d.features[i] for i in indices])
    if params.embedding is None:
        raise ShapeMismatch("token dataset requires a model with an embedding table")
    if d.vocab_size is not None and d.vocab_size > params.embedding.shape[0]:
        raise ShapeMismatch("dataset vocab exceeds model embedding table")
    X = np.empty((len(indices), params.spec.layer_sizes[0]))
    for row, i in enumerate(indices):
        X[row] = params.embedding[list(d.features[i])].mean(axis=0)
    return X


def _forward(params: ModelParams, X: np.ndarray):
    acts = [X]
    h = X
    n_layers = len(params.weights)
    for li, (w, b) in enumerate(zip(params.weights, params.biases)):
        z = h @ w + b
        h = z if li == n_layers - 1 else np.maximum(z, 0.0)
        acts.append(h)
    logits = acts[-1]
    shifted = logits - logits.max(axis=1, keepdims=True)
    expz = np.exp(shifted)
    probs = expz / expz.sum(axis=1, keepdims=True)
    return acts, probs


def predict_proba(params: ModelParams, d: Dataset, indices=None) -> np.ndarray:
    indices = range(len(d)) if indices is None else indices
    X = input_matrix(params, d, list(indices))
    _, probs = _forward(params, X)
    return probs


def per_sample_loss(params: ModelParams, d: Dataset, indices=None) -> np.ndarray:
    """Softmax cross-entropy per sample, probabilities clamped at 1e-12."""
    indices = list(range(len(d))) if indices is None else list(indices)
    probs = predict_proba(params, d, indices)
    y = d.labels[indices]
    p_true = np.maximum(probs[np.arange(len(indices)), y], LOG_CLAMP)
    return -np.log(p_true)


def evaluate(params: ModelParams, d: Dataset, indices=None) -> float:
    """Top-1 accuracy; argmax ties resolve to the lowest class index."""
    indices = list(range(len(d))) if indices is None else list(indices)
    probs = predict_proba(params, d, indices)
    pred = probs.argmax(axis=1)
    return float((pred == d.labels[indices]).mean())


def _gradients(params: ModelParams, d: Dataset, indices):
    """Mean-loss gradients over the given samples, same structure as params."""
    indices = list(indices)
    X = input_matrix(params, d, indices)
    acts, probs = _forward(params, X)
    y = d.labels[indices]
    n = len(indices)

    delta = probs.copy()
    delta[np.arange(n), y] -= 1.0
    delta /= n

    g_w = [None] * len(params.weights)
    g_b = [None] * len(params.biases)
    for li in range(len(params.weights) - 1, -1, -1):
        g_w[li] = acts[li].T @ delta
        g_b[li] = delta.sum(axis=0)
        if li > 0:
            delta = (delta @ params.weights[li].T) * (acts[li] > 0)
        else:
            delta = delta @ params.weights[li].T  # gradient w.r.t. the input

    g_emb = None
    if params.embedding is not None:
        g_emb = np.zeros_like(params.embedding)
        for row, i in enumerate(indices):
            toks = list(d.features[i])
            np.add.at(g_emb, toks, delta[row] / len(toks))

    mean_loss = float(
        -np.log(np.maximum(probs[np.arange(n), y], LOG_CLAMP)).mean()
    )
    grads = ModelParams(
        spec=params.spec,
        weights=g_w,
        biases=g_b,
        embedding=g_emb,
    )
    return grads, mean_loss


class Optimizer:
    """Adam (default) or plain SGD over a ModelParams structure. State
    persists for the lifetime of the instance, across epochs and pacing
    stages."""

    def __init__(self, cfg: TrainConfig, params: ModelParams):
        self.cfg = cfg
        self.t = 0
        if cfg.optimizer == "adam":
            self.m = [np.zeros_like(a) for a in params.arrays()]
            self.v = [np.zeros_like(a) for a in params.arrays()]

    def step(self, params: ModelParams, grads: ModelParams) -> None:
        cfg = self.cfg
        self.t += 1
        p_arrays = params.arrays()
        g_arrays = grads.arrays()
        if cfg.optimizer == "sgd":
            for p, g in zip(p_arrays, g_arrays):
                p -= cfg.learning_rate * g
            return
        correct1 = 1.0 - cfg.beta1 ** self.t
        correct2 = 1.0 - cfg.beta2 ** self.t
        for p, g, m, v in zip(p_arrays, g_arrays, self.m, self.v):
            m *= cfg.beta1
            m += (1 - cfg.beta1) * g
            v *= cfg.beta2
            v += (1 - cfg.beta2) * g * g
            p -= cfg.learning_rate * (m / correct1) / (np.sqrt(v / correct2) + cfg.eps)


def train_epoch(params: ModelParams, opt: Optimizer, d: Dataset, indices, batch_size: int, rng: Rng) -> float:
    """One epoch of mini-batch updates over the given subset, in a seeded
    shuffled order. Mutates params in place; returns the mean batch loss."""
    indices = np.asarray(list(indices))
    order = rng.generator.permutation(len(indices))
    shuffled = indices[order]
    losses = []
    for start in range(0, len(shuffled), batch_size):
        batch = shuffled[start : start + batch_size]
        grads, loss = _gradients(params, d, batch)
        if not math.isfinite(loss):
            raise NonFiniteLoss(f"training diverged (batch loss {loss})")
        losses.append(loss)
        opt.step(params, grads)
    return float(np.mean(losses))


def train(params: ModelParams, d: Dataset, cfg: TrainConfig, subset_indices_per_epoch=None, rng: Rng | None = None) -> ModelParams:
    """Run cfg.epochs of mini-batch optimization; returns new params.

    subset_indices_per_epoch, when given, supplies the index list used in
    each epoch (length must be cfg.epochs); otherwise the full dataset is
    used every epoch.
    """
    if subset_indices_per_epoch is not None and len(subset_indices_per_epoch) != cfg.epochs:
        raise ShapeMismatch("need one index list per epoch")
    rng = Rng(cfg.seed, "train") if rng is None else rng
    shuffle_rng = rng.derive("shuffle")
    out = params.copy()
    opt = Optimizer(cfg, out)
    all_indices = list(range(len(d)))
    for epoch in range(cfg.epochs):
        subset = all_indices if subset_indices_per_epoch is None else subset_indices_per_epoch[epoch]
        train_epoch(out, opt, d, subset, cfg.batch_size, shuffle_rng)
    return out


def gradient_check(spec: ModelSpec, d_small: Dataset, rng: Rng | None = None, step: float = 1e-5) -> float:
    """Max relative error of analytic gradients vs central differences."""
    if len(d_small) > 16:
        raise ValueError("gradient check is meant for tiny datasets (<= 16 samples)")
    rng = Rng(0, "gradcheck") if rng is None else rng
    params = init_model(spec, rng)
    indices = list(range(len(d_small)))
    grads, _ = _gradients(params, d_small, indices)
    analytic = grads.flatten()
    flat = params.flatten()
    numeric = np.empty_like(flat)
    for i in range(len(flat)):
        bumped = flat.copy()
        bumped[i] = flat[i] + step
        lo_p = per_sample_loss(params.with_flat(bumped), d_small).mean()
        bumped[i] = flat[i] - step
        lo_m = per_sample_loss(params.with_flat(bumped), d_small).mean()
        numeric[i] = (lo_p - lo_m) / (2 * step)
    denom = np.maximum(np.abs(analytic) + np.abs(numeric), 1e-8)
    return float(np.max(np.abs(analytic - numeric) / denom))
