"""Model-based easiness scoring.

A scorer model is trained to convergence, its per-sample losses are
inverted (low loss = easy = high weight) and normalized into a probability
vector. Variants: self-thought (scorer = trainee architecture), transfer
(larger scorer), cross-validated (each half scored by the model trained on
the other half), and 5-run ensembles of any of these.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .core import Dataset, Rng, ScoreVector, stratified_halves
from .errors import EmptyInput, EmptyList, LengthMismatch, SpecNotLargerWarning
from .nn import ModelSpec, TrainConfig, init_model, per_sample_loss, train

LOSS_FLOOR = 1e-8  # inverted losses stay finite on perfectly fit points
DEFAULT_ENSEMBLE_RUNS = 5


@dataclass(frozen=True)
class ScoringRunConfig:
    scorer_spec: ModelSpec
    train_cfg: TrainConfig
    ensemble_runs: int = DEFAULT_ENSEMBLE_RUNS
    cross_validated: bool = False
    trainee_spec: ModelSpec | None = None  # for the transfer capacity check

    def __post_init__(self):
        if self.ensemble_runs < 1:
            raise ValueError("ensemble_runs must be >= 1")


def losses_to_scores(losses) -> ScoreVector:
    """Invert losses and normalize: k_i = 1 / max(loss_i, floor), r = k / sum k."""
    losses = np.asarray(losses, dtype=np.float64)
    if losses.size == 0:
        raise EmptyInput("no losses to score")
    if np.any(losses < 0) or not np.all(np.isfinite(losses)):
        raise ValueError("losses must be finite and nonnegative")
    k = 1.0 / np.maximum(losses, LOSS_FLOOR)
    return ScoreVector.normalize(k)


def _train_and_score(d: Dataset, spec: ModelSpec, cfg: TrainConfig, rng: Rng) -> np.ndarray:
    params = init_model(spec, rng.derive("init"))
    trained = train(params, d, cfg, rng=rng.derive("opt"))
    return per_sample_loss(trained, d)


def self_thought_scores(d: Dataset, cfg: ScoringRunConfig, rng: Rng) -> ScoreVector:
    """Train one model on all of d; score every sample by its final loss.

    The model trained afterward with these scores must start from fresh
    initial weights, never from the scorer's.
    """
    losses = _train_and_score(d, cfg.scorer_spec, cfg.train_cfg, rng)
    return losses_to_scores(losses)


def transfer_scores(d: Dataset, cfg: ScoringRunConfig, rng: Rng) -> ScoreVector:
    """Same pipeline as self-thought but with a higher-capacity scorer."""
    if cfg.trainee_spec is not None:
        if cfg.scorer_spec.param_count() <= cfg.trainee_spec.param_count():
            warnings.warn(
                "transfer scorer is not larger than the trainee model",
                SpecNotLargerWarning,
            )
    losses = _train_and_score(d, cfg.scorer_spec, cfg.train_cfg, rng)
    return losses_to_scores(losses)


def cross_validated_losses(d: Dataset, cfg: ScoringRunConfig, rng: Rng):
    """Half-split losses: each sample scored by the model trained on the
    other half. Returns (losses, scored_by, (indices_a, indices_b)) where
    scored_by[i] is 'a' or 'b' naming the model that produced loss i."""
    half_a, half_b, (idx_a, idx_b) = stratified_halves(d, rng.derive("split"))
    loss_on_b = None
    model_a = train(
        init_model(cfg.scorer_spec, rng.derive("init_a")),
        half_a,
        cfg.train_cfg,
        rng=rng.derive("opt_a"),
    )
    model_b = train(
        init_model(cfg.scorer_spec, rng.derive("init_b")),
        half_b,
        cfg.train_cfg,
        rng=rng.derive("opt_b"),
    )
    losses = np.empty(len(d))
    scored_by = [None] * len(d)
    # model trained on A scores B, and vice versa
    loss_on_b = per_sample_loss(model_a, half_b)
    loss_on_a = per_sample_loss(model_b, half_a)
    for pos, i in enumerate(idx_a):
        losses[i] = loss_on_a[pos]
        scored_by[i] = "b"
    for pos, i in enumerate(idx_b):
        losses[i] = loss_on_b[pos]
        scored_by[i] = "a"
    assert all(s is not None for s in scored_by)
    assert all(scored_by[i] == "b" for i in idx_a)
    assert all(scored_by[i] == "a" for i in idx_b)
    return losses, scored_by, (idx_a, idx_b)


def cross_validated_scores(d: Dataset, cfg: ScoringRunConfig, rng: Rng) -> ScoreVector:
    losses, _, _ = cross_validated_losses(d, cfg, rng)
    return losses_to_scores(losses)


def ensemble_scores(runs) -> ScoreVector:
    """Entrywise arithmetic mean of score vectors, renormalized."""
    runs = list(runs)
    if not runs:
        raise EmptyList("ensemble needs at least one score vector")
    n = len(runs[0])
    for r in runs:
        if len(r) != n:
            raise LengthMismatch("score vectors have different lengths")
    mean = np.mean([r.weights for r in runs], axis=0)
    return ScoreVector.normalize(mean)


def invert_scores(s: ScoreVector) -> ScoreVector:
    """Anti-curriculum: reciprocal weights, renormalized. Exactly reverses
    the easiness ranking when all weights are distinct."""
    k = 1.0 / np.maximum(s.weights, 1e-12)
    return ScoreVector.normalize(k)


def ensemble_model_scores(d: Dataset, cfg: ScoringRunConfig, rng: Rng, transfer: bool = False) -> ScoreVector:
    """Run the configured scorer cfg.ensemble_runs times with independent
    seeds (fresh initial weights, and fresh half-splits when
    cross-validated) and average the score vectors."""
    runs = []
    for i in range(cfg.ensemble_runs):
        member_rng = rng.derive(f"member{i}")
        if cfg.cross_validated:
            runs.append(cross_validated_scores(d, cfg, member_rng))
        elif transfer:
            runs.append(transfer_scores(d, cfg, member_rng))
        else:
            runs.append(self_thought_scores(d, cfg, member_rng))
    return ensemble_scores(runs)
