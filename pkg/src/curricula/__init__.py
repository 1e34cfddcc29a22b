"""Curriculum-learning toolkit: easiness scoring, staircase pacing, greedy
and probabilistic curriculum trainers, and a reproducible experiment
harness."""

from .core import (
    Dataset,
    Rng,
    Sample,
    ScoreVector,
    dense_dataset,
    stratified_halves,
    token_dataset,
    uniform_scores,
    validate_dataset,
)
from .nn import ModelSpec, TrainConfig, evaluate, gradient_check, init_model, per_sample_loss, train
from .pacing import PacingSchedule, staircase_pacing
from .scoring_model import (
    ScoringRunConfig,
    cross_validated_scores,
    ensemble_scores,
    invert_scores,
    losses_to_scores,
    self_thought_scores,
    transfer_scores,
)
from .scoring_text import (
    CorpusStats,
    Sentence,
    build_corpus_stats,
    ngram_entropy,
    ngram_scores,
    sentence_length_scores,
    tokenize,
)
from .trainers import (
    TrainingTrace,
    gcl_select,
    gcl_train,
    pcl_select,
    pcl_train,
    stratified_quota,
    vanilla_train,
)

__version__ = "0.1.0"
