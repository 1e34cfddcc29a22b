"""The three training regimes: vanilla, greedy curriculum (GCL) and
probabilistic curriculum (PCL), with class-stratified subset selection.

Both curriculum selectors keep the per-class sample ratio of the full
training set. GCL takes the highest-scoring samples per class and keeps
using them until the pacing schedule grows the subset; PCL redraws each
epoch, sampling without replacement proportionally to the scores.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from .core import Dataset, Rng, ScoreVector, class_indices, largest_remainder
from .errors import Infeasible
from .nn import ModelParams, Optimizer, TrainConfig, evaluate, init_model, train_epoch
from .pacing import PacingSchedule, staircase_pacing


@dataclass(frozen=True)
class EpochRecord:
    epoch: int
    subset_size: int
    subset_digest: str
    train_loss: float
    eval_accuracy: float | None


@dataclass
class TrainingTrace:
    epochs: list
    final_params: ModelParams
    max_accuracy: float


def _digest(indices) -> str:
    payload = ",".join(str(int(i)) for i in sorted(indices))
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


def stratified_quota(class_sizes, k: int):
    """Split a subset size k into per-class quotas proportional to class
    sizes (largest-remainder apportionment, remainder ties to the lowest
    class index)."""
    class_sizes = np.asarray(class_sizes, dtype=np.int64)
    N = int(class_sizes.sum())
    if not 1 <= k <= N:
        raise Infeasible(f"k={k} outside [1, {N}]")
    return largest_remainder(k * class_sizes / N, k)


def gcl_select(scores: ScoreVector, labels, k: int):
    """Per class, the quota samples with the highest scores; ties go to the
    lowest index. Result is sorted ascending by index and fully
    deterministic."""
    labels = np.asarray(labels)
    class_count = int(labels.max()) + 1
    quotas = stratified_quota(np.bincount(labels, minlength=class_count), k)
    chosen = []
    for c, members in enumerate(class_indices(labels, class_count)):
        # stable sort on (-score, index)
        order = sorted(members, key=lambda i: (-scores.weights[i], i))
        chosen.extend(int(i) for i in order[: quotas[c]])
    return sorted(chosen)


def pcl_select(scores: ScoreVector, labels, k: int, rng: Rng):
    """Per class, quota draws without replacement, each draw proportional to
    the remaining within-class scores. Zero-score samples become eligible
    only once every positive-score sample of the class is taken."""
    labels = np.asarray(labels)
    class_count = int(labels.max()) + 1
    quotas = stratified_quota(np.bincount(labels, minlength=class_count), k)
    gen = rng.generator
    chosen = []
    for c, members in enumerate(class_indices(labels, class_count)):
        pool = [int(i) for i in members]
        weights = [float(scores.weights[i]) for i in pool]
        for _ in range(quotas[c]):
            total = sum(weights)
            if total > 0:
                r = gen.random() * total
                acc = 0.0
                pick = len(pool) - 1
                for j, w in enumerate(weights):
                    acc += w
                    if r < acc:
                        pick = j
                        break
            else:
                pick = int(gen.integers(len(pool)))
            chosen.append(pool.pop(pick))
            weights.pop(pick)
    return sorted(chosen)


def run_training(params: ModelParams, d: Dataset, cfg: TrainConfig, eval_set: Dataset, rng: Rng, subset_for_epoch, eval_stride: int = 1) -> TrainingTrace:
    """Shared epoch loop. subset_for_epoch(t) returns the index list for
    epoch t (0-based). Optimizer state persists across epochs and pacing
    stages; mini-batch order is a seeded shuffle of the epoch's subset."""
    params = params.copy()
    opt = Optimizer(cfg, params)
    shuffle_rng = rng.derive("shuffle")
    records = []
    max_acc = 0.0
    for t in range(cfg.epochs):
        subset = subset_for_epoch(t)
        loss = train_epoch(params, opt, d, subset, cfg.batch_size, shuffle_rng)
        acc = None
        if (t + 1) % eval_stride == 0 or t == cfg.epochs - 1:
            acc = evaluate(params, eval_set)
            max_acc = max(max_acc, acc)
        records.append(EpochRecord(t + 1, len(subset), _digest(subset), loss, acc))
    return TrainingTrace(epochs=records, final_params=params, max_accuracy=max_acc)


def gcl_train(d: Dataset, scores: ScoreVector, spec, cfg: TrainConfig, eval_set: Dataset, rng: Rng, eval_stride: int = 1) -> TrainingTrace:
    schedule = staircase_pacing(len(d), cfg.epochs)
    params = init_model(spec, rng.derive("init"))
    labels = d.labels
    cache = {}

    def subset_for_epoch(t):
        k = schedule.sizes[t]
        if k not in cache:  # same instances until new data is added
            cache[k] = gcl_select(scores, labels, k)
        return cache[k]

    return run_training(params, d, cfg, eval_set, rng, subset_for_epoch, eval_stride)


def pcl_train(d: Dataset, scores: ScoreVector, spec, cfg: TrainConfig, eval_set: Dataset, rng: Rng, eval_stride: int = 1) -> TrainingTrace:
    schedule = staircase_pacing(len(d), cfg.epochs)
    params = init_model(spec, rng.derive("init"))
    labels = d.labels
    pcl_rng = rng.derive("pcl")

    def subset_for_epoch(t):  # fresh draw every epoch
        return pcl_select(scores, labels, schedule.sizes[t], pcl_rng)

    return run_training(params, d, cfg, eval_set, rng, subset_for_epoch, eval_stride)


def vanilla_train(d: Dataset, spec, cfg: TrainConfig, eval_set: Dataset, rng: Rng, eval_stride: int = 1) -> TrainingTrace:
    params = init_model(spec, rng.derive("init"))
    full = list(range(len(d)))
    return run_training(params, d, cfg, eval_set, rng, lambda t: full, eval_stride)
