"""Datasets, score vectors, deterministic randomness and stratified splitting.

Sample identity is positional: a sample is referred to everywhere by its
index in the dataset's stable order, and every score vector is aligned to
those indices.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ClassTooSmall,
    EmptyDataset,
    MissingClass,
    RaggedFeatures,
    ZeroLength,
)

DENSE = "dense"
TOKENS = "tokens"

SCORE_SUM_TOL = 1e-9


def _substream_seed(seed: int, stream: str) -> int:
    digest = hashlib.sha256(f"{seed}|{stream}".encode()).digest()
    return int.from_bytes(digest[:16], "big")


class Rng:
    """Seeded random generator with named sub-streams.

    Equal (seed, stream) pairs produce identical draw sequences on any
    platform; distinct stream names give statistically independent streams.
    A single Rng instance is stateful and single-owner; use `derive` to
    hand independent streams to other components.
    """

    def __init__(self, seed: int, stream: str = "root"):
        self.seed = int(seed)
        self.stream = stream
        self.generator = np.random.Generator(
            np.random.PCG64(_substream_seed(self.seed, stream))
        )

    def derive(self, name: str) -> "Rng":
        return Rng(self.seed, f"{self.stream}/{name}")

    def __repr__(self):
        return f"Rng(seed={self.seed}, stream={self.stream!r})"


@dataclass(frozen=True)
class Sample:
    """One training point: a dense feature vector or a token-id sequence."""

    features: object
    label: int


@dataclass(frozen=True)
class Dataset:
    """Ordered, immutable collection of samples.

    features: tuple of 1-d float arrays (kind=DENSE) or tuples of token ids
    (kind=TOKENS). labels: int array aligned with features.
    """

    features: tuple
    labels: np.ndarray
    class_count: int
    kind: str = DENSE
    vocab_size: int | None = None

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.int64)
        labels.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "features", tuple(self.features))

    def __len__(self):
        return len(self.features)

    def class_sizes(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.class_count)

    def feature_dim(self) -> int:
        if self.kind != DENSE:
            raise ValueError("feature_dim is only defined for dense datasets")
        return len(self.features[0])

    def subset(self, indices) -> "Dataset":
        indices = list(indices)
        return Dataset(
            features=tuple(self.features[i] for i in indices),
            labels=self.labels[indices],
            class_count=self.class_count,
            kind=self.kind,
            vocab_size=self.vocab_size,
        )

    def digest(self) -> str:
        h = hashlib.sha256()
        h.update(f"{self.kind}|{self.class_count}|{self.vocab_size}".encode())
        for f, y in zip(self.features, self.labels):
            if self.kind == DENSE:
                h.update(np.asarray(f, dtype=np.float64).tobytes())
            else:
                h.update(np.asarray(f, dtype=np.int64).tobytes())
            h.update(int(y).to_bytes(8, "big"))
        return h.hexdigest()


def dense_dataset(features, labels, class_count: int) -> Dataset:
    feats = tuple(np.asarray(f, dtype=np.float64) for f in features)
    for f in feats:
        f.setflags(write=False)
    return Dataset(feats, np.asarray(labels), class_count, kind=DENSE)


def token_dataset(sequences, labels, class_count: int, vocab_size: int) -> Dataset:
    feats = tuple(tuple(int(t) for t in seq) for seq in sequences)
    return Dataset(feats, np.asarray(labels), class_count, kind=TOKENS, vocab_size=vocab_size)


def validate_dataset(d: Dataset) -> Dataset:
    """Check dataset invariants; return the dataset unchanged if they hold."""
    if len(d) == 0:
        raise EmptyDataset("dataset has no samples")
    present = set(int(y) for y in d.labels)
    for c in range(d.class_count):
        if c not in present:
            raise MissingClass(c)
    if not all(0 <= y < d.class_count for y in present):
        raise MissingClass(max(present))
    if d.kind == DENSE:
        dim = len(d.features[0])
        for f in d.features:
            if len(f) != dim:
                raise RaggedFeatures("feature vectors have unequal lengths")
    else:
        for f in d.features:
            if len(f) < 1:
                raise RaggedFeatures("token sequence of length 0")
    return d


@dataclass(frozen=True)
class ScoreVector:
    """Per-sample easiness weights: nonnegative, sum to 1, index-aligned.

    Higher weight means easier; greedy selection takes the largest first.
    """

    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        if w.ndim != 1 or len(w) == 0:
            raise ZeroLength("score vector must be a nonempty 1-d vector")
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise ValueError("score weights must be finite and nonnegative")
        if abs(w.sum() - 1.0) > SCORE_SUM_TOL:
            raise ValueError(f"score weights must sum to 1 (got {w.sum()!r})")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    def __len__(self):
        return len(self.weights)

    @classmethod
    def normalize(cls, raw) -> "ScoreVector":
        """Build from nonnegative raw values by dividing by their sum."""
        raw = np.asarray(raw, dtype=np.float64)
        if raw.size == 0:
            raise ZeroLength("cannot normalize an empty vector")
        total = raw.sum()
        if total <= 0 or not np.isfinite(total):
            raise ValueError("raw scores must have a positive finite sum")
        return cls(raw / total)


def uniform_scores(n: int) -> ScoreVector:
    """Equal weight 1/n per sample (the Rand-CL baseline ordering)."""
    if n < 1:
        raise ZeroLength("need at least one sample")
    return ScoreVector(np.full(n, 1.0 / n))


def class_indices(labels: np.ndarray, class_count: int) -> list[np.ndarray]:
    labels = np.asarray(labels)
    return [np.flatnonzero(labels == c) for c in range(class_count)]


def stratified_halves(d: Dataset, rng: Rng):
    """Split a dataset into two class-stratified halves.

    Per-class odd counts alternate their extra sample between the two
    halves (ascending class order), so overall sizes differ by at most 1.
    Returns (half_a, half_b, (indices_a, indices_b)) where the index lists
    map each half back to positions in `d`.
    """
    validate_dataset(d)
    sizes = d.class_sizes()
    for c, n_c in enumerate(sizes):
        if n_c < 2:
            raise ClassTooSmall(c)
    gen = rng.generator
    idx_a, idx_b = [], []
    odd_seen = 0
    for c, members in enumerate(class_indices(d.labels, d.class_count)):
        perm = members[gen.permutation(len(members))]
        take_a = len(members) // 2
        if len(members) % 2 == 1:
            if odd_seen % 2 == 0:
                take_a += 1
            odd_seen += 1
        idx_a.extend(int(i) for i in perm[:take_a])
        idx_b.extend(int(i) for i in perm[take_a:])
    idx_a.sort()
    idx_b.sort()
    return d.subset(idx_a), d.subset(idx_b), (idx_a, idx_b)


def largest_remainder(targets: np.ndarray, total: int) -> np.ndarray:
    """Apportion `total` into integer parts proportional to `targets`.

    Floors first, then hands out the remainder by descending fractional
    part, ties broken by ascending position.
    """
    targets = np.asarray(targets, dtype=np.float64)
    floors = np.floor(targets).astype(np.int64)
    leftover = int(total - floors.sum())
    if leftover > 0:
        remainders = targets - floors
        order = sorted(range(len(targets)), key=lambda i: (-remainders[i], i))
        for i in order[:leftover]:
            floors[i] += 1
    return floors
