"""Text-based easiness scoring: sentence length and n-gram entropy.

Sentence entropy sums -p * log(p) over the sentence's contiguous n-grams,
with probabilities taken from corpus-wide n-gram counts. Natural log;
n-grams repeated in a sentence contribute once per occurrence; no
sentence-boundary padding, so bigrams and trigrams are strictly
intra-sentence.
"""

from __future__ import annotations

import math
import string
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .core import ScoreVector
from .errors import EmptyAfterTokenize, EmptyCorpus, UnknownNgram

_STRIP_CHARS = string.punctuation

HIGH_ENTROPY_EASY = "high_entropy_easy"
LOW_ENTROPY_EASY = "low_entropy_easy"
LONG_EASY = "long_easy"
SHORT_EASY = "short_easy"


@dataclass(frozen=True)
class Sentence:
    tokens: tuple

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        if len(self.tokens) < 1:
            raise EmptyAfterTokenize("sentence has no tokens")

    def __len__(self):
        return len(self.tokens)


def tokenize(text: str) -> Sentence:
    """Lowercase, split on whitespace runs, strip edge punctuation, drop
    empties."""
    tokens = []
    for raw in text.lower().split():
        tok = raw.strip(_STRIP_CHARS)
        if tok:
            tokens.append(tok)
    if not tokens:
        raise EmptyAfterTokenize(f"no tokens left in {text!r}")
    return Sentence(tuple(tokens))


@dataclass(frozen=True)
class CorpusStats:
    unigram_counts: dict
    bigram_counts: dict
    trigram_counts: dict
    uc: int
    bc: int
    tc: int

    def counts_for(self, order: int):
        if order == 1:
            return self.unigram_counts, self.uc
        if order == 2:
            return self.bigram_counts, self.bc
        if order == 3:
            return self.trigram_counts, self.tc
        raise ValueError(f"order must be 1, 2 or 3 (got {order})")


def sentence_ngrams(s: Sentence, order: int):
    toks = s.tokens
    return [toks[i : i + order] for i in range(len(toks) - order + 1)]


def build_corpus_stats(corpus) -> CorpusStats:
    corpus = list(corpus)
    if not corpus:
        raise EmptyCorpus("corpus has no sentences")
    uni, bi, tri = Counter(), Counter(), Counter()
    for s in corpus:
        uni.update(sentence_ngrams(s, 1))
        bi.update(sentence_ngrams(s, 2))
        tri.update(sentence_ngrams(s, 3))
    return CorpusStats(
        unigram_counts=dict(uni),
        bigram_counts=dict(bi),
        trigram_counts=dict(tri),
        uc=sum(uni.values()),
        bc=sum(bi.values()),
        tc=sum(tri.values()),
    )


def ngram_entropy(s: Sentence, stats: CorpusStats, order: int) -> float:
    """Sum of -p * ln(p) over the sentence's contiguous n-grams of the given
    order. Sentences shorter than the order score 0."""
    counts, total = stats.counts_for(order)
    if len(s) < order:
        return 0.0
    acc = 0.0
    for gram in sentence_ngrams(s, order):
        if gram not in counts:
            raise UnknownNgram(gram)
        p = counts[gram] / total
        acc -= p * math.log(p)
    return acc


def ngram_scores(corpus, order: int, direction: str) -> ScoreVector:
    """Per-sentence entropies mapped to easiness weights."""
    corpus = list(corpus)
    if not corpus:
        raise EmptyCorpus("corpus has no sentences")
    if direction not in (HIGH_ENTROPY_EASY, LOW_ENTROPY_EASY):
        raise ValueError(f"unknown direction {direction!r}")
    stats = build_corpus_stats(corpus)
    raw = np.array([ngram_entropy(s, stats, order) for s in corpus])
    if direction == LOW_ENTROPY_EASY:
        raw = 1.0 / np.maximum(raw, 1e-12)
    return ScoreVector.normalize(raw)


def sentence_length_scores(corpus, direction: str) -> ScoreVector:
    """Token counts (long_easy) or their reciprocals (short_easy), normalized."""
    corpus = list(corpus)
    if not corpus:
        raise EmptyCorpus("corpus has no sentences")
    if direction not in (LONG_EASY, SHORT_EASY):
        raise ValueError(f"unknown direction {direction!r}")
    raw = np.array([float(len(s)) for s in corpus])
    if direction == SHORT_EASY:
        raw = 1.0 / raw
    return ScoreVector.normalize(raw)
