import numpy as np
import pytest

from curricula.core import Rng, ScoreVector, dense_dataset, uniform_scores
from curricula.errors import Infeasible
from curricula.nn import ModelSpec, TrainConfig
from curricula.pacing import staircase_pacing
from curricula.trainers import (
    gcl_select,
    gcl_train,
    pcl_select,
    pcl_train,
    stratified_quota,
    vanilla_train,
)


def blob_dataset(per_class=10, classes=2, dim=4, sigma=0.3, seed=0):
    gen = np.random.default_rng(seed)
    feats, labels = [], []
    for c in range(classes):
        center = np.zeros(dim)
        center[c % dim] = 2.0
        for _ in range(per_class):
            feats.append(center + sigma * gen.normal(size=dim))
            labels.append(c)
    return dense_dataset(feats, labels, classes)


def oracle_gcl_select(weights, labels, quotas):
    """Independent selection oracle: full descending sort of (score, -index)
    then per-class quota fill."""
    order = sorted(range(len(weights)), key=lambda i: (-weights[i], i))
    taken = {c: 0 for c in range(len(quotas))}
    out = []
    for i in order:
        c = labels[i]
        if taken[c] < quotas[c]:
            taken[c] += 1
            out.append(i)
    return sorted(out)


class TestStratifiedQuota:
    def test_balanced(self):
        assert list(stratified_quota([4, 4], 4)) == [2, 2]

    def test_exact_proportions(self):
        assert list(stratified_quota([6, 3], 3)) == [2, 1]

    def test_largest_remainder(self):
        assert list(stratified_quota([5, 4], 3)) == [2, 1]

    def test_infeasible(self):
        with pytest.raises(Infeasible):
            stratified_quota([2, 2], 5)
        with pytest.raises(Infeasible):
            stratified_quota([2, 2], 0)

    def test_within_one_of_proportional(self):
        gen = np.random.default_rng(0)
        for _ in range(300):
            sizes = gen.integers(1, 30, size=int(gen.integers(2, 6)))
            N = int(sizes.sum())
            k = int(gen.integers(1, N + 1))
            q = stratified_quota(sizes, k)
            assert q.sum() == k
            assert all(qc <= nc for qc, nc in zip(q, sizes))
            assert all(abs(qc - k * nc / N) < 1 for qc, nc in zip(q, sizes))


class TestGclSelect:
    def test_per_class_argmax(self):
        s = ScoreVector(np.array([0.4, 0.3, 0.2, 0.1]))
        assert gcl_select(s, [0, 0, 1, 1], 2) == [0, 2]

    def test_k_equals_n(self):
        s = uniform_scores(6)
        assert gcl_select(s, [0, 0, 0, 1, 1, 1], 6) == list(range(6))

    def test_ties_take_lowest_index(self):
        s = uniform_scores(4)
        assert gcl_select(s, [0, 0, 1, 1], 2) == [0, 2]

    def test_matches_oracle_randomized(self):
        gen = np.random.default_rng(7)
        for _ in range(300):
            classes = int(gen.integers(2, 5))
            n = int(gen.integers(classes * 2, 40))
            labels = np.concatenate([np.arange(classes), gen.integers(0, classes, size=n - classes)])
            weights = gen.dirichlet(np.ones(n))
            s = ScoreVector(weights)
            k = int(gen.integers(1, n + 1))
            quotas = stratified_quota(np.bincount(labels, minlength=classes), k)
            assert gcl_select(s, labels, k) == oracle_gcl_select(weights, labels, quotas)

    def test_dominance(self):
        gen = np.random.default_rng(8)
        labels = gen.integers(0, 3, size=30)
        labels[:3] = [0, 1, 2]
        s = ScoreVector(gen.dirichlet(np.ones(30)))
        picked = set(gcl_select(s, labels, 15))
        for c in range(3):
            members = [i for i in range(30) if labels[i] == c]
            inside = [s.weights[i] for i in members if i in picked]
            outside = [s.weights[i] for i in members if i not in picked]
            if inside and outside:
                assert min(inside) >= max(outside)


class TestPclSelect:
    def test_degenerate_distribution(self):
        s = ScoreVector(np.array([1.0, 0.0]))
        for seed in range(20):
            assert pcl_select(s, [0, 0], 1, Rng(seed, "pcl")) == [0]

    def test_exhaustive_draw(self):
        s = ScoreVector(np.array([0.05, 0.05, 0.4, 0.5]))
        assert pcl_select(s, [0, 0, 0, 0], 4, Rng(0, "pcl")) == [0, 1, 2, 3]

    def test_frequency_matches_scores(self):
        s = ScoreVector(np.array([0.75, 0.25]))
        rng = Rng(123, "pcl")
        hits = sum(pcl_select(s, [0, 0], 1, rng) == [0] for _ in range(10_000))
        assert abs(hits / 10_000 - 0.75) <= 0.02

    def test_inclusion_monotone_in_scores(self):
        gen = np.random.default_rng(5)
        weights = np.sort(gen.dirichlet(np.ones(6) * 2))[::-1]
        s = ScoreVector(weights.copy())
        labels = [0] * 6
        counts = np.zeros(6)
        rng = Rng(9, "pcl")
        draws = 10_000
        for _ in range(draws):
            for i in pcl_select(s, labels, 3, rng):
                counts[i] += 1
        freqs = counts / draws
        corr = np.corrcoef(np.argsort(np.argsort(weights)), np.argsort(np.argsort(freqs)))[0, 1]
        assert corr > 0.99

    def test_respects_quotas(self):
        gen = np.random.default_rng(6)
        labels = np.array([0] * 5 + [1] * 3)
        s = ScoreVector(gen.dirichlet(np.ones(8)))
        sel = pcl_select(s, labels, 4, Rng(0, "pcl"))
        sizes = np.bincount(labels[sel], minlength=2)
        assert list(sizes) == list(stratified_quota([5, 3], 4))


class TestTrainingLoops:
    spec = ModelSpec((4, 8, 2))

    def cfg(self, epochs=6):
        return TrainConfig(epochs=epochs, batch_size=8, learning_rate=1e-2)

    def test_trace_sizes_follow_schedule(self):
        d = blob_dataset(15)
        ev = blob_dataset(5, seed=1)
        s = uniform_scores(len(d))
        for fn in (gcl_train, pcl_train):
            trace = fn(d, s, self.spec, self.cfg(), ev, Rng(0, "run"))
            assert [r.subset_size for r in trace.epochs] == list(staircase_pacing(30, 6).sizes)

    def test_vanilla_full_size_every_epoch(self):
        d = blob_dataset(10)
        ev = blob_dataset(4, seed=1)
        trace = vanilla_train(d, self.spec, self.cfg(), ev, Rng(0, "run"))
        assert all(r.subset_size == len(d) for r in trace.epochs)

    def test_max_accuracy_is_max(self):
        d = blob_dataset(10)
        ev = blob_dataset(4, seed=1)
        trace = vanilla_train(d, self.spec, self.cfg(), ev, Rng(0, "run"))
        accs = [r.eval_accuracy for r in trace.epochs if r.eval_accuracy is not None]
        assert trace.max_accuracy == max(accs)

    def test_deterministic(self):
        d = blob_dataset(10)
        ev = blob_dataset(4, seed=1)
        s = uniform_scores(len(d))
        t1 = pcl_train(d, s, self.spec, self.cfg(), ev, Rng(7, "run"))
        t2 = pcl_train(d, s, self.spec, self.cfg(), ev, Rng(7, "run"))
        assert [r.subset_digest for r in t1.epochs] == [r.subset_digest for r in t2.epochs]
        assert t1.max_accuracy == t2.max_accuracy
        for a, b in zip(t1.final_params.arrays(), t2.final_params.arrays()):
            assert np.array_equal(a, b)

    def test_gcl_reuses_subset_within_stage(self):
        d = blob_dataset(15)
        ev = blob_dataset(5, seed=1)
        gen = np.random.default_rng(3)
        s = ScoreVector(gen.dirichlet(np.ones(len(d))))
        trace = gcl_train(d, s, self.spec, self.cfg(6), ev, Rng(1, "run"))
        digests = [r.subset_digest for r in trace.epochs]
        assert digests[0] == digests[1]
        assert digests[2] == digests[3]
        assert digests[4] == digests[5]

    def test_gcl_uniform_full_schedule_matches_vanilla_sets(self):
        d = blob_dataset(6)
        ev = blob_dataset(3, seed=1)
        s = uniform_scores(len(d))
        g = gcl_train(d, s, self.spec, self.cfg(3), ev, Rng(2, "run"))
        assert g.epochs[-1].subset_size == len(d)
        v = vanilla_train(d, self.spec, self.cfg(3), ev, Rng(2, "run"))
        assert g.epochs[-1].subset_digest == v.epochs[-1].subset_digest

    def test_pcl_redraws_each_epoch(self):
        d = blob_dataset(30)
        ev = blob_dataset(5, seed=1)
        gen = np.random.default_rng(4)
        s = ScoreVector(gen.dirichlet(np.ones(len(d))))
        trace = pcl_train(d, s, self.spec, self.cfg(6), ev, Rng(3, "run"))
        digests = [r.subset_digest for r in trace.epochs]
        assert digests[0] != digests[1]
