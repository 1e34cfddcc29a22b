"""Experiment harness: dataset loading, synthetic data, epoch-budget
calibration, multi-trial experiment execution and report generation.

A method id names a (scoring, trainer) pair, e.g. "st-gcl", "ecvst-pcl",
"oracle-pcl", "sl-long-pcl", "ug-high-pcl"; "vanilla" and "rand-cl" are the
baselines. Every experiment derives all randomness from a single master
seed, so equal configs produce byte-identical reports.
"""

from __future__ import annotations

import csv
import hashlib
import json
import os
import struct
from dataclasses import dataclass, field, asdict
from pathlib import Path

import numpy as np

from . import scoring_model, scoring_text
from .core import (
    Dataset,
    Rng,
    ScoreVector,
    dense_dataset,
    token_dataset,
    uniform_scores,
    validate_dataset,
)
from .errors import BadMagic, BadSpec, Infeasible, IoError, Ragged, UnknownLabel
from .nn import ModelSpec, TrainConfig, evaluate, init_model, train
from .scoring_model import ScoringRunConfig
from .trainers import (
    TrainingTrace,
    gcl_train,
    pcl_train,
    vanilla_train,
)

IDX_IMAGES_MAGIC = 0x00000803
IDX_LABELS_MAGIC = 0x00000801

OUTPUT_DIR_ENV = "CURRICULA_OUT"


# ---------------------------------------------------------------------------
# dataset loading


def load_idx_images(path) -> np.ndarray:
    data = Path(path).read_bytes()
    if len(data) < 16:
        raise BadMagic(f"{path}: truncated idx header")
    magic, count, rows, cols = struct.unpack(">IIII", data[:16])
    if magic != IDX_IMAGES_MAGIC:
        raise BadMagic(f"{path}: magic {magic:#010x}, expected {IDX_IMAGES_MAGIC:#010x}")
    pixels = np.frombuffer(data, dtype=np.uint8, offset=16)
    if len(pixels) != count * rows * cols:
        raise Ragged(f"{path}: expected {count * rows * cols} pixels, got {len(pixels)}")
    return pixels.reshape(count, rows * cols).astype(np.float64) / 255.0


def load_idx_labels(path) -> np.ndarray:
    data = Path(path).read_bytes()
    if len(data) < 8:
        raise BadMagic(f"{path}: truncated idx header")
    magic, count = struct.unpack(">II", data[:8])
    if magic != IDX_LABELS_MAGIC:
        raise BadMagic(f"{path}: magic {magic:#010x}, expected {IDX_LABELS_MAGIC:#010x}")
    labels = np.frombuffer(data, dtype=np.uint8, offset=8)
    if len(labels) != count:
        raise Ragged(f"{path}: expected {count} labels, got {len(labels)}")
    return labels.astype(np.int64)


def load_dataset(source, format: str):
    """Load a dataset from disk.

    idx: source is (images_path, labels_path) or "images,labels"; pixel
    bytes scaled to [0, 1]. csv: label first, features after, one row per
    sample. tsv_text: `label<TAB>text` per line; returns (dataset,
    sentences, vocab) so text scoring can reuse the token strings.
    """
    if format == "idx":
        if isinstance(source, str):
            parts = source.split(",")
            if len(parts) != 2:
                raise IoError("idx source must be 'images_path,labels_path'")
            source = tuple(parts)
        images_path, labels_path = source
        X = load_idx_images(images_path)
        y = load_idx_labels(labels_path)
        if len(X) != len(y):
            raise Ragged("image and label counts differ")
        return validate_dataset(dense_dataset(list(X), y, int(y.max()) + 1))

    if format == "csv":
        rows = []
        labels = []
        with open(source, newline="") as fh:
            for lineno, row in enumerate(csv.reader(fh), 1):
                if not row:
                    continue
                try:
                    labels.append(int(row[0]))
                except ValueError:
                    raise UnknownLabel(f"line {lineno}: label {row[0]!r} is not an integer")
                rows.append(np.array([float(v) for v in row[1:]]))
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise Ragged("csv rows have unequal feature counts")
        labels = np.asarray(labels)
        if np.any(labels < 0):
            raise UnknownLabel("negative class label")
        return validate_dataset(dense_dataset(rows, labels, int(labels.max()) + 1))

    if format == "tsv_text":
        sentences = []
        labels = []
        with open(source, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.rstrip("\n")
                if not line:
                    continue
                if "\t" not in line:
                    raise Ragged(f"line {lineno}: expected 'label<TAB>text'")
                label_str, text = line.split("\t", 1)
                try:
                    labels.append(int(label_str))
                except ValueError:
                    raise UnknownLabel(f"line {lineno}: label {label_str!r} is not an integer")
                sentences.append(scoring_text.tokenize(text))
        vocab = {}
        sequences = []
        for s in sentences:
            sequences.append([vocab.setdefault(tok, len(vocab)) for tok in s.tokens])
        labels = np.asarray(labels)
        if len(labels) == 0:
            raise IoError(f"{source}: no samples")
        if np.any(labels < 0):
            raise UnknownLabel("negative class label")
        d = validate_dataset(
            token_dataset(sequences, labels, int(labels.max()) + 1, len(vocab))
        )
        return d, sentences, vocab

    raise IoError(f"unknown dataset format {format!r}")


# ---------------------------------------------------------------------------
# synthetic data


@dataclass(frozen=True)
class BlobSpec:
    classes: int = 4
    per_class: int = 150
    dim: int = 10
    sigma: float = 0.35
    noise_fraction: float = 0.2


def synth_dataset(spec: BlobSpec, rng: Rng):
    """Gaussian blobs with class means on a simplex at unit pairwise
    distance; noise_fraction of labels flipped uniformly to another class.
    Returns (dataset, clean_mask); the mask marks unflipped samples and is
    the difficulty oracle."""
    if spec.classes < 2 or spec.per_class < 2:
        raise BadSpec("need classes >= 2 and per_class >= 2")
    if not 0 <= spec.noise_fraction < 0.5:
        raise BadSpec("noise_fraction must be in [0, 0.5)")
    if spec.dim < spec.classes:
        raise BadSpec("dim must be >= classes for simplex means")
    gen = rng.generator
    # standard-basis vertices scaled so all pairwise distances are 1
    means = np.zeros((spec.classes, spec.dim))
    for c in range(spec.classes):
        means[c, c] = 1.0 / np.sqrt(2.0)
    n = spec.classes * spec.per_class
    features = np.empty((n, spec.dim))
    labels = np.empty(n, dtype=np.int64)
    for c in range(spec.classes):
        lo = c * spec.per_class
        hi = lo + spec.per_class
        features[lo:hi] = means[c] + spec.sigma * gen.standard_normal((spec.per_class, spec.dim))
        labels[lo:hi] = c
    clean_mask = np.ones(n, dtype=bool)
    flip_count = round(spec.noise_fraction * n)
    if flip_count:
        flipped = gen.choice(n, size=flip_count, replace=False)
        for i in flipped:
            other = int(gen.integers(spec.classes - 1))
            if other >= labels[i]:
                other += 1
            labels[i] = other
            clean_mask[i] = False
    d = validate_dataset(dense_dataset(list(features), labels, spec.classes))
    return d, clean_mask


def oracle_scores(clean_mask, noisy_weight: float = 0.05) -> ScoreVector:
    """Ground-truth easiness from the synthetic clean mask: clean points
    weigh 1, flipped points `noisy_weight`, normalized."""
    mask = np.asarray(clean_mask, dtype=bool)
    return ScoreVector.normalize(np.where(mask, 1.0, noisy_weight))


# ---------------------------------------------------------------------------
# parameter serialization (wire format for model checkpoints)


def save_params(params, path) -> None:
    header = json.dumps(
        {
            "layer_sizes": list(params.spec.layer_sizes),
            "vocab_size": params.spec.vocab_size,
        },
        sort_keys=True,
    )
    arrays = {f"a{i}": a for i, a in enumerate(params.arrays())}
    np.savez(path, __spec__=np.frombuffer(header.encode(), dtype=np.uint8), **arrays)


def load_params(path):
    from .nn import ModelParams

    with np.load(path) as z:
        header = json.loads(bytes(z["__spec__"]).decode())
        spec = ModelSpec(tuple(header["layer_sizes"]), header["vocab_size"])
        arrays = [z[f"a{i}"] for i in range(len(z.files) - 1)]
    params = init_model(spec, Rng(0, "load"))
    for dst, src in zip(params.arrays(), arrays):
        dst[...] = src
    return params


# ---------------------------------------------------------------------------
# score file format: index<TAB>score


def save_scores(scores: ScoreVector, path) -> None:
    with open(path, "w") as fh:
        for i, w in enumerate(scores.weights):
            fh.write(f"{i}\t{float(w)!r}\n")


def load_scores(path) -> ScoreVector:
    weights = {}
    with open(path) as fh:
        for line in fh:
            idx, val = line.split("\t")
            weights[int(idx)] = float(val)
    return ScoreVector(np.array([weights[i] for i in range(len(weights))]))


# ---------------------------------------------------------------------------
# experiment configuration


@dataclass(frozen=True)
class ExperimentConfig:
    methods: tuple
    trials: int = 5
    master_seed: int = 0
    # trainee architecture
    hidden_sizes: tuple = (32,)
    scorer_hidden_sizes: tuple = (64, 64)  # for the TL family
    embed_dim: int = 16  # token datasets
    # optimization
    batch_size: int = 32
    learning_rate: float = 1e-2
    optimizer: str = "adam"
    # epoch budget: fixed count, or calibrated from early stopping
    epoch_budget: int | None = None
    budget_multiplier: int = 3
    patience: int = 5
    calibration_max_epochs: int = 60
    ensemble_runs: int = 5
    eval_stride: int = 1

    def __post_init__(self):
        object.__setattr__(self, "methods", tuple(self.methods))
        object.__setattr__(self, "hidden_sizes", tuple(self.hidden_sizes))
        object.__setattr__(self, "scorer_hidden_sizes", tuple(self.scorer_hidden_sizes))
        if self.trials < 1:
            raise BadSpec("trials must be >= 1")
        if not self.methods:
            raise BadSpec("methods must be non-empty")


MODEL_SCORINGS = ("st", "est", "cvst", "ecvst", "tl", "etl", "cvtl", "ecvtl")
TEXT_SCORINGS = ("sl-long", "sl-short", "ug-high", "ug-low", "bg-high", "bg-low", "tg-high", "tg-low")


def parse_method(method: str):
    """Split a method id into (scoring, trainer, anti) parts."""
    if method == "vanilla":
        return ("vanilla", None, False)
    if method == "rand-cl":
        return ("rand", "pcl", False)
    anti = False
    rest = method
    if rest.startswith("anti-"):
        anti = True
        rest = rest[len("anti-"):]
    if "-" not in rest:
        raise BadSpec(f"malformed method id {method!r}")
    scoring, trainer = rest.rsplit("-", 1)
    if trainer not in ("gcl", "pcl"):
        raise BadSpec(f"unknown trainer in method {method!r}")
    if scoring not in MODEL_SCORINGS + TEXT_SCORINGS + ("oracle", "rand"):
        raise BadSpec(f"unknown scoring in method {method!r}")
    return (scoring, trainer, anti)


def derive_seed(master_seed: int, *parts) -> int:
    payload = "|".join(str(p) for p in (master_seed,) + parts)
    return int.from_bytes(hashlib.sha256(payload.encode()).digest()[:8], "big")


def trainee_spec(d: Dataset, cfg: ExperimentConfig) -> ModelSpec:
    if d.kind == "tokens":
        return ModelSpec((cfg.embed_dim, *cfg.hidden_sizes, d.class_count), vocab_size=d.vocab_size)
    return ModelSpec((d.feature_dim(), *cfg.hidden_sizes, d.class_count))


def scorer_spec(d: Dataset, cfg: ExperimentConfig) -> ModelSpec:
    if d.kind == "tokens":
        return ModelSpec((cfg.embed_dim, *cfg.scorer_hidden_sizes, d.class_count), vocab_size=d.vocab_size)
    return ModelSpec((d.feature_dim(), *cfg.scorer_hidden_sizes, d.class_count))


# ---------------------------------------------------------------------------
# epoch budget calibration


def stratified_split(d: Dataset, fraction: float, rng: Rng):
    """Stratified (1-fraction)/fraction split; returns (train, holdout)."""
    from .core import class_indices, largest_remainder

    gen = rng.generator
    hold = []
    sizes = d.class_sizes()
    per_class_hold = largest_remainder(sizes * fraction, int(round(len(d) * fraction)))
    for c, members in enumerate(class_indices(d.labels, d.class_count)):
        perm = members[gen.permutation(len(members))]
        take = min(int(per_class_hold[c]), max(len(members) - 1, 0))
        hold.extend(int(i) for i in perm[:take])
    hold_set = set(hold)
    train = [i for i in range(len(d)) if i not in hold_set]
    return d.subset(train), d.subset(sorted(hold))


def calibrate_epochs(d: Dataset, cfg: ExperimentConfig, patience: int | None = None) -> int:
    """Train on an 80/20 stratified split until validation accuracy stops
    improving for `patience` epochs; budget is 3x the best epoch (>= 3).
    One budget is shared by every method in the experiment."""
    patience = cfg.patience if patience is None else patience
    rng = Rng(derive_seed(cfg.master_seed, "calibration"), "calib")
    tr, val = stratified_split(d, 0.2, rng.derive("split"))
    spec = trainee_spec(d, cfg)
    params = init_model(spec, rng.derive("init"))
    train_cfg = TrainConfig(
        epochs=1,
        batch_size=cfg.batch_size,
        learning_rate=cfg.learning_rate,
        optimizer=cfg.optimizer,
    )
    from .nn import Optimizer, train_epoch

    params = params.copy()
    opt = Optimizer(train_cfg, params)
    shuffle_rng = rng.derive("shuffle")
    best_acc = -1.0
    best_epoch = 1
    stale = 0
    for epoch in range(1, cfg.calibration_max_epochs + 1):
        train_epoch(params, opt, tr, range(len(tr)), cfg.batch_size, shuffle_rng)
        acc = evaluate(params, val)
        if acc > best_acc:
            best_acc = acc
            best_epoch = epoch
            stale = 0
        else:
            stale += 1
            if stale >= patience:
                break
    return max(cfg.budget_multiplier * best_epoch, 3)


# ---------------------------------------------------------------------------
# experiment execution


@dataclass
class MethodResult:
    method: str
    trial_max_accs: list
    mean: float
    std: float
    delta_vs_vanilla: float
    p_value: float


@dataclass
class Report:
    methods: list  # MethodResult, in config order
    curves: dict  # (method, trial) -> list of (epoch, acc)
    traces: dict  # (method, trial) -> list of epoch record dicts
    epoch_budget: int


def paired_sign_flip_p(diffs) -> float:
    """Exact two-sided sign-flip permutation test on paired differences."""
    diffs = np.asarray(diffs, dtype=np.float64)
    n = len(diffs)
    observed = abs(diffs.mean())
    count = 0
    total = 1 << n
    for mask in range(total):
        signs = np.array([1.0 if mask & (1 << i) else -1.0 for i in range(n)])
        if abs((signs * diffs).mean()) >= observed - 1e-12:
            count += 1
    return count / total


def compute_method_scores(method: str, d: Dataset, cfg: ExperimentConfig, budget: int, clean_mask=None, sentences=None, cache=None) -> ScoreVector | None:
    """Score vector for a method, or None for vanilla. Scores are fixed per
    method (scoring seeds do not vary across trials)."""
    scoring, _, anti = parse_method(method)
    if scoring == "vanilla":
        return None
    key = None
    if cache is not None:
        key = (method, d.digest())
        if key in cache:
            return cache[key]

    if scoring == "rand":
        scores = uniform_scores(len(d))
    elif scoring == "oracle":
        if clean_mask is None:
            raise BadSpec("oracle scoring needs a synthetic dataset with a clean mask")
        scores = oracle_scores(clean_mask)
    elif scoring in TEXT_SCORINGS:
        if sentences is None:
            raise BadSpec(f"{method} needs a text dataset")
        family, direction = scoring.split("-")
        if family == "sl":
            scores = scoring_text.sentence_length_scores(
                sentences,
                scoring_text.LONG_EASY if direction == "long" else scoring_text.SHORT_EASY,
            )
        else:
            order = {"ug": 1, "bg": 2, "tg": 3}[family]
            scores = scoring_text.ngram_scores(
                sentences,
                order,
                scoring_text.HIGH_ENTROPY_EASY if direction == "high" else scoring_text.LOW_ENTROPY_EASY,
            )
    else:
        transfer = scoring in ("tl", "etl", "cvtl", "ecvtl")
        cross = scoring in ("cvst", "ecvst", "cvtl", "ecvtl")
        ensemble = scoring.startswith("e")
        spec = scorer_spec(d, cfg) if transfer else trainee_spec(d, cfg)
        run_cfg = ScoringRunConfig(
            scorer_spec=spec,
            train_cfg=TrainConfig(
                epochs=budget,
                batch_size=cfg.batch_size,
                learning_rate=cfg.learning_rate,
                optimizer=cfg.optimizer,
            ),
            ensemble_runs=cfg.ensemble_runs if ensemble else 1,
            cross_validated=cross,
            trainee_spec=trainee_spec(d, cfg),
        )
        score_rng = Rng(derive_seed(cfg.master_seed, "scoring", scoring), "score")
        if ensemble:
            scores = scoring_model.ensemble_model_scores(d, run_cfg, score_rng, transfer=transfer)
        elif cross:
            scores = scoring_model.cross_validated_scores(d, run_cfg, score_rng)
        elif transfer:
            scores = scoring_model.transfer_scores(d, run_cfg, score_rng)
        else:
            scores = scoring_model.self_thought_scores(d, run_cfg, score_rng)

    if anti:
        scores = scoring_model.invert_scores(scores)
    if cache is not None:
        cache[key] = scores
    return scores


def run_experiment(cfg: ExperimentConfig, d: Dataset, eval_set: Dataset, clean_mask=None, sentences=None) -> Report:
    """Run every (method, trial) pair and aggregate max accuracies.

    Trainee init seeds vary per trial; scoring seeds are fixed per method,
    so a method's score vector is computed once and reused across trials.
    """
    for m in cfg.methods:
        parse_method(m)  # fail fast on typos
    if cfg.epoch_budget is not None:
        budget = max(cfg.epoch_budget, 3)
    else:
        budget = calibrate_epochs(d, cfg)
    spec = trainee_spec(d, cfg)
    train_cfg = TrainConfig(
        epochs=budget,
        batch_size=cfg.batch_size,
        learning_rate=cfg.learning_rate,
        optimizer=cfg.optimizer,
    )
    score_cache = {}
    seen_seeds = set()
    per_method = []
    curves = {}
    traces = {}
    for method in cfg.methods:
        scoring, trainer, _ = parse_method(method)
        scores = compute_method_scores(
            method, d, cfg, budget, clean_mask=clean_mask, sentences=sentences, cache=score_cache
        )
        accs = []
        for trial in range(cfg.trials):
            seed = derive_seed(cfg.master_seed, "trial", method, trial)
            assert seed not in seen_seeds, "seed collision across (method, trial)"
            seen_seeds.add(seed)
            rng = Rng(seed, "run")
            if scoring == "vanilla":
                trace = vanilla_train(d, spec, train_cfg, eval_set, rng, cfg.eval_stride)
            elif trainer == "gcl":
                trace = gcl_train(d, scores, spec, train_cfg, eval_set, rng, cfg.eval_stride)
            else:
                trace = pcl_train(d, scores, spec, train_cfg, eval_set, rng, cfg.eval_stride)
            accs.append(trace.max_accuracy)
            curves[(method, trial)] = [
                (r.epoch, r.eval_accuracy) for r in trace.epochs if r.eval_accuracy is not None
            ]
            traces[(method, trial)] = [
                {
                    "epoch": r.epoch,
                    "subset_size": r.subset_size,
                    "subset_digest": r.subset_digest,
                    "train_loss": r.train_loss,
                    "eval_accuracy": r.eval_accuracy,
                }
                for r in trace.epochs
            ]
        per_method.append((method, accs))

    vanilla_accs = None
    for method, accs in per_method:
        if method == "vanilla":
            vanilla_accs = accs
            break
    results = []
    for method, accs in per_method:
        mean = float(np.mean(accs))
        std = float(np.std(accs))
        if vanilla_accs is not None and len(vanilla_accs) == len(accs):
            delta = mean - float(np.mean(vanilla_accs))
            p = paired_sign_flip_p(np.asarray(accs) - np.asarray(vanilla_accs))
        else:
            delta = float("nan")
            p = float("nan")
        results.append(MethodResult(method, list(accs), mean, std, delta, p))
    return Report(methods=results, curves=curves, traces=traces, epoch_budget=budget)


# ---------------------------------------------------------------------------
# report output


def default_output_dir() -> Path:
    return Path(os.environ.get(OUTPUT_DIR_ENV, "out"))


def write_report(report: Report, outdir, figures: bool = True) -> dict:
    """Emit traces (JSON lines), the method table (CSV), per-epoch accuracy
    curves (CSV) and, unless disabled, matplotlib figures."""
    outdir = Path(outdir)
    try:
        outdir.mkdir(parents=True, exist_ok=True)
        paths = {
            "traces": outdir / "traces.jsonl",
            "table": outdir / "table.csv",
            "curves": outdir / "curves.csv",
            "trials": outdir / "trials.csv",
        }
        with open(paths["traces"], "w") as fh:
            fh.write(json.dumps({"epoch_budget": report.epoch_budget}) + "\n")
            for (method, trial), records in report.traces.items():
                fh.write(
                    json.dumps({"method": method, "trial": trial, "epochs": records}) + "\n"
                )
        with open(paths["table"], "w") as fh:
            fh.write("method,mean_max_acc,std,delta_vs_vanilla,p_value\n")
            for r in report.methods:
                fh.write(
                    f"{r.method},{r.mean!r},{r.std!r},{r.delta_vs_vanilla!r},{r.p_value!r}\n"
                )
        with open(outdir / "trials.csv", "w") as fh:
            fh.write("method,trial,max_acc\n")
            for r in report.methods:
                for t, a in enumerate(r.trial_max_accs):
                    fh.write(f"{r.method},{t},{a!r}\n")
        with open(paths["curves"], "w") as fh:
            fh.write("method,trial,epoch,acc\n")
            for (method, trial), points in report.curves.items():
                for epoch, acc in points:
                    fh.write(f"{method},{trial},{epoch},{acc!r}\n")
        if figures:
            paths.update(render_figures(report, outdir))
        return paths
    except OSError as exc:
        raise IoError(str(exc)) from exc


def render_figures(report: Report, outdir) -> dict:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    outdir = Path(outdir)
    figdir = outdir / "figures"
    figdir.mkdir(exist_ok=True)

    methods = [r.method for r in report.methods]

    fig, ax = plt.subplots(figsize=(7, 4.5))
    for method in methods:
        per_epoch = {}
        for (m, _trial), points in report.curves.items():
            if m != method:
                continue
            for epoch, acc in points:
                per_epoch.setdefault(epoch, []).append(acc)
        epochs = sorted(per_epoch)
        means = [np.mean(per_epoch[e]) for e in epochs]
        ax.plot(epochs, means, label=method, linewidth=1.2)
    ax.set_xlabel("epoch")
    ax.set_ylabel("test accuracy (mean over trials)")
    ax.legend(fontsize=8)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    curves_png = figdir / "accuracy_curves.png"
    fig.savefig(curves_png, dpi=150)
    plt.close(fig)

    fig, ax = plt.subplots(figsize=(7, 4.5))
    means = [r.mean for r in report.methods]
    stds = [r.std for r in report.methods]
    ax.bar(range(len(methods)), means, yerr=stds, capsize=3, color="#4878a8")
    ax.set_xticks(range(len(methods)))
    ax.set_xticklabels(methods, rotation=30, ha="right", fontsize=8)
    ax.set_ylabel("mean max accuracy")
    ax.grid(axis="y", alpha=0.3)
    fig.tight_layout()
    bars_png = figdir / "max_accuracy.png"
    fig.savefig(bars_png, dpi=150)
    plt.close(fig)

    return {"curves_fig": curves_png, "bars_fig": bars_png}


def read_report(outdir) -> Report:
    """Rebuild a Report from write_report's files (round-trip exact)."""
    outdir = Path(outdir)
    traces = {}
    epoch_budget = None
    with open(outdir / "traces.jsonl") as fh:
        for line in fh:
            rec = json.loads(line)
            if "epoch_budget" in rec and "method" not in rec:
                epoch_budget = rec["epoch_budget"]
                continue
            traces[(rec["method"], rec["trial"])] = rec["epochs"]
    curves = {}
    with open(outdir / "curves.csv") as fh:
        next(fh)
        for line in fh:
            method, trial, epoch, acc = line.rstrip("\n").split(",")
            curves.setdefault((method, int(trial)), []).append((int(epoch), float(acc)))
    trial_accs = {}
    with open(outdir / "trials.csv") as fh:
        next(fh)
        for line in fh:
            method, trial, acc = line.rstrip("\n").split(",")
            trial_accs.setdefault(method, []).append(float(acc))
    methods = []
    with open(outdir / "table.csv") as fh:
        next(fh)
        for line in fh:
            method, mean, std, delta, p = line.rstrip("\n").split(",")
            methods.append(
                MethodResult(
                    method,
                    trial_accs.get(method, []),
                    float(mean),
                    float(std),
                    float(delta),
                    float(p),
                )
            )
    return Report(methods=methods, curves=curves, traces=traces, epoch_budget=epoch_budget)
