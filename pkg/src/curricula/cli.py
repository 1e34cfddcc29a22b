"""Command-line interface.

Subcommands:
  score       compute a score vector for one method, write index<TAB>score
  train       run a single (method, seed) training and dump its trace
  experiment  run a full method x trial grid and write a report
  report      re-render tables and figures from an existing traces file

A JSON config file supplies ExperimentConfig fields; flags override it.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import harness
from .core import Rng
from .errors import CurriculaError
from .harness import BlobSpec, ExperimentConfig
from .nn import TrainConfig
from .trainers import gcl_train, pcl_train, vanilla_train


def _add_data_args(p):
    p.add_argument("--data", help="dataset path (idx: 'images,labels'; csv; tsv)")
    p.add_argument("--data-format", choices=["idx", "csv", "tsv_text"], default="csv")
    p.add_argument("--synth", action="store_true", help="use a synthetic blob dataset")
    p.add_argument("--classes", type=int, default=4)
    p.add_argument("--per-class", type=int, default=150)
    p.add_argument("--dim", type=int, default=10)
    p.add_argument("--sigma", type=float, default=0.35)
    p.add_argument("--noise-fraction", type=float, default=0.2)
    p.add_argument("--test-per-class", type=int, default=50)


def _load_data(args, cfg):
    """Returns (train, eval_set, clean_mask, sentences)."""
    if args.synth or not args.data:
        spec = BlobSpec(args.classes, args.per_class, args.dim, args.sigma, args.noise_fraction)
        rng = Rng(harness.derive_seed(cfg.master_seed, "data"), "data")
        d, clean = harness.synth_dataset(spec, rng.derive("train"))
        test_spec = BlobSpec(args.classes, args.test_per_class, args.dim, args.sigma, 0.0)
        eval_set, _ = harness.synth_dataset(test_spec, rng.derive("test"))
        return d, eval_set, clean, None
    loaded = harness.load_dataset(args.data, args.data_format)
    if args.data_format == "tsv_text":
        d, sentences, _vocab = loaded
        return d, d, None, sentences
    return loaded, loaded, None, None


def _config_from(args) -> ExperimentConfig:
    fields = {}
    if getattr(args, "config", None):
        fields.update(json.loads(Path(args.config).read_text()))
    for name in (
        "methods",
        "trials",
        "master_seed",
        "epoch_budget",
        "batch_size",
        "learning_rate",
        "patience",
        "ensemble_runs",
    ):
        val = getattr(args, name, None)
        if val is not None:
            fields[name] = val
    fields.setdefault("methods", ["vanilla"])
    return ExperimentConfig(**fields)


def _out_dir(args) -> Path:
    if args.out:
        return Path(args.out)
    return harness.default_output_dir()


def cmd_score(args) -> int:
    cfg = _config_from(args)
    d, _eval, clean, sentences = _load_data(args, cfg)
    budget = cfg.epoch_budget if cfg.epoch_budget else 10
    scores = harness.compute_method_scores(
        f"{args.method}-pcl",  # scoring ids carry no trainer; any suffix works
        d,
        cfg,
        budget,
        clean_mask=clean,
        sentences=sentences,
    )
    out = _out_dir(args)
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"scores_{args.method}.tsv"
    harness.save_scores(scores, path)
    print(f"wrote {path}")
    return 0


def cmd_train(args) -> int:
    cfg = _config_from(args)
    d, eval_set, clean, sentences = _load_data(args, cfg)
    scoring, trainer, _ = harness.parse_method(args.method)
    budget = cfg.epoch_budget if cfg.epoch_budget else harness.calibrate_epochs(d, cfg)
    spec = harness.trainee_spec(d, cfg)
    train_cfg = TrainConfig(
        epochs=budget,
        batch_size=cfg.batch_size,
        learning_rate=cfg.learning_rate,
        optimizer=cfg.optimizer,
    )
    rng = Rng(harness.derive_seed(cfg.master_seed, "trial", args.method, args.trial), "run")
    if scoring == "vanilla":
        trace = vanilla_train(d, spec, train_cfg, eval_set, rng)
    else:
        scores = harness.compute_method_scores(
            args.method, d, cfg, budget, clean_mask=clean, sentences=sentences
        )
        trainer_fn = gcl_train if trainer == "gcl" else pcl_train
        trace = trainer_fn(d, scores, spec, train_cfg, eval_set, rng)
    out = _out_dir(args)
    out.mkdir(parents=True, exist_ok=True)
    trace_path = out / f"trace_{args.method}_t{args.trial}.jsonl"
    with open(trace_path, "w") as fh:
        for r in trace.epochs:
            fh.write(
                json.dumps(
                    {
                        "epoch": r.epoch,
                        "subset_size": r.subset_size,
                        "subset_digest": r.subset_digest,
                        "train_loss": r.train_loss,
                        "eval_accuracy": r.eval_accuracy,
                    }
                )
                + "\n"
            )
    params_path = out / f"params_{args.method}_t{args.trial}.npz"
    harness.save_params(trace.final_params, params_path)
    print(f"max_accuracy={trace.max_accuracy:.4f}")
    print(f"wrote {trace_path} and {params_path}")
    return 0


def cmd_experiment(args) -> int:
    cfg = _config_from(args)
    d, eval_set, clean, sentences = _load_data(args, cfg)
    report = harness.run_experiment(cfg, d, eval_set, clean_mask=clean, sentences=sentences)
    out = _out_dir(args)
    paths = harness.write_report(report, out, figures=not args.no_figures)
    print(f"epoch budget: {report.epoch_budget}")
    for r in report.methods:
        print(
            f"{r.method:>14s}  mean={r.mean:.4f}  std={r.std:.4f}  "
            f"delta={r.delta_vs_vanilla:+.4f}  p={r.p_value:.3f}"
        )
    print(f"report in {out}")
    return 0


def cmd_report(args) -> int:
    report = harness.read_report(Path(args.traces))
    out = _out_dir(args) if args.out else Path(args.traces)
    harness.write_report(report, out, figures=not args.no_figures)
    for r in report.methods:
        print(f"{r.method:>14s}  mean={r.mean:.4f}  std={r.std:.4f}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="curricula", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file with ExperimentConfig fields")
    common.add_argument("--out", help="output directory (default: $CURRICULA_OUT or ./out)")
    common.add_argument("--master-seed", type=int, dest="master_seed")
    common.add_argument("--trials", type=int)
    common.add_argument("--epoch-budget", type=int, dest="epoch_budget")
    common.add_argument("--batch-size", type=int, dest="batch_size")
    common.add_argument("--learning-rate", type=float, dest="learning_rate")
    common.add_argument("--patience", type=int)
    common.add_argument("--ensemble-runs", type=int, dest="ensemble_runs")

    p = sub.add_parser("score", parents=[common], help="compute one score vector")
    _add_data_args(p)
    p.add_argument("--method", required=True, help="scoring id, e.g. st, ecvst, oracle, sl-long")
    p.set_defaults(fn=cmd_score)

    p = sub.add_parser("train", parents=[common], help="train one method once")
    _add_data_args(p)
    p.add_argument("--method", required=True, help="method id, e.g. st-gcl, ecvst-pcl, vanilla")
    p.add_argument("--trial", type=int, default=0)
    p.set_defaults(fn=cmd_train)

    p = sub.add_parser("experiment", parents=[common], help="run a full method grid")
    _add_data_args(p)
    p.add_argument("--methods", nargs="+", help="method ids")
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(fn=cmd_experiment)

    p = sub.add_parser("report", parents=[common], help="re-render tables/figures")
    p.add_argument("--traces", required=True, help="directory holding traces.jsonl etc.")
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(fn=cmd_report)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except CurriculaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
