"""Command-line entry point.

Commands: convert, stats, synth-embed, train, crossval, roc, predict,
baseline. Exit codes: 0 success, 2 usage/config errors, 3 data errors.
Experiments are driven by a single JSON config (see ``load_experiment_config``)
so runs are archivable; METAPHORNET_THREADS caps fold parallelism.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from .converters import convert_mohx, convert_trofi
from .data import (
    Dataset,
    dataset_stats,
    load_normalized,
    make_folds,
    write_fold_plan,
    write_normalized,
)
from .embeddings import load_embeddings, synth_embeddings, validate_coverage, write_embeddings
from .errors import ConfigError, DataError, MetaphorNetError
from .evaluation import (
    baseline_crossval,
    crossval,
    fold_parallelism_from_env,
    load_predictions_jsonl,
    roc_and_auc,
    write_predictions_jsonl,
    write_results_csv,
    write_roc_csv,
)
from .model import ModelConfig, load_checkpoint, save_checkpoint
from .rocplot import write_roc_svg
from .training import TrainConfig, predict, train, write_history_csv

USAGE_EXIT = 2
DATA_EXIT = 3


@dataclass
class ExperimentConfig:
    dataset: Path
    embeddings: Path | None          # exactly one of embeddings / synthetic is set
    synthetic: dict | None
    model: ModelConfig
    train: TrainConfig
    k: int
    fold_seed: int
    output_dir: Path
    model_name: str = "metaphornet"
    dataset_name: str | None = None


def load_experiment_config(path) -> ExperimentConfig:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        obj = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc

    def field(name, default=None, required=False):
        if required and name not in obj:
            raise ConfigError(f"config field {name!r} is required")
        return obj.get(name, default)

    dataset = Path(field("dataset", required=True))
    if not dataset.exists():
        raise ConfigError(f"config field 'dataset': file not found: {dataset}")
    emb = field("embeddings", required=True)
    embeddings_path, synthetic = None, None
    if isinstance(emb, dict):
        synthetic = emb.get("synthetic")
        if not isinstance(synthetic, dict) or "dim" not in synthetic:
            raise ConfigError("config field 'embeddings': synthetic spec needs at least 'dim'")
    else:
        embeddings_path = Path(emb)
        if not embeddings_path.exists():
            raise ConfigError(f"config field 'embeddings': file not found: {embeddings_path}")
    try:
        model = ModelConfig(**field("model", {}))
    except (TypeError, MetaphorNetError) as exc:
        raise ConfigError(f"config field 'model': {exc}") from exc
    try:
        train_cfg = TrainConfig(**field("train", {}))
    except (TypeError, MetaphorNetError) as exc:
        raise ConfigError(f"config field 'train': {exc}") from exc
    k = field("k", 10)
    fold_seed = field("fold_seed", 42)
    if not isinstance(k, int) or k < 2:
        raise ConfigError(f"config field 'k': expected an integer >= 2, got {k!r}")
    if not isinstance(fold_seed, int):
        raise ConfigError(f"config field 'fold_seed': expected an integer, got {fold_seed!r}")
    return ExperimentConfig(
        dataset=dataset,
        embeddings=embeddings_path,
        synthetic=synthetic,
        model=model,
        train=train_cfg,
        k=k,
        fold_seed=fold_seed,
        output_dir=Path(field("output_dir", required=True)),
        model_name=field("model_name", "metaphornet"),
        dataset_name=field("dataset_name"),
    )


def _resolve_embeddings(config: ExperimentConfig, dataset: Dataset):
    if config.embeddings is not None:
        return load_embeddings(config.embeddings)
    spec = config.synthetic
    return synth_embeddings(
        dataset,
        dim=int(spec["dim"]),
        seed=int(spec.get("seed", 0)),
        separability=float(spec.get("separability", 1.0)),
    )


def _require_file(path: Path) -> Path:
    if not path.exists():
        raise ConfigError(f"file not found: {path}")
    return path


def cmd_convert(args) -> int:
    _require_file(Path(args.input))
    converter = convert_trofi if getattr(args, "from") == "trofi" else convert_mohx
    result = converter(args.input)
    write_normalized(result.dataset, args.out)
    stats = dataset_stats(result.dataset)
    print(result.report.describe())
    print(
        f"{result.dataset.name}: examples={stats.count} "
        f"metaphor={stats.metaphor_fraction:.1%} unique_verbs={stats.unique_verbs}"
    )
    print(f"wrote {args.out}")
    return 0


def cmd_stats(args) -> int:
    dataset = load_normalized(_require_file(Path(args.dataset)))
    stats = dataset_stats(dataset)
    print(
        f"{dataset.name}: examples={stats.count} "
        f"metaphor={stats.metaphor_fraction:.1%} unique_verbs={stats.unique_verbs}"
    )
    return 0


def cmd_synth_embed(args) -> int:
    dataset = load_normalized(_require_file(Path(args.dataset)))
    embeddings = synth_embeddings(dataset, dim=args.dim, seed=args.seed, separability=args.separability)
    write_embeddings(embeddings, args.out)
    print(f"wrote {args.out} ({len(embeddings.vectors)} records, dim={embeddings.dim})")
    return 0


def cmd_train(args) -> int:
    dataset = load_normalized(_require_file(Path(args.dataset)))
    embeddings = load_embeddings(_require_file(Path(args.embeddings)))
    model_config = ModelConfig(
        embed_dim=embeddings.dim, lstm_hidden=args.hidden, heads=args.heads, seed=args.seed
    )
    train_config = TrainConfig(
        learning_rate=args.lr, batch_size=args.batch_size, epochs=args.epochs, seed=args.seed
    )
    result = train(dataset, embeddings, model_config, train_config,
                   log=lambda rec: print(f"epoch {rec.epoch}: loss={rec.mean_loss:.4f} "
                                         f"acc={rec.train_accuracy:.3f}"))
    save_checkpoint(args.checkpoint, result.params, epoch=train_config.epochs)
    if args.history:
        write_history_csv(result.history, args.history)
    print(f"wrote {args.checkpoint}")
    return 0


def cmd_crossval(args) -> int:
    config = load_experiment_config(args.config)
    dataset = load_normalized(config.dataset)
    embeddings = _resolve_embeddings(config, dataset)
    coverage = validate_coverage(embeddings, dataset)
    if not coverage.ok:
        raise DataError(coverage.describe())
    out = config.output_dir
    out.mkdir(parents=True, exist_ok=True)
    report, histories = crossval(
        dataset,
        embeddings,
        config.model,
        config.train,
        k=config.k,
        fold_seed=config.fold_seed,
        n_threads=fold_parallelism_from_env(),
    )
    report.model = config.model_name
    report.dataset = config.dataset_name or dataset.name
    write_results_csv([report], out / "results.csv")
    write_roc_csv(report.roc_points, out / "roc.csv")
    write_predictions_jsonl(report.predictions, out / "predictions.jsonl")
    write_fold_plan(make_folds(dataset, config.k, config.fold_seed), out / "folds.json")
    for fold, history in enumerate(histories):
        write_history_csv(history, out / f"history_fold{fold}.csv")
    m = report.metrics
    print(f"model={report.model} dataset={report.dataset} k={config.k} fold_seed={config.fold_seed}")
    print(
        f"pooled: P={m.precision:.3f} R={m.recall:.3f} F1={m.f1:.3f} "
        f"Acc={m.accuracy:.3f} AUC={report.auc:.3f}"
    )
    print(f"wrote {out / 'results.csv'}")
    return 0


def cmd_roc(args) -> int:
    records = load_predictions_jsonl(_require_file(Path(args.predictions)))
    points, auc = roc_and_auc([r.score for r in records], [r.gold for r in records])
    write_roc_csv(points, args.out)
    if args.svg:
        write_roc_svg(points, auc, args.svg)
    print(f"AUC={auc:.6f}")
    return 0


def cmd_predict(args) -> int:
    params, _epoch = load_checkpoint(_require_file(Path(args.checkpoint)))
    dataset = load_normalized(_require_file(Path(args.dataset)))
    embeddings = load_embeddings(_require_file(Path(args.embeddings)))
    coverage = validate_coverage(embeddings, dataset)
    if coverage.missing or coverage.mismatched:
        raise DataError(coverage.describe())
    if embeddings.dim != params.config.embed_dim:
        raise DataError(
            f"embedding dim {embeddings.dim} does not match checkpoint "
            f"embed_dim {params.config.embed_dim}"
        )
    sink = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    try:
        for ex in dataset.examples:
            p = predict(params, embeddings, ex)
            sink.write(
                json.dumps({"id": ex.id, "gold": ex.label, "pred": p.label, "score": p.score}) + "\n"
            )
    finally:
        if args.out:
            sink.close()
    return 0


def cmd_baseline(args) -> int:
    dataset = load_normalized(_require_file(Path(args.dataset)))
    report = baseline_crossval(dataset, k=args.k, fold_seed=args.seed)
    if args.out:
        write_results_csv([report], args.out)
    m = report.metrics
    print(f"model=lexical_baseline dataset={dataset.name} k={args.k} fold_seed={args.seed}")
    print(
        f"pooled: P={m.precision:.3f} R={m.recall:.3f} F1={m.f1:.3f} "
        f"Acc={m.accuracy:.3f} AUC={report.auc:.3f}"
    )
    if report.skipped:
        print(f"skipped {report.skipped} examples without verb_index")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="metaphornet", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("convert", help="convert a raw corpus to normalized JSONL")
    p.add_argument("--from", choices=("trofi", "mohx"), required=True)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_convert)

    p = sub.add_parser("stats", help="print dataset statistics")
    p.add_argument("--dataset", required=True)
    p.set_defaults(fn=cmd_stats)

    p = sub.add_parser("synth-embed", help="write synthetic embeddings for a dataset")
    p.add_argument("--dataset", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--dim", type=int, default=32)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--separability", type=float, default=1.0)
    p.set_defaults(fn=cmd_synth_embed)

    p = sub.add_parser("train", help="train on a full dataset and save a checkpoint")
    p.add_argument("--dataset", required=True)
    p.add_argument("--embeddings", required=True)
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--history")
    p.add_argument("--hidden", type=int, default=256)
    p.add_argument("--heads", type=int, default=4)
    p.add_argument("--lr", type=float, default=0.00003)
    p.add_argument("--batch-size", type=int, default=16)
    p.add_argument("--epochs", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_train)

    p = sub.add_parser("crossval", help="run a k-fold cross-validation experiment")
    p.add_argument("--config", required=True)
    p.set_defaults(fn=cmd_crossval)

    p = sub.add_parser("roc", help="ROC/AUC artifacts from a predictions file")
    p.add_argument("--predictions", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--svg")
    p.set_defaults(fn=cmd_roc)

    p = sub.add_parser("predict", help="score a dataset with a trained checkpoint")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--dataset", required=True)
    p.add_argument("--embeddings", required=True)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_predict)

    p = sub.add_parser("baseline", help="cross-validate the lexical baseline")
    p.add_argument("--dataset", required=True)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_baseline)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_EXIT
    except MetaphorNetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_EXIT


if __name__ == "__main__":
    raise SystemExit(main())
