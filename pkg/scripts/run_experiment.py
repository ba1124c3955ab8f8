#!/usr/bin/env python3
"""End-to-end experiment driver: corpus -> embeddings -> 10-fold CV + baseline.

Runs the neural model and the lexical baseline on a normalized dataset and
emits the results table, ROC artifacts and per-fold histories. With real
MDEMB1 embeddings (see the exporter package) pass --embeddings; otherwise
synthetic embeddings stand in so the whole pipeline runs offline.

Mind the clock with full-size settings: the paper-scale configuration
(1024d embeddings, 256d hidden) on the TroFi-sized corpus takes hours on
one core; the defaults below are sized for minutes. Use --subset to trim
further, METAPHORNET_THREADS to parallelize folds.
"""

import argparse
import time
from pathlib import Path

from metaphornet.data import Dataset, load_normalized, write_fold_plan, make_folds
from metaphornet.embeddings import load_embeddings, synth_embeddings
from metaphornet.evaluation import (
    baseline_crossval,
    crossval,
    fold_parallelism_from_env,
    write_predictions_jsonl,
    write_results_csv,
    write_roc_csv,
)
from metaphornet.model import ModelConfig
from metaphornet.rocplot import write_roc_svg
from metaphornet.training import TrainConfig, write_history_csv


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dataset", required=True, help="normalized JSONL file")
    parser.add_argument("--embeddings", help="MDEMB1 file; omit for synthetic stand-ins")
    parser.add_argument("--synthetic-dim", type=int, default=64)
    parser.add_argument("--synthetic-separability", type=float, default=0.6)
    parser.add_argument("--subset", type=int, help="use only the first N examples")
    parser.add_argument("--hidden", type=int, default=64)
    parser.add_argument("--heads", type=int, default=4)
    parser.add_argument("--lr", type=float, default=0.001)
    parser.add_argument("--batch-size", type=int, default=16)
    parser.add_argument("--epochs", type=int, default=15)
    parser.add_argument("--k", type=int, default=10)
    parser.add_argument("--fold-seed", type=int, default=42)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out-dir", default="out", type=Path)
    args = parser.parse_args()

    dataset = load_normalized(args.dataset)
    if args.subset:
        dataset = Dataset(dataset.name, dataset.examples[: args.subset])
    if args.embeddings:
        embeddings = load_embeddings(args.embeddings)
        label = f"ours+{embeddings.provider}"
    else:
        embeddings = synth_embeddings(
            dataset, dim=args.synthetic_dim, seed=args.seed, separability=args.synthetic_separability
        )
        label = "ours+synthetic"
    model_config = ModelConfig(
        embed_dim=embeddings.dim, lstm_hidden=args.hidden, heads=args.heads, seed=args.seed
    )
    train_config = TrainConfig(
        learning_rate=args.lr, batch_size=args.batch_size, epochs=args.epochs, seed=args.seed
    )

    out = args.out_dir
    out.mkdir(parents=True, exist_ok=True)
    threads = fold_parallelism_from_env()
    print(f"{dataset.name}: {len(dataset)} examples, k={args.k}, threads={threads}")

    started = time.perf_counter()
    report, histories = crossval(
        dataset, embeddings, model_config, train_config,
        k=args.k, fold_seed=args.fold_seed, n_threads=threads,
    )
    report.model = label
    print(f"neural CV finished in {time.perf_counter() - started:.1f}s")

    base_report = baseline_crossval(dataset, k=args.k, fold_seed=args.fold_seed)
    write_results_csv([report, base_report], out / "results.csv")
    write_roc_csv(report.roc_points, out / "roc.csv")
    write_roc_svg(report.roc_points, report.auc, out / "roc.svg")
    write_predictions_jsonl(report.predictions, out / "predictions.jsonl")
    write_fold_plan(make_folds(dataset, args.k, args.fold_seed), out / "folds.json")
    for fold, history in enumerate(histories):
        write_history_csv(history, out / f"history_fold{fold}.csv")

    for rep in (report, base_report):
        m = rep.metrics
        print(
            f"{rep.model:>18}: P={m.precision:.3f} R={m.recall:.3f} F1={m.f1:.3f} "
            f"Acc={m.accuracy:.3f} AUC={rep.auc:.3f}"
        )
    print(f"artifacts in {out}/")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
