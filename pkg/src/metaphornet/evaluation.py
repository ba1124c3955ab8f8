"""Metrics, ROC/AUC, the lexical baseline and the k-fold CV harness.

The positive class is always the metaphor class. Headline metrics are
computed over predictions pooled across folds; per-fold numbers are kept
alongside so either convention can be read off the results table.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .data import Dataset, FoldPlan, make_folds
from .embeddings import EmbeddingSet, validate_coverage
from .errors import ArgumentError, CoverageError, UndefinedMetricError
from .model import ModelConfig
from .training import TrainConfig, predict, train


@dataclass(frozen=True)
class Confusion:
    tp: int = 0
    fp: int = 0
    fn: int = 0
    tn: int = 0

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    def __add__(self, other: "Confusion") -> "Confusion":
        return Confusion(
            self.tp + other.tp, self.fp + other.fp, self.fn + other.fn, self.tn + other.tn
        )


@dataclass(frozen=True)
class Metrics:
    precision: float
    recall: float
    f1: float
    accuracy: float
    degenerate: tuple[str, ...] = ()


@dataclass(frozen=True)
class RocPoint:
    threshold: float
    fpr: float
    tpr: float


@dataclass(frozen=True)
class PredictionRecord:
    id: str
    gold: int
    pred: int
    score: float


def confusion(predictions, golds) -> Confusion:
    """Count tp/fp/fn/tn with metaphor (1) as the positive class."""
    predictions = list(predictions)
    golds = list(golds)
    if len(predictions) != len(golds):
        raise ArgumentError(f"length mismatch: {len(predictions)} predictions vs {len(golds)} golds")
    if not predictions:
        raise ArgumentError("confusion needs at least one prediction")
    tp = fp = fn = tn = 0
    for p, g in zip(predictions, golds):
        if g == 1:
            tp, fn = (tp + 1, fn) if p == 1 else (tp, fn + 1)
        else:
            fp, tn = (fp + 1, tn) if p == 1 else (fp, tn + 1)
    return Confusion(tp, fp, fn, tn)


def prf1_acc(c: Confusion) -> Metrics:
    """Precision/recall/F1 for the positive class plus accuracy.

    0/0 ratios are defined as 0 and flagged as degenerate instead of
    raising, so metric sweeps never crash.
    """
    if c.total == 0:
        raise ArgumentError("prf1_acc needs a non-empty confusion")
    degenerate: list[str] = []
    if c.tp + c.fp > 0:
        precision = c.tp / (c.tp + c.fp)
    else:
        precision = 0.0
        degenerate.append("precision")
    if c.tp + c.fn > 0:
        recall = c.tp / (c.tp + c.fn)
    else:
        recall = 0.0
        degenerate.append("recall")
    if precision + recall > 0:
        f1 = 2.0 * precision * recall / (precision + recall)
    else:
        f1 = 0.0
        degenerate.append("f1")
    accuracy = (c.tp + c.tn) / c.total
    return Metrics(precision, recall, f1, accuracy, tuple(degenerate))


def roc_and_auc(scores, golds) -> tuple[list[RocPoint], float]:
    """ROC points swept over distinct scores (with +/-inf sentinels) and
    the trapezoidal AUC, which equals pairwise concordance with ties at 1/2."""
    scores = np.asarray(list(scores), dtype=np.float64)
    golds = np.asarray(list(golds), dtype=np.int64)
    if scores.shape != golds.shape or scores.ndim != 1 or scores.size == 0:
        raise ArgumentError("roc_and_auc needs equal-length non-empty scores and golds")
    n_pos = int((golds == 1).sum())
    n_neg = int((golds == 0).sum())
    if n_pos == 0 or n_neg == 0:
        raise UndefinedMetricError("AUC undefined: gold labels contain a single class")

    order = np.argsort(-scores, kind="stable")
    points = [RocPoint(math.inf, 0.0, 0.0)]
    tp = fp = 0
    i = 0
    while i < scores.size:
        threshold = scores[order[i]]
        while i < scores.size and scores[order[i]] == threshold:
            if golds[order[i]] == 1:
                tp += 1
            else:
                fp += 1
            i += 1
        points.append(RocPoint(float(threshold), fp / n_neg, tp / n_pos))
    points.append(RocPoint(-math.inf, 1.0, 1.0))

    auc = 0.0
    for prev, cur in zip(points, points[1:]):
        auc += (cur.fpr - prev.fpr) * (cur.tpr + prev.tpr) / 2.0
    return points, auc


@dataclass(frozen=True)
class BaselineResult:
    predictions: tuple[PredictionRecord, ...]
    skipped: int  # test examples without a verb_index


def lexical_baseline(train_set: Dataset, test_set: Dataset) -> BaselineResult:
    """Predict metaphor iff the verb was metaphorical more often than literal
    in training; ties and unseen verbs default to literal (the majority class)."""
    counts: dict[str, list[int]] = {}
    for ex in train_set.examples:
        if ex.verb_index is None:
            continue
        verb = ex.tokens[ex.verb_index].lower()
        bucket = counts.setdefault(verb, [0, 0])
        bucket[ex.label] += 1
    records: list[PredictionRecord] = []
    skipped = 0
    for ex in test_set.examples:
        if ex.verb_index is None:
            skipped += 1
            continue
        lit, met = counts.get(ex.tokens[ex.verb_index].lower(), (0, 0))
        pred = 1 if met > lit else 0
        records.append(PredictionRecord(ex.id, ex.label, pred, float(pred)))
    return BaselineResult(tuple(records), skipped)


@dataclass(frozen=True)
class FoldResult:
    fold: int
    confusion: Confusion
    metrics: Metrics
    auc: float | None


@dataclass
class EvalReport:
    model: str
    dataset: str
    k: int
    fold_seed: int
    confusion: Confusion
    metrics: Metrics
    auc: float
    roc_points: list[RocPoint]
    per_fold: list[FoldResult]
    predictions: list[PredictionRecord]
    skipped: int = 0


def _fold_auc(records) -> float | None:
    try:
        _, auc = roc_and_auc([r.score for r in records], [r.gold for r in records])
        return auc
    except UndefinedMetricError:
        return None


def _assemble_report(model, dataset_name, k, fold_seed, fold_records, skipped=0) -> EvalReport:
    per_fold: list[FoldResult] = []
    pooled: list[PredictionRecord] = []
    for fold, records in enumerate(fold_records):
        c = confusion([r.pred for r in records], [r.gold for r in records])
        per_fold.append(FoldResult(fold, c, prf1_acc(c), _fold_auc(records)))
        pooled.extend(records)
    pooled_confusion = confusion([r.pred for r in pooled], [r.gold for r in pooled])
    roc_points, auc = roc_and_auc([r.score for r in pooled], [r.gold for r in pooled])
    return EvalReport(
        model=model,
        dataset=dataset_name,
        k=k,
        fold_seed=fold_seed,
        confusion=pooled_confusion,
        metrics=prf1_acc(pooled_confusion),
        auc=auc,
        roc_points=roc_points,
        per_fold=per_fold,
        predictions=pooled,
        skipped=skipped,
    )


def baseline_crossval(dataset: Dataset, k: int, fold_seed: int) -> EvalReport:
    """k-fold cross-validation of the lexical baseline."""
    plan = make_folds(dataset, k, fold_seed)
    fold_records = []
    skipped = 0
    for fold in range(plan.k):
        train_set = dataset.subset(plan.train_ids(fold), name=f"{dataset.name}-train")
        test_set = dataset.subset(plan.folds[fold], name=f"{dataset.name}-fold{fold}")
        result = lexical_baseline(train_set, test_set)
        skipped += result.skipped
        fold_records.append(result.predictions)
    return _assemble_report("lexical_baseline", dataset.name, plan.k, fold_seed, fold_records, skipped)


def crossval(
    dataset: Dataset,
    embeddings: EmbeddingSet,
    model_config: ModelConfig,
    train_config: TrainConfig,
    k: int,
    fold_seed: int,
    n_threads: int = 1,
    log=None,
) -> tuple[EvalReport, list]:
    """Train/evaluate over k stratified folds; returns the pooled report and
    the per-fold training histories.

    Per-fold model and shuffle seeds derive as ``seed + fold`` so folds
    differ but the whole run stays reproducible. Folds may run on a small
    thread pool; results are assembled in fold order either way.
    """
    coverage = validate_coverage(embeddings, dataset)
    if coverage.missing or coverage.mismatched:
        raise CoverageError(coverage.describe())
    if embeddings.dim != model_config.embed_dim:
        raise CoverageError(
            f"embedding dim {embeddings.dim} does not match model embed_dim {model_config.embed_dim}"
        )
    plan: FoldPlan = make_folds(dataset, k, fold_seed)

    def run_fold(fold: int):
        fold_model = replace(model_config, seed=model_config.seed + fold)
        fold_train = replace(train_config, seed=train_config.seed + fold)
        train_set = dataset.subset(plan.train_ids(fold), name=f"{dataset.name}-train")
        test_set = dataset.subset(plan.folds[fold], name=f"{dataset.name}-fold{fold}")
        result = train(train_set, embeddings, fold_model, fold_train, log=log)
        records = []
        for ex in test_set.examples:
            p = predict(result.params, embeddings, ex)
            records.append(PredictionRecord(ex.id, ex.label, p.label, p.score))
        return records, result.history

    if n_threads > 1:
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            outcomes = list(pool.map(run_fold, range(plan.k)))
    else:
        outcomes = [run_fold(fold) for fold in range(plan.k)]
    report = _assemble_report(
        "metaphornet", dataset.name, plan.k, fold_seed, [records for records, _ in outcomes]
    )
    return report, [history for _, history in outcomes]


def fold_parallelism_from_env(default: int = 1) -> int:
    """Thread cap from METAPHORNET_THREADS; silently falls back on nonsense."""
    raw = os.environ.get("METAPHORNET_THREADS", "")
    try:
        value = int(raw)
    except ValueError:
        return default
    return value if value >= 1 else default


# --- artifact writers -------------------------------------------------------

def write_results_csv(reports, path) -> None:
    """results.csv rows: model,dataset,fold,P,R,F1,Acc,AUC (+ pooled row)."""
    lines = ["model,dataset,fold,P,R,F1,Acc,AUC"]
    for report in reports:
        for fr in report.per_fold:
            auc = f"{fr.auc:.6f}" if fr.auc is not None else ""
            m = fr.metrics
            lines.append(
                f"{report.model},{report.dataset},{fr.fold},"
                f"{m.precision:.6f},{m.recall:.6f},{m.f1:.6f},{m.accuracy:.6f},{auc}"
            )
        m = report.metrics
        lines.append(
            f"{report.model},{report.dataset},pooled,"
            f"{m.precision:.6f},{m.recall:.6f},{m.f1:.6f},{m.accuracy:.6f},{report.auc:.6f}"
        )
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_roc_csv(points, path) -> None:
    lines = ["threshold,fpr,tpr"]
    for p in points:
        lines.append(f"{p.threshold:.6f},{p.fpr:.6f},{p.tpr:.6f}")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_predictions_jsonl(records, path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        for r in records:
            fh.write(json.dumps({"id": r.id, "gold": r.gold, "pred": r.pred, "score": r.score}) + "\n")


def load_predictions_jsonl(path) -> list[PredictionRecord]:
    records = []
    with Path(path).open("r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            records.append(PredictionRecord(obj["id"], obj["gold"], obj["pred"], obj["score"]))
    return records
