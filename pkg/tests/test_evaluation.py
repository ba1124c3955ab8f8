import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import confusion_recount, pairwise_auc

from metaphornet.data import Dataset, Example
from metaphornet.embeddings import synth_embeddings
from metaphornet.errors import ArgumentError, UndefinedMetricError
from metaphornet.evaluation import (
    Confusion,
    baseline_crossval,
    confusion,
    crossval,
    lexical_baseline,
    prf1_acc,
    roc_and_auc,
    write_results_csv,
)
from metaphornet.model import ModelConfig
from metaphornet.synthcorpus import make_synthetic_dataset
from metaphornet.training import TrainConfig


class TestConfusion:
    def test_all_correct(self):
        c = confusion([1, 1, 0, 0], [1, 1, 0, 0])
        assert (c.tp, c.fp, c.fn, c.tn) == (2, 0, 0, 2)

    def test_all_predicted_positive(self):
        c = confusion([1, 1, 1, 1], [1, 1, 0, 0])
        assert (c.tp, c.fp, c.fn, c.tn) == (2, 2, 0, 0)

    def test_matches_brute_force_recount(self):
        rng = np.random.default_rng(17)
        preds = rng.integers(0, 2, size=50).tolist()
        golds = rng.integers(0, 2, size=50).tolist()
        c = confusion(preds, golds)
        assert (c.tp, c.fp, c.fn, c.tn) == confusion_recount(preds, golds)
        assert c.total == 50

    def test_length_mismatch(self):
        with pytest.raises(ArgumentError):
            confusion([1], [1, 0])

    def test_empty(self):
        with pytest.raises(ArgumentError):
            confusion([], [])


class TestMetrics:
    def test_hand_worked_case(self):
        m = prf1_acc(Confusion(tp=2, fp=1, fn=1, tn=3))
        assert abs(m.precision - 2 / 3) < 1e-12
        assert abs(m.recall - 2 / 3) < 1e-12
        assert abs(m.f1 - 2 / 3) < 1e-12
        assert abs(m.accuracy - 5 / 7) < 1e-12
        assert m.degenerate == ()

    def test_perfect(self):
        m = prf1_acc(Confusion(tp=3, fp=0, fn=0, tn=4))
        assert (m.precision, m.recall, m.f1, m.accuracy) == (1.0, 1.0, 1.0, 1.0)

    def test_degenerate_precision_flagged(self):
        m = prf1_acc(Confusion(tp=0, fp=0, fn=2, tn=3))
        assert m.precision == 0.0
        assert "precision" in m.degenerate

    @given(
        tp=st.integers(0, 30), fp=st.integers(0, 30), fn=st.integers(1, 30), tn=st.integers(0, 30)
    )
    @settings(max_examples=200, deadline=None)
    def test_flipping_fn_to_tp_never_hurts(self, tp, fp, fn, tn):
        before = prf1_acc(Confusion(tp, fp, fn, tn))
        after = prf1_acc(Confusion(tp + 1, fp, fn - 1, tn))
        assert after.recall >= before.recall
        assert after.f1 >= before.f1
        assert after.accuracy >= before.accuracy


class TestRocAuc:
    def test_perfect_ranking(self):
        points, auc = roc_and_auc([0.9, 0.8, 0.3, 0.1], [1, 1, 0, 0])
        assert auc == 1.0
        assert points[0].threshold == math.inf and points[-1].threshold == -math.inf

    def test_all_scores_equal(self):
        _, auc = roc_and_auc([0.4] * 6, [1, 0, 1, 0, 1, 0])
        assert auc == 0.5

    def test_single_class_rejected(self):
        with pytest.raises(UndefinedMetricError):
            roc_and_auc([0.2, 0.8], [1, 1])

    def test_matches_pairwise_oracle(self):
        rng = np.random.default_rng(23)
        for trial in range(30):
            n = int(rng.integers(4, 30))
            golds = rng.integers(0, 2, size=n)
            if golds.min() == golds.max():
                golds[0] = 1 - golds[0]
            scores = np.round(rng.uniform(0, 1, size=n), 2)  # ties likely
            _, auc = roc_and_auc(scores, golds)
            assert abs(auc - pairwise_auc(scores, golds)) < 1e-12

    def test_points_monotone(self):
        rng = np.random.default_rng(5)
        scores = rng.uniform(0, 1, size=40)
        golds = rng.integers(0, 2, size=40)
        golds[:2] = [0, 1]
        points, _ = roc_and_auc(scores, golds)
        for prev, cur in zip(points, points[1:]):
            assert cur.fpr >= prev.fpr and cur.tpr >= prev.tpr
            assert cur.threshold <= prev.threshold

    def test_invariant_under_increasing_transforms(self):
        rng = np.random.default_rng(31)
        scores = rng.uniform(0.01, 0.99, size=25)
        golds = rng.integers(0, 2, size=25)
        golds[:2] = [0, 1]
        _, base = roc_and_auc(scores, golds)
        _, cubed = roc_and_auc(scores**3, golds)
        _, squashed = roc_and_auc(1 / (1 + np.exp(-5 * scores)), golds)
        assert abs(base - cubed) < 1e-12
        assert abs(base - squashed) < 1e-12


def _verb_dataset(rows):
    # rows: list of (verb, label)
    examples = tuple(
        Example(f"e{i}", ("they", verb, "it", "."), label, 1)
        for i, (verb, label) in enumerate(rows)
    )
    return Dataset("verbs", examples)


class TestLexicalBaseline:
    def test_majority_metaphor_verb(self):
        train_set = _verb_dataset([("sit", 1), ("sit", 1), ("sit", 1), ("sit", 0)])
        test_set = _verb_dataset([("sit", 0)])
        result = lexical_baseline(train_set, test_set)
        assert result.predictions[0].pred == 1

    def test_unseen_verb_predicts_literal(self):
        result = lexical_baseline(_verb_dataset([("sit", 1)]), _verb_dataset([("fly", 1)]))
        assert result.predictions[0].pred == 0

    def test_tie_predicts_literal(self):
        train_set = _verb_dataset([("sit", 1), ("sit", 0)])
        result = lexical_baseline(train_set, _verb_dataset([("sit", 1)]))
        assert result.predictions[0].pred == 0

    def test_missing_verb_index_skipped_and_counted(self):
        test_set = Dataset("t", (Example("x", ("nothing",), 1, None),))
        result = lexical_baseline(_verb_dataset([("sit", 1)]), test_set)
        assert result.skipped == 1
        assert result.predictions == ()

    def test_single_verb_dataset_majority_rule(self):
        rows = [("march", 1)] * 6 + [("march", 0)] * 2
        report = baseline_crossval(_verb_dataset(rows), k=2, fold_seed=0)
        # majority is metaphor in every training split: recall 1, low tn
        assert report.metrics.recall == 1.0
        assert report.confusion.tn == 0


class TestCrossval:
    def test_pooled_equals_sum_of_folds(self, mohx_dataset):
        report = baseline_crossval(mohx_dataset, k=10, fold_seed=42)
        summed = Confusion()
        for fr in report.per_fold:
            summed = summed + fr.confusion
        assert summed == report.confusion
        assert report.confusion.total == len(mohx_dataset)

    def test_neural_crossval_on_separable_data(self):
        ds = make_synthetic_dataset(40, seed=6)
        emb = synth_embeddings(ds, dim=16, seed=6, separability=1.0)
        report, histories = crossval(
            ds,
            emb,
            ModelConfig(embed_dim=16, lstm_hidden=8, heads=2, seed=0),
            TrainConfig(learning_rate=0.01, batch_size=8, epochs=25, seed=0),
            k=5,
            fold_seed=1,
        )
        assert report.metrics.accuracy >= 0.9
        assert len(histories) == 5 and all(len(h) == 25 for h in histories)
        assert len(report.predictions) == 40

    def test_constant_scores_give_half_auc(self):
        _, auc = roc_and_auc([0.5] * 10, [1, 0] * 5)
        assert abs(auc - 0.5) < 1e-12

    def test_results_csv_schema(self, tmp_path, mohx_dataset):
        report = baseline_crossval(mohx_dataset, k=10, fold_seed=42)
        out = tmp_path / "results.csv"
        write_results_csv([report], out)
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "model,dataset,fold,P,R,F1,Acc,AUC"
        assert len(lines) == 1 + 10 + 1
        assert lines[-1].split(",")[2] == "pooled"
