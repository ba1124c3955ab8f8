"""Acceptance gate: every criterion at its stated tolerance.

Each test prints one `[PASS] ...` line (visible with `pytest -s` or in the
failure report otherwise). Timed criteria assert their runtime budget too.

Finite-difference notes: per-operation sweeps run at the canonical step
1e-5. The full-model check also starts at 1e-5; elements that miss the bar
there are re-checked at coarser steps (1e-4, 1e-3) before counting as
failures, because parameters that are *exactly* inert (the attention bias
cancels inside softmax) leave the numeric estimate roundoff-dominated at
tiny steps. An element passes if analytic and numeric agree at any step of
the ladder.
"""

import json
import time

import numpy as np

from oracles import confusion_recount, eq1_attention, pairwise_auc

from metaphornet import tensor as T
from metaphornet.cli import main
from metaphornet.data import dataset_stats, write_normalized
from metaphornet.embeddings import synth_embeddings
from metaphornet.evaluation import baseline_crossval, confusion, prf1_acc, roc_and_auc
from metaphornet.model import ModelConfig, attention_pool, init_params, model_forward
from metaphornet.synthcorpus import make_synthetic_dataset
from metaphornet.tensor import Tensor, grad_check
from metaphornet.training import TrainConfig, bce_loss, train


def _report(name: str, ok: bool, started: float, budget: float | None = None) -> None:
    elapsed = time.perf_counter() - started
    budget_note = f", budget {budget:.0f}s" if budget is not None else ""
    print(f"[{'PASS' if ok else 'FAIL'}] {name} ({elapsed:.1f}s{budget_note})")
    assert ok, name
    if budget is not None:
        assert elapsed < budget, f"{name}: runtime {elapsed:.1f}s over budget {budget:.0f}s"


def _signed_uniform(rng, shape):
    return rng.uniform(0.5, 1.5, size=shape) * rng.choice([-1.0, 1.0], size=shape)


def _op_cases(rng):
    """One random instance per registered operation, as (inputs, fn) pairs."""
    m, k, n = (int(rng.integers(2, 5)) for _ in range(3))

    def leaf(values):
        return Tensor(values, requires_grad=True)

    cases = [
        ([leaf(rng.standard_normal((m, k))), leaf(rng.standard_normal((k, n)))], T.matmul),
        ([leaf(_signed_uniform(rng, (m, n))), leaf(_signed_uniform(rng, (m, n)))], T.add),
        ([leaf(_signed_uniform(rng, (m, n))), leaf(_signed_uniform(rng, (m, n)))], T.sub),
        ([leaf(_signed_uniform(rng, (m, n))), leaf(_signed_uniform(rng, (m, n)))], T.mul),
        ([leaf(_signed_uniform(rng, (m, n)))], lambda v: T.scale(v, -1.3)),
        ([leaf(rng.uniform(-2, 2, (m, n)))], T.tanh),
        ([leaf(rng.uniform(-2, 2, (m, n)))], T.sigmoid),
        ([leaf(rng.uniform(-2, 2, (m, n)))], T.exp),
        ([leaf(rng.uniform(0.5, 2.0, (m, n)))], T.log),
        ([leaf(rng.uniform(-0.8, 0.8, (m, n)))], lambda v: T.clamp(v, -0.9, 0.9)),
        ([leaf(rng.standard_normal((m, n)))], T.transpose),
        ([leaf(rng.standard_normal((m, n)))], lambda v: T.reshape(v, (n, m))),
        ([leaf(rng.standard_normal((m + 1, n)))], lambda v: T.narrow(v, 0, 1, m)),
        (
            [leaf(rng.standard_normal((m, n))), leaf(rng.standard_normal((m, 2)))],
            lambda u, v: T.concat([u, v], axis=1),
        ),
        (
            [leaf(rng.uniform(-2, 2, size=5))],
            lambda v: T.softmax_masked(v, [True, True, False, True, True]),
        ),
        ([leaf(rng.standard_normal((m, n)))], T.tsum),
    ]
    return cases


def test_gradient_fidelity():
    """Per-op sweeps at 1e-6 (100 instances each) and full model at 1e-4 (5 instances)."""
    started = time.perf_counter()
    rng = np.random.default_rng(2024)
    worst_op = 0.0
    for _ in range(100):
        for inputs, fn in _op_cases(rng):
            out_shape = fn(*inputs).shape
            weights = Tensor(_signed_uniform(rng, out_shape))
            if out_shape == ():
                scalarize = fn
            else:
                def scalarize(*ts, _fn=fn, _w=weights):
                    return T.tsum(T.mul(_fn(*ts), _w))
            report = grad_check(scalarize, inputs, step=1e-5, tolerance=1e-6)
            worst_op = max(worst_op, report.max_rel_error)
    per_op_ok = worst_op < 1e-6

    worst_model = 0.0
    for seed in range(5):
        config = ModelConfig(
            embed_dim=int(rng.integers(4, 9)),
            lstm_hidden=int(rng.integers(2, 5)),
            heads=int(rng.integers(1, 4)),
            seed=seed,
        )
        params = init_params(config)
        emb = Tensor(rng.standard_normal((int(rng.integers(2, 7)), config.embed_dim)))
        label = int(rng.integers(0, 2))

        def f(*ts):
            return bce_loss(model_forward(emb, params).score, label)

        tensors = [t for _, t in params.named()]
        ladder = [grad_check(f, tensors, step=1e-5, tolerance=1e-4)]
        if ladder[0].max_rel_error >= 1e-4:
            ladder.append(grad_check(f, tensors, step=1e-4, tolerance=1e-4))
        if all(r.max_rel_error >= 1e-4 for r in ladder):
            ladder.append(grad_check(f, tensors, step=1e-3, tolerance=1e-4))
        per_element = np.minimum.reduce(
            [np.concatenate([e.reshape(-1) for e in r.rel_errors]) for r in ladder]
        )
        worst_model = max(worst_model, float(per_element.max()))
    model_ok = worst_model < 1e-4

    print(f"  per-op worst rel err: {worst_op:.2e}; full-model worst rel err: {worst_model:.2e}")
    _report("gradient fidelity (<1e-6 per op, <1e-4 full model)", per_op_ok and model_ok, started, budget=60)


def test_attention_matches_eq1_oracle():
    """attention_pool vs an independent straight-line evaluation, 100 instances."""
    started = time.perf_counter()
    rng = np.random.default_rng(77)
    worst = 0.0
    for _ in range(100):
        hidden = int(rng.integers(2, 6))
        heads = int(rng.integers(1, 5))
        n = int(rng.integers(1, 8))
        config = ModelConfig(embed_dim=4, lstm_hidden=hidden, heads=heads, seed=0)
        params = init_params(config)
        for name, tensor in params.named():
            if name.startswith(("attn", "out")):
                tensor.data[:] = rng.standard_normal(tensor.shape)
        states_np = rng.standard_normal((n, 2 * hidden))
        states = [Tensor(states_np[i : i + 1].T) for i in range(n)]
        out = attention_pool(states, params)
        want_w, want_c = eq1_attention(
            states_np,
            [params[f"attn_w_{j}"].data[0] for j in range(heads)],
            [float(params[f"attn_b_{j}"].data[0, 0]) for j in range(heads)],
            params["out_w"].data,
            params["out_b"].data[:, 0],
        )
        worst = max(
            worst,
            float(np.abs(out.weights - want_w).max()),
            float(np.abs(out.context.data[:, 0] - want_c).max()),
        )
    print(f"  worst attention deviation from oracle: {worst:.2e}")
    _report("attention pooling equals dense-algebra oracle (<1e-9)", worst < 1e-9, started)


def test_metric_oracles():
    """Confusion counts vs brute force; trapezoidal AUC vs pairwise, 100 instances."""
    started = time.perf_counter()
    rng = np.random.default_rng(99)
    counts_ok = True
    worst_auc = 0.0
    for _ in range(100):
        n = int(rng.integers(4, 51))
        golds = rng.integers(0, 2, size=n)
        if golds.min() == golds.max():
            golds[0] = 1 - golds[0]
        preds = rng.integers(0, 2, size=n)
        c = confusion(preds.tolist(), golds.tolist())
        if (c.tp, c.fp, c.fn, c.tn) != confusion_recount(preds.tolist(), golds.tolist()):
            counts_ok = False
        m = prf1_acc(c)
        tp, fp, fn, tn = confusion_recount(preds.tolist(), golds.tolist())
        want_p = tp / (tp + fp) if tp + fp else 0.0
        want_r = tp / (tp + fn) if tp + fn else 0.0
        want_f = 2 * want_p * want_r / (want_p + want_r) if want_p + want_r else 0.0
        if abs(m.precision - want_p) > 1e-12 or abs(m.recall - want_r) > 1e-12:
            counts_ok = False
        if abs(m.f1 - want_f) > 1e-12 or abs(m.accuracy - (tp + tn) / n) > 1e-12:
            counts_ok = False
        scores = np.round(rng.uniform(0, 1, size=n), 2)  # duplicated scores exercise ties
        _, auc = roc_and_auc(scores, golds)
        worst_auc = max(worst_auc, abs(auc - pairwise_auc(scores, golds)))
    print(f"  worst AUC deviation from pairwise oracle: {worst_auc:.2e}")
    _report("metric oracles (counts exact, AUC within 1e-12)", counts_ok and worst_auc < 1e-12, started)


def test_dataset_fidelity(trofi_dataset, mohx_dataset):
    """Converted corpora match the published statistics cards."""
    started = time.perf_counter()
    trofi = dataset_stats(trofi_dataset)
    mohx = dataset_stats(mohx_dataset)
    ok = (
        trofi.count == 3737
        and trofi.unique_verbs == 50
        and abs(trofi.metaphor_fraction - 0.43) <= 0.005
        and mohx.count == 647
        and mohx.unique_verbs == 214
        and abs(mohx.metaphor_fraction - 0.49) <= 0.005
    )
    print(
        f"  trofi: {trofi.count}/{trofi.metaphor_fraction:.4f}/{trofi.unique_verbs}; "
        f"mohx: {mohx.count}/{mohx.metaphor_fraction:.4f}/{mohx.unique_verbs}"
    )
    _report("dataset fidelity (3737/0.43/50 and 647/0.49/214)", ok, started)


def test_lexical_baseline_anchors(trofi_dataset, mohx_dataset):
    """10-fold lexical baseline accuracy near its published numbers."""
    started = time.perf_counter()
    trofi = baseline_crossval(trofi_dataset, k=10, fold_seed=42).metrics.accuracy
    mohx = baseline_crossval(mohx_dataset, k=10, fold_seed=42).metrics.accuracy
    ok = abs(trofi - 0.714) <= 0.05 and abs(mohx - 0.436) <= 0.05
    print(f"  trofi acc: {trofi:.4f} (target 0.714±0.05); mohx acc: {mohx:.4f} (target 0.436±0.05)")
    _report("lexical baseline anchors", ok, started, budget=60)


def test_learnability_smoke():
    """Separable synthetic data is learned within 50 epochs on one core."""
    started = time.perf_counter()
    ds = make_synthetic_dataset(64, seed=5)
    emb = synth_embeddings(ds, dim=32, seed=5, separability=1.0)
    result = train(
        ds,
        emb,
        ModelConfig(embed_dim=32, lstm_hidden=16, heads=4, seed=0),
        TrainConfig(learning_rate=0.005, batch_size=16, epochs=50, seed=0),
    )
    history = result.history
    best = max(r.train_accuracy for r in history)
    ok = best >= 0.95 and history[-1].mean_loss < history[0].mean_loss
    print(
        f"  best train acc: {best:.3f}; loss epoch1={history[0].mean_loss:.4f} "
        f"epoch50={history[-1].mean_loss:.6f}"
    )
    _report("learnability smoke test (>=95% within 50 epochs)", ok, started, budget=120)


def test_crossval_determinism(tmp_path):
    """Two cmd_crossval runs with one config produce byte-identical results.csv."""
    started = time.perf_counter()
    ds = make_synthetic_dataset(18, seed=2, name="determinism")
    data_path = tmp_path / "d.jsonl"
    write_normalized(ds, data_path)
    config = {
        "dataset": str(data_path),
        "embeddings": {"synthetic": {"dim": 10, "seed": 4, "separability": 1.0}},
        "model": {"embed_dim": 10, "lstm_hidden": 4, "heads": 2, "seed": 0},
        "train": {"learning_rate": 0.01, "batch_size": 8, "epochs": 4, "seed": 0},
        "k": 3,
        "fold_seed": 42,
        "output_dir": str(tmp_path / "run_a"),
    }
    path_a = tmp_path / "a.json"
    path_a.write_text(json.dumps(config))
    assert main(["crossval", "--config", str(path_a)]) == 0
    config["output_dir"] = str(tmp_path / "run_b")
    path_b = tmp_path / "b.json"
    path_b.write_text(json.dumps(config))
    assert main(["crossval", "--config", str(path_b)]) == 0
    first = (tmp_path / "run_a" / "results.csv").read_bytes()
    second = (tmp_path / "run_b" / "results.csv").read_bytes()
    same_preds = (tmp_path / "run_a" / "predictions.jsonl").read_bytes() == (
        tmp_path / "run_b" / "predictions.jsonl"
    ).read_bytes()
    _report("crossval determinism (byte-identical results.csv)", first == second and same_preds, started)


def test_roc_anchors():
    """Constant scores give AUC exactly 0.5; perfect ranking gives 1.0."""
    started = time.perf_counter()
    _, constant = roc_and_auc([0.7] * 12, [1, 0] * 6)
    _, perfect = roc_and_auc([0.9, 0.85, 0.8, 0.2, 0.15, 0.1], [1, 1, 1, 0, 0, 0])
    ok = abs(constant - 0.5) <= 1e-12 and perfect == 1.0
    print(f"  constant AUC: {constant}; perfect AUC: {perfect}")
    _report("ROC anchors (0.500 and 1.0)", ok, started)
