"""Independent oracles the tests check the package against.

Everything here is deliberately straight-line and dumb: plain loops and
dense numpy algebra with no reuse of the package's computational paths.
"""

from __future__ import annotations

import numpy as np


def eq1_attention(
    states: np.ndarray,          # [n x 2H], one encoder state per row
    attn_w: list[np.ndarray],    # per head, [2H]
    attn_b: list[float],
    out_w: np.ndarray,           # [d_c x h*2H]
    out_b: np.ndarray,           # [d_c]
) -> tuple[np.ndarray, np.ndarray]:
    """Multi-head attention pooling written as flat dense algebra."""
    weights = []
    contexts = []
    for w, b in zip(attn_w, attn_b):
        logits = np.array([float(np.dot(w, x)) + b for x in states])
        e = np.exp(logits - logits.max())
        a = e / e.sum()
        c = np.zeros(states.shape[1])
        for a_i, x_i in zip(a, states):
            c = c + a_i * x_i
        weights.append(a)
        contexts.append(c)
    merged = np.concatenate(contexts)
    return np.array(weights), out_w @ merged + out_b


def pairwise_auc(scores, golds) -> float:
    """O(n^2) concordance count: P(random positive outscores random negative)."""
    pos = [s for s, g in zip(scores, golds) if g == 1]
    neg = [s for s, g in zip(scores, golds) if g == 0]
    total = 0.0
    for p in pos:
        for n in neg:
            if p > n:
                total += 1.0
            elif p == n:
                total += 0.5
    return total / (len(pos) * len(neg))


def confusion_recount(predictions, golds) -> tuple[int, int, int, int]:
    tp = fp = fn = tn = 0
    for p, g in zip(predictions, golds):
        if p == 1 and g == 1:
            tp += 1
        elif p == 1 and g == 0:
            fp += 1
        elif p == 0 and g == 1:
            fn += 1
        else:
            tn += 1
    return tp, fp, fn, tn


def perceptron_train_accuracy(features: np.ndarray, labels: np.ndarray, epochs: int = 200) -> float:
    """Fit a bias-augmented perceptron; returns training accuracy."""
    w = np.zeros(features.shape[1])
    b = 0.0
    for _ in range(epochs):
        mistakes = 0
        for x, y in zip(features, labels):
            pred = 1 if float(x @ w) + b > 0 else 0
            if pred != y:
                step = 1.0 if y == 1 else -1.0
                w = w + step * x
                b = b + step
                mistakes += 1
        if mistakes == 0:
            break
    preds = (features @ w + b > 0).astype(int)
    return float((preds == labels).mean())


def adam_scalar_trajectory(
    theta0: float, lr: float, beta1: float, beta2: float, eps: float, steps: int
) -> float:
    """Reference Adam on f(theta) = theta^2, plain python floats."""
    theta, m, v = theta0, 0.0, 0.0
    for t in range(1, steps + 1):
        g = 2.0 * theta
        m = beta1 * m + (1.0 - beta1) * g
        v = beta2 * v + (1.0 - beta2) * g * g
        m_hat = m / (1.0 - beta1 ** t)
        v_hat = v / (1.0 - beta2 ** t)
        theta -= lr * m_hat / (np.sqrt(v_hat) + eps)
    return theta
