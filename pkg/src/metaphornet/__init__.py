"""Metaphor detection over frozen contextual embeddings.

A BiLSTM encoder with multi-head attention pooling and a sigmoid decoder,
trained with Adam on binary cross-entropy, evaluated by stratified k-fold
cross-validation. All model math runs on the package's own float64
reverse-mode autodiff tensors.
"""

from .data import Dataset, DatasetStats, Example, FoldPlan, dataset_stats, load_normalized, make_folds, write_normalized
from .embeddings import EmbeddingSet, load_embeddings, synth_embeddings, validate_coverage, write_embeddings
from .evaluation import Confusion, EvalReport, baseline_crossval, confusion, crossval, lexical_baseline, prf1_acc, roc_and_auc
from .model import ModelConfig, ModelParams, attention_pool, bilstm_forward, decode, init_params, load_checkpoint, model_forward, save_checkpoint
from .tensor import Tensor, backward, grad_check
from .training import OptimizerState, TrainConfig, adam_step, bce_loss, predict, train

__version__ = "0.1.0"

__all__ = [
    "Confusion",
    "Dataset",
    "DatasetStats",
    "EmbeddingSet",
    "EvalReport",
    "Example",
    "FoldPlan",
    "ModelConfig",
    "ModelParams",
    "OptimizerState",
    "Tensor",
    "TrainConfig",
    "adam_step",
    "attention_pool",
    "backward",
    "baseline_crossval",
    "bce_loss",
    "bilstm_forward",
    "confusion",
    "crossval",
    "dataset_stats",
    "decode",
    "grad_check",
    "init_params",
    "lexical_baseline",
    "load_checkpoint",
    "load_embeddings",
    "load_normalized",
    "make_folds",
    "model_forward",
    "predict",
    "prf1_acc",
    "roc_and_auc",
    "save_checkpoint",
    "synth_embeddings",
    "train",
    "validate_coverage",
    "write_embeddings",
    "write_normalized",
]
