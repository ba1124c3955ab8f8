"""Pretrained sentence encoders behind one tiny interface.

An encoder takes a whitespace token list and returns (subword_tokens,
vectors), one vector row per subword piece with special markers already
removed; ``dim`` states the vector width. Inference runs in eval mode with
gradients off, so repeated runs produce identical values.
"""

from __future__ import annotations

import numpy as np

from .errors import ModelLoadError


class BertEncoder:
    """Final-hidden-layer vectors from a BERT-family checkpoint."""

    provider = "bert"

    def __init__(self, model_name: str = "bert-large-uncased", device: str = "cpu"):
        try:
            import torch
            from transformers import AutoModel, AutoTokenizer
        except ImportError as exc:
            raise ModelLoadError(
                "BERT export needs 'transformers' and 'torch' (pip install embexport[bert])"
            ) from exc
        try:
            self._tokenizer = AutoTokenizer.from_pretrained(model_name)
            self._model = AutoModel.from_pretrained(model_name)
        except Exception as exc:
            raise ModelLoadError(f"could not load checkpoint {model_name!r}: {exc}") from exc
        self._model.eval()
        self._model.to(device)
        self._device = device
        self._torch = torch
        self.dim = int(self._model.config.hidden_size)
        self._special = set(self._tokenizer.all_special_tokens)

    def encode(self, tokens) -> tuple[list[str], np.ndarray]:
        enc = self._tokenizer(list(tokens), is_split_into_words=True, return_tensors="pt")
        with self._torch.no_grad():
            hidden = self._model(**{k: v.to(self._device) for k, v in enc.items()})
        states = hidden.last_hidden_state[0].cpu().numpy().astype(np.float64)
        pieces = self._tokenizer.convert_ids_to_tokens(enc["input_ids"][0])
        keep = [i for i, p in enumerate(pieces) if p not in self._special]
        return [pieces[i] for i in keep], states[keep]


class ElmoEncoder:
    """Equal-weight mix of the three ELMo layers (frozen, no task weights)."""

    provider = "elmo"

    def __init__(self, model_name: str = "original", device: str = "cpu"):
        try:
            from allennlp.commands.elmo import ElmoEmbedder
        except ImportError as exc:
            raise ModelLoadError(
                "ELMo export needs the 'allennlp' package, which is not installed"
            ) from exc
        cuda_device = 0 if device.startswith("cuda") else -1
        try:
            self._embedder = ElmoEmbedder(cuda_device=cuda_device)
        except Exception as exc:
            raise ModelLoadError(f"could not load ELMo ({model_name!r}): {exc}") from exc
        self.dim = 1024

    def encode(self, tokens) -> tuple[list[str], np.ndarray]:
        layers = self._embedder.embed_sentence(list(tokens))  # [3 x n x 1024]
        vectors = np.asarray(layers, dtype=np.float64).mean(axis=0)
        return list(tokens), vectors  # character-level model: one piece per word


ENCODER_FACTORIES = {
    "bert": BertEncoder,
    "elmo": ElmoEncoder,
}


def make_encoder(provider: str, model_name: str, device: str):
    try:
        factory = ENCODER_FACTORIES[provider]
    except KeyError as exc:
        raise ModelLoadError(f"unknown provider {provider!r}") from exc
    return factory(model_name, device)
