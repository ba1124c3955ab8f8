import hashlib

import numpy as np
import pytest


class FakeWordpieceEncoder:
    """Deterministic stand-in encoder with wordpiece-style splitting.

    Splits every token into chunks of at most four characters (continuations
    marked '##') and derives each piece vector from a hash of the piece text
    and its position, so outputs are stable across runs and sensitive to
    context length like a real encoder's position embeddings would be.
    """

    provider = "synthetic"

    def __init__(self, dim: int = 16):
        self.dim = dim

    def encode(self, tokens):
        pieces = []
        for tok in tokens:
            for i in range(0, len(tok), 4):
                chunk = tok[i : i + 4]
                pieces.append(chunk if i == 0 else f"##{chunk}")
        vectors = np.stack([self._vector(p, i) for i, p in enumerate(pieces)])
        return pieces, vectors

    def _vector(self, piece: str, position: int) -> np.ndarray:
        digest = hashlib.blake2b(f"{piece}|{position}".encode(), digest_size=8).digest()
        rng = np.random.default_rng(int.from_bytes(digest, "little"))
        return rng.standard_normal(self.dim)


@pytest.fixture
def fake_encoder():
    return FakeWordpieceEncoder()


@pytest.fixture(scope="session")
def mohx_jsonl(tmp_path_factory):
    """MOH-X-sized normalized dataset, produced through the primary package."""
    from metaphornet.converters import convert_mohx
    from metaphornet.data import write_normalized
    from metaphornet.synthcorpus import write_mohx_style_corpus

    root = tmp_path_factory.mktemp("mohx")
    raw = write_mohx_style_corpus(root / "mohx_style.csv")
    path = root / "mohx.jsonl"
    write_normalized(convert_mohx(raw).dataset, path)
    return path
