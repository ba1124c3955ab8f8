"""MDEMB1 writer (little-endian, no padding).

Layout: magic ``MDEMB1\\0\\0``, u32 dim, u32 record count, u8 provider
(0=bert, 1=elmo, 2=synthetic); then per record u16 id byte length, UTF-8
id, u32 n_tokens, n_tokens*dim float32 values row-major. Records go out in
lexicographic id order so identical content means identical bytes.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

MAGIC = b"MDEMB1\x00\x00"
PROVIDER_CODES = {"bert": 0, "elmo": 1, "synthetic": 2}


def write_mdemb(path, dim: int, provider: str, records: dict[str, np.ndarray]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<II", dim, len(records)))
        fh.write(struct.pack("<B", PROVIDER_CODES[provider]))
        for eid in sorted(records):
            mat = np.asarray(records[eid])
            assert mat.ndim == 2 and mat.shape[1] == dim, (eid, mat.shape)
            raw = eid.encode("utf-8")
            fh.write(struct.pack("<H", len(raw)))
            fh.write(raw)
            fh.write(struct.pack("<I", mat.shape[0]))
            fh.write(mat.astype("<f4").tobytes(order="C"))
