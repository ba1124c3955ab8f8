#!/usr/bin/env python3
"""Write a self-contained quickstart experiment under data/quickstart/.

Produces a small separable synthetic dataset plus a crossval config; run it
with `metaphornet crossval --config data/quickstart/config.json`
(finishes in well under a minute on one core).
"""

import argparse
import json
from pathlib import Path

from metaphornet.data import write_normalized
from metaphornet.synthcorpus import make_synthetic_dataset


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="data/quickstart", type=Path)
    args = parser.parse_args()
    out = args.out_dir
    out.mkdir(parents=True, exist_ok=True)

    dataset = make_synthetic_dataset(64, seed=11, name="quickstart")
    write_normalized(dataset, out / "dataset.jsonl")
    config = {
        "dataset": str(out / "dataset.jsonl"),
        "embeddings": {"synthetic": {"dim": 32, "seed": 11, "separability": 1.0}},
        "model": {"embed_dim": 32, "lstm_hidden": 16, "heads": 4, "seed": 0},
        "train": {"learning_rate": 0.005, "batch_size": 16, "epochs": 20, "seed": 0},
        "k": 5,
        "fold_seed": 42,
        "output_dir": str(out / "out"),
        "model_name": "ours+synthetic",
        "dataset_name": "quickstart",
    }
    (out / "config.json").write_text(json.dumps(config, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {out / 'dataset.jsonl'} and {out / 'config.json'}")
    print(f"next: metaphornet crossval --config {out / 'config.json'}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
