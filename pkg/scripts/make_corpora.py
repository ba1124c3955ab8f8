#!/usr/bin/env python3
"""Generate the offline stand-in corpora and convert them to normalized JSONL.

Writes under data/ by default:
  raw/trofi_style.txt   raw/mohx_style.csv
  trofi.jsonl           mohx.jsonl

If you have the real TroFi example base or MOH-X CSV, skip this script and
run `metaphornet convert` on those files instead.
"""

import argparse
from pathlib import Path

from metaphornet.converters import convert_mohx, convert_trofi
from metaphornet.data import dataset_stats, write_normalized
from metaphornet.synthcorpus import write_mohx_style_corpus, write_trofi_style_corpus


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="data", type=Path)
    args = parser.parse_args()

    raw_dir = args.out_dir / "raw"
    for name, writer, converter in (
        ("trofi", write_trofi_style_corpus, convert_trofi),
        ("mohx", write_mohx_style_corpus, convert_mohx),
    ):
        suffix = "txt" if name == "trofi" else "csv"
        raw_path = writer(raw_dir / f"{name}_style.{suffix}")
        result = converter(raw_path)
        out_path = args.out_dir / f"{name}.jsonl"
        write_normalized(result.dataset, out_path)
        stats = dataset_stats(result.dataset)
        print(
            f"{name}: {stats.count} examples, {stats.metaphor_fraction:.1%} metaphor, "
            f"{stats.unique_verbs} verbs -> {out_path}"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
