"""Command line: embexport export --dataset X.jsonl --provider bert --model NAME --out X.mdemb"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import AlignmentError, DatasetError, ExportError, ModelLoadError
from .export import ExportJob, export


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="embexport", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("export", help="embed a normalized dataset into an MDEMB1 file")
    p.add_argument("--dataset", required=True)
    p.add_argument("--provider", choices=("bert", "elmo"), required=True)
    p.add_argument("--model", default=None, help="checkpoint name (default per provider)")
    p.add_argument("--out", required=True)
    p.add_argument("--device", default="cpu")
    p.add_argument("--skip-bad", action="store_true", help="drop unalignable examples instead of aborting")
    p.add_argument("--dim", type=int, default=1024, help="expected vector width (0 disables the check)")
    return parser


_DEFAULT_MODELS = {"bert": "bert-large-uncased", "elmo": "original"}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    job = ExportJob(
        dataset=Path(args.dataset),
        provider=args.provider,
        model=args.model or _DEFAULT_MODELS[args.provider],
        out=Path(args.out),
        device=args.device,
        skip_bad=args.skip_bad,
        expected_dim=args.dim or None,
    )
    try:
        report = export(job)
    except (DatasetError, ModelLoadError, AlignmentError, ExportError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(report.describe())
    print(f"wrote {job.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
