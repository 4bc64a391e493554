#!/usr/bin/env python3
"""Generate a synthetic how-to corpus CSV for demos and experiments.

Usage:
    python scripts/make_sample_corpus.py out.csv --docs 500 --seed 20260808
"""

import argparse

from topicsum.sampledata import write_sample_csv


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("out", help="output CSV path")
    parser.add_argument("--docs", type=int, default=500)
    parser.add_argument("--seed", type=int, default=20260808)
    args = parser.parse_args()
    write_sample_csv(args.out, args.docs, seed=args.seed)
    print(f"wrote {args.docs} documents to {args.out}")


if __name__ == "__main__":
    main()
