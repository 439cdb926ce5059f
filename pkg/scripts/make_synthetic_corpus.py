"""Write a seeded Zipf-distributed corpus in the <root>/<genre>/*.txt layout.

Example::

    python3 scripts/make_synthetic_corpus.py --out /tmp/zipf --size-mb 1 --vocab 50000
"""

import argparse
from pathlib import Path

import numpy as np


def zipf_tokens(rng: np.random.Generator, n_tokens: int, vocab: int, exponent: float = 1.0) -> list[str]:
    ranks = np.arange(1, vocab + 1, dtype=float)
    p = ranks**-exponent
    p /= p.sum()
    return [f"w{i}" for i in rng.choice(vocab, size=n_tokens, p=p)]


def write_corpus(out: Path, size_mb: float, vocab: int, genres: list[str], docs_per_genre: int, seed: int) -> int:
    rng = np.random.default_rng(seed)
    ranks = np.arange(1, vocab + 1, dtype=float)
    p = 1.0 / ranks
    p /= p.sum()
    # Expected bytes per token: "w" + digits + one separator.
    bytes_per_token = float(np.sum(p * (2 + np.floor(np.log10(ranks - 1 + (ranks == 1))) + 1)))
    total_tokens = int(size_mb * 1_000_000 / bytes_per_token)
    per_doc = max(2, total_tokens // (len(genres) * docs_per_genre))
    written = 0
    for genre in genres:
        (out / genre).mkdir(parents=True, exist_ok=True)
        for i in range(docs_per_genre):
            text = " ".join(zipf_tokens(rng, per_doc, vocab))
            (out / genre / f"doc{i:03d}.txt").write_text(text + "\n", encoding="utf-8")
            written += len(text) + 1
    return written


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--out", type=Path, required=True)
    ap.add_argument("--size-mb", type=float, default=1.0)
    ap.add_argument("--vocab", type=int, default=50000)
    ap.add_argument("--genres", default="alpha,beta")
    ap.add_argument("--docs-per-genre", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    n = write_corpus(args.out, args.size_mb, args.vocab, args.genres.split(","), args.docs_per_genre, args.seed)
    print(f"wrote {n} bytes to {args.out}")


if __name__ == "__main__":
    main()
