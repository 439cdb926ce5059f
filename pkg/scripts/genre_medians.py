"""Directional check of median Digraph alpha and small-worldliness on two user corpora.

Point ``--books`` at a directory of at least 20 full-length public-domain
books and ``--articles`` at one holding at least 200 short articles
(under 300 words). Each directory holds plain ``*.txt`` files, searched
recursively. The check expects long books to give a median alpha in
[2.0, 2.35] with median small-worldliness above 50, and short articles a
median alpha above 2.8 with median small-worldliness below 5.
"""

import argparse
import json
import statistics
import sys
from pathlib import Path

from collocnet.corpus import Corpus, Document, tokenize
from collocnet.metrics import PropertyConfig, compute_properties
from collocnet.netbuild import build_network

BOOK_ALPHA = (2.0, 2.35)
BOOK_MU_MIN = 50.0
ARTICLE_ALPHA_MIN = 2.8
ARTICLE_MU_MAX = 5.0


def read_dir(root: Path, genre: str) -> Corpus:
    docs = []
    for path in sorted(root.rglob("*.txt")):
        text = path.read_text(encoding="utf-8", errors="replace")
        docs.append(Document(path.relative_to(root).as_posix(), genre, tuple(tokenize(text))))
    return Corpus(docs)


def medians(corpus: Corpus, config: PropertyConfig) -> dict:
    alphas, mus = [], []
    for doc in corpus:
        props = compute_properties(build_network(doc.tokens, "digraph"), config, document_level=True)
        if props.alpha is not None:
            alphas.append(props.alpha)
        if props.small_worldliness is not None:
            mus.append(props.small_worldliness)
    return {
        "documents": len(corpus),
        "median_alpha": statistics.median(alphas) if alphas else None,
        "median_mu": statistics.median(mus) if mus else None,
    }


def evaluate(books: Path, articles: Path, seed: int = 0) -> dict:
    config = PropertyConfig(seed=seed, compute_pvalues=False)
    book_corpus, article_corpus = read_dir(books, "books"), read_dir(articles, "articles")
    long_words = [len(d.tokens) for d in article_corpus]
    b, a = medians(book_corpus, config), medians(article_corpus, config)
    sizes_ok = len(book_corpus) >= 20 and len(article_corpus) >= 200 and all(n < 300 for n in long_words)
    book_ok = (
        b["median_alpha"] is not None
        and BOOK_ALPHA[0] <= b["median_alpha"] <= BOOK_ALPHA[1]
        and b["median_mu"] is not None
        and b["median_mu"] > BOOK_MU_MIN
    )
    article_ok = (
        a["median_alpha"] is not None
        and a["median_alpha"] > ARTICLE_ALPHA_MIN
        and a["median_mu"] is not None
        and a["median_mu"] < ARTICLE_MU_MAX
    )
    summary = f"books {b}, articles {a}, size requirements met={sizes_ok}"
    return {"ok": sizes_ok and book_ok and article_ok, "books": b, "articles": a, "summary": summary}


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--books", type=Path, required=True)
    ap.add_argument("--articles", type=Path, required=True)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    result = evaluate(args.books, args.articles, args.seed)
    print(json.dumps(result, indent=2))
    return 0 if result["ok"] else 1


if __name__ == "__main__":
    sys.exit(main())
