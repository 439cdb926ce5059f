"""Loading and normalising text collections.

Normalisation is deliberately minimal: lowercase, drop punctuation and
symbols, split on whitespace. No stemming, no stopword removal and no
sentence segmentation, so bigrams run across sentence boundaries.
"""

from __future__ import annotations

import logging
import sys
import unicodedata
import warnings
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Document:
    doc_id: str
    genre: str
    tokens: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass
class Corpus:
    documents: list[Document] = field(default_factory=list)

    def __post_init__(self):
        seen = set()
        for doc in self.documents:
            if doc.doc_id in seen:
                raise ValueError(f"duplicate doc_id {doc.doc_id!r}")
            seen.add(doc.doc_id)

    @property
    def genre_index(self) -> dict[str, list[str]]:
        index: dict[str, list[str]] = {}
        for doc in self.documents:
            index.setdefault(doc.genre, []).append(doc.doc_id)
        return index

    @property
    def genres(self) -> list[str]:
        return sorted(self.genre_index)

    def by_genre(self, genre: str) -> list[Document]:
        return [d for d in self.documents if d.genre == genre]

    def __len__(self) -> int:
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)


# Unicode categories treated as separators: punctuation (P*), symbols (S*),
# control (Cc) and format (Cf) characters. Digits and letters are kept.
_SEPARATOR_CATEGORIES = ("P", "S", "Cc", "Cf")


@lru_cache(maxsize=1)
def _separator_table() -> dict[int, str]:
    table = {}
    for cp in range(sys.maxunicode + 1):
        cat = unicodedata.category(chr(cp))
        if cat[0] in "PS" or cat in _SEPARATOR_CATEGORIES:
            table[cp] = " "
    return table


def tokenize(raw_text: str) -> list[str]:
    """Lowercase ``raw_text``, turn punctuation into separators and split.

    Any punctuation or symbol character splits a token at its position,
    so ``"don't"`` becomes ``["don", "t"]`` and ``"off."`` becomes ``"off"``.

    >>> tokenize("The airplane took off. Off we go to Alaska.")
    ['the', 'airplane', 'took', 'off', 'off', 'we', 'go', 'to', 'alaska']
    """
    return raw_text.lower().translate(_separator_table()).split()


def ngram_stream(tokens: Sequence[str], n: int) -> list[tuple[str, ...]]:
    if n not in (2, 3):
        raise ValueError(f"n must be 2 or 3, got {n}")
    return list(zip(*(tokens[i:] for i in range(n))))


def _read_text(path: Path) -> str:
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc}") from exc
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError:
        logger.warning("undecodable bytes replaced in %s", path)
        return data.decode("utf-8", errors="replace")


def _read_manifest(manifest: Path, root: Path) -> list[tuple[Path, str]]:
    entries = []
    with open(manifest, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\r\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ValueError(f"{manifest}:{lineno}: expected 'path<TAB>genre'")
            path = Path(parts[0])
            if not path.is_absolute():
                path = root / path
            entries.append((path, parts[1]))
    return entries


def load_corpus(root_path: str | Path, manifest: str | Path | None = None) -> Corpus:
    """Read a genre-labelled corpus.

    Without a manifest the layout is ``<root>/<genre>/<doc>.txt``. With a
    manifest, each line is ``path<TAB>genre`` and relative paths are
    resolved against ``root_path``. Documents are ordered by path.
    """
    root = Path(root_path)
    if not root.exists():
        raise FileNotFoundError(f"corpus root not found: {root}")

    if manifest is not None:
        entries = _read_manifest(Path(manifest), root)
    else:
        entries = [
            (path, genre_dir.name)
            for genre_dir in root.iterdir()
            if genre_dir.is_dir()
            for path in genre_dir.glob("*.txt")
        ]
    entries.sort(key=lambda e: e[0].as_posix())

    documents = []
    for path, genre in entries:
        try:
            doc_id = path.relative_to(root).as_posix()
        except ValueError:
            doc_id = path.as_posix()
        documents.append(Document(doc_id, genre, tuple(tokenize(_read_text(path)))))

    if not documents:
        warnings.warn(f"corpus at {root} contains no documents", stacklevel=2)
    return Corpus(documents)


def corpus_from_texts(texts: Iterable[tuple[str, str, str]]) -> Corpus:
    """Build a corpus from in-memory ``(doc_id, genre, text)`` triples."""
    return Corpus([Document(doc_id, genre, tuple(tokenize(text))) for doc_id, genre, text in texts])
