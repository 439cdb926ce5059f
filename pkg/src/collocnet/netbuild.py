"""Construction of the six word collocation network variants.

Vertices are word types; vertex ids are dense integers assigned in order of
first occurrence. Edges are stored once each (set semantics) in order of
first occurrence, which is also the default edge stream for growth runs.
Undirected edges are stored as ``(min_id, max_id)``.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np


class NetType(str, Enum):
    DIGRAPH = "digraph"
    UNDIGRAPH1 = "undigraph1"
    UNDIGRAPH2 = "undigraph2"
    SDIGRAPH = "sdigraph"
    SUNDIGRAPH1 = "sundigraph1"
    SUNDIGRAPH2 = "sundigraph2"

    @property
    def directed(self) -> bool:
        return self in (NetType.DIGRAPH, NetType.SDIGRAPH)

    @property
    def simplified(self) -> bool:
        return self.value.startswith("s")

    @property
    def allows_self_loops(self) -> bool:
        return not self.simplified

    @property
    def window(self) -> int:
        return 3 if self in (NetType.UNDIGRAPH2, NetType.SUNDIGRAPH2) else 2

    @classmethod
    def parse(cls, names: str | Iterable[str]) -> list[NetType]:
        if isinstance(names, str):
            names = [n.strip() for n in names.split(",") if n.strip()]
        out: list[NetType] = []
        for name in names:
            if name == "all":
                out.extend(t for t in cls if t not in out)
            elif cls(name) not in out:
                out.append(cls(name))
        return out


@dataclass
class CollocationNetwork:
    words: list[str]
    edges: list[tuple[int, int]]
    directed: bool
    allows_self_loops: bool = True
    net_type: NetType | None = None
    index: dict[str, int] = field(init=False, repr=False)
    # Derived arrays keyed by (kind, ..., |V|, |E|); edges are never edited in place.
    cache: dict = field(init=False, repr=False, compare=False, default_factory=dict)

    def __post_init__(self):
        self.index = {w: i for i, w in enumerate(self.words)}
        if len(self.index) != len(self.words):
            raise ValueError("vertex words must be unique")

    @property
    def n_vertices(self) -> int:
        return len(self.words)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_self_loops(self) -> int:
        return sum(1 for u, v in self.edges if u == v)

    def edge_array(self) -> np.ndarray:
        if not self.edges:
            return np.empty((0, 2), dtype=np.int64)
        return np.asarray(self.edges, dtype=np.int64)

    def word_edges(self) -> set[tuple[str, str]]:
        """Edges as word pairs; undirected pairs are sorted lexicographically."""
        out = set()
        for u, v in self.edges:
            a, b = self.words[u], self.words[v]
            if not self.directed and b < a:
                a, b = b, a
            out.add((a, b))
        return out

    def same_graph(self, other: CollocationNetwork) -> bool:
        """Equality up to vertex-id renumbering."""
        return (
            self.directed == other.directed
            and set(self.words) == set(other.words)
            and self.word_edges() == other.word_edges()
        )


class _Builder:
    def __init__(self, net_type: NetType):
        self.net_type = net_type
        self.words: list[str] = []
        self.index: dict[str, int] = {}
        self.edges: dict[tuple[int, int], None] = {}

    def vertex(self, word: str) -> int:
        vid = self.index.get(word)
        if vid is None:
            vid = self.index[word] = len(self.words)
            self.words.append(word)
        return vid

    def add(self, a: str, b: str):
        u, v = self.vertex(a), self.vertex(b)
        if u == v and self.net_type.simplified:
            return
        if not self.net_type.directed and v < u:
            u, v = v, u
        self.edges.setdefault((u, v), None)

    def network(self) -> CollocationNetwork:
        return CollocationNetwork(
            self.words,
            list(self.edges),
            self.net_type.directed,
            self.net_type.allows_self_loops,
            self.net_type,
        )


def word_pairs(tokens: Sequence[str], net_type: NetType) -> Iterator[tuple[str, str]]:
    """Raw (undeduplicated) word pairs generated by ``tokens`` for ``net_type``.

    Self-loop pairs are included regardless of the loop policy.
    """
    if net_type.window == 2:
        yield from zip(tokens, tokens[1:])
    else:
        for a, b, c in zip(tokens, tokens[1:], tokens[2:]):
            yield a, b
            yield b, c
            yield a, c


def _fill(builder: _Builder, tokens: Sequence[str]):
    for tok in tokens:
        builder.vertex(tok)
    for a, b in word_pairs(tokens, builder.net_type):
        builder.add(a, b)


def build_network(tokens: Sequence[str], net_type: NetType | str) -> CollocationNetwork:
    net_type = NetType(net_type)
    builder = _Builder(net_type)
    # Vertices first, so ids follow token order even for trigram pair emission.
    _fill(builder, tokens)
    return builder.network()


def build_collection_network(corpus, net_type: NetType | str) -> CollocationNetwork:
    """One network over a whole corpus; n-grams never cross document boundaries."""
    net_type = NetType(net_type)
    if len(corpus) == 0:
        raise ValueError("empty corpus")
    builder = _Builder(net_type)
    for doc in corpus:
        _fill(builder, doc.tokens)
    return builder.network()


def network_from_pairs(pairs: Iterable[tuple[str, str]], net_type: NetType | str) -> CollocationNetwork:
    """Network whose vertices are exactly the endpoints of ``pairs``."""
    builder = _Builder(NetType(net_type))
    for a, b in pairs:
        builder.add(a, b)
    return builder.network()


def remove_self_loops(net: CollocationNetwork) -> CollocationNetwork:
    net_type = net.net_type
    if net_type is not None and not net_type.simplified:
        net_type = NetType("s" + net_type.value)
    return CollocationNetwork(
        list(net.words),
        [(u, v) for u, v in net.edges if u != v],
        net.directed,
        False,
        net_type,
    )


def write_edgelist(net: CollocationNetwork, path: str | Path):
    """Write ``net`` in the edge-list text format.

    Header ``directed=<bool> loops=<bool> n=<|V|>`` (plus ``type=<name>``
    when known), then one ``source<TAB>target`` line per edge. Vertices
    without incident edges follow as single-field lines.
    """
    Path(path).write_text(format_edgelist(net), encoding="utf-8")


def format_edgelist(net: CollocationNetwork) -> str:
    header = f"directed={str(net.directed).lower()} loops={str(net.allows_self_loops).lower()} n={net.n_vertices}"
    if net.net_type is not None:
        header += f" type={net.net_type.value}"
    lines = [header]
    touched = set()
    for u, v in net.edges:
        lines.append(f"{net.words[u]}\t{net.words[v]}")
        touched.add(u)
        touched.add(v)
    lines.extend(w for i, w in enumerate(net.words) if i not in touched)
    return "\n".join(lines) + "\n"


def _parse_bool(text: str) -> bool:
    if text not in ("true", "false"):
        raise ValueError(f"bad boolean {text!r}")
    return text == "true"


def read_edgelist(path: str | Path) -> CollocationNetwork:
    return parse_edgelist(Path(path).read_text(encoding="utf-8"))


def parse_edgelist(text: str) -> CollocationNetwork:
    lines = text.splitlines()
    if not lines:
        raise ValueError("empty edge list")
    meta = dict(item.split("=", 1) for item in lines[0].split())
    directed = _parse_bool(meta["directed"])
    loops = _parse_bool(meta["loops"])
    n = int(meta["n"])
    net_type = NetType(meta["type"]) if "type" in meta else None

    words: list[str] = []
    index: dict[str, int] = {}

    def vid(word: str) -> int:
        if word not in index:
            index[word] = len(words)
            words.append(word)
        return index[word]

    edges: dict[tuple[int, int], None] = {}
    for line in lines[1:]:
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) == 1:
            vid(parts[0])
            continue
        u, v = vid(parts[0]), vid(parts[1])
        if u == v and not loops:
            raise ValueError(f"self-loop on {parts[0]!r} in a loop-free network")
        if not directed and v < u:
            u, v = v, u
        edges.setdefault((u, v), None)
    if len(words) != n:
        raise ValueError(f"header says n={n} but found {len(words)} vertices")
    return CollocationNetwork(words, list(edges), directed, loops, net_type)
