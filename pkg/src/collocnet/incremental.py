"""Growth analysis: add the edges of a collection network in order and track properties.

At checkpoint k (percent) the first ceil(k/100 * |E|) edges of the stream
form the network; a vertex exists once one of its edges has been added.
Every checkpoint is recomputed from scratch.
"""

from __future__ import annotations

import math
from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from collocnet import stats
from collocnet.corpus import Corpus
from collocnet.metrics import GlobalProperties, PropertyConfig, compute_properties
from collocnet.netbuild import CollocationNetwork, NetType, network_from_pairs, word_pairs

Policy = Literal["occurrence", "frequency"]


@dataclass
class EdgeStream:
    edges: list[tuple[str, str]]
    net_type: NetType
    ordering_policy: str

    def __len__(self) -> int:
        return len(self.edges)

    def prefix_length(self, k: float) -> int:
        return math.ceil(k / 100.0 * len(self.edges))

    def prefix(self, k: float) -> list[tuple[str, str]]:
        return self.edges[: self.prefix_length(k)]


@dataclass
class GrowthTrace:
    checkpoints: list[tuple[int, GlobalProperties]]
    net_type: NetType
    ordering_policy: str
    seed: int
    stream_length: int = 0
    config: PropertyConfig = field(default_factory=PropertyConfig)

    @property
    def ks(self) -> list[int]:
        return [k for k, _ in self.checkpoints]

    def trajectory(self, name: str) -> list:
        return [props.get(name) for _, props in self.checkpoints]


def _canonical(a: str, b: str, directed: bool) -> tuple[str, str]:
    # Undirected pairs keyed by first-seen orientation would split counts; sort instead.
    if directed or a <= b:
        return a, b
    return b, a


def order_edges(corpus: Corpus, net_type: NetType | str, policy: Policy = "occurrence") -> EdgeStream:
    """Distinct edges of the collection network, in growth order.

    ``occurrence``: first appearance in the corpus (documents in corpus
    order, n-grams never spanning two documents). ``frequency``: descending
    raw n-gram count, ties broken by first appearance.
    """
    net_type = NetType(net_type)
    if len(corpus) == 0:
        raise ValueError("empty corpus")
    if policy not in ("occurrence", "frequency"):
        raise ValueError(f"unknown ordering policy {policy!r}")
    counts: Counter = Counter()
    first: dict[tuple[str, str], tuple[str, str]] = {}
    for doc in corpus:
        for a, b in word_pairs(doc.tokens, net_type):
            if a == b and net_type.simplified:
                continue
            key = _canonical(a, b, net_type.directed)
            counts[key] += 1
            first.setdefault(key, (a, b))
    keys = list(first)  # insertion order == first occurrence
    if policy == "frequency":
        rank = {key: i for i, key in enumerate(keys)}
        keys.sort(key=lambda key: (-counts[key], rank[key]))
    if not keys:
        raise ValueError("collection network has no edges")
    return EdgeStream([first[key] for key in keys], net_type, policy)


def prefix_network(stream: EdgeStream, k: float) -> CollocationNetwork:
    return network_from_pairs(stream.prefix(k), stream.net_type)


def growth_trace(
    stream: EdgeStream,
    checkpoints: Sequence[int] = tuple(range(1, 101)),
    config: PropertyConfig | None = None,
) -> GrowthTrace:
    config = config or PropertyConfig()
    ks = list(checkpoints)
    if any(not 1 <= k <= 100 for k in ks):
        raise ValueError("checkpoints must lie in 1..100")
    if any(b <= a for a, b in zip(ks, ks[1:])):
        raise ValueError("checkpoints must be strictly increasing")
    points = [(k, compute_properties(prefix_network(stream, k), config)) for k in ks]
    return GrowthTrace(points, stream.net_type, stream.ordering_policy, config.seed, len(stream), config)


def trend_tests(trace: GrowthTrace, property_name: str, min_points: int = 10) -> list[stats.TestResult]:
    """Runs, Bartels and Mann-Kendall tests on one property trajectory.

    Checkpoints where the property is undefined are dropped and noted.
    """
    values = trace.trajectory(property_name)
    defined = np.array([v for v in values if v is not None], dtype=float)
    dropped = len(values) - len(defined)
    if len(defined) < min_points:
        raise ValueError(f"{property_name}: only {len(defined)} defined checkpoints, need {min_points}")
    results = [stats.runs_test(defined), stats.bartels_test(defined), stats.mann_kendall(defined)]
    if dropped:
        for r in results:
            r.notes.append(f"dropped {dropped} undefined checkpoints")
    return results
