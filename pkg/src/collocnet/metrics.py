"""The 17 global properties of a collocation network.

Fields that cannot be computed hold ``None`` and a reason code in
``GlobalProperties.reasons``; nothing undefined is silently turned into 0.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import asdict, dataclass, field
from typing import Literal

import numpy as np

from collocnet import graphalg, powerlaw
from collocnet.errors import UndefinedProperty
from collocnet.netbuild import CollocationNetwork

# Column order of the property table.
PROPERTY_FIELDS = (
    "n_vertices",
    "n_edges",
    "shrinkage",
    "global_clustering",
    "small_worldliness",
    "diameter_directed",
    "diameter_undirected",
    "alpha",
    "alpha_in",
    "alpha_out",
    "pvalue_alpha",
    "pvalue_alpha_in",
    "pvalue_alpha_out",
    "n_cc",
    "giant_cc",
    "n_scc",
    "giant_scc",
)
XMIN_FIELDS = ("xmin_alpha", "xmin_alpha_in", "xmin_alpha_out")
DIRECTED_ONLY = (
    "diameter_directed",
    "alpha_in",
    "alpha_out",
    "pvalue_alpha_in",
    "pvalue_alpha_out",
    "n_scc",
    "giant_scc",
    "xmin_alpha_in",
    "xmin_alpha_out",
)
COMPONENT_FIELDS = ("n_cc", "giant_cc", "n_scc", "giant_scc")
NOT_APPLICABLE = "not applicable"


def derive_seed(*parts) -> int:
    """Stable 63-bit seed from arbitrary parts (independent of PYTHONHASHSEED)."""
    digest = hashlib.sha256("\x1f".join(map(str, parts)).encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little") >> 1


@dataclass(frozen=True)
class PropertyConfig:
    seed: int = 0
    baseline: Literal["analytic", "sampled"] = "analytic"
    baseline_samples: int = 10
    bootstrap_b: int = 100
    compute_pvalues: bool = True
    xmin_fixed: int | None = None
    mle_method: Literal["exact", "approx"] = "exact"
    low_degree_clustering: Literal["zero", "exclude"] = "zero"

    def __post_init__(self):
        if self.baseline not in ("analytic", "sampled"):
            raise ValueError(f"unknown baseline {self.baseline!r}")
        if self.baseline_samples < 1:
            raise ValueError("baseline_samples must be >= 1")
        if self.bootstrap_b < 1:
            raise ValueError("bootstrap_b must be >= 1")
        if self.xmin_fixed is not None and self.xmin_fixed < 1:
            raise ValueError("xmin_fixed must be >= 1")


@dataclass
class GlobalProperties:
    n_vertices: int | None = None
    n_edges: int | None = None
    shrinkage: float | None = None
    global_clustering: float | None = None
    small_worldliness: float | None = None
    diameter_directed: int | None = None
    diameter_undirected: int | None = None
    alpha: float | None = None
    alpha_in: float | None = None
    alpha_out: float | None = None
    pvalue_alpha: float | None = None
    pvalue_alpha_in: float | None = None
    pvalue_alpha_out: float | None = None
    n_cc: int | None = None
    giant_cc: int | None = None
    n_scc: int | None = None
    giant_scc: int | None = None
    xmin_alpha: int | None = None
    xmin_alpha_in: int | None = None
    xmin_alpha_out: int | None = None
    reasons: dict[str, str] = field(default_factory=dict)
    informational: tuple[str, ...] = ()

    def get(self, name: str):
        return getattr(self, name)

    def as_dict(self) -> dict:
        return asdict(self)

    def set_undefined(self, name: str, reason: str):
        setattr(self, name, None)
        self.reasons[name] = reason


# ------------------------------------------------------------------ pieces


def shrinkage_exponent(net: CollocationNetwork) -> float:
    """log base |V| of |E|, with |E| counted after the network's loop policy."""
    if net.n_vertices < 2 or net.n_edges == 0:
        raise UndefinedProperty("degenerate size", f"|V|={net.n_vertices}, |E|={net.n_edges}")
    return math.log(net.n_edges) / math.log(net.n_vertices)


def _mean_path_and_clustering(net: CollocationNetwork, low_degree: str) -> tuple[float, float]:
    return (
        graphalg.clustering(net, "avg_local", low_degree),
        graphalg.path_stats(net, respect_direction=False).average_length,
    )


def small_worldliness(
    net: CollocationNetwork,
    baseline: Literal["analytic", "sampled"] = "analytic",
    samples: int = 10,
    seed: int = 0,
    low_degree: Literal["zero", "exclude"] = "zero",
    _path_length: float | None = None,
) -> float:
    """(C/L) / (C_rand/L_rand) with average local clustering C and mean path length L.

    Direction and self-loops are ignored throughout. The analytic baseline
    uses C_rand = k/n and L_rand = ln n / ln k with k = 2|E|/|V| of the simple
    undirected projection; the sampled baseline averages ``samples`` G(n, m)
    graphs of the same size.
    """
    n = net.n_vertices
    m = graphalg.simple_undirected_edge_count(net)
    if m == 0:
        raise UndefinedProperty("baseline degenerate", "no edges")
    c_net = graphalg.clustering(net, "avg_local", low_degree)
    l_net = _path_length if _path_length is not None else graphalg.avg_path_length(net)

    if baseline == "analytic":
        k = 2.0 * m / n
        if k <= 1.0:
            raise UndefinedProperty("baseline degenerate", f"mean degree {k} <= 1")
        c_rand = k / n
        l_rand = math.log(n) / math.log(k)
    elif baseline == "sampled":
        cs, ls = [], []
        for i in range(samples):
            rand = graphalg.gnm_random(n, m, directed=False, seed=derive_seed(seed, "baseline", i))
            c_r, l_r = _mean_path_and_clustering(rand, low_degree)
            cs.append(c_r)
            ls.append(l_r)
        c_rand = math.fsum(cs) / samples
        l_rand = math.fsum(ls) / samples
    else:
        raise ValueError(f"unknown baseline {baseline!r}")

    if c_rand == 0:
        raise UndefinedProperty("baseline degenerate", "random clustering is 0")
    return (c_net / l_net) / (c_rand / l_rand)


# ------------------------------------------------------------------ record


def _fill_powerlaw(props: GlobalProperties, net: CollocationNetwork, mode: str, suffix: str, config: PropertyConfig):
    alpha_name, p_name, xmin_name = f"alpha{suffix}", f"pvalue_alpha{suffix}", f"xmin_alpha{suffix}"
    try:
        degrees = powerlaw.degree_sequence(net, mode).positive
        fit = powerlaw.fit_powerlaw(degrees, config.xmin_fixed, config.mle_method)
    except UndefinedProperty as exc:
        for name in (alpha_name, p_name, xmin_name):
            props.set_undefined(name, exc.reason)
        return
    setattr(props, alpha_name, fit.alpha)
    setattr(props, xmin_name, fit.xmin)
    if not config.compute_pvalues:
        props.set_undefined(p_name, "disabled")
        return
    try:
        seed = derive_seed(config.seed, "gof", mode)
        p = powerlaw.gof_pvalue(degrees, fit, config.bootstrap_b, seed, config.xmin_fixed, config.mle_method)
        setattr(props, p_name, p)
    except UndefinedProperty as exc:
        props.set_undefined(p_name, exc.reason)


def compute_properties(
    net: CollocationNetwork,
    config: PropertyConfig | None = None,
    document_level: bool = False,
) -> GlobalProperties:
    """Every applicable global property of ``net``; failures are recorded per field.

    With ``document_level=True`` the component counts are still computed but
    listed in ``informational``, since a document network is connected by
    construction.
    """
    config = config or PropertyConfig()
    props = GlobalProperties(n_vertices=net.n_vertices, n_edges=net.n_edges)

    if net.n_vertices == 0:
        for name in PROPERTY_FIELDS[2:] + XMIN_FIELDS:
            props.set_undefined(name, NOT_APPLICABLE if (name in DIRECTED_ONLY and not net.directed) else "empty graph")
        return props

    def attempt(name, fn):
        try:
            setattr(props, name, fn())
        except UndefinedProperty as exc:
            props.set_undefined(name, exc.reason)

    attempt("shrinkage", lambda: shrinkage_exponent(net))
    attempt("global_clustering", lambda: graphalg.clustering(net, "global"))

    undirected_paths = graphalg.path_stats(net, respect_direction=False)
    props.diameter_undirected = undirected_paths.diameter
    if net.directed:
        props.diameter_directed = graphalg.path_stats(net, respect_direction=True).diameter

    def mu():
        return small_worldliness(
            net,
            config.baseline,
            config.baseline_samples,
            config.seed,
            config.low_degree_clustering,
            _path_length=undirected_paths.average_length,
        )

    attempt("small_worldliness", mu)

    _fill_powerlaw(props, net, "all", "", config)
    if net.directed:
        _fill_powerlaw(props, net, "in", "_in", config)
        _fill_powerlaw(props, net, "out", "_out", config)

    weak = graphalg.components(net, "weak")
    props.n_cc, props.giant_cc = weak.count, weak.giant_size
    if net.directed:
        strong = graphalg.components(net, "strong")
        props.n_scc, props.giant_scc = strong.count, strong.giant_size

    if not net.directed:
        for name in DIRECTED_ONLY:
            props.set_undefined(name, NOT_APPLICABLE)
    if document_level:
        props.informational = COMPONENT_FIELDS
    return props


def property_values(records: list[GlobalProperties], name: str) -> np.ndarray:
    """Defined values of one field across records, as floats."""
    return np.array([r.get(name) for r in records if r.get(name) is not None], dtype=float)
