import numpy as np
import pytest

from collocnet.corpus import corpus_from_texts
from collocnet.incremental import GrowthTrace, growth_trace, order_edges, prefix_network, trend_tests
from collocnet.metrics import GlobalProperties, PropertyConfig, compute_properties
from collocnet.netbuild import NetType, build_collection_network, network_from_pairs

from conftest import FOX

FAST = PropertyConfig(compute_pvalues=False)


def small_corpus(seed=0, docs=6, length=60):
    rng = np.random.default_rng(seed)
    vocab = [f"w{i}" for i in range(40)]
    texts = [(f"d{i}", "g", " ".join(rng.choice(vocab, length))) for i in range(docs)]
    return corpus_from_texts(texts)


def test_occurrence_stream_fox():
    stream = order_edges(corpus_from_texts([("d", "g", FOX)]), "digraph")
    assert stream.edges[:2] == [("the", "quick"), ("quick", "brown")]
    assert len(stream) == 8


def test_duplicate_documents_same_stream():
    one = order_edges(corpus_from_texts([("d", "g", FOX)]), "digraph")
    two = order_edges(corpus_from_texts([("d1", "g", FOX), ("d2", "g", FOX)]), "digraph")
    assert one.edges == two.edges


def test_frequency_order():
    stream = order_edges(corpus_from_texts([("d", "g", "a b a b a c")]), "digraph", "frequency")
    assert stream.edges == [("a", "b"), ("b", "a"), ("a", "c")]


def test_simplified_stream_skips_loops():
    stream = order_edges(corpus_from_texts([("d", "g", "a a b")]), "sdigraph")
    assert stream.edges == [("a", "b")]


def test_stream_errors():
    with pytest.raises(ValueError):
        order_edges(corpus_from_texts([]), "digraph")
    with pytest.raises(ValueError):
        order_edges(corpus_from_texts([("d", "g", "solo")]), "digraph")
    with pytest.raises(ValueError):
        order_edges(corpus_from_texts([("d", "g", "a b")]), "digraph", "random")


def test_ceiling_rule():
    # one edge per document, so the stream has exactly 100 edges
    corpus = corpus_from_texts([(f"d{i}", "g", f"x{i} y{i}") for i in range(100)])
    stream = order_edges(corpus, "digraph")
    assert len(stream) == 100
    net = prefix_network(stream, 1)
    assert net.n_edges == 1 and net.n_vertices in (1, 2)
    assert stream.prefix_length(0.5) == 1


@pytest.mark.parametrize("net_type", ["digraph", "undigraph2", "sundigraph1"])
@pytest.mark.parametrize("policy", ["occurrence", "frequency"])
def test_full_checkpoint_equals_collection(net_type, policy):
    corpus = small_corpus()
    stream = order_edges(corpus, net_type, policy)
    trace = growth_trace(stream, [50, 100], FAST)
    full = compute_properties(build_collection_network(corpus, net_type), FAST)
    assert trace.checkpoints[-1][1].as_dict() == full.as_dict()


def test_prefix_equals_independent_subgraph():
    corpus = small_corpus(1)
    stream = order_edges(corpus, "digraph")
    for k in (1, 7, 33, 80):
        net = prefix_network(stream, k)
        edges = stream.edges[: -(-k * len(stream) // 100)]
        assert net.word_edges() == set(edges)
        assert set(net.words) == {w for e in edges for w in e}
        assert compute_properties(net, FAST).as_dict() == compute_properties(network_from_pairs(list(edges), "digraph"), FAST).as_dict()


def test_monotone_growth():
    trace = growth_trace(order_edges(small_corpus(2), "digraph"), range(1, 101), FAST)
    for name in ("n_vertices", "n_edges", "giant_cc", "giant_scc"):
        values = trace.trajectory(name)
        assert all(b >= a for a, b in zip(values, values[1:])), name


def test_checkpoint_validation():
    stream = order_edges(small_corpus(), "digraph")
    with pytest.raises(ValueError):
        growth_trace(stream, [0, 10], FAST)
    with pytest.raises(ValueError):
        growth_trace(stream, [10, 10], FAST)


def test_trend_tests_on_trace():
    trace = growth_trace(order_edges(small_corpus(3, docs=10), "digraph"), range(1, 101), FAST)
    runs, bartels, mk = trend_tests(trace, "n_edges")
    assert mk.extra["tau"] == 1.0 and mk.p_value < 0.05
    assert bartels.statistic < 2.0
    with pytest.raises(ValueError):
        trend_tests(trace, "pvalue_alpha")  # disabled everywhere


def test_trend_tests_constant_trajectory_flagged():
    flat = GrowthTrace([(k, GlobalProperties(n_vertices=5)) for k in range(1, 21)], NetType.DIGRAPH, "occurrence", 0)
    assert all(r.degenerate for r in trend_tests(flat, "n_vertices"))


def test_trend_tests_drop_undefined_checkpoints():
    points = [(k, GlobalProperties(n_vertices=k if k % 5 else None)) for k in range(1, 41)]
    results = trend_tests(GrowthTrace(points, NetType.DIGRAPH, "occurrence", 0), "n_vertices")
    assert all("dropped 8 undefined checkpoints" in r.notes for r in results)
    assert results[2].group_sizes == [32]
