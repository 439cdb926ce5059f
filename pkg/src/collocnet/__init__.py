"""Word collocation networks and their global complex-network properties."""

from collocnet.corpus import Corpus, Document, load_corpus, ngram_stream, tokenize
from collocnet.errors import UndefinedProperty
from collocnet.netbuild import (
    CollocationNetwork,
    NetType,
    build_collection_network,
    build_network,
    remove_self_loops,
)

__version__ = "0.1.0"

__all__ = [
    "CollocationNetwork",
    "Corpus",
    "Document",
    "NetType",
    "UndefinedProperty",
    "build_collection_network",
    "build_network",
    "load_corpus",
    "ngram_stream",
    "remove_self_loops",
    "tokenize",
]
