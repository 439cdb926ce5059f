import pytest

from collocnet.netbuild import build_network
from collocnet.corpus import tokenize

FOX = "The quick brown fox jumped over the lazy dog"
AIRPLANE = "The airplane took off. Off we go to Alaska."


@pytest.fixture
def fox_tokens():
    return tokenize(FOX)


@pytest.fixture
def fox_digraph(fox_tokens):
    return build_network(fox_tokens, "digraph")


@pytest.fixture
def fox_undigraph2(fox_tokens):
    return build_network(fox_tokens, "undigraph2")
