import random

import networkx as nx
import pytest
from hypothesis import HealthCheck, settings

from stablenet.core import MulTree, XNetwork
from stablenet.fixtures import load_fixture
from stablenet.oracles import GenConfig, gen_multree, gen_network

# filled by test_acceptance, one line per criterion
ACCEPTANCE_RESULTS = []

settings.register_profile("stablenet", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("stablenet")


def to_nx(obj):
    """Labelled MultiDiGraph copy, for an isomorphism check independent of canonical.py."""
    g = nx.MultiDiGraph()
    for v in obj.graph.vertices:
        g.add_node(v, label=obj.label_of(v))
    for a in obj.graph.arcs:
        g.add_edge(a.tail, a.head)
    return g


def nx_isomorphic(a, b):
    return nx.is_isomorphic(to_nx(a), to_nx(b), node_match=lambda x, y: x["label"] == y["label"])


def random_stable(seed, taxa=(4, 8), rets=(0, 3)):
    rng = random.Random(seed)
    cfg = GenConfig(rng.randint(*taxa), rng.randint(*rets), seed, ensure_stable=True)
    return gen_network(cfg)


def random_network(seed, taxa=(3, 8), rets=(0, 3)):
    rng = random.Random(seed)
    return gen_network(GenConfig(rng.randint(*taxa), rng.randint(*rets), seed))


def random_multree(seed, taxa=(3, 6), dups=(0, 3)):
    rng = random.Random(seed)
    return gen_multree(GenConfig(rng.randint(*taxa), rng.randint(*dups), seed))


@pytest.fixture(scope="session")
def fig():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = load_fixture(name)
        return cache[name]

    return get


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_RESULTS:
            terminalreporter.write_line(line)
