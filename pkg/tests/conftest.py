import itertools

import numpy as np
import pytest

from graphdecay import Graph, Partition, PauliMap, SingleQubitPauliChannel

ACCEPTANCE_LINES: list[str] = []


def random_connected_graph(rng, n, p_edge=None):
    """Random spanning tree plus extra edges, so the graph is connected."""
    p_edge = rng.uniform(0.1, 0.7) if p_edge is None else p_edge
    order = rng.permutation(n)
    edges = {tuple(sorted((int(order[k]), int(order[rng.integers(k)])))) for k in range(1, n)}
    for i, j in itertools.combinations(range(n), 2):
        if rng.random() < p_edge:
            edges.add((i, j))
    return Graph(n, edges)


def random_graph(rng, n, p_edge=0.5):
    return Graph(n, [(i, j) for i, j in itertools.combinations(range(n), 2) if rng.random() < p_edge])


def random_bipartition(rng, n):
    while True:
        labels = rng.integers(0, 2, size=n)
        if 0 < labels.sum() < n:
            return Partition([int(x) for x in labels])


def random_channel(rng, concentration=None):
    if concentration is None:
        concentration = [(1, 1, 1, 1), (8, 1, 1, 1), (40, 1, 1, 1)][rng.integers(3)]
    return SingleQubitPauliChannel(tuple(rng.dirichlet(concentration)))


def random_individual_map(rng, n, identity_fraction=0.0):
    chans = []
    for _ in range(n):
        if rng.random() < identity_fraction:
            chans.append(SingleQubitPauliChannel((1.0, 0.0, 0.0, 0.0)))
        else:
            chans.append(random_channel(rng))
    return PauliMap.individual(chans)


def all_cuts(n):
    """Unordered bipartitions as side-A vertex lists (vertex 0 always on side A)."""
    for r in range(0, n - 1):
        for rest in itertools.combinations(range(1, n), r):
            yield [0, *rest]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
