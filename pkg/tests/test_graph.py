import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphdecay import Graph, InputError, Partition, boundary_of, gf2_cut_rank
from graphdecay.graph import bits_of, distance_two_shell, format_graph, mask_of, parse_graph, parse_partition
from graphdecay.oracle import dense_negativity, graph_state_vector

from conftest import all_cuts, random_graph


def test_graph_invariants():
    g = Graph(4, [(0, 1), (1, 0), (2, 3)])
    assert g.edges == {(0, 1), (2, 3)}
    for i in range(4):
        for j in range(4):
            assert bool(g.neighbor_mask(i) >> j & 1) == ((min(i, j), max(i, j)) in g.edges)


@pytest.mark.parametrize("n, edges", [(3, [(1, 1)]), (3, [(0, 3)]), (0, []), (2, [(-1, 0)])])
def test_graph_rejects_bad_input(n, edges):
    with pytest.raises(InputError):
        Graph(n, edges)


def test_partition_requires_contiguous_parts():
    with pytest.raises(InputError):
        Partition([0, 2, 2])
    assert Partition([1, 0, 1]).n_parts == 2


def test_boundary_of_path_first_vs_rest():
    g = Graph.path(4)
    d = boundary_of(g, Partition.bipartition(4, [0]))
    assert d.crossing_edges == {(0, 1)}
    assert d.boundary_qubits == (0, 1)
    assert d.boundary_graph.edges == {(0, 1)}
    # shell of distance <= 2 around the boundary, as a graph-only notion
    assert bits_of(distance_two_shell(g, d.boundary_mask)) == (2, 3)
    # vertices whose bits may correlate with the boundary under individual noise
    assert bits_of(d.relevant_delta_support) == (2, 3)


def test_boundary_of_single_part_is_empty():
    d = boundary_of(Graph.path(4), Partition([0, 0, 0, 0]))
    assert d.crossing_edges == frozenset()
    assert d.boundary_qubits == ()
    assert d.is_empty


def test_boundary_graph_excludes_non_crossing_edges():
    # triangle 0-1-2 with 0,1 on one side: edge {0,1} joins two boundary qubits but does not cross
    g = Graph(3, [(0, 1), (1, 2), (0, 2)])
    d = boundary_of(g, Partition([0, 0, 1]))
    assert d.boundary_qubits == (0, 1, 2)
    assert d.crossing_edges == {(1, 2), (0, 2)}
    assert d.boundary_graph.edges == {(1, 2), (0, 2)}


def test_boundary_three_parts():
    # two triangles joined through vertex 2, three parts
    g = Graph(6, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5), (3, 5)])
    d = boundary_of(g, Partition([0, 0, 1, 1, 2, 2]))
    assert d.crossing_edges == {(1, 2), (0, 2), (3, 4), (3, 5)}
    assert d.boundary_qubits == (0, 1, 2, 3, 4, 5)
    assert d.induced_partition().labels == (0, 0, 1, 1, 2, 2)


def test_boundary_label_count_mismatch():
    with pytest.raises(InputError):
        boundary_of(Graph.path(4), Partition([0, 1, 1]))


@given(st.integers(2, 8), st.integers(0, 2**32 - 1))
@settings(max_examples=60, deadline=None)
def test_boundary_idempotent_on_boundary_graph(n, seed):
    rng = np.random.default_rng(seed)
    g = random_graph(rng, n)
    labels = rng.integers(0, 3, size=n)
    remap = {lab: k for k, lab in enumerate(sorted(set(labels)))}
    part = Partition([remap[lab] for lab in labels])
    d = boundary_of(g, part)
    assert d.relevant_delta_support & d.boundary_mask == 0
    if d.is_empty:
        return
    again = boundary_of(d.boundary_graph, d.induced_partition())
    local = d.boundary_qubits
    assert {(local[i], local[j]) for i, j in again.crossing_edges} == set(d.crossing_edges)


def test_cut_rank_examples():
    for n in range(2, 7):
        assert gf2_cut_rank(Graph.path(n), Partition.bipartition(n, [0])) == 1
    # K4 across {1,2}|{3,4}: the 2x2 biadjacency block is all ones, rank 1 over GF(2)
    assert gf2_cut_rank(Graph.complete(4), Partition.bipartition(4, [0, 1])) == 1
    assert gf2_cut_rank(Graph(5), Partition.bipartition(5, [0, 3])) == 0
    # 4-ring across {1,3}|{2,4}: both rows are [1, 1]
    assert gf2_cut_rank(Graph.ring(4), Partition.bipartition(4, [0, 2])) == 1
    # 4-ring across {1,2}|{3,4}: biadjacency [[0,1],[1,0]] -> rank 2
    assert gf2_cut_rank(Graph.ring(4), Partition.bipartition(4, [0, 1])) == 2


def test_cut_rank_needs_two_parts():
    with pytest.raises(InputError):
        gf2_cut_rank(Graph.path(3), Partition([0, 1, 2]))


def _rank_by_elimination(matrix):
    # independent check: rank of a 0/1 numpy matrix via explicit row reduction mod 2
    m = np.array(matrix, dtype=np.uint8) % 2
    rank = 0
    rows, cols = m.shape
    for c in range(cols):
        pivot = next((r for r in range(rank, rows) if m[r, c]), None)
        if pivot is None:
            continue
        m[[rank, pivot]] = m[[pivot, rank]]
        for r in range(rows):
            if r != rank and m[r, c]:
                m[r] ^= m[rank]
        rank += 1
    return rank


@given(st.integers(2, 8), st.integers(0, 2**32 - 1))
@settings(max_examples=80, deadline=None)
def test_cut_rank_properties(n, seed):
    rng = np.random.default_rng(seed)
    g = random_graph(rng, n)
    side_a = [v for v in range(n) if rng.random() < 0.5] or [0]
    if len(side_a) == n:
        side_a = side_a[:-1]
    part = Partition.bipartition(n, side_a)
    r = gf2_cut_rank(g, part)
    side_b = [v for v in range(n) if v not in side_a]
    assert r <= min(len(side_a), len(side_b))
    block = [[int((min(i, j), max(i, j)) in g.edges) for j in side_b] for i in side_a]
    assert r == _rank_by_elimination(block)


@pytest.mark.parametrize("seed", range(6))
def test_cut_rank_matches_pure_state_negativity(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 8))
    g = random_graph(rng, n)
    psi = graph_state_vector(g)
    rho = np.outer(psi, psi.conj())
    for side_a in all_cuts(n):
        r = gf2_cut_rank(g, Partition.bipartition(n, side_a))
        assert dense_negativity(rho, side_a) == pytest.approx((2**r - 1) / 2, abs=1e-9)


def test_graph_text_roundtrip():
    text = "# a path\nn 4\ne 1 2\ne 2 3  # middle\ne 3 4\n"
    g = parse_graph(text)
    assert g == Graph.path(4)
    assert parse_graph(format_graph(g)) == g


@pytest.mark.parametrize(
    "text, fragment",
    [("e 1 2\n", ":1:"), ("n 3\ne 1 4\n", ":2:"), ("n 3\nx 1\n", ":2:"), ("# nothing\n", "missing")],
)
def test_graph_parse_errors_carry_line_numbers(text, fragment):
    with pytest.raises(InputError, match=fragment):
        parse_graph(text, source="g.txt")


def test_partition_parsing():
    part, external = parse_partition("p 1 7\np 2 3\np 3 3\n", 3)
    assert part.labels == (1, 0, 0)
    assert external == [3, 7]
    with pytest.raises(InputError, match="without a part"):
        parse_partition("p 1 0\n", 2)
    with pytest.raises(InputError, match=":2:"):
        parse_partition("p 1 0\np 5 1\n", 2)


def test_mask_helpers():
    assert mask_of([0, 3]) == 0b1001
    assert bits_of(0b1001) == (0, 3)
    for m in range(64):
        assert mask_of(bits_of(m)) == m


def test_connectivity_helpers():
    g = Graph(5, [(0, 1), (1, 2), (3, 4)])
    assert not g.is_connected()
    assert bits_of(g.connected_component(1)) == (0, 1, 2)
    assert all(Graph.path(n).is_connected() for n in range(1, 6))
    assert sum(1 for _ in itertools.islice(all_cuts(4), 100)) == 7
