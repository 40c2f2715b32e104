import itertools

import numpy as np
import pytest

from graphdecay import Graph, InputError, PauliMap, ResourceError, depolarizing, induced_pattern_distribution
from graphdecay.oracle import (
    apply_pauli_map_dense,
    dense_graph_basis_overlap,
    dense_negativity,
    evolved_graph_state,
    graph_basis_change,
    graph_basis_state,
    graph_state_vector,
)

from conftest import random_connected_graph, random_individual_map


def test_single_vertex_and_edge():
    assert np.allclose(graph_state_vector(Graph(1)), np.array([1, 1]) / np.sqrt(2))
    assert np.allclose(graph_state_vector(Graph.path(2)), np.array([1, 1, 1, -1]) / 2)
    # qubit 0 is the most significant bit
    assert np.allclose(graph_basis_state(Graph(2), 0b01), np.array([1, 1, -1, -1]) / 2)


def test_graph_basis_orthonormal():
    g = Graph.ring(6)
    basis = np.stack([graph_basis_state(g, mu) for mu in range(64)], axis=1)
    assert np.allclose(basis.conj().T @ basis, np.eye(64), atol=1e-13)


def test_identity_map_is_bit_exact():
    g = Graph.complete(3)
    psi = graph_state_vector(g)
    rho = np.outer(psi, psi.conj())
    assert np.array_equal(apply_pauli_map_dense(rho, PauliMap.identity(3)), rho)
    assert np.array_equal(apply_pauli_map_dense(rho, PauliMap.explicit([(1.0, "III")])), rho)


def test_full_depolarizing_gives_maximally_mixed():
    rho = evolved_graph_state(Graph.ring(4), PauliMap.uniform(4, depolarizing(1.0)))
    assert np.allclose(rho, np.eye(16) / 16, atol=1e-15)


@pytest.mark.parametrize("seed", range(5))
def test_evolved_state_is_a_state(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 6))
    g = random_connected_graph(rng, n)
    rho = evolved_graph_state(g, random_individual_map(rng, n))
    assert np.trace(rho).real == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(rho, rho.conj().T, atol=1e-14)
    assert np.linalg.eigvalsh(rho).min() > -1e-12


@pytest.mark.parametrize("seed", range(8))
def test_noisy_state_is_graph_diagonal_with_induced_weights(seed):
    rng = np.random.default_rng(100 + seed)
    n = int(rng.integers(2, 7))
    g = random_connected_graph(rng, n)
    pmap = random_individual_map(rng, n, identity_fraction=0.2)
    rho = evolved_graph_state(g, pmap)
    m = graph_basis_change(g, rho)
    off = m - np.diag(np.diag(m))
    assert np.max(np.abs(off)) <= 1e-12
    dist = induced_pattern_distribution(g, pmap, range(n))
    for mu in range(1 << n):
        assert dense_graph_basis_overlap(rho, g, mu) == pytest.approx(dist[mu], abs=1e-12)


def test_dense_negativity_bell_and_product():
    rho = evolved_graph_state(Graph.path(2), PauliMap.identity(2))
    assert dense_negativity(rho, [0]) == pytest.approx(0.5)
    prod = evolved_graph_state(Graph(3), PauliMap.identity(3))
    for side in ([0], [0, 1], [1]):
        assert dense_negativity(prod, side) == pytest.approx(0.0, abs=1e-14)


def test_size_guards():
    with pytest.raises(ResourceError, match="dense limit"):
        graph_state_vector(Graph.path(6), dense_limit=5)
    with pytest.raises(InputError):
        apply_pauli_map_dense(np.eye(4) / 4, PauliMap.identity(3))
    with pytest.raises(InputError):
        dense_negativity(np.eye(3) / 3, [0])


def test_explicit_map_matches_individual():
    ch = depolarizing(0.3)
    terms = []
    for letters in itertools.product(range(4), repeat=2):
        terms.append((ch.probs[letters[0]] * ch.probs[letters[1]], "".join("IXYZ"[k] for k in letters)))
    g = Graph.path(2)
    a = evolved_graph_state(g, PauliMap.explicit(terms))
    b = evolved_graph_state(g, PauliMap.uniform(2, ch))
    assert np.allclose(a, b, atol=1e-15)
