import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphdecay import (
    Graph,
    InputError,
    PatternDistribution,
    PauliMap,
    PauliString,
    SingleQubitPauliChannel,
    bit_flip,
    dephasing,
    depolarizing,
    induced_pattern_distribution,
    restrict,
    z_image,
)
from graphdecay.oracle import apply_pauli_map_dense, graph_state_vector

from conftest import random_channel, random_connected_graph, random_individual_map

PAULIS = {
    "I": np.eye(2),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]]),
    "Z": np.diag([1.0, -1.0]),
}


def brute_induced(graph, pmap, support):
    """Enumerate every Kraus string and map it to its Z image."""
    out = {}
    smask = sum(1 << q for q in support)
    for p, s in pmap.kraus_terms():
        pat = z_image(graph, s) & smask
        out[pat] = out.get(pat, 0.0) + p
    return PatternDistribution(support, out)


def test_channel_families():
    assert depolarizing(0.2).probs == pytest.approx((0.85, 0.05, 0.05, 0.05))
    assert dephasing(0.4).probs == pytest.approx((0.8, 0.0, 0.0, 0.2))
    assert bit_flip(0.4).probs == pytest.approx((0.8, 0.2, 0.0, 0.0))
    assert depolarizing(0).is_identity
    with pytest.raises(InputError):
        depolarizing(1.2)
    with pytest.raises(InputError):
        SingleQubitPauliChannel((0.5, 0.5, 0.1, 0.0))
    with pytest.raises(InputError):
        SingleQubitPauliChannel((1.0, 0.0, 0.0))


def test_two_qubit_path_induced_example():
    # depolarizing on qubit 1 only: X and Y flip the partner, Y and Z flip qubit 1 itself
    g = Graph.path(2)
    pmap = PauliMap.individual([depolarizing(0.2), depolarizing(0)])
    d = induced_pattern_distribution(g, pmap, [0, 1])
    assert dict(d.entries) == pytest.approx({0b00: 0.85, 0b10: 0.05, 0b11: 0.05, 0b01: 0.05})


def test_explicit_collective_dephasing():
    q = 0.3
    g = Graph.ring(5)
    pmap = PauliMap.explicit([(1 - q, "IIIII"), (q, "ZZZZZ")])
    d = induced_pattern_distribution(g, pmap, range(5))
    assert dict(d.entries) == pytest.approx({0: 1 - q, 0b11111: q})
    with pytest.raises(InputError):
        PauliMap.explicit([(0.5, "II"), (0.4, "ZZ")])
    with pytest.raises(InputError):
        PauliMap.explicit([(0.5, "II"), (0.5, "ZZZ")])
    with pytest.raises(InputError):
        PauliMap.explicit([(0.5, "II"), (0.5, "ZZ")], max_terms=1)


@pytest.mark.parametrize("seed", range(5))
def test_joint_distribution_matches_enumeration(seed):
    rng = np.random.default_rng(seed)
    g = random_connected_graph(rng, 4)
    pmap = random_individual_map(rng, 4)
    assert len(pmap.kraus_terms()) <= 4**4
    d = induced_pattern_distribution(g, pmap, range(4))
    assert d.allclose(brute_induced(g, pmap, list(range(4))), atol=1e-14)


@given(st.integers(2, 10), st.integers(0, 2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_restriction_consistency(n, seed):
    rng = np.random.default_rng(seed)
    g = random_connected_graph(rng, n)
    pmap = random_individual_map(rng, n, identity_fraction=0.3)
    full = induced_pattern_distribution(g, pmap, range(n))
    sub = sorted(int(x) for x in rng.choice(n, size=int(rng.integers(1, n + 1)), replace=False))
    assert induced_pattern_distribution(g, pmap, sub).allclose(restrict(full, sub), atol=1e-12)


@given(st.integers(2, 7), st.integers(0, 2**32 - 1))
@settings(max_examples=30, deadline=None)
def test_permutation_equivariance(n, seed):
    rng = np.random.default_rng(seed)
    g = random_connected_graph(rng, n)
    chans = [random_channel(rng) for _ in range(n)]
    perm = [int(x) for x in rng.permutation(n)]
    g2 = g.relabel(perm)
    pmap2 = PauliMap.individual([chans[perm.index(v)] for v in range(n)])
    d1 = induced_pattern_distribution(g, PauliMap.individual(chans), range(n))
    d2 = induced_pattern_distribution(g2, pmap2, range(n))
    moved = {sum(1 << perm[k] for k in range(n) if pat >> k & 1): pr for pat, pr in d1.items()}
    assert d2.allclose(PatternDistribution(range(n), moved), atol=1e-13)


def test_then_composition_single_qubit():
    a, b = depolarizing(0.2), dephasing(0.4)
    c = a.then(b)
    # Z after X gives Y, Z after Z gives I, and so on
    pI, pX, pY, pZ = a.probs
    qI, _, _, qZ = b.probs
    assert c.probs == pytest.approx((pI * qI + pZ * qZ, pX * qI + pY * qZ, pY * qI + pX * qZ, pZ * qI + pI * qZ))
    assert depolarizing(0.3).then(depolarizing(0.5)).probs == pytest.approx(depolarizing(1 - 0.7 * 0.5).probs)


def test_then_composition_maps_agree_with_dense():
    rng = np.random.default_rng(7)
    g = random_connected_graph(rng, 3)
    m1 = random_individual_map(rng, 3)
    m2 = PauliMap.explicit([(0.6, "III"), (0.3, "XZY"), (0.1, "ZZI")])
    psi = graph_state_vector(g)
    rho = np.outer(psi, psi.conj())
    seq = apply_pauli_map_dense(apply_pauli_map_dense(rho, m1), m2)
    assert np.allclose(apply_pauli_map_dense(rho, m1.then(m2)), seq, atol=1e-14)
    assert np.allclose(apply_pauli_map_dense(rho, m2.then(m1)), seq, atol=1e-14)
    assert m1.then(m1).is_individual
    with pytest.raises(InputError):
        m1.then(PauliMap.identity(2))


@pytest.mark.parametrize("p", [0.0, 0.3, 1.0])
def test_single_qubit_depolarizing_dense(p):
    rng = np.random.default_rng(3)
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    v /= np.linalg.norm(v)
    rho = np.outer(v, v.conj())
    out = apply_pauli_map_dense(rho, PauliMap.uniform(1, depolarizing(p)))
    assert np.allclose(out, (1 - p) * rho + p * np.eye(2) / 2, atol=1e-15)


def test_kraus_expansion_weights():
    pmap = PauliMap.uniform(3, depolarizing(0.4))
    terms = pmap.kraus_terms()
    assert len(terms) == 64
    assert sum(p for p, _ in terms) == pytest.approx(1.0)
    weights = dict((s.letters, p) for p, s in terms)
    assert weights["XYZ"] == pytest.approx(0.1**3)
    assert weights["III"] == pytest.approx(0.7**3)
    for letters in itertools.product("IXYZ", repeat=3):
        assert "".join(letters) in weights
    assert PauliString("XYZ").letters == "XYZ"
