"""Brute-force density-matrix simulation used as ground truth at small sizes.

Nothing here touches the pattern-distribution code: states are built by
applying CZ gates to ``|+>^n``, noise is applied as explicit Kraus sums,
and the partial transpose is done by index arithmetic. Memory for an
``n``-qubit density matrix is ``16 * 4**n`` bytes (256 MiB at ``n = 12``).
"""

from __future__ import annotations

import numpy as np

from .channels import PauliMap
from .exceptions import InputError, ResourceError
from .graph import Graph

DENSE_LIMIT = 12

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def _check_size(n: int, dense_limit: int):
    if n > dense_limit:
        raise ResourceError(
            f"{n} qubits exceed the dense limit of {dense_limit} "
            f"(a density matrix would need {16 * 4 ** n / 2 ** 20:.0f} MiB)"
        )


def _n_of(rho: np.ndarray) -> int:
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise InputError(f"expected a square matrix, got shape {rho.shape}")
    n = rho.shape[0].bit_length() - 1
    if 1 << n != rho.shape[0]:
        raise InputError(f"dimension {rho.shape[0]} is not a power of two")
    return n


def graph_state_vector(graph: Graph, dense_limit: int = DENSE_LIMIT) -> np.ndarray:
    """State vector of the graph state, qubit 0 most significant."""
    n = graph.n
    _check_size(n, dense_limit)
    psi = np.full((2,) * n, 2.0 ** (-n / 2), dtype=complex)
    for i, j in graph.sorted_edges():
        idx = [slice(None)] * n
        idx[i] = 1
        idx[j] = 1
        psi[tuple(idx)] *= -1
    return psi.reshape(-1)


def apply_single_qubit(rho: np.ndarray, op: np.ndarray, qubit: int) -> np.ndarray:
    """``op`` on ``qubit`` from the left and ``op^†`` from the right."""
    n = _n_of(rho)
    t = rho.reshape((2,) * (2 * n))
    t = np.tensordot(op, t, axes=([1], [qubit]))
    t = np.moveaxis(t, 0, qubit)
    t = np.tensordot(t, op.conj(), axes=([n + qubit], [1]))
    t = np.moveaxis(t, -1, n + qubit)
    return t.reshape(rho.shape)


def _pauli_string_matrix(letters: str) -> np.ndarray:
    m = np.ones((1, 1), dtype=complex)
    for c in letters:
        m = np.kron(m, PAULI[c])
    return m


def apply_pauli_map_dense(rho, pmap: PauliMap, dense_limit: int = DENSE_LIMIT) -> np.ndarray:
    """``sum_mu p_mu K_mu rho K_mu^†`` on a dense density matrix."""
    rho = np.asarray(rho, dtype=complex)
    n = _n_of(rho)
    if pmap.n != n:
        raise InputError(f"map acts on {pmap.n} qubits, state has {n}")
    _check_size(n, dense_limit)
    if pmap.is_individual:
        for k, ch in enumerate(pmap.channels):
            if ch.probs[0] == 1.0:
                continue
            out = np.zeros_like(rho)
            for letter, pr in zip("IXYZ", ch.probs):
                if pr:
                    out += pr * apply_single_qubit(rho, PAULI[letter], k)
            rho = out
        return rho
    out = np.zeros_like(rho)
    for pr, s in pmap.kraus:
        if pr:
            k = _pauli_string_matrix(s.letters)
            out += pr * (k @ rho @ k.conj().T)
    return out


def evolved_graph_state(graph: Graph, pmap: PauliMap, dense_limit: int = DENSE_LIMIT) -> np.ndarray:
    psi = graph_state_vector(graph, dense_limit)
    return apply_pauli_map_dense(np.outer(psi, psi.conj()), pmap, dense_limit)


def _partial_transpose_by_index(rho: np.ndarray, side_a: list[int]) -> np.ndarray:
    n = _n_of(rho)
    dim = 1 << n
    swap = 0
    for q in side_a:
        swap |= 1 << (n - 1 - q)
    rows = np.arange(dim)[:, None]
    cols = np.arange(dim)[None, :]
    # exchange the side-A bits between row and column index
    new_rows = (rows & ~swap) | (cols & swap)
    new_cols = (cols & ~swap) | (rows & swap)
    return rho[new_rows, new_cols]


def dense_negativity(rho, side_a) -> float:
    """Negativity of a full dense state across ``side_a`` versus the rest."""
    rho = np.asarray(rho)
    n = _n_of(rho)
    side_a = sorted(set(int(q) for q in side_a))
    if any(not 0 <= q < n for q in side_a):
        raise InputError(f"qubits {side_a} out of range")
    if not side_a or len(side_a) == n:
        return 0.0
    ev = np.linalg.eigvalsh(_partial_transpose_by_index(rho, side_a))
    return max(0.0, float(-ev[ev < 0].sum()))


def graph_basis_state(graph: Graph, pattern: int, dense_limit: int = DENSE_LIMIT) -> np.ndarray:
    """``Z^pattern |G>`` with bit ``k`` of ``pattern`` acting on qubit ``k``."""
    psi = graph_state_vector(graph, dense_limit).reshape((2,) * graph.n)
    for k in range(graph.n):
        if pattern >> k & 1:
            idx = [slice(None)] * graph.n
            idx[k] = 1
            psi[tuple(idx)] *= -1
    return psi.reshape(-1)


def dense_graph_basis_overlap(rho, graph: Graph, pattern: int) -> float:
    """``<G_pattern| rho |G_pattern>``."""
    rho = np.asarray(rho)
    if _n_of(rho) != graph.n:
        raise InputError("state and graph sizes differ")
    g = graph_basis_state(graph, pattern)
    return float(np.real(g.conj() @ rho @ g))


def graph_basis_change(graph: Graph, rho) -> np.ndarray:
    """All matrix elements ``<G_mu| rho |G_nu>``, indexed by pattern."""
    rho = np.asarray(rho)
    basis = np.stack([graph_basis_state(graph, mu) for mu in range(1 << graph.n)], axis=1)
    return basis.conj().T @ rho @ basis
