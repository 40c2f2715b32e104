"""Exact entanglement of noisy graph-diagonal states and its size-independent bound.

The noisy state is a mixture of graph-basis states. Removing the CZ gates
that do not cross the partition (local unitaries) leaves the boundary graph
state, labelled by the boundary bits ``gamma``, tensored with product
states on the other qubits, labelled by the flag bits ``delta``. Measuring
the flags is LOCC and, by convexity, loses nothing, so the entanglement is
the flag-average of the conditional boundary entanglement. Dropping the
flags gives a lower bound that only sees the boundary neighbourhood.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .channels import PauliMap, correlated_delta_support, induced_pattern_distribution
from .entanglement import (
    DENSE_LIMIT,
    QuantifierSpec,
    boundary_state,
    graph_basis_vectors,
    graph_diagonal_matrix,
    n_qubits_of,
)
from .exceptions import InputError
from .graph import BoundaryDecomposition, Graph, Partition, bits_of, boundary_of
from .patterns import PatternDistribution, restrict, split_by, xor_convolve

log = logging.getLogger(__name__)

DELTA_SKIP_TOL = 1e-14
SKIPPED_MASS_TOL = 1e-10


@dataclass(frozen=True)
class GraphDiagonalState:
    """Mixture of graph-basis states of ``graph``.

    ``dist`` may live on a subset of the vertices; the remaining bits are
    taken as already marginalised out.
    """

    graph: Graph
    dist: PatternDistribution

    def __post_init__(self):
        if self.dist.support_mask >> self.graph.n:
            raise InputError(f"support {self.dist.support} not within the {self.graph.n} vertices")

    @property
    def support(self) -> tuple:
        return self.dist.support

    @classmethod
    def pure(cls, graph: Graph) -> "GraphDiagonalState":
        return cls(graph, PatternDistribution.delta(range(graph.n)))

    @classmethod
    def maximally_mixed(cls, graph: Graph) -> "GraphDiagonalState":
        return cls(graph, PatternDistribution.uniform(range(graph.n)))

    def to_dense(self, dense_limit: int = DENSE_LIMIT) -> np.ndarray:
        """Dense density matrix; requires full support."""
        if self.dist.support != tuple(range(self.graph.n)):
            raise InputError("dense form needs a distribution over every vertex")
        return graph_diagonal_matrix(self.graph, dict(self.dist.items()), dense_limit)


@dataclass(frozen=True)
class EntanglementCurvePoint:
    p: float
    exact: float | None
    bound: float | None
    quantifier: str
    partition: str


def _boundary_split(decomp: BoundaryDecomposition, q: QuantifierSpec) -> list[int]:
    """Local boundary indices on side A of the quantifier's grouping."""
    if max(q.grouping) >= decomp.partition.n_parts:
        raise InputError(f"grouping {sorted(q.grouping)} names parts beyond {decomp.partition.n_parts}")
    return [k for k, lab in enumerate(decomp.boundary_labels()) if lab in q.grouping]


def _is_trivial(decomp: BoundaryDecomposition, q: QuantifierSpec) -> bool:
    if decomp.is_empty:
        log.warning("partition has no crossing edges; entanglement is 0")
        return True
    side_a = _boundary_split(decomp, q)
    if not side_a or len(side_a) == len(decomp.boundary_qubits):
        log.warning("grouping %s leaves one side of the boundary empty; entanglement is 0", sorted(q.grouping))
        return True
    return False


def flag_average(decomp: BoundaryDecomposition, joint: PatternDistribution, q: QuantifierSpec, dense_limit: int = DENSE_LIMIT) -> float:
    """Flag-averaged boundary entanglement of a joint (boundary, flag) distribution.

    Flags are the bits of ``joint`` outside the boundary. Flag values are
    accumulated in ascending order; values rarer than ``DELTA_SKIP_TOL`` are
    skipped and their total mass is checked against ``SKIPPED_MASS_TOL``.
    """
    y_mask = decomp.boundary_mask
    if y_mask & ~joint.support_mask:
        raise InputError("joint distribution does not cover the boundary qubits")
    q.check_boundary(len(decomp.boundary_qubits))
    side_a = _boundary_split(decomp, q)
    flags = bits_of(joint.support_mask & ~y_mask)
    total = 0.0
    skipped = 0.0
    for _, (p_flag, cond) in split_by(joint, flags).items():
        if p_flag < DELTA_SKIP_TOL:
            skipped += p_flag
            continue
        rho = boundary_state(decomp.boundary_graph, cond, decomp.boundary_qubits, dense_limit)
        total += p_flag * q.evaluate(rho, side_a)
    if skipped > SKIPPED_MASS_TOL:
        log.warning("skipped flag mass %.3g exceeds %.1g", skipped, SKIPPED_MASS_TOL)
    elif skipped:
        log.debug("skipped flag mass %.3g", skipped)
    return total


def exact_entanglement(graph: Graph, partition: Partition, pmap: PauliMap, q: QuantifierSpec, *, reduce_flags: bool = True, dense_limit: int = DENSE_LIMIT) -> float:
    """Exact entanglement of the graph state of ``graph`` after ``pmap``.

    Parameters
    ----------
    reduce_flags : bool
        Condition only on flag bits that are statistically linked to the
        boundary bits (exact). With ``False`` every non-boundary qubit is
        used as a flag, which is slower and gives the same value.
    """
    decomp = boundary_of(graph, partition)
    q.check_boundary(len(decomp.boundary_qubits))
    if _is_trivial(decomp, q):
        return 0.0
    y_mask = decomp.boundary_mask
    if reduce_flags:
        delta = correlated_delta_support(graph, decomp, pmap)
    else:
        delta = ((1 << graph.n) - 1) & ~y_mask
    joint = induced_pattern_distribution(graph, pmap, bits_of(y_mask | delta))
    return flag_average(decomp, joint, q, dense_limit)


def boundary_marginal(graph: Graph, partition: Partition, pmap: PauliMap) -> PatternDistribution:
    """Distribution of the boundary bits alone, with every flag discarded."""
    decomp = boundary_of(graph, partition)
    return induced_pattern_distribution(graph, pmap, decomp.boundary_qubits)


def lower_bound_entanglement(graph: Graph, partition: Partition, pmap: PauliMap, q: QuantifierSpec, *, dense_limit: int = DENSE_LIMIT) -> float:
    """Entanglement of the boundary state with the flags traced out.

    Only error sources on the boundary qubits and their neighbours enter,
    so the value does not change when qubits are added away from the
    boundary neighbourhood.
    """
    decomp = boundary_of(graph, partition)
    q.check_boundary(len(decomp.boundary_qubits))
    if _is_trivial(decomp, q):
        return 0.0
    marginal = induced_pattern_distribution(graph, pmap, decomp.boundary_qubits)
    rho = boundary_state(decomp.boundary_graph, marginal, decomp.boundary_qubits, dense_limit)
    return q.evaluate(rho, _boundary_split(decomp, q))


def curve_point(graph: Graph, partition: Partition, pmap: PauliMap, q: QuantifierSpec, p: float, *, partition_label: str = "") -> EntanglementCurvePoint:
    return EntanglementCurvePoint(
        p=p,
        exact=exact_entanglement(graph, partition, pmap, q),
        bound=lower_bound_entanglement(graph, partition, pmap, q),
        quantifier=q.label,
        partition=partition_label,
    )


# graph-diagonal inputs ------------------------------------------------------


def twirl_to_graph_diagonal(rho, graph: Graph) -> GraphDiagonalState:
    """Graph-basis diagonal of a dense state.

    ``rho`` may be a density matrix or a state vector of ``graph.n`` qubits.
    """
    rho = np.asarray(rho)
    if rho.ndim == 1:
        n = int(rho.shape[0]).bit_length() - 1
        if 1 << n != rho.shape[0]:
            raise InputError(f"state vector length {rho.shape[0]} is not a power of two")
    else:
        n = n_qubits_of(rho)
    if n != graph.n:
        raise InputError(f"state has {n} qubits, graph has {graph.n}")
    basis = graph_basis_vectors(graph, range(1 << n))
    if rho.ndim == 1:
        probs = np.abs(basis.T @ rho) ** 2
    else:
        probs = np.einsum("bi,bc,ci->i", basis, rho, basis).real
    probs = np.clip(probs, 0.0, None)
    probs = probs / probs.sum()
    # basis column i carries the local pattern i, which is also the global one here
    return GraphDiagonalState(graph, PatternDistribution(range(n), {i: float(p) for i, p in enumerate(probs) if p > 0}))


def evolve_graph_diagonal(s: GraphDiagonalState, pmap: PauliMap) -> GraphDiagonalState:
    """Apply a Pauli map to a graph-diagonal state."""
    noise = induced_pattern_distribution(s.graph, pmap, s.support)
    return GraphDiagonalState(s.graph, xor_convolve(s.dist, noise))


def exact_entanglement_graph_diagonal(s: GraphDiagonalState, partition: Partition, pmap: PauliMap, q: QuantifierSpec, *, reduce_flags: bool = True, dense_limit: int = DENSE_LIMIT) -> float:
    """Exact entanglement of a graph-diagonal state after ``pmap``."""
    graph = s.graph
    decomp = boundary_of(graph, partition)
    q.check_boundary(len(decomp.boundary_qubits))
    if _is_trivial(decomp, q):
        return 0.0
    y_mask = decomp.boundary_mask
    if y_mask & ~s.dist.support_mask:
        raise InputError("graph-diagonal state does not cover the boundary qubits")
    evolved = evolve_graph_diagonal(s, pmap)
    if reduce_flags:
        delta = correlated_delta_support(graph, decomp, pmap, extra_sources=[s.dist])
        delta &= s.dist.support_mask
    else:
        delta = s.dist.support_mask & ~y_mask
    joint = restrict(evolved.dist, bits_of(y_mask | delta))
    return flag_average(decomp, joint, q, dense_limit)


__all__ = [
    "GraphDiagonalState",
    "EntanglementCurvePoint",
    "flag_average",
    "exact_entanglement",
    "boundary_marginal",
    "lower_bound_entanglement",
    "curve_point",
    "twirl_to_graph_diagonal",
    "evolve_graph_diagonal",
    "exact_entanglement_graph_diagonal",
]
