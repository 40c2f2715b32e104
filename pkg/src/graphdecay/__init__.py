"""Entanglement evolution of graph and graph-diagonal states under Pauli noise.

The exact value of any convex LOCC monotone is computed on the boundary
qubits of the partition only, averaged over the graph-basis outcomes of the
remaining qubits. Dropping that average gives a lower bound that depends
only on the boundary neighbourhood. A dense density-matrix simulator is
included as an independent check at small sizes.
"""

__version__ = "0.1.0"

from .channels import (
    PauliMap,
    SingleQubitPauliChannel,
    bit_flip,
    correlated_delta_support,
    dephasing,
    depolarizing,
    induced_pattern_distribution,
    joint_boundary_distribution,
)
from .engine import (
    EntanglementCurvePoint,
    GraphDiagonalState,
    evolve_graph_diagonal,
    exact_entanglement,
    exact_entanglement_graph_diagonal,
    lower_bound_entanglement,
    twirl_to_graph_diagonal,
)
from .entanglement import (
    QuantifierSpec,
    boundary_state,
    concurrence,
    eof_from_concurrence,
    hermitian_eigenvalues,
    negativity,
    partial_transpose,
)
from .estimators import EntanglementDecay, GraphDiagonalTwirl
from .exceptions import InputError, ResourceError, UnsupportedQuantifierError
from .graph import BoundaryDecomposition, Graph, Partition, boundary_of, gf2_cut_rank
from .patterns import PatternDistribution, PauliString, condition, restrict, xor_convolve, z_image

__all__ = [
    "BoundaryDecomposition",
    "EntanglementCurvePoint",
    "EntanglementDecay",
    "Graph",
    "GraphDiagonalState",
    "GraphDiagonalTwirl",
    "InputError",
    "Partition",
    "PatternDistribution",
    "PauliMap",
    "PauliString",
    "QuantifierSpec",
    "ResourceError",
    "SingleQubitPauliChannel",
    "UnsupportedQuantifierError",
    "bit_flip",
    "boundary_of",
    "boundary_state",
    "concurrence",
    "condition",
    "correlated_delta_support",
    "dephasing",
    "depolarizing",
    "eof_from_concurrence",
    "evolve_graph_diagonal",
    "exact_entanglement",
    "exact_entanglement_graph_diagonal",
    "gf2_cut_rank",
    "hermitian_eigenvalues",
    "induced_pattern_distribution",
    "joint_boundary_distribution",
    "lower_bound_entanglement",
    "negativity",
    "partial_transpose",
    "restrict",
    "twirl_to_graph_diagonal",
    "xor_convolve",
    "z_image",
]
