"""scikit-learn style wrappers around the engine.

``EntanglementDecay`` maps a column of channel parameters to entanglement
values, so a sweep is ``EntanglementDecay(...).fit().transform(ps)``.
``GraphDiagonalTwirl`` maps rows of state vectors to graph-basis
probabilities. Both follow the usual estimator conventions: constructor
arguments are stored untouched and exposed via ``get_params``, validation
happens in ``fit``, fitted attributes end with an underscore.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .channels import CHANNEL_FAMILIES, PauliMap, SingleQubitPauliChannel
from .engine import exact_entanglement, lower_bound_entanglement, twirl_to_graph_diagonal
from .entanglement import QuantifierSpec, parse_quantifier
from .exceptions import InputError
from .graph import Graph, Partition, boundary_of


def check_parameter_grid(X) -> np.ndarray:
    """Validate channel parameters: one column of finite values in ``[0, 1]``."""
    X = check_array(X, ensure_2d=False, dtype=np.float64)
    if X.ndim == 2:
        if X.shape[1] != 1:
            raise InputError(f"expected a single column of channel parameters, got shape {X.shape}")
        X = X[:, 0]
    if np.any(X < 0) or np.any(X > 1):
        raise InputError("channel parameters must lie in [0, 1]")
    return X


def check_graph(graph) -> Graph:
    if isinstance(graph, Graph):
        return graph
    if isinstance(graph, tuple) and len(graph) == 2:
        return Graph(*graph)
    raise InputError(f"expected a Graph or an (n, edges) tuple, got {type(graph).__name__}")


def check_partition(partition, n: int) -> Partition:
    if partition is None:
        return Partition.bipartition(n, [0])
    if isinstance(partition, Partition):
        p = partition
    else:
        p = Partition(partition)
    if len(p.labels) != n:
        raise InputError(f"partition labels {len(p.labels)} vertices, graph has {n}")
    return p


class EntanglementDecay(TransformerMixin, BaseEstimator):
    """Entanglement of a noisy graph state as a function of the noise strength.

    Parameters
    ----------
    graph : Graph or (n, edges)
    partition : Partition, sequence of part labels, or None
        ``None`` splits vertex 0 from the rest.
    channel : str or callable
        Single-qubit family name (``depolarizing``, ``dephasing``,
        ``bitflip``) applied uniformly, or a callable ``p -> PauliMap``.
    quantifier : str or QuantifierSpec
    method : {"exact", "bound"}
        Flag-averaged exact value or the flag-discarded lower bound.
    """

    def __init__(self, graph=None, partition=None, channel="depolarizing", quantifier="negativity", method="exact"):
        self.graph = graph
        self.partition = partition
        self.channel = channel
        self.quantifier = quantifier
        self.method = method

    def fit(self, X=None, y=None):
        graph = check_graph(self.graph)
        partition = check_partition(self.partition, graph.n)
        if self.method not in ("exact", "bound"):
            raise InputError(f"method must be 'exact' or 'bound', got {self.method!r}")
        q = self.quantifier if isinstance(self.quantifier, QuantifierSpec) else parse_quantifier(self.quantifier)
        if not callable(self.channel) and self.channel not in CHANNEL_FAMILIES:
            raise InputError(f"unknown channel {self.channel!r}")
        self.graph_ = graph
        self.partition_ = partition
        self.quantifier_ = q
        self.boundary_ = boundary_of(graph, partition)
        q.check_boundary(len(self.boundary_.boundary_qubits))
        self.n_boundary_ = len(self.boundary_.boundary_qubits)
        return self

    def pauli_map(self, p: float) -> PauliMap:
        check_is_fitted(self, "boundary_")
        if callable(self.channel):
            pmap = self.channel(p)
            if isinstance(pmap, SingleQubitPauliChannel):
                pmap = PauliMap.uniform(self.graph_.n, pmap)
            return pmap
        return PauliMap.uniform(self.graph_.n, CHANNEL_FAMILIES[self.channel](p))

    def transform(self, X):
        """Entanglement for each channel parameter, shape ``(n_samples, 1)``."""
        check_is_fitted(self, "boundary_")
        ps = check_parameter_grid(X)
        fn = exact_entanglement if self.method == "exact" else lower_bound_entanglement
        out = [fn(self.graph_, self.partition_, self.pauli_map(float(p)), self.quantifier_) for p in ps]
        return np.asarray(out, dtype=float).reshape(-1, 1)

    def get_feature_names_out(self, input_features=None):
        return np.asarray([f"{self.method}_{self.quantifier_.kind}"], dtype=object)


class GraphDiagonalTwirl(TransformerMixin, BaseEstimator):
    """Graph-basis probabilities of state vectors (the LOCC twirl).

    Each row of ``X`` is a state vector of ``graph.n`` qubits; each output
    row holds ``<G_mu|psi>|^2`` indexed by pattern ``mu``.
    """

    def __init__(self, graph=None):
        self.graph = graph

    def fit(self, X=None, y=None):
        self.graph_ = check_graph(self.graph)
        self.n_features_out_ = 1 << self.graph_.n
        return self

    def transform(self, X):
        check_is_fitted(self, "graph_")
        # check_array rejects complex input
        X = np.asarray(X, dtype=np.complex128)
        if X.ndim != 2:
            raise InputError(f"expected a 2-D array of state vectors, got shape {X.shape}")
        if not np.all(np.isfinite(X)):
            raise InputError("state vectors contain non-finite values")
        if X.shape[1] != self.n_features_out_:
            raise InputError(f"state vectors must have length {self.n_features_out_}, got {X.shape[1]}")
        out = np.zeros((X.shape[0], self.n_features_out_))
        for r, psi in enumerate(X):
            norm = np.linalg.norm(psi)
            if norm == 0:
                raise InputError(f"row {r} is the zero vector")
            state = twirl_to_graph_diagonal(psi / norm, self.graph_)
            for pat, pr in state.dist.items():
                out[r, pat] = pr
        return out
