"""Entanglement quantifiers on small dense density matrices.

Dense matrices use the big-endian qubit order: local qubit ``j`` of an
``m``-qubit register is bit ``m - 1 - j`` of the basis index, i.e. axis
``j`` after reshaping to ``(2,) * m``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import InputError, ResourceError, UnsupportedQuantifierError
from .graph import Graph, bits_of
from .patterns import PatternDistribution

DENSE_LIMIT = 12
HERMITIAN_TOL = 1e-10
ZERO_REPORT_TOL = 1e-10

_YY = np.array([[0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]], dtype=float)


def n_qubits_of(rho: np.ndarray) -> int:
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise InputError(f"expected a square matrix, got shape {rho.shape}")
    dim = rho.shape[0]
    n = dim.bit_length() - 1
    if 1 << n != dim:
        raise InputError(f"matrix dimension {dim} is not a power of two")
    return n


def check_density_matrix(rho, tol: float = 1e-10, psd_tol: float = 1e-9) -> np.ndarray:
    """Validate trace, Hermiticity and positivity; return ``rho`` as an array."""
    rho = np.asarray(rho)
    n_qubits_of(rho)
    if abs(np.trace(rho) - 1.0) > tol:
        raise InputError(f"trace {np.trace(rho)!r} is not 1")
    if np.max(np.abs(rho - rho.conj().T), initial=0.0) > tol:
        raise InputError("matrix is not Hermitian")
    if np.linalg.eigvalsh(rho).min() < -psd_tol:
        raise InputError("matrix is not positive semidefinite")
    return rho


def hermitian_eigenvalues(m, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Ascending real spectrum of a Hermitian matrix."""
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InputError(f"expected a square matrix, got shape {m.shape}")
    scale = max(1.0, float(np.max(np.abs(m), initial=0.0)))
    if np.max(np.abs(m - m.conj().T), initial=0.0) > tol * scale:
        raise InputError("matrix is not Hermitian within tolerance")
    return np.linalg.eigvalsh(m)


def partial_transpose(rho, qubits) -> np.ndarray:
    """Transpose the tensor factors of ``qubits`` (local indices)."""
    rho = np.asarray(rho)
    n = n_qubits_of(rho)
    qubits = sorted(set(int(q) for q in qubits))
    if any(not 0 <= q < n for q in qubits):
        raise InputError(f"qubits {qubits} out of range for {n}-qubit matrix")
    axes = list(range(2 * n))
    for q in qubits:
        axes[q], axes[n + q] = axes[n + q], axes[q]
    return rho.reshape((2,) * (2 * n)).transpose(axes).reshape(rho.shape)


def negativity(rho, side_a) -> float:
    """Negativity ``(||rho^{T_A}||_1 - 1) / 2`` across ``side_a`` versus the rest.

    An empty side on either end gives 0.
    """
    rho = np.asarray(rho)
    n = n_qubits_of(rho)
    side_a = sorted(set(int(q) for q in side_a))
    if any(not 0 <= q < n for q in side_a):
        raise InputError(f"qubits {side_a} out of range for {n}-qubit matrix")
    if not side_a or len(side_a) == n:
        return 0.0
    ev = hermitian_eigenvalues(partial_transpose(rho, side_a))
    return max(0.0, float(-ev[ev < 0].sum()))


def concurrence(rho) -> float:
    """Wootters concurrence of a two-qubit state.

    Uses the singular values of ``W^T (Y⊗Y) W`` with ``rho = W W^†``, which
    equal the square roots of the eigenvalues of ``rho (Y⊗Y) rho* (Y⊗Y)``
    without squaring small eigenvalues into round-off.
    """
    rho = np.asarray(rho)
    if rho.shape != (4, 4):
        raise InputError(f"concurrence needs a 4x4 matrix, got shape {rho.shape}")
    a, v = np.linalg.eigh(rho)
    w = v * np.sqrt(np.clip(a, 0.0, None))
    lam = np.linalg.svd(w.T @ _YY @ w, compute_uv=False)
    return float(min(1.0, max(0.0, lam[0] - lam[1:].sum())))


def binary_entropy(x: float) -> float:
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return float(-x * np.log2(x) - (1 - x) * np.log2(1 - x))


def eof_from_concurrence(c: float) -> float:
    """Entanglement of formation of a two-qubit state with concurrence ``c``."""
    c = min(1.0, max(0.0, float(c)))
    return binary_entropy((1 + np.sqrt(1 - c * c)) / 2)


def entanglement_of_formation(rho) -> float:
    return eof_from_concurrence(concurrence(rho))


# graph-basis states ---------------------------------------------------------


def _little_endian_masks(m: int) -> np.ndarray:
    """For each basis index, the bitmask with bit ``j`` set iff local qubit ``j`` is 1."""
    idx = np.arange(1 << m, dtype=np.int64)
    out = np.zeros_like(idx)
    for j in range(m):
        out |= ((idx >> (m - 1 - j)) & 1) << j
    return out


def graph_basis_vectors(graph: Graph, patterns) -> np.ndarray:
    """Columns ``Z^pattern |G>`` for the given local-index patterns."""
    m = graph.n
    lm = _little_endian_masks(m)
    parity = np.zeros(1 << m, dtype=np.int64)
    for i, j in graph.edges:
        parity ^= ((lm >> i) & (lm >> j)) & 1
    base = np.where(parity == 1, -1.0, 1.0) / np.sqrt(2.0 ** m)
    pats = np.asarray(list(patterns), dtype=np.int64)
    flips = np.bitwise_count(lm[:, None] & pats[None, :]) & 1
    return base[:, None] * np.where(flips == 1, -1.0, 1.0)


def graph_diagonal_matrix(graph: Graph, weights: dict[int, float], dense_limit: int = DENSE_LIMIT) -> np.ndarray:
    """Dense ``sum_g w_g |G_g><G_g|`` for local-index patterns ``g``."""
    if graph.n > dense_limit:
        raise ResourceError(f"{graph.n}-qubit dense matrix exceeds the dense limit of {dense_limit}")
    keys = sorted(weights)
    v = graph_basis_vectors(graph, keys) * np.sqrt(np.array([weights[k] for k in keys]))
    return v @ v.T


def boundary_state(boundary_graph: Graph | None, dist: PatternDistribution, qubits=None, dense_limit: int = DENSE_LIMIT) -> np.ndarray:
    """Dense boundary state ``sum_g p(g) |G_g><G_g|`` of a boundary graph.

    Parameters
    ----------
    boundary_graph : Graph or None
        Graph on the boundary qubits in local indices; ``None`` for an empty boundary.
    dist : PatternDistribution
        Distribution over the boundary qubits in global indices.
    qubits : sequence of int, optional
        Global index of each local boundary qubit. Defaults to ``dist.support``.
    """
    qubits = tuple(dist.support if qubits is None else qubits)
    if tuple(sorted(qubits)) != dist.support:
        raise InputError(f"distribution support {dist.support} does not match boundary {qubits}")
    if not qubits:
        return np.ones((1, 1))
    if boundary_graph is None or boundary_graph.n != len(qubits):
        raise InputError("boundary graph size does not match boundary qubits")
    if len(qubits) > dense_limit:
        raise ResourceError(f"boundary of {len(qubits)} qubits exceeds the dense limit of {dense_limit}")
    local = {g: k for k, g in enumerate(qubits)}
    weights: dict[int, float] = {}
    for pat, pr in dist.items():
        lp = 0
        for g in bits_of(pat):
            lp |= 1 << local[g]
        weights[lp] = weights.get(lp, 0.0) + pr
    return graph_diagonal_matrix(boundary_graph, weights, dense_limit)


# quantifier selection -------------------------------------------------------


@dataclass(frozen=True)
class QuantifierSpec:
    """Which entanglement quantifier to evaluate.

    ``kind`` is ``"negativity"`` or ``"eof"``. ``grouping`` holds the part
    ids placed on side A; every other part is side B.
    """

    kind: str = "negativity"
    grouping: frozenset = frozenset({0})

    def __post_init__(self):
        if self.kind not in ("negativity", "eof"):
            raise InputError(f"unknown quantifier {self.kind!r}")
        object.__setattr__(self, "grouping", frozenset(int(g) for g in self.grouping))
        if not self.grouping:
            raise InputError("quantifier grouping must name at least one part")

    @property
    def label(self) -> str:
        parts = ",".join(str(g) for g in sorted(self.grouping))
        return f"{self.kind}[{parts}]"

    def evaluate(self, rho: np.ndarray, side_a) -> float:
        """Quantifier value of ``rho`` across local qubits ``side_a`` versus the rest."""
        n = n_qubits_of(rho)
        side_a = sorted(set(side_a))
        if self.kind == "negativity":
            return negativity(rho, side_a)
        if n != 2:
            raise UnsupportedQuantifierError(
                f"unsupported quantifier for this boundary size: eof needs 2 boundary qubits, got {n}"
            )
        if len(side_a) != 1:
            return 0.0
        return entanglement_of_formation(rho)

    def check_boundary(self, n_boundary: int):
        if self.kind == "eof" and n_boundary not in (0, 2):
            raise UnsupportedQuantifierError(
                f"unsupported quantifier for this boundary size: eof needs 2 boundary qubits, got {n_boundary}"
            )


def parse_quantifier(text: str, part_ids: dict[int, int] | None = None) -> QuantifierSpec:
    """Parse ``negativity``, ``negativity:1,3`` or ``eof``.

    Part labels after the colon are external labels, translated through
    ``part_ids`` when given. Without a grouping, side A is internal part 0.
    """
    text = text.strip().lower()
    kind, _, rest = text.partition(":")
    kind = {"eof2": "eof", "eof": "eof", "negativity": "negativity", "neg": "negativity"}.get(kind.strip())
    if kind is None:
        raise InputError(f"unknown quantifier {text!r}; use negativity[:parts] or eof")
    if not rest.strip():
        return QuantifierSpec(kind)
    try:
        labels = [int(t) for t in rest.split(",") if t.strip()]
    except ValueError:
        raise InputError(f"bad part list in quantifier {text!r}") from None
    if part_ids is not None:
        missing = [lab for lab in labels if lab not in part_ids]
        if missing:
            raise InputError(f"quantifier names unknown parts {missing}")
        labels = [part_ids[lab] for lab in labels]
    return QuantifierSpec(kind, frozenset(labels))
