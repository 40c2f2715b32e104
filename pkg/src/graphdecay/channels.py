"""Pauli noise models and the Z-pattern distributions they induce on graph states."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .exceptions import InputError
from .graph import BoundaryDecomposition, Graph, bits_of, mask_of
from .patterns import LETTERS, PatternDistribution, PauliString, letter_image, xor_convolve, z_image

MAX_KRAUS = 4096
_TOL = 1e-12


@dataclass(frozen=True)
class SingleQubitPauliChannel:
    """Letter probabilities ``(p_I, p_X, p_Y, p_Z)`` of a one-qubit Pauli channel."""

    probs: tuple

    def __post_init__(self):
        probs = tuple(float(x) for x in self.probs)
        if len(probs) != 4:
            raise InputError(f"need 4 letter probabilities, got {len(probs)}")
        if any(not math.isfinite(x) or x < 0 for x in probs):
            raise InputError(f"letter probabilities must be finite and >= 0, got {probs}")
        if abs(sum(probs) - 1.0) > _TOL:
            raise InputError(f"letter probabilities sum to {sum(probs)!r}, not 1")
        total = sum(probs)
        if total != 1.0:
            probs = tuple(x / total for x in probs)
        object.__setattr__(self, "probs", probs)

    @property
    def is_identity(self) -> bool:
        return self.probs[0] == 1.0

    def then(self, other: "SingleQubitPauliChannel") -> "SingleQubitPauliChannel":
        """Channel equal to applying ``self`` and then ``other``."""
        out = [0.0] * 4
        # Pauli letters multiply like XOR on their (x, z) bits: I=00 X=10 Y=11 Z=01
        for a in range(4):
            for b in range(4):
                out[_LETTER_PRODUCT[a][b]] += self.probs[a] * other.probs[b]
        return SingleQubitPauliChannel(tuple(out))


_XZ = [(0, 0), (1, 0), (1, 1), (0, 1)]
_LETTER_PRODUCT = [[_XZ.index((xa ^ xb, za ^ zb)) for (xb, zb) in _XZ] for (xa, za) in _XZ]

IDENTITY = SingleQubitPauliChannel((1.0, 0.0, 0.0, 0.0))


def _check_p(p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise InputError(f"channel parameter must lie in [0, 1], got {p!r}")
    return p


def depolarizing(p: float) -> SingleQubitPauliChannel:
    """Replace the qubit by ``I/2`` with probability ``p``."""
    p = _check_p(p)
    return SingleQubitPauliChannel((1 - 3 * p / 4, p / 4, p / 4, p / 4))


def dephasing(p: float) -> SingleQubitPauliChannel:
    p = _check_p(p)
    return SingleQubitPauliChannel((1 - p / 2, 0.0, 0.0, p / 2))


def bit_flip(p: float) -> SingleQubitPauliChannel:
    p = _check_p(p)
    return SingleQubitPauliChannel((1 - p / 2, p / 2, 0.0, 0.0))


CHANNEL_FAMILIES = {
    "depolarizing": depolarizing,
    "dephasing": dephasing,
    "bitflip": bit_flip,
    "bit_flip": bit_flip,
}


class PauliMap:
    """Pauli map on ``n`` qubits.

    Use :meth:`individual` for a product of single-qubit channels and
    :meth:`explicit` for a weighted list of Pauli strings (collective noise).
    """

    __slots__ = ("n", "channels", "kraus")

    def __init__(self, n: int, channels=None, kraus=None):
        self.n = n
        self.channels = channels
        self.kraus = kraus

    @property
    def is_individual(self) -> bool:
        return self.channels is not None

    @classmethod
    def individual(cls, channels: Sequence[SingleQubitPauliChannel]) -> "PauliMap":
        channels = tuple(channels)
        if not channels:
            raise InputError("individual map needs at least one qubit channel")
        for ch in channels:
            if not isinstance(ch, SingleQubitPauliChannel):
                raise InputError(f"expected SingleQubitPauliChannel, got {type(ch).__name__}")
        return cls(len(channels), channels=channels)

    @classmethod
    def uniform(cls, n: int, channel: SingleQubitPauliChannel) -> "PauliMap":
        return cls.individual([channel] * n)

    @classmethod
    def identity(cls, n: int) -> "PauliMap":
        return cls.individual([IDENTITY] * n)

    @classmethod
    def explicit(cls, terms: Iterable[tuple[float, PauliString | str]], max_terms: int = MAX_KRAUS) -> "PauliMap":
        terms = [(float(p), s if isinstance(s, PauliString) else PauliString(s)) for p, s in terms]
        if not terms:
            raise InputError("explicit Pauli map needs at least one Kraus term")
        if len(terms) > max_terms:
            raise InputError(f"{len(terms)} Kraus terms exceed the limit of {max_terms}")
        n = len(terms[0][1])
        if any(len(s) != n for _, s in terms):
            raise InputError("Kraus strings have different lengths")
        if any(not math.isfinite(p) or p < 0 for p, _ in terms):
            raise InputError("Kraus probabilities must be finite and >= 0")
        total = sum(p for p, _ in terms)
        if abs(total - 1.0) > _TOL:
            raise InputError(f"Kraus probabilities sum to {total!r}, not 1")
        return cls(n, kraus=tuple(terms))

    def kraus_terms(self) -> list[tuple[float, PauliString]]:
        """Expanded weighted Pauli strings (exponential for individual maps)."""
        if self.kraus is not None:
            return list(self.kraus)
        terms = [(1.0, "")]
        for ch in self.channels:
            terms = [(p * q, s + LETTERS[k]) for p, s in terms for k, q in enumerate(ch.probs) if q > 0]
        return [(p, PauliString(s)) for p, s in terms]

    def then(self, other: "PauliMap") -> "PauliMap":
        """Map equal to applying ``self`` and then ``other``."""
        if self.n != other.n:
            raise InputError("composed maps act on different numbers of qubits")
        if self.is_individual and other.is_individual:
            return PauliMap.individual([a.then(b) for a, b in zip(self.channels, other.channels)])
        acc: dict[str, float] = {}
        for p, s in self.kraus_terms():
            for q, t in other.kraus_terms():
                letters = "".join(LETTERS[_LETTER_PRODUCT[LETTERS.index(a)][LETTERS.index(b)]] for a, b in zip(s.letters, t.letters))
                acc[letters] = acc.get(letters, 0.0) + p * q
        return PauliMap.explicit(sorted(((p, s) for s, p in acc.items()), key=lambda t: t[1]), max_terms=len(acc))

    def __repr__(self) -> str:
        if self.is_individual:
            return f"PauliMap.individual({list(ch.probs for ch in self.channels)})"
        return f"PauliMap.explicit({[(p, s.letters) for p, s in self.kraus]})"


def _check_map(graph: Graph, pmap: PauliMap):
    if pmap.n != graph.n:
        raise InputError(f"map acts on {pmap.n} qubits, graph has {graph.n}")


def qubit_pattern_distribution(graph: Graph, qubit: int, channel: SingleQubitPauliChannel, support_mask: int) -> dict[int, float]:
    """Restricted Z-pattern outcomes of one qubit channel."""
    out: dict[int, float] = {}
    for letter, pr in zip(LETTERS, channel.probs):
        if pr > 0:
            pat = letter_image(graph, qubit, letter) & support_mask
            out[pat] = out.get(pat, 0.0) + pr
    return out


def error_sources(graph: Graph, pmap: PauliMap, support_mask: int | None = None) -> list[dict[int, float]]:
    """Independent pattern sources of a map, each restricted to ``support_mask``.

    An individual map yields one source per qubit; an explicit map is a
    single source. Sources that are certainly the empty pattern are omitted.
    """
    _check_map(graph, pmap)
    if support_mask is None:
        support_mask = (1 << graph.n) - 1
    if pmap.is_individual:
        sources = []
        for k, ch in enumerate(pmap.channels):
            if not graph.closed_neighborhood(1 << k) & support_mask:
                continue
            src = qubit_pattern_distribution(graph, k, ch, support_mask)
            if src != {0: 1.0}:
                sources.append(src)
        return sources
    acc: dict[int, float] = {}
    for p, s in pmap.kraus:
        if p > 0:
            pat = z_image(graph, s) & support_mask
            acc[pat] = acc.get(pat, 0.0) + p
    return [acc]


def induced_pattern_distribution(graph: Graph, pmap: PauliMap, support: Iterable[int]) -> PatternDistribution:
    """Graph-basis distribution of the noisy graph state, marginalised to ``support``.

    Applying ``pmap`` to the graph state of ``graph`` gives a mixture of
    graph-basis states; this returns the mixture weights restricted to the
    qubits in ``support``.
    """
    support = tuple(sorted(set(support)))
    smask = mask_of(support)
    if smask >> graph.n:
        raise InputError(f"support {support} not within the {graph.n} vertices")
    dist = PatternDistribution.delta(support)
    for src in error_sources(graph, pmap, smask):
        dist = xor_convolve(dist, PatternDistribution(support, src))
    return dist


def correlated_delta_support(graph: Graph, decomposition: BoundaryDecomposition, pmap: PauliMap, extra_sources: Sequence[PatternDistribution] = ()) -> int:
    """Non-boundary qubits whose graph-basis bits can carry information on the boundary bits.

    Starting from the boundary qubits, every independent error source that
    varies a collected bit adds all the bits it varies, until nothing
    changes. Bits outside the result are produced by sources independent of
    everything inside it, so conditioning on them leaves the conditional
    boundary states unchanged. For individual noise on a connected graph
    this is usually every non-boundary qubit; a fixed-radius shell around
    the boundary is not enough.
    """
    y_mask = decomposition.boundary_mask
    if not y_mask:
        return 0
    varying = []
    for src in error_sources(graph, pmap):
        first = next(iter(src))
        m = 0
        for pat in src:
            m |= pat ^ first
        if m:
            varying.append(m)
    varying += [d.varying_mask() for d in extra_sources]
    varying = [m for m in varying if m]
    collected = y_mask
    changed = True
    while changed:
        changed = False
        for m in varying:
            if m & collected and m & ~collected:
                collected |= m
                changed = True
    return collected & ~y_mask


def joint_boundary_distribution(graph: Graph, decomposition: BoundaryDecomposition, pmap: PauliMap) -> PatternDistribution:
    """Joint distribution of the boundary bits and the correlated flag bits."""
    _check_map(graph, pmap)
    delta = correlated_delta_support(graph, decomposition, pmap)
    return induced_pattern_distribution(graph, pmap, bits_of(decomposition.boundary_mask | delta))
