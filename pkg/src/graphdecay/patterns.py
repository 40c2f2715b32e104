"""Z-pattern arithmetic on graph states.

A Z-pattern is an ``int`` bitmask over global qubit indices: bit ``k`` set
means a ``Z`` acts on qubit ``k``. Pushing a Pauli through the stabilizer of
a graph state turns ``X_k`` into ``Z`` on the neighbours of ``k`` and
``Y_k`` into ``Z`` on the neighbours and on ``k``; the resulting global sign
is irrelevant for graph-basis projectors and is dropped.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping

from .exceptions import InputError
from .graph import Graph, bits_of, mask_of

PRUNE_TOL = 1e-15
NORM_TOL = 1e-12

LETTERS = "IXYZ"

_prune_tol = [PRUNE_TOL]


@contextmanager
def pruning(tol: float):
    """Temporarily use ``tol`` as the convolution pruning threshold."""
    if not 0.0 <= tol < 1e-6:
        raise InputError(f"prune tolerance {tol!r} outside [0, 1e-6)")
    _prune_tol.append(float(tol))
    try:
        yield
    finally:
        _prune_tol.pop()


@dataclass(frozen=True)
class PauliString:
    """Tensor product of single-qubit Paulis, phase ignored."""

    letters: str

    def __post_init__(self):
        letters = self.letters.upper()
        bad = set(letters) - set(LETTERS)
        if bad:
            raise InputError(f"invalid Pauli letters {sorted(bad)} in {self.letters!r}")
        object.__setattr__(self, "letters", letters)

    def __len__(self) -> int:
        return len(self.letters)

    @classmethod
    def single(cls, n: int, qubit: int, letter: str) -> "PauliString":
        s = ["I"] * n
        s[qubit] = letter
        return cls("".join(s))


def letter_image(graph: Graph, qubit: int, letter: str) -> int:
    """Z-pattern equivalent to ``letter`` acting on ``qubit`` of a graph state."""
    if letter == "I":
        return 0
    if letter == "Z":
        return 1 << qubit
    nbr = graph.neighbor_mask(qubit)
    if letter == "X":
        return nbr
    if letter == "Y":
        return nbr ^ (1 << qubit)
    raise InputError(f"invalid Pauli letter {letter!r}")


def z_image(graph: Graph, p: PauliString) -> int:
    """Z-pattern of a Pauli string acting on the graph state of ``graph``."""
    if len(p) != graph.n:
        raise InputError(f"Pauli string has length {len(p)}, graph has {graph.n} qubits")
    out = 0
    for k, letter in enumerate(p.letters):
        out ^= letter_image(graph, k, letter)
    return out


class PatternDistribution:
    """Sparse probability distribution over Z-patterns on a fixed support.

    Parameters
    ----------
    support : iterable of int
        Qubit indices the patterns live on.
    entries : mapping
        Pattern (global-index bitmask) to probability. Patterns with bits
        outside the support are rejected.
    check : bool
        Validate non-negativity and normalisation.
    """

    __slots__ = ("support", "support_mask", "_entries")

    def __init__(self, support: Iterable[int], entries: Mapping[int, float], check: bool = True):
        support = tuple(sorted(set(int(s) for s in support)))
        smask = mask_of(support)
        ent = {}
        for pat, pr in entries.items():
            if pat & ~smask:
                raise InputError(f"pattern {pat:#b} has bits outside support {support}")
            if pr != 0.0:
                ent[int(pat)] = float(pr)
        if check:
            if any(pr < 0 for pr in ent.values()):
                raise InputError("negative probability in pattern distribution")
            total = sum(ent.values())
            if abs(total - 1.0) > NORM_TOL:
                raise InputError(f"pattern distribution sums to {total!r}, not 1")
        self.support = support
        self.support_mask = smask
        self._entries = MappingProxyType(ent)

    @property
    def entries(self) -> Mapping[int, float]:
        return self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def __getitem__(self, pattern: int) -> float:
        return self._entries.get(pattern, 0.0)

    def __iter__(self):
        return iter(self._entries)

    def items(self):
        return self._entries.items()

    def sorted_items(self) -> list[tuple[int, float]]:
        return sorted(self._entries.items())

    def total(self) -> float:
        return sum(self._entries.values())

    def varying_mask(self) -> int:
        """Bits that are not constant across the stored patterns."""
        it = iter(self._entries)
        first = next(it, 0)
        out = 0
        for pat in it:
            out |= pat ^ first
        return out

    def __repr__(self) -> str:
        body = ", ".join(f"{set(bits_of(p)) or '{}'}: {pr:.6g}" for p, pr in self.sorted_items()[:8])
        more = ", ..." if len(self) > 8 else ""
        return f"PatternDistribution(support={self.support}, {{{body}{more}}})"

    def allclose(self, other: "PatternDistribution", atol: float = 1e-12) -> bool:
        keys = set(self._entries) | set(other._entries)
        return all(abs(self[k] - other[k]) <= atol for k in keys)

    @classmethod
    def delta(cls, support: Iterable[int] = (), pattern: int = 0) -> "PatternDistribution":
        """Point mass on ``pattern`` (the empty pattern by default)."""
        return cls(support, {pattern: 1.0})

    @classmethod
    def uniform(cls, support: Iterable[int]) -> "PatternDistribution":
        support = tuple(sorted(set(support)))
        w = 1.0 / 2 ** len(support)
        pats = [0]
        for q in support:
            pats += [p | (1 << q) for p in pats]
        return cls(support, {p: w for p in pats})


def _pruned(support, acc: dict[int, float]) -> PatternDistribution:
    tol = _prune_tol[-1]
    kept = {p: pr for p, pr in acc.items() if pr >= tol}
    if len(kept) != len(acc):
        total = sum(kept.values())
        kept = {p: pr / total for p, pr in kept.items()}
    return PatternDistribution(support, kept)


def xor_convolve(a: PatternDistribution, b: PatternDistribution) -> PatternDistribution:
    """Distribution of ``x ^ y`` for independent ``x ~ a`` and ``y ~ b``.

    The result lives on the union of the two supports. Entries below the
    pruning threshold (``PRUNE_TOL`` unless changed with :func:`pruning`)
    are dropped and the remainder renormalised.
    """
    support = set(a.support) | set(b.support)
    if len(b) == 1 and 0 in b.entries:
        return PatternDistribution(support, a.entries)
    if len(a) == 1 and 0 in a.entries:
        return PatternDistribution(support, b.entries)
    acc: dict[int, float] = {}
    for x, px in a.sorted_items():
        for y, py in b.sorted_items():
            z = x ^ y
            acc[z] = acc.get(z, 0.0) + px * py
    return _pruned(support, acc)


def _sub_mask(d: PatternDistribution, sub: Iterable[int]) -> int:
    smask = mask_of(sub)
    if smask & ~d.support_mask:
        raise InputError(f"{sorted(bits_of(smask & ~d.support_mask))} not in support {d.support}")
    return smask


def restrict(d: PatternDistribution, sub: Iterable[int]) -> PatternDistribution:
    """Marginal of ``d`` on the qubits ``sub``."""
    smask = _sub_mask(d, sub)
    if smask == d.support_mask:
        return d
    acc: dict[int, float] = {}
    for pat, pr in d.sorted_items():
        key = pat & smask
        acc[key] = acc.get(key, 0.0) + pr
    return PatternDistribution(bits_of(smask), acc)


def split_by(d: PatternDistribution, sub: Iterable[int]) -> dict[int, tuple[float, PatternDistribution]]:
    """Condition ``d`` on every observed value of the bits in ``sub``.

    Returns ``{value: (probability, conditional)}`` in ascending ``value``
    order, where each conditional lives on the complement of ``sub``.
    """
    smask = _sub_mask(d, sub)
    rest = bits_of(d.support_mask & ~smask)
    groups: dict[int, dict[int, float]] = {}
    for pat, pr in d.sorted_items():
        g = groups.setdefault(pat & smask, {})
        key = pat & ~smask
        g[key] = g.get(key, 0.0) + pr
    out = {}
    for value in sorted(groups):
        g = groups[value]
        total = sum(g.values())
        out[value] = (total, PatternDistribution(rest, {k: v / total for k, v in g.items()}, check=False))
    return out


def condition(d: PatternDistribution, sub: Iterable[int], value: int) -> tuple[float, PatternDistribution]:
    """Probability of ``sub == value`` and the conditional on the remaining bits.

    A zero-probability value returns ``(0.0, empty distribution)``.
    """
    smask = _sub_mask(d, sub)
    if value & ~smask:
        raise InputError("conditioning value has bits outside the conditioned set")
    rest = bits_of(d.support_mask & ~smask)
    acc: dict[int, float] = {}
    for pat, pr in d.sorted_items():
        if pat & smask == value:
            key = pat & ~smask
            acc[key] = acc.get(key, 0.0) + pr
    total = sum(acc.values())
    if total == 0.0:
        return 0.0, PatternDistribution(rest, {}, check=False)
    return total, PatternDistribution(rest, {k: v / total for k, v in acc.items()}, check=False)
