"""Graphs, partitions and the boundary structure of a partitioned graph.

Vertices are 0-indexed internally. Vertex sets are stored as ``int``
bitmasks (bit ``v`` set means vertex ``v`` is in the set); the text file
formats use 1-indexed labels and are converted at the parser boundary.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .exceptions import InputError


def mask_of(vertices: Iterable[int]) -> int:
    """Bitmask with one bit set per vertex."""
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def bits_of(mask: int) -> tuple[int, ...]:
    """Ascending vertex indices of the set bits of ``mask``."""
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return tuple(out)


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertices ``0..n-1``.

    Parameters
    ----------
    n : int
        Number of vertices (at least 1).
    edges : iterable of pairs
        Unordered vertex pairs. Duplicates (in either orientation) collapse.
    """

    n: int
    edges: frozenset = field(default_factory=frozenset)
    _nbr: tuple = field(init=False, repr=False, compare=False)

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = ()):
        if int(n) != n or n < 1:
            raise InputError(f"vertex count must be a positive integer, got {n!r}")
        n = int(n)
        canon = set()
        for e in edges:
            i, j = (int(x) for x in e)
            if i == j:
                raise InputError(f"self-loop on vertex {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise InputError(f"edge {{{i},{j}}} has an endpoint outside [0, {n})")
            canon.add((min(i, j), max(i, j)))
        nbr = [0] * n
        for i, j in canon:
            nbr[i] |= 1 << j
            nbr[j] |= 1 << i
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", frozenset(canon))
        object.__setattr__(self, "_nbr", tuple(nbr))

    def neighbor_mask(self, v: int) -> int:
        return self._nbr[v]

    def neighbors(self, v: int) -> tuple[int, ...]:
        return bits_of(self._nbr[v])

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def closed_neighborhood(self, mask: int) -> int:
        """Vertices in ``mask`` together with all their neighbours."""
        out = mask
        for v in bits_of(mask):
            out |= self._nbr[v]
        return out

    def connected_component(self, mask: int) -> int:
        """All vertices reachable from ``mask``."""
        seen = 0
        frontier = mask
        while frontier:
            seen |= frontier
            frontier = self.closed_neighborhood(frontier) & ~seen
        return seen

    def is_connected(self) -> bool:
        return self.connected_component(1) == (1 << self.n) - 1

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with vertex ``v`` renamed to ``perm[v]``."""
        return Graph(self.n, [(perm[i], perm[j]) for i, j in self.edges])

    # constructors for common families

    @classmethod
    def path(cls, n: int) -> "Graph":
        """Linear cluster on ``n`` vertices."""
        return cls(n, [(i, i + 1) for i in range(n - 1)])

    @classmethod
    def ring(cls, n: int) -> "Graph":
        if n < 3:
            return cls.path(n)
        return cls(n, [(i, (i + 1) % n) for i in range(n)])

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(n, [(i, j) for i in range(n) for j in range(i + 1, n)])

    @classmethod
    def star(cls, n: int) -> "Graph":
        return cls(n, [(0, j) for j in range(1, n)])


@dataclass(frozen=True)
class Partition:
    """Assignment of every vertex to a part ``0..P-1``.

    ``labels[v]`` is the part of vertex ``v``. Every part id in range must be
    used by at least one vertex.
    """

    labels: tuple

    def __init__(self, labels: Sequence[int]):
        labels = tuple(int(x) for x in labels)
        if not labels:
            raise InputError("partition must label at least one vertex")
        n_parts = max(labels) + 1
        if min(labels) < 0 or set(labels) != set(range(n_parts)):
            raise InputError(f"part ids must be contiguous from 0, got {sorted(set(labels))}")
        object.__setattr__(self, "labels", labels)

    @property
    def n_parts(self) -> int:
        return max(self.labels) + 1

    def part_mask(self, part: int) -> int:
        return mask_of(v for v, lab in enumerate(self.labels) if lab == part)

    def side_mask(self, parts: Iterable[int]) -> int:
        """Vertices belonging to any of ``parts``."""
        parts = set(parts)
        return mask_of(v for v, lab in enumerate(self.labels) if lab in parts)

    @classmethod
    def from_parts(cls, n: int, parts: Sequence[Iterable[int]]) -> "Partition":
        """Build from explicit vertex groups; unlisted vertices go to a final part."""
        labels = [-1] * n
        for pid, group in enumerate(parts):
            for v in group:
                if not 0 <= v < n:
                    raise InputError(f"vertex {v} outside [0, {n})")
                if labels[v] != -1:
                    raise InputError(f"vertex {v} listed in two parts")
                labels[v] = pid
        if any(lab == -1 for lab in labels):
            rest = len(parts)
            labels = [rest if lab == -1 else lab for lab in labels]
        return cls(labels)

    @classmethod
    def bipartition(cls, n: int, side_a: Iterable[int]) -> "Partition":
        a = set(side_a)
        return cls([0 if v in a else 1 for v in range(n)])


@dataclass(frozen=True)
class BoundaryDecomposition:
    """Boundary structure of a partitioned graph.

    Attributes
    ----------
    crossing_edges : frozenset of (i, j)
        Edges whose endpoints lie in different parts.
    boundary_qubits : tuple of int
        Ascending endpoints of the crossing edges.
    boundary_graph : Graph
        Graph on the boundary qubits (local indices follow ``boundary_qubits``)
        whose edges are the crossing edges only.
    closed_neighborhood_Y : int
        Bitmask of boundary qubits and their neighbours.
    relevant_delta_support : int
        Bitmask of non-boundary vertices whose graph-basis bits can be
        correlated with the boundary bits under independent single-qubit
        noise: every non-boundary vertex connected to the boundary.
    """

    graph: Graph
    partition: Partition
    crossing_edges: frozenset
    boundary_qubits: tuple
    boundary_graph: Graph | None
    closed_neighborhood_Y: int
    relevant_delta_support: int

    @property
    def boundary_mask(self) -> int:
        return mask_of(self.boundary_qubits)

    @property
    def is_empty(self) -> bool:
        return not self.crossing_edges

    def boundary_labels(self) -> tuple[int, ...]:
        """Part id of each boundary qubit, in boundary order."""
        return tuple(self.partition.labels[v] for v in self.boundary_qubits)

    def induced_partition(self) -> Partition:
        """Partition of the boundary graph inherited from the full partition.

        Part ids are compacted so they stay contiguous.
        """
        labs = self.boundary_labels()
        remap = {p: i for i, p in enumerate(sorted(set(labs)))}
        return Partition([remap[p] for p in labs])


def boundary_of(graph: Graph, partition: Partition) -> BoundaryDecomposition:
    """Crossing edges, boundary qubits and boundary graph of ``partition``."""
    labels = partition.labels
    if len(labels) != graph.n:
        raise InputError(f"partition labels {len(labels)} vertices, graph has {graph.n}")
    crossing = frozenset((i, j) for i, j in graph.edges if labels[i] != labels[j])
    y_mask = 0
    for i, j in crossing:
        y_mask |= (1 << i) | (1 << j)
    boundary = bits_of(y_mask)
    local = {v: k for k, v in enumerate(boundary)}
    bgraph = Graph(len(boundary), [(local[i], local[j]) for i, j in crossing]) if boundary else None
    closed = graph.closed_neighborhood(y_mask)
    relevant = graph.connected_component(y_mask) & ~y_mask if y_mask else 0
    return BoundaryDecomposition(
        graph=graph,
        partition=partition,
        crossing_edges=crossing,
        boundary_qubits=boundary,
        boundary_graph=bgraph,
        closed_neighborhood_Y=closed,
        relevant_delta_support=relevant,
    )


def distance_two_shell(graph: Graph, y_mask: int) -> int:
    """Non-boundary vertices within distance 2 of ``y_mask``.

    Conditioning only on these bits is not enough for the exact flag
    average in general; kept for comparison in tests and diagnostics.
    """
    return graph.closed_neighborhood(graph.closed_neighborhood(y_mask)) & ~y_mask


def gf2_rank(rows: list[int]) -> int:
    """Rank over GF(2) of a matrix given as row bitmasks."""
    rows = [r for r in rows if r]
    rank = 0
    while rows:
        pivot = rows.pop()
        if not pivot:
            continue
        rank += 1
        low = pivot & -pivot
        rows = [r ^ pivot if r & low else r for r in rows]
        rows = [r for r in rows if r]
    return rank


def gf2_cut_rank(graph: Graph, bipartition: Partition) -> int:
    """GF(2) rank of the biadjacency matrix across a two-part partition.

    Equals log2 of the Schmidt rank of the graph state across the cut.
    """
    if bipartition.n_parts != 2:
        raise InputError(f"cut rank needs exactly 2 parts, got {bipartition.n_parts}")
    if len(bipartition.labels) != graph.n:
        raise InputError("partition size does not match graph")
    side_b = bipartition.part_mask(1)
    rows = [graph.neighbor_mask(v) & side_b for v in bits_of(bipartition.part_mask(0))]
    return gf2_rank(rows)


# text formats ---------------------------------------------------------------


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def parse_graph(text: str, source: str = "<graph>") -> Graph:
    """Parse ``n <N>`` / ``e <i> <j>`` lines (1-indexed vertices)."""
    n = None
    edges = []
    for lineno, line in _content_lines(text):
        tok = line.split()
        try:
            if tok[0] == "n" and len(tok) == 2:
                if n is not None:
                    raise InputError("vertex count declared twice")
                n = int(tok[1])
            elif tok[0] == "e" and len(tok) == 3:
                if n is None:
                    raise InputError("edge before 'n <N>' line")
                i, j = int(tok[1]) - 1, int(tok[2]) - 1
                if not (0 <= i < n and 0 <= j < n):
                    raise InputError(f"vertex out of range 1..{n}")
                edges.append((i, j))
            else:
                raise InputError(f"unrecognised line {line!r}")
        except (InputError, ValueError) as exc:
            raise InputError(f"{source}:{lineno}: {exc}") from None
    if n is None:
        raise InputError(f"{source}: missing 'n <N>' line")
    try:
        return Graph(n, edges)
    except InputError as exc:
        raise InputError(f"{source}: {exc}") from None


def format_graph(graph: Graph) -> str:
    lines = [f"n {graph.n}"]
    lines += [f"e {i + 1} {j + 1}" for i, j in graph.sorted_edges()]
    return "\n".join(lines) + "\n"


def parse_partition(text: str, n: int, source: str = "<partition>") -> tuple[Partition, list[int]]:
    """Parse ``p <vertex> <part>`` lines (1-indexed vertices).

    Part labels may be any integers; they are mapped to contiguous ids in
    ascending order. Returns the partition and the external label of each
    internal part id.
    """
    raw: dict[int, int] = {}
    for lineno, line in _content_lines(text):
        tok = line.split()
        if tok[0] != "p" or len(tok) != 3:
            raise InputError(f"{source}:{lineno}: unrecognised line {line!r}")
        try:
            v, part = int(tok[1]) - 1, int(tok[2])
        except ValueError:
            raise InputError(f"{source}:{lineno}: non-integer field in {line!r}") from None
        if not 0 <= v < n:
            raise InputError(f"{source}:{lineno}: vertex {v + 1} out of range 1..{n}")
        if v in raw:
            raise InputError(f"{source}:{lineno}: vertex {v + 1} labelled twice")
        raw[v] = part
    missing = [v + 1 for v in range(n) if v not in raw]
    if missing:
        raise InputError(f"{source}: vertices without a part: {missing}")
    external = sorted(set(raw.values()))
    ids = {p: k for k, p in enumerate(external)}
    return Partition([ids[raw[v]] for v in range(n)]), external


def load_graph(path: str | Path) -> Graph:
    path = Path(path)
    return parse_graph(path.read_text(), source=str(path))


def load_partition(path: str | Path, n: int) -> tuple[Partition, list[int]]:
    path = Path(path)
    return parse_partition(path.read_text(), n, source=str(path))
