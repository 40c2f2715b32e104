"""Run and channel configuration files.

Both use ``key = value`` lines with ``#`` comments. Values are Python
literals (numbers, strings, lists, tuples, booleans, ``None``); a bare word
is read as a string. Channel probabilities may be arithmetic expressions
in the sweep parameter ``p``, e.g. ``kraus = [("1-p", "IIII"), ("p", "ZZZZ")]``.
"""

from __future__ import annotations

import ast
import math
import operator
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any

import numpy as np

from .channels import CHANNEL_FAMILIES, MAX_KRAUS, PauliMap
from .exceptions import InputError
from .graph import Graph, Partition, load_graph, load_partition, parse_graph
from .patterns import PauliString

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv, ast.Pow: operator.pow}
_FUNCS = {"exp": math.exp, "sqrt": math.sqrt, "log": math.log, "cos": math.cos, "sin": math.sin}


def eval_expr(expr, p: float) -> float:
    """Evaluate a numeric literal or an arithmetic expression in ``p``."""
    if isinstance(expr, (int, float)):
        return float(expr)
    try:
        tree = ast.parse(str(expr), mode="eval")
    except SyntaxError:
        raise InputError(f"cannot parse expression {expr!r}") from None

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "p":
            return float(p)
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id in _FUNCS and len(node.args) == 1:
            return _FUNCS[node.func.id](ev(node.args[0]))
        raise InputError(f"unsupported element in expression {expr!r}")

    return ev(tree)


def parse_key_values(text: str, source: str = "<config>") -> dict[str, Any]:
    out: dict[str, Any] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or not key:
            raise InputError(f"{source}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        value = value.strip()
        try:
            out[key] = ast.literal_eval(value)
        except (ValueError, SyntaxError):
            if value.replace("_", "").replace("-", "").replace(".", "").replace("/", "").replace(":", "").isalnum():
                out[key] = value
            else:
                raise InputError(f"{source}:{lineno}: cannot parse value {value!r}") from None
    return out


def _strip_comment(line: str) -> str:
    # '#' inside quotes is kept
    quote = None
    for i, c in enumerate(line):
        if quote:
            if c == quote:
                quote = None
        elif c in "'\"":
            quote = c
        elif c == "#":
            return line[:i]
    return line


@dataclass(frozen=True)
class ChannelSpec:
    """Noise model as a function of the sweep parameter ``p``.

    ``family`` is one of the single-qubit families or ``"explicit"``.
    ``p_per_qubit`` overrides the parameter per qubit; ``None`` or ``"p"``
    entries follow the sweep. ``kraus`` lists ``(probability, letters)``
    with probabilities given as numbers or expressions in ``p``.
    """

    family: str = "depolarizing"
    p: Any = None
    p_per_qubit: tuple | None = None
    kraus: tuple | None = None
    max_kraus: int = MAX_KRAUS

    def __post_init__(self):
        fam = self.family.lower()
        if fam != "explicit" and fam not in CHANNEL_FAMILIES:
            raise InputError(f"unknown channel {self.family!r}; use depolarizing, dephasing, bitflip or explicit")
        object.__setattr__(self, "family", fam)
        if fam == "explicit" and not self.kraus:
            raise InputError("explicit channel needs a non-empty 'kraus' list")
        if self.kraus is not None:
            terms = []
            for t in self.kraus:
                if not isinstance(t, (tuple, list)) or len(t) != 2:
                    raise InputError(f"kraus entries must be (probability, letters), got {t!r}")
                terms.append((t[0], str(t[1])))
            object.__setattr__(self, "kraus", tuple(terms))
        if self.p_per_qubit is not None:
            object.__setattr__(self, "p_per_qubit", tuple(self.p_per_qubit))

    @property
    def swept(self) -> bool:
        return self.p is None

    def qubit_parameter(self, k: int, p: float):
        if self.p_per_qubit is not None:
            v = self.p_per_qubit[k]
            if v is not None and v != "p":
                return eval_expr(v, p)
        return eval_expr(p if self.p is None else self.p, p)

    def build(self, n: int, p: float) -> PauliMap:
        """Pauli map on ``n`` qubits at sweep value ``p``."""
        if self.family == "explicit":
            terms = [(eval_expr(pr, p), letters) for pr, letters in self.kraus]
            if any(len(s) != n for _, s in terms):
                raise InputError(f"kraus strings must have length {n}")
            return PauliMap.explicit([(pr, PauliString(s)) for pr, s in terms], max_terms=self.max_kraus)
        if self.p_per_qubit is not None and len(self.p_per_qubit) != n:
            raise InputError(f"p_per_qubit has {len(self.p_per_qubit)} entries, graph has {n} qubits")
        make = CHANNEL_FAMILIES[self.family]
        return PauliMap.individual([make(self.qubit_parameter(k, p)) for k in range(n)])

    def describe(self) -> dict:
        return {
            "family": self.family,
            "p": self.p,
            "p_per_qubit": list(self.p_per_qubit) if self.p_per_qubit is not None else None,
            "kraus": [list(t) for t in self.kraus] if self.kraus is not None else None,
        }

    @classmethod
    def from_mapping(cls, d: dict) -> "ChannelSpec":
        return cls(
            family=str(d.get("channel", "depolarizing")),
            p=d.get("p"),
            p_per_qubit=d.get("p_per_qubit"),
            kraus=d.get("kraus"),
            max_kraus=int(d.get("max_kraus", MAX_KRAUS)),
        )


def load_channel(spec: str) -> ChannelSpec:
    """Channel from a config file path or a bare family name."""
    path = Path(spec)
    if path.is_file():
        return ChannelSpec.from_mapping(parse_key_values(path.read_text(), str(path)))
    return ChannelSpec(family=spec)


def resolve_graph(spec: str) -> Graph:
    """Graph from a file or a generator such as ``path:7``, ``ring:5``, ``complete:4``, ``star:5``."""
    path = Path(spec)
    if path.is_file():
        return load_graph(path)
    kind, _, size = spec.partition(":")
    gens = {"path": Graph.path, "linear": Graph.path, "ring": Graph.ring, "complete": Graph.complete, "star": Graph.star}
    if kind in gens and size.isdigit():
        return gens[kind](int(size))
    if "\n" in spec:
        return parse_graph(spec)
    raise InputError(f"graph {spec!r} is neither a file nor a generator like path:7")


def resolve_partition(spec: str | None, n: int) -> tuple[Partition, list[int]]:
    """Partition from a file or an inline ``1|2,3|4-6`` spec (1-indexed vertices).

    ``None`` or ``first`` splits vertex 1 from the rest. Returns the
    partition and the external label of each part (1-based for inline specs).
    """
    if spec is None or spec == "first":
        return Partition.bipartition(n, [0]), [1, 2]
    path = Path(spec)
    if path.is_file():
        return load_partition(path, n)
    groups = []
    for chunk in spec.split("|"):
        verts: list[int] = []
        for tok in chunk.split(","):
            tok = tok.strip()
            if not tok:
                continue
            try:
                if "-" in tok:
                    a, b = tok.split("-")
                    verts += range(int(a) - 1, int(b))
                else:
                    verts.append(int(tok) - 1)
            except ValueError:
                raise InputError(f"bad vertex list {chunk!r} in partition {spec!r}") from None
        groups.append(verts)
    part = Partition.from_parts(n, groups)
    return part, list(range(1, part.n_parts + 1))


@dataclass(frozen=True)
class RunConfig:
    graph: str | None = None
    partition: str | None = None
    channel: ChannelSpec = field(default_factory=ChannelSpec)
    quantifier: str = "negativity"
    p_min: float = 0.0
    p_max: float = 1.0
    steps: int = 101
    out: str | None = None
    oracle_check: bool = False
    dense_limit: int = 12
    prune_tol: float = 1e-15

    def __post_init__(self):
        if int(self.steps) != self.steps or self.steps < 1:
            raise InputError(f"steps must be a positive integer, got {self.steps!r}")
        if not 0.0 <= self.p_min <= self.p_max:
            raise InputError(f"sweep needs 0 <= p_min <= p_max, got {self.p_min}, {self.p_max}")
        if self.channel.family != "explicit" and self.p_max > 1.0:
            raise InputError(f"p_max {self.p_max} exceeds 1")

    def grid(self) -> np.ndarray:
        if self.steps == 1:
            return np.array([float(self.p_min)])
        return np.linspace(self.p_min, self.p_max, int(self.steps))

    def with_overrides(self, **kw) -> "RunConfig":
        kw = {k: v for k, v in kw.items() if v is not None}
        return replace(self, **kw)

    @classmethod
    def from_mapping(cls, d: dict, base_dir: Path | None = None) -> "RunConfig":
        d = dict(d)
        channel_keys = {"channel", "p", "p_per_qubit", "kraus", "max_kraus"}
        ch = {k: d.pop(k) for k in list(d) if k in channel_keys}
        if "channel" in ch and len(ch) == 1 and base_dir is not None and (base_dir / str(ch["channel"])).is_file():
            channel = load_channel(str(base_dir / str(ch["channel"])))
        else:
            channel = ChannelSpec.from_mapping(ch)
        for key in ("graph", "partition"):
            if key in d and base_dir is not None and (base_dir / str(d[key])).is_file():
                d[key] = str(base_dir / str(d[key]))
        unknown = set(d) - {f for f in cls.__dataclass_fields__}
        if unknown:
            raise InputError(f"unknown config keys {sorted(unknown)}")
        return cls(channel=channel, **d)


def load_run_config(path: str | Path) -> RunConfig:
    path = Path(path)
    return RunConfig.from_mapping(parse_key_values(path.read_text(), str(path)), base_dir=path.parent)
