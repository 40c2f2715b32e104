"""Command-line interface.

Subcommands write CSV with ``#`` header lines (tool version, config hash,
tolerances). Exit status is 0 on success, 1 when an oracle comparison
fails and 2-4 for input, resource and quantifier errors; errors also print
one ``graphdecay: error: kind=... message=...`` line on stderr.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import oracle
from .channels import PauliMap, SingleQubitPauliChannel, depolarizing
from .config import RunConfig, load_channel, load_run_config, resolve_graph, resolve_partition
from .engine import DELTA_SKIP_TOL, exact_entanglement, lower_bound_entanglement, twirl_to_graph_diagonal
from .entanglement import ZERO_REPORT_TOL, QuantifierSpec, entanglement_of_formation, parse_quantifier
from .exceptions import InputError, ResourceError, UnsupportedQuantifierError
from .graph import Graph, Partition, bits_of, boundary_of
from .patterns import LETTERS, PauliString, letter_image, pruning, z_image

log = logging.getLogger("graphdecay")

ORACLE_TOL = 1e-8
FIG2_SIZES = (2, 4, 7)

EXIT_OK, EXIT_CHECK_FAILED, EXIT_INPUT, EXIT_RESOURCE, EXIT_QUANTIFIER = 0, 1, 2, 3, 4


def fmt(x: float) -> str:
    return repr(float(x))


def _report(value: float, q: QuantifierSpec) -> float:
    if q.kind == "negativity" and abs(value) < ZERO_REPORT_TOL:
        return 0.0
    return value


def config_hash(payload: dict) -> str:
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode()).hexdigest()


def header(command: str, payload: dict, cfg: RunConfig | None = None) -> list[str]:
    prune = cfg.prune_tol if cfg is not None else 1e-15
    return [
        f"# graphdecay {__version__} {command}",
        f"# config_sha256 {config_hash(payload)}",
        f"# tolerances prune={prune!r} delta_skip={DELTA_SKIP_TOL!r} zero_report={ZERO_REPORT_TOL!r} oracle={ORACLE_TOL!r}",
    ]


def write_lines(lines: list[str], out: str | None):
    text = "\n".join(lines) + "\n"
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


# run setup ------------------------------------------------------------------


class Run:
    """Resolved inputs of an exact/bound/oracle-check invocation."""

    def __init__(self, cfg: RunConfig):
        if cfg.graph is None:
            raise InputError("no graph given (use --graph or 'graph =' in the config)")
        self.cfg = cfg
        self.graph = resolve_graph(str(cfg.graph))
        self.partition, external = resolve_partition(cfg.partition, self.graph.n)
        self.quantifier = parse_quantifier(cfg.quantifier, {lab: k for k, lab in enumerate(external)})
        self.decomp = boundary_of(self.graph, self.partition)

    def pauli_map(self, p: float) -> PauliMap:
        return self.cfg.channel.build(self.graph.n, float(p))

    def full_payload(self, command: str) -> dict:
        c = self.cfg
        return {
            "command": command,
            "graph": [self.graph.n, self.graph.sorted_edges()],
            "partition": list(self.partition.labels),
            "channel": c.channel.describe(),
            "quantifier": self.quantifier.label,
            "grid": [c.p_min, c.p_max, c.steps],
            "dense_limit": c.dense_limit,
            "prune_tol": c.prune_tol,
        }

    def bound_payload(self) -> dict:
        """Inputs the flag-discarded bound depends on.

        The boundary graph, the sides of its qubits, and for every error
        source touching the boundary its channel and its pattern images on
        the boundary. Graphs that differ only away from the boundary
        neighbourhood hash identically.
        """
        c = self.cfg
        d = self.decomp
        local = {v: k for k, v in enumerate(d.boundary_qubits)}
        y_mask = d.boundary_mask

        def to_local(pat):
            return sorted(local[v] for v in bits_of(pat & y_mask))

        sites = []
        if c.channel.family == "explicit":
            for pr, letters in c.channel.kraus:
                sites.append([str(pr), to_local(z_image(self.graph, PauliString(letters)))])
        else:
            for k in bits_of(self.graph.closed_neighborhood(y_mask)):
                param = c.channel.p_per_qubit[k] if c.channel.p_per_qubit is not None else c.channel.p
                images = [to_local(letter_image(self.graph, k, letter)) for letter in LETTERS[1:]]
                sites.append([c.channel.family, param, images])
        return {
            "command": "bound",
            "boundary_edges": sorted((local[i], local[j]) for i, j in d.crossing_edges),
            "boundary_sides": [int(lab in self.quantifier.grouping) for lab in d.boundary_labels()],
            "sources": sites,
            "quantifier": self.quantifier.kind,
            "grid": [c.p_min, c.p_max, c.steps],
            "dense_limit": c.dense_limit,
            "prune_tol": c.prune_tol,
        }


def _config_from_args(args) -> RunConfig:
    cfg = load_run_config(args.config) if getattr(args, "config", None) else RunConfig()
    channel = load_channel(args.channel) if getattr(args, "channel", None) else None
    return cfg.with_overrides(
        graph=args.graph,
        partition=args.partition,
        channel=channel,
        quantifier=args.quantifier,
        p_min=args.p_min,
        p_max=args.p_max,
        steps=args.steps,
        out=args.out,
        dense_limit=args.dense_limit,
        prune_tol=args.prune_tol,
        oracle_check=True if getattr(args, "oracle_check", False) else None,
    )


def _sweep(run: Run, fn) -> list[tuple[float, float]]:
    rows = []
    for p in run.cfg.grid():
        try:
            value = fn(run.graph, run.partition, run.pauli_map(p), run.quantifier, dense_limit=run.cfg.dense_limit)
        except UnsupportedQuantifierError as exc:
            raise UnsupportedQuantifierError(f"row p={fmt(p)}: {exc}") from None
        rows.append((float(p), _report(value, run.quantifier)))
    return rows


def _oracle_value(run: Run, p: float) -> float:
    rho = oracle.evolved_graph_state(run.graph, run.pauli_map(p), run.cfg.dense_limit)
    if run.quantifier.kind == "eof":
        if run.graph.n != 2:
            raise UnsupportedQuantifierError("oracle comparison of eof needs a 2-qubit graph")
        if run.partition.labels[0] == run.partition.labels[1]:
            return 0.0
        return entanglement_of_formation(rho)
    side_a = bits_of(run.partition.side_mask(run.quantifier.grouping))
    return oracle.dense_negativity(rho, side_a)


def cmd_exact(args) -> int:
    cfg = _config_from_args(args)
    run = Run(cfg)
    with pruning(cfg.prune_tol):
        rows = _sweep(run, exact_entanglement)
    lines = header("exact", run.full_payload("exact"), cfg)
    status = EXIT_OK
    if cfg.oracle_check:
        lines.append("p,exact,oracle")
        worst = 0.0
        for p, v in rows:
            o = _oracle_value(run, p)
            worst = max(worst, abs(v - o))
            lines.append(f"{fmt(p)},{fmt(v)},{fmt(o)}")
        lines.append(f"# max_abs_diff {fmt(worst)} {'PASS' if worst <= ORACLE_TOL else 'FAIL'}")
        status = EXIT_OK if worst <= ORACLE_TOL else EXIT_CHECK_FAILED
    else:
        lines.append("p,exact")
        lines += [f"{fmt(p)},{fmt(v)}" for p, v in rows]
    write_lines(lines, cfg.out)
    return status


def cmd_bound(args) -> int:
    cfg = _config_from_args(args)
    run = Run(cfg)
    with pruning(cfg.prune_tol):
        rows = _sweep(run, lower_bound_entanglement)
    lines = header("bound", run.bound_payload(), cfg)
    lines.append("p,bound")
    lines += [f"{fmt(p)},{fmt(v)}" for p, v in rows]
    write_lines(lines, cfg.out)
    return EXIT_OK


def _corrupted(pmap: PauliMap) -> PauliMap:
    # negative-control hook: fold X and Y weight into I so the pattern distribution is wrong
    if pmap.is_individual:
        return PauliMap.individual(
            [SingleQubitPauliChannel((c.probs[0] + c.probs[1] + c.probs[2], 0.0, 0.0, c.probs[3])) for c in pmap.channels]
        )
    return PauliMap.identity(pmap.n)


def cmd_oracle_check(args) -> int:
    cfg = _config_from_args(args)
    run = Run(cfg)
    if run.quantifier.kind != "negativity":
        raise UnsupportedQuantifierError("oracle-check compares negativity only")
    if run.graph.n > cfg.dense_limit:
        raise ResourceError(
            f"oracle-check simulates the full {run.graph.n}-qubit density matrix; the dense limit is "
            f"{cfg.dense_limit} qubits ({16 * 4 ** run.graph.n / 2 ** 20:.0f} MiB needed). Raise --dense-limit or use a smaller graph."
        )
    lines = header("oracle-check", run.full_payload("oracle-check"), cfg)
    lines.append("p,engine,oracle,abs_diff")
    worst = 0.0
    with pruning(cfg.prune_tol):
        for p in cfg.grid():
            pmap = run.pauli_map(p)
            engine_map = _corrupted(pmap) if args.inject_fault else pmap
            e = exact_entanglement(run.graph, run.partition, engine_map, run.quantifier, dense_limit=cfg.dense_limit)
            o = _oracle_value(run, p)
            worst = max(worst, abs(e - o))
            lines.append(f"{fmt(p)},{fmt(e)},{fmt(o)},{fmt(abs(e - o))}")
    ok = worst <= ORACLE_TOL
    lines.append(f"# max_abs_diff {fmt(worst)}")
    lines.append(f"# result {'PASS' if ok else 'FAIL'} tolerance {ORACLE_TOL!r}")
    write_lines(lines, cfg.out)
    print(f"max |engine - oracle| = {worst:.3e}: {'PASS' if ok else 'FAIL'}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def fig2_table(steps: int = 101) -> tuple[list[str], list[list[float]]]:
    """Exact EoF of linear clusters (first qubit vs rest) and the size-independent bound."""
    q = QuantifierSpec("eof")
    grid = np.linspace(0.0, 1.0, steps) if steps > 1 else np.array([0.0])
    columns = ["p"] + [f"EoF_N{n}" for n in FIG2_SIZES] + ["bound"]
    rows = []
    for p in grid:
        row = [float(p)]
        for n in FIG2_SIZES:
            g = Graph.path(n)
            row.append(exact_entanglement(g, Partition.bipartition(n, [0]), PauliMap.uniform(n, depolarizing(p)), q))
        n = max(FIG2_SIZES)
        row.append(lower_bound_entanglement(Graph.path(n), Partition.bipartition(n, [0]), PauliMap.uniform(n, depolarizing(p)), q))
        rows.append(row)
    return columns, rows


GNUPLOT_TEMPLATE = """set datafile separator ','
set datafile commentschars '#'
set key autotitle columnhead
set xlabel 'depolarization probability p'
set ylabel 'entanglement of formation'
set xrange [0:1]
set yrange [0:1]
plot '{csv}' using 1:2 with lines lc rgb 'black' title 'N=2', \\
     '' using 1:3 with lines lc rgb 'grey' title 'N=4', \\
     '' using 1:4 with lines lc rgb 'red' title 'N=7', \\
     '' using 1:5 with lines dt 2 lc rgb 'black' title 'bound'
"""


def cmd_fig2(args) -> int:
    steps = args.steps if args.steps is not None else 101
    if steps < 1:
        raise InputError("steps must be >= 1")
    columns, rows = fig2_table(steps)
    payload = {"command": "fig2", "sizes": list(FIG2_SIZES), "steps": steps, "channel": "depolarizing", "quantifier": "eof"}
    lines = header("fig2", payload)
    lines.append(",".join(columns))
    lines += [",".join(fmt(x) for x in row) for row in rows]
    write_lines(lines, args.out)
    if args.gnuplot:
        csv_name = args.out if args.out not in (None, "-") else "fig2.csv"
        Path(args.gnuplot).write_text(GNUPLOT_TEMPLATE.format(csv=csv_name))
    return EXIT_OK


def read_state_vector(path: str | Path) -> np.ndarray:
    """Amplitudes from a file of ``re im`` lines (``#`` comments allowed)."""
    path = Path(path)
    amps = []
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        try:
            if len(tok) == 1:
                amps.append(complex(float(tok[0]), 0.0))
            elif len(tok) == 2:
                amps.append(complex(float(tok[0]), float(tok[1])))
            else:
                raise ValueError
        except ValueError:
            raise InputError(f"{path}:{lineno}: expected 're im', got {raw.strip()!r}") from None
    psi = np.asarray(amps)
    if psi.size == 0 or psi.size & (psi.size - 1):
        raise InputError(f"{path}: {psi.size} amplitudes is not a power of two")
    norm = np.linalg.norm(psi)
    if norm == 0:
        raise InputError(f"{path}: zero state vector")
    if abs(norm - 1.0) > 1e-8:
        log.warning("state vector norm %.12g, normalising", norm)
    return psi / norm


def cmd_twirl(args) -> int:
    if not args.graph or not args.state:
        raise InputError("twirl needs --graph and --state")
    graph = resolve_graph(args.graph)
    psi = read_state_vector(args.state)
    if psi.size != 1 << graph.n:
        raise InputError(f"state has {psi.size} amplitudes, graph needs {1 << graph.n}")
    if graph.n > (args.dense_limit or 12):
        raise ResourceError(f"twirl is dense; {graph.n} qubits exceed the dense limit")
    state = twirl_to_graph_diagonal(psi, graph)
    payload = {"command": "twirl", "graph": [graph.n, graph.sorted_edges()], "state": [[z.real, z.imag] for z in psi]}
    lines = header("twirl", payload)
    lines.append("pattern,probability")
    for pat, pr in state.dist.sorted_items():
        bits = "".join("1" if pat >> k & 1 else "0" for k in range(graph.n))
        lines.append(f"{bits},{fmt(pr)}")
    write_lines(lines, args.out)
    return EXIT_OK


# argument parsing -----------------------------------------------------------


def _add_run_options(sp: argparse.ArgumentParser, oracle_flag: bool = True):
    sp.add_argument("--config", help="run configuration file (key = value lines)")
    sp.add_argument("--graph", help="graph file or generator (path:N, ring:N, complete:N, star:N)")
    sp.add_argument("--partition", help="partition file or inline spec like '1|2-4' (default: first vertex vs rest)")
    sp.add_argument("--channel", help="channel file or family name (depolarizing, dephasing, bitflip)")
    sp.add_argument("--quantifier", help="negativity[:parts] or eof")
    sp.add_argument("--p-min", type=float, dest="p_min")
    sp.add_argument("--p-max", type=float, dest="p_max")
    sp.add_argument("--steps", type=int, help="number of grid points, endpoints included (default 101)")
    sp.add_argument("--out", help="output CSV path (default stdout)")
    sp.add_argument("--dense-limit", type=int, dest="dense_limit", help="largest dense matrix, in qubits (default 12)")
    sp.add_argument("--prune-tol", type=float, dest="prune_tol", help="drop pattern probabilities below this (default 1e-15)")
    if oracle_flag:
        sp.add_argument("--oracle-check", action="store_true", dest="oracle_check", help="add a dense-oracle column and verify it")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="graphdecay", description="Entanglement of graph states under Pauli noise.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("exact", help="exact entanglement over a parameter sweep")
    _add_run_options(sp)
    sp.set_defaults(func=cmd_exact)

    sp = sub.add_parser("bound", help="size-independent lower bound over a parameter sweep")
    _add_run_options(sp, oracle_flag=False)
    sp.set_defaults(func=cmd_bound)

    sp = sub.add_parser("oracle-check", help="compare the exact engine with dense simulation")
    _add_run_options(sp, oracle_flag=False)
    sp.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    sp.set_defaults(func=cmd_oracle_check)

    sp = sub.add_parser("fig2", help="EoF of 2, 4 and 7 qubit linear clusters under depolarization")
    sp.add_argument("--steps", type=int, default=None)
    sp.add_argument("--out")
    sp.add_argument("--gnuplot", help="also write a gnuplot script to this path")
    sp.set_defaults(func=cmd_fig2)

    sp = sub.add_parser("twirl", help="graph-basis distribution of a dense state vector")
    sp.add_argument("--graph", required=False)
    sp.add_argument("--state", help="file with one 're im' amplitude per line")
    sp.add_argument("--out")
    sp.add_argument("--dense-limit", type=int, dest="dense_limit")
    sp.set_defaults(func=cmd_twirl)
    return parser


def _error(kind: str, exc: Exception) -> None:
    msg = str(exc).replace("\n", " ")
    print(f"graphdecay: error: kind={kind} message={json.dumps(msg)}", file=sys.stderr)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except UnsupportedQuantifierError as exc:
        _error("unsupported-quantifier", exc)
        return EXIT_QUANTIFIER
    except ResourceError as exc:
        _error("resource", exc)
        return EXIT_RESOURCE
    except (InputError, OSError) as exc:
        _error("input", exc)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
