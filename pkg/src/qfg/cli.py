"""Command-line front end.

Exit codes: 0 success, 2 parse error, 3 search cap exceeded, 4 failed verification.
JSON is the canonical output; ``--format text`` renders the same structure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass

from .automorphism import generating_set, whitney_status
from .errors import CapExceededError, ParseError
from .frucht import frucht_graph, verify_realization
from .graph_core import classify, format_graph, read_graph, to_dot
from .metric_fem import QuantumGraphSpec, discretize, edge_traces, multiplicity_clusters, spectrum
from .perm_group import read_group
from .symmetry_engine import counterexample_paw, symmetry_report

EXIT_OK, EXIT_PARSE, EXIT_CAP, EXIT_VERIFY = 0, 2, 3, 4


@dataclass(frozen=True)
class RunConfig:
    command: str
    inputs: tuple[str, ...] = ()
    mesh_n: int = 8
    modes: int | None = None
    tol: float = 1e-10
    seed: int = 0
    fmt: str = "json"
    out: str | None = None
    graph_out: str | None = None
    cap: int | None = None

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError("--tol must be positive")
        if self.mesh_n < 2:
            raise ValueError("--mesh must be at least 2")


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _text(obj, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}-")
                lines.append(_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {v}")
    else:
        lines.append(f"{pad}{obj}")
    return "\n".join(lines)


def _emit(cfg: RunConfig, payload: dict, alt: str | None = None) -> None:
    if cfg.fmt == "json":
        text = _json(payload)
    elif cfg.fmt == "text":
        text = _text(payload) + "\n"
    elif alt is not None:
        text = alt
    else:
        raise ParseError(f"--format {cfg.fmt} is not available for '{cfg.command}'")
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_build(cfg: RunConfig) -> int:
    group = read_group(cfg.inputs[0])
    fg = frucht_graph(group)
    payload = {
        "group_order": group.order,
        "graph": {"nodes": fg.graph.node_count, "edges": [list(e) for e in fg.graph.edges]},
        **fg.annotation(),
    }
    if cfg.graph_out:
        with open(cfg.graph_out, "w") as fh:
            fh.write(format_graph(fg.graph))
    alt = None
    if cfg.fmt == "dot":
        labels = {v: f"g{v}" for v in fg.group_nodes}
        alt = to_dot(fg.graph, "Frucht", labels)
    elif cfg.fmt == "graph":
        alt = format_graph(fg.graph)
    _emit(cfg, payload, alt)
    return EXIT_OK


def _aut_payload(graph, cap) -> dict:
    wr = whitney_status(graph, cap=cap)
    a, a_ind, a_star = wr.groups.orders
    return {
        "node_aut_order": a,
        "edge_sym_order": a_star,
        "induced_order": a_ind,
        "whitney_status": wr.status.value,
        "exceptional": wr.exceptional,
        "generators_in_cycle_notation": [p.cycle_notation() for p in generating_set(wr.groups.node_auts)],
    }


def cmd_aut(cfg: RunConfig) -> int:
    graph = read_graph(cfg.inputs[0])
    alt = to_dot(graph) if cfg.fmt == "dot" else None
    _emit(cfg, _aut_payload(graph, cfg.cap), alt)
    return EXIT_OK


def cmd_spectrum(cfg: RunConfig) -> int:
    graph = read_graph(cfg.inputs[0])
    d = discretize(QuantumGraphSpec(graph, cfg.mesh_n))
    k = min(cfg.modes, d.domain_dim) if cfg.modes else min(10, d.domain_dim)
    sp = spectrum(d, k)
    clusters = multiplicity_clusters(sp.eigenvalues, 1e-6)
    payload = {
        "mesh_n": cfg.mesh_n,
        "dof_count": d.dof_count,
        "domain_dim": d.domain_dim,
        "eigenvalues": [round(float(x), 12) for x in sp.eigenvalues],
        "multiplicity_clusters": [
            {"value": round(c["value"], 12), "multiplicity": c["multiplicity"], "indices": c["indices"]}
            for c in clusters
        ],
        "max_residual": float(f"{float(sp.residuals.max()):.4e}"),
    }
    alt = None
    if cfg.fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["edge", "tail", "head", "x"] + [f"mode{j}" for j in range(k)])
        for row in edge_traces(d, sp.eigenvectors):
            w.writerow([row["edge"], row["tail"], row["head"], f"{row['x']:.6f}"]
                       + [f"{v:.10e}" for v in row["values"]])
        alt = buf.getvalue()
    _emit(cfg, payload, alt)
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    graph = read_graph(cfg.inputs[0])
    report = symmetry_report(QuantumGraphSpec(graph, cfg.mesh_n), seed=cfg.seed, tol=cfg.tol, cap=cfg.cap)
    _emit(cfg, report)
    ok = report["all_induced_pass"] and report["realized_symmetry_order"]["contains_u1"]
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_realize(cfg: RunConfig) -> int:
    group = read_group(cfg.inputs[0])
    fg = frucht_graph(group)
    real = verify_realization(group, fg.graph, cap=cfg.cap)
    payload = {
        "group_order": group.order,
        "graph": {"nodes": fg.graph.node_count, "edges": fg.graph.edge_count,
                  "connected": classify(fg.graph).connected},
        "aut_order": real.aut_order,
        "isomorphic": real.ok,
        "witness": [p.cycle_notation() for p in real.witness] if real.witness else None,
    }
    ok = real.ok
    if fg.graph.edge_count == 0:
        payload["quantum_graph"] = None
        payload["quantum_graph_note"] = "trivial group realized by a single node; no edges to discretize"
    else:
        report = symmetry_report(QuantumGraphSpec(fg.graph, cfg.mesh_n), seed=cfg.seed, tol=cfg.tol, cap=cfg.cap)
        passing = sum(1 for x in report["induced"] if x["certificate"]["verdict"])
        payload["quantum_graph"] = {
            "mesh_n": cfg.mesh_n,
            "dof_count": report["dof_count"],
            "induced_operators": len(report["induced"]),
            "passing_certificates": passing,
            "max_commutator_residual": max(
                (x["certificate"]["commutator_residual"] or 0.0) for x in report["induced"]),
            "max_evolution_residual": max(
                (x["certificate"]["evolution_residual"] or 0.0) for x in report["induced"]),
            "phases_pass": report["realized_symmetry_order"]["contains_u1"],
            "realized_symmetry_order": report["realized_symmetry_order"],
            "whitney_status": report["whitney_status"],
        }
        ok = ok and report["all_induced_pass"] and report["realized_symmetry_order"]["contains_u1"]
    payload["verified"] = ok
    _emit(cfg, payload)
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_counterexample(cfg: RunConfig) -> int:
    if cfg.inputs != ("paw",):
        raise ParseError("only 'counterexample paw' is available")
    report = counterexample_paw(mesh_n=cfg.mesh_n, seed=cfg.seed)
    _emit(cfg, report)
    reproduced = (report["in_edge_symmetries"] and not report["induced_by_node_automorphism"]
                  and not report["certificate"]["domain_invariant"])
    return EXIT_OK if reproduced else EXIT_VERIFY


COMMANDS = {
    "build": cmd_build,
    "aut": cmd_aut,
    "spectrum": cmd_spectrum,
    "verify": cmd_verify,
    "realize": cmd_realize,
    "counterexample": cmd_counterexample,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mesh", type=int, default=8, help="subintervals per edge (>= 2)")
    common.add_argument("--modes", type=int, default=None, help="number of eigenmodes to report")
    common.add_argument("--tol", type=float, default=1e-10, help="domain/form tolerance")
    common.add_argument("--seed", type=int, default=0, help="seed for random test states")
    common.add_argument("--format", dest="fmt", default="json", choices=["json", "text", "dot", "csv", "graph"])
    common.add_argument("--out", default=None, help="write output here instead of stdout")
    common.add_argument("--cap", type=int, default=None, help="graph search cap (overrides $QFG_CAP)")

    parser = argparse.ArgumentParser(prog="qfg", description="Finite groups as quantum-graph symmetries.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("build", parents=[common], help="group file -> Frucht graph + annotation")
    p.add_argument("group_file")
    p.add_argument("--graph-out", default=None, help="also write the graph file here")
    p = sub.add_parser("aut", parents=[common], help="graph file -> A(G), A'(G), A*(G), Whitney status")
    p.add_argument("graph_file")
    p = sub.add_parser("spectrum", parents=[common], help="graph file -> lowest eigenvalues")
    p.add_argument("graph_file")
    p = sub.add_parser("verify", parents=[common], help="graph file -> symmetry certificates")
    p.add_argument("graph_file")
    p = sub.add_parser("realize", parents=[common], help="group file -> Frucht graph -> certificates")
    p.add_argument("group_file")
    p = sub.add_parser("counterexample", parents=[common], help="reproduce the paw edge-symmetry counterexample")
    p.add_argument("name", choices=["paw"])
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    inputs = tuple(getattr(args, k) for k in ("group_file", "graph_file", "name") if getattr(args, k, None))
    return RunConfig(
        command=args.command,
        inputs=inputs,
        mesh_n=args.mesh,
        modes=args.modes,
        tol=args.tol,
        seed=args.seed,
        fmt=args.fmt,
        out=args.out,
        graph_out=getattr(args, "graph_out", None),
        cap=args.cap,
    )


def run(cfg: RunConfig) -> int:
    try:
        return COMMANDS[cfg.command](cfg)
    except ParseError as exc:
        print(f"qfg: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CapExceededError as exc:
        print(f"qfg: cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (OSError, ValueError) as exc:
        print(f"qfg: {exc}", file=sys.stderr)
        return EXIT_PARSE


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
    except ValueError as exc:
        parser.error(str(exc))
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
