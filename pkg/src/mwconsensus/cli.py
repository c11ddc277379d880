"""Command-line front end.

Exit codes: 0 ok, 1 verification failure, 2 input error, 3 simulation did
not converge.
"""
from __future__ import annotations

import argparse
import json
import logging
import re
import sys
from importlib import resources
from pathlib import Path

import numpy as np

from . import kernels
from .balance import enumerate_nbs
from .dynamics import (classify_steady_state, predict_from_nbs, random_initial_state,
                       simulate, steady_state_exact, write_trajectory_csv)
from .errors import GraphInputError
from .graph import MatrixWeightedGraph, laplacian, load_graph
from .subspace import null_space
from .verify import SUITES, run_suite

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_NOT_CONVERGED = 0, 1, 2, 3


class InputError(Exception):
    pass


def _num(x: float) -> float:
    v = float(f"{float(x):.12g}")
    return 0.0 if v == 0 else v


def _vec(x) -> list[float]:
    return [_num(v) for v in np.asarray(x).ravel()]


def _edge_pairs(g: MatrixWeightedGraph, idx):
    return sorted([list(g.edges[k].nodes) for k in idx])


def fixture_path(name: str) -> Path:
    """Path of a bundled fixture such as ``g1`` or ``g1.json``."""
    if not name.endswith(".json"):
        name += ".json"
    return Path(str(resources.files("mwconsensus") / "fixtures" / name))


def resolve_graph_path(arg: str) -> Path:
    p = Path(arg)
    if p.exists():
        return p
    bundled = fixture_path(p.name)
    if bundled.exists():
        return bundled
    raise InputError(f"{arg}: no such file or bundled fixture")


def read_graph(arg: str) -> MatrixWeightedGraph:
    try:
        return load_graph(resolve_graph_path(arg))
    except OSError as exc:
        raise InputError(str(exc)) from None
    except GraphInputError as exc:
        raise InputError(f"{arg}: {exc}") from None


def read_x0(spec: str | None, seed: int | None, g: MatrixWeightedGraph) -> tuple[np.ndarray, dict]:
    if spec is None or spec == "random":
        if seed is None:
            raise InputError("--seed is required with a random initial state")
        return random_initial_state(g, seed), {"x0": "random", "seed": seed}
    try:
        text = Path(spec).read_text()
        if spec.endswith(".json"):
            x0 = np.asarray(json.loads(text), dtype=float).ravel()
        else:
            x0 = np.array(text.replace(",", " ").split(), dtype=float)
    except (OSError, ValueError) as exc:
        raise InputError(f"cannot read x0 from {spec}: {exc}") from None
    if x0.size != g.n * g.d or not np.all(np.isfinite(x0)):
        raise InputError(f"x0 must hold {g.n * g.d} finite numbers, got {x0.size}")
    return x0, {"x0": spec}


def analyze_document(g: MatrixWeightedGraph) -> dict:
    report = enumerate_nbs(g)
    pred = predict_from_nbs(g, report)
    sb = report.structurally_balanced
    return {
        "structurally_balanced": list(sb.signs) if sb else None,
        "nbs": [
            {
                "partition": list(b.partition.signs),
                "edges": _edge_pairs(g, b.edges),
                "null_basis": [_vec(c) for c in b.null.canonical_basis().T],
                "null_dim": b.null.dimension,
            }
            for b in report.nbs_list
        ],
        "nbs_unique": report.nbs_unique,
        "pn_spanning_tree": (_edge_pairs(g, report.pn_spanning_tree)
                             if report.pn_spanning_tree is not None else None),
        "laplacian_null_dim": null_space(laplacian(g)).dimension,
        "predicted_class": pred.predicted_class,
    }


def _print_table(doc: dict, name: str) -> None:
    def part(signs):
        v1 = [i + 1 for i, s in enumerate(signs) if s > 0]
        v2 = [i + 1 for i, s in enumerate(signs) if s < 0]
        return "{" + ",".join(map(str, v1)) + "}/{" + ",".join(map(str, v2)) + "}"

    sb = doc["structurally_balanced"]
    print(f"graph: {name}")
    print(f"structurally balanced: {part(sb) if sb else 'no'}")
    tree = doc["pn_spanning_tree"]
    print(f"PN spanning tree:      {' '.join(f'({u},{v})' for u, v in tree) if tree else 'none'}")
    print(f"null(L) dimension:     {doc['laplacian_null_dim']}")
    print(f"NBS count:             {len(doc['nbs'])} ({'unique' if doc['nbs_unique'] else 'not unique'})")
    for k, nbs in enumerate(doc["nbs"], 1):
        edges = " ".join(f"({u},{v})" for u, v in nbs["edges"]) or "(empty)"
        print(f"  [{k}] partition {part(nbs['partition'])}  edges {edges}  null_dim {nbs['null_dim']}")
        for vec in nbs["null_basis"]:
            print("        " + " ".join(f"{v: .6f}" for v in vec))
    print(f"predicted class:       {doc['predicted_class']}")


_NUM_ARRAY = re.compile(r"\[\s*(-?[\d.eE+-]+(?:,\s*-?[\d.eE+-]+)*)\s*\]")


def to_json(doc) -> str:
    """Indented JSON with innermost numeric arrays kept on one line."""
    text = json.dumps(doc, indent=2)
    return _NUM_ARRAY.sub(lambda m: "[" + ", ".join(x.strip() for x in m.group(1).split(",")) + "]",
                          text)


def _emit(doc) -> None:
    print(to_json(doc))


def cmd_analyze(args) -> int:
    g = read_graph(args.graph)
    doc = analyze_document(g)
    if args.json:
        _emit(doc)
    else:
        _print_table(doc, args.graph)
    return EXIT_OK


def _parse_auto(value: str, flag: str):
    if value == "auto":
        return "auto"
    try:
        v = float(value)
    except ValueError:
        raise InputError(f"{flag} must be a number or 'auto'") from None
    if not v > 0:
        raise InputError(f"{flag} must be positive")
    return v


def cmd_simulate(args) -> int:
    g = read_graph(args.graph)
    x0, origin = read_x0(args.x0, args.seed, g)
    traj = simulate(g, x0, _parse_auto(args.t_final, "--t-final"), _parse_auto(args.dt, "--dt"))
    if args.out:
        write_trajectory_csv(traj, g.n, g.d, args.out)
    cls = classify_steady_state(traj.final, g.d)
    exact = steady_state_exact(g, x0)
    _emit({
        "class": cls.kind,
        "partition": list(cls.partition.signs) if cls.partition else None,
        "final_value": _vec(cls.value) if cls.value is not None else None,
        "residual": _num(traj.residual),
        "converged": traj.converged,
        "exact_deviation": _num(np.linalg.norm(traj.final - exact)),
        "t_final": _num(traj.times[-1]),
        "dt": _num(traj.dt),
        "steps": traj.steps,
        **origin,
    })
    return EXIT_OK if traj.converged else EXIT_NOT_CONVERGED


def cmd_predict(args) -> int:
    g = read_graph(args.graph)
    pred = predict_from_nbs(g)
    report = pred.report
    doc = {
        "predicted_class": pred.predicted_class,
        "reason": pred.reason,
        "nbs_count": report.nbs_count,
        "pn_spanning_tree": (_edge_pairs(g, report.pn_spanning_tree)
                             if report.pn_spanning_tree is not None else None),
        "partition": list(pred.partition.signs) if pred.partition else None,
        "nbs_null_basis": ([_vec(c) for c in report.nbs_list[0].null.canonical_basis().T]
                           if report.nbs_unique else None),
        "subspace_dim": pred.subspace.dimension if pred.subspace is not None else
        (0 if pred.predicted_class == "trivial" else None),
        "subspace_basis": ([_vec(c) for c in pred.subspace.canonical_basis().T]
                           if pred.subspace is not None else None),
        "containment": ({"holds": pred.containment_holds,
                         "residual": _num(pred.containment_residual)}
                        if pred.containment_residual is not None else None),
        "laplacian_null_dim": null_space(laplacian(g)).dimension,
    }
    if args.x0 is not None or args.seed is not None:
        x0, origin = read_x0(args.x0, args.seed, g)
        xbar = steady_state_exact(g, x0)
        doc["steady_state"] = _vec(xbar)
        doc["steady_state_class"] = classify_steady_state(xbar, g.d).kind
        doc.update(origin)
    _emit(doc)
    return EXIT_OK


def cmd_verify(args) -> int:
    suites = SUITES if args.suite == "all" else (args.suite,)
    results = []
    for name in suites:
        res = run_suite(name, args.trials, seed=args.seed, max_nodes=args.max_nodes,
                        max_dim=args.dim, dump_dir=args.dump_dir)
        results.append(res)
        status = "PASS" if res.ok else "FAIL"
        extra = " ".join(f"{k}={_num(v) if isinstance(v, float) else v}"
                         for k, v in sorted(res.stats.items()))
        print(f"{name:7s} {status} {res.passed}/{res.trials - res.skipped} passed"
              f"{f' ({res.skipped} skipped)' if res.skipped else ''}"
              f" in {res.seconds:.2f}s {extra}".rstrip())
        for v in res.violations:
            print(f"  violation at seed {v['seed']}" + (f": {v['dump']}" if v.get("dump") else ""))
    return EXIT_OK if all(r.ok for r in results) else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="mwconsensus",
        description="Balancing-set analysis and consensus dynamics on signed "
                    "matrix-weighted networks.")
    ap.add_argument("-v", "--verbose", action="store_true")
    ap.add_argument("--version", action="version",
                    version=f"%(prog)s (partition backend: {kernels.BACKEND})")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="balance, NBS and PN-tree report")
    p.add_argument("graph", help="graph JSON file or bundled fixture name")
    p.add_argument("--json", action="store_true", help="emit the JSON report")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("simulate", help="integrate x' = -Lx and classify the outcome")
    p.add_argument("graph")
    p.add_argument("--t-final", default="auto")
    p.add_argument("--dt", default="auto")
    p.add_argument("--x0", default="random", help="'random' or a file of n*d numbers")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="trajectory CSV path")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("predict", help="steady state predicted from the NBS analysis")
    p.add_argument("graph")
    p.add_argument("--x0", default=None)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("verify", help="randomised property sweeps")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-nodes", type=int, default=None)
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--suite", choices=SUITES + ("all",), default="all")
    p.add_argument("--dump-dir", default="violations")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (GraphInputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
