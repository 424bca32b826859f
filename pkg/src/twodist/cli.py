"""Command-line front end: analyze graphs, emit coordinate files, run sweeps.

Exit codes: 0 success, 2 parse/usage failure, 3 internal consistency
diagnostic, 4 infeasible request (bad beta, degenerate graph, non-spherical
endpoint).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from typing import Optional

import numpy as np

from . import __version__, edm, linalg, oracle, representations as reps
from .graphs import (Graph, GraphFormatError, classify, encode_graph6,
                     parse_edge_list, parse_graph6)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_DIAGNOSTIC = 3
EXIT_INFEASIBLE = 4


def _load_graph(args) -> Graph:
    if args.g6 is not None:
        return parse_graph6(args.g6)
    with open(args.edges, "r", encoding="utf-8") as fh:
        return parse_edge_list(fh.read())


def _tolerances(args) -> dict:
    return {
        "tol_eig": args.tol_eig,
        "tol_psd": args.tol_psd,
        "tol_residual": args.tol_residual,
    }


def _report_document(g: Graph, args) -> dict:
    report = reps.analyze_graph(g, tol=args.tol_eig)
    doc = {"tool": "twodist", "version": __version__,
           "input_graph6": encode_graph6(g),
           "tolerances": _tolerances(args)}
    doc.update(report.to_dict())
    return doc


def _emit(doc: dict, pretty: bool) -> None:
    if pretty:
        json.dump(doc, sys.stdout, indent=2, sort_keys=False)
        sys.stdout.write("\n")
    else:
        json.dump(doc, sys.stdout)
        sys.stdout.write("\n")


def cmd_analyze(args) -> int:
    try:
        g = _load_graph(args)
    except (GraphFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        doc = _report_document(g, args)
    except edm.InternalConsistencyError as exc:
        print(f"internal consistency diagnostic: {exc}", file=sys.stderr)
        return EXIT_DIAGNOSTIC
    _emit(doc, args.pretty)
    return EXIT_OK


def _write_coordinates(path: str, config: edm.Configuration, sidecar: dict) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        for row in config.points:
            writer.writerow([f"{val:.17g}" for val in row])
    with open(path + ".json", "w", encoding="utf-8") as fh:
        json.dump(sidecar, fh, indent=2)
        fh.write("\n")


def cmd_embed(args) -> int:
    try:
        g = _load_graph(args)
    except (GraphFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    cls = classify(g)
    if cls.is_degenerate:
        print(f"error: {cls.tag} graph admits no two-distance representation",
              file=sys.stderr)
        return EXIT_INFEASIBLE
    try:
        if args.mode == "euclidean":
            if args.beta is None:
                print("error: --beta required for euclidean mode", file=sys.stderr)
                return EXIT_PARSE
            d, config = reps.euclidean_representation(g, args.beta, cls)
            alpha, beta = 1.0, args.beta
            info = edm.spherical_info(d)
            sidecar = {"mode": "euclidean", "alpha": alpha, "beta": beta,
                       "radius": info.radius if info else None}
        elif args.mode == "spherical":
            ps = reps.projected_spectrum(g)
            beta_l, beta_u = reps.beta_endpoints(ps, cls)
            side = args.side or "lower"
            beta = beta_l if side == "lower" else beta_u
            if beta is None:
                print(f"error: {side} endpoint does not exist for this graph",
                      file=sys.stderr)
                return EXIT_INFEASIBLE
            if not reps.endpoint_sphericity(g, side, ps):
                print(f"error: EDM at the {side} endpoint is not spherical",
                      file=sys.stderr)
                return EXIT_INFEASIBLE
            d, config = reps.euclidean_representation(g, beta, cls)
            info = edm.spherical_info(d)
            alpha = 1.0
            sidecar = {"mode": "spherical", "side": side, "alpha": alpha, "beta": beta,
                       "radius": info.radius if info else None}
        elif args.mode == "jspherical":
            js = reps.j_spherical(g, cls)
            config = js.config
            alpha, beta = 2.0, js.beta
            sidecar = {"mode": "jspherical", "alpha": alpha, "beta": beta,
                       "delta": js.delta, "radius": 1.0}
        else:
            print(f"error: unknown mode {args.mode!r}", file=sys.stderr)
            return EXIT_PARSE
    except (reps.InfeasibleBetaError, reps.DegenerateGraphError, reps.EndpointError,
            edm.NotSphericalError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    report = oracle.verify_two_distance(config, g, alpha, beta)
    if not report.passed:
        print(f"error: configuration failed two-distance verification "
              f"(max deviation {report.max_deviation:.3e})", file=sys.stderr)
        return EXIT_DIAGNOSTIC
    _write_coordinates(args.out, config, sidecar)
    return EXIT_OK


def cmd_sweep(args) -> int:
    if args.n > 8:
        print("error: n_max too large (must be <= 8)", file=sys.stderr)
        return EXIT_PARSE
    n_exhaustive = min(args.n, 6)
    samples = args.samples if args.n >= 7 else 0
    summary = oracle.invariant_sweep(n_exhaustive, sample_7_8=samples, seed=args.seed)
    text = summary.to_json(indent=2)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_OK if summary.ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twodist",
        description="Two-distance representations of graphs: dimensions, "
                    "coordinates and invariant sweeps.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--edges", help="path to an edge-list file")
        src.add_argument("--g6", help="inline graph6 string")
        p.add_argument("--tol-eig", type=float, default=linalg.EIG_TOL,
                       help="eigenvalue clustering tolerance")
        p.add_argument("--tol-psd", type=float, default=linalg.EIG_TOL,
                       help="PSD/rank decision tolerance")
        p.add_argument("--tol-residual", type=float, default=linalg.RESIDUAL_TOL,
                       help="solve/factorization residual tolerance")

    p_an = sub.add_parser("analyze", help="full representation report as JSON")
    add_common(p_an)
    p_an.add_argument("--pretty", action="store_true", help="indent the JSON output")
    p_an.set_defaults(func=cmd_analyze)

    p_em = sub.add_parser("embed", help="write a coordinate CSV plus JSON sidecar")
    add_common(p_em)
    p_em.add_argument("--mode", required=True,
                      choices=["euclidean", "spherical", "jspherical"])
    p_em.add_argument("--beta", type=float, help="second squared distance (euclidean mode)")
    p_em.add_argument("--side", choices=["lower", "upper"],
                      help="feasibility endpoint (spherical mode)")
    p_em.add_argument("--out", required=True, help="output CSV path")
    p_em.set_defaults(func=cmd_embed)

    p_sw = sub.add_parser("sweep", help="run the exhaustive invariant sweep")
    p_sw.add_argument("--n", type=int, required=True, help="max node count (<= 8)")
    p_sw.add_argument("--samples", type=int, default=200,
                      help="random samples at n in {7,8} when --n >= 7")
    p_sw.add_argument("--seed", type=int, default=0)
    p_sw.add_argument("--out", help="write the summary JSON to this path")
    p_sw.set_defaults(func=cmd_sweep)
    return parser


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
