"""Command line interface.

Exit codes: 0 success (or PST found), 1 no PST (``pst``) or bad rows under
``--strict`` (``scan``), 2 input/usage error, 3 analysis refused.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import report
from .errors import (
    ClusterAmbiguityError,
    DisconnectedGraphError,
    GraphParseError,
    IllConditionedError,
    PreconditionError,
)
from .graph import Graph, parse_graph6, read_graph
from .pst import classify_graph, pst_decide_pair
from .spectral import DEFAULT_TOL, eigen_decompose
from .walk import DEFAULT_T_MAX, REFUTE_EPS, fidelity_series, pst_oracle_search

EXIT_OK, EXIT_NO, EXIT_INPUT, EXIT_REFUSED = 0, 1, 2, 3
REFUSALS = (ClusterAmbiguityError, IllConditionedError, DisconnectedGraphError, PreconditionError)


class InputError(Exception):
    pass


def default_tol() -> float:
    env = os.environ.get("PSTLAB_TOL")
    if env:
        try:
            return float(env)
        except ValueError:
            raise InputError(f"PSTLAB_TOL is not a number: {env!r}") from None
    return DEFAULT_TOL


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def load_graph(path: str, fmt: str) -> Graph:
    text = _read_text(path)
    try:
        return read_graph(text, fmt)
    except (GraphParseError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _vertex(g: Graph, label: str) -> int:
    try:
        return g.index(label)
    except KeyError as exc:
        raise InputError(str(exc.args[0])) from None


def _oracle_check(dec, rep) -> dict:
    rows, bad = [], 0
    for v in rep.pst_verdicts:
        found = pst_oracle_search(dec, v.u, v.v, t_max=DEFAULT_T_MAX, eps=REFUTE_EPS)
        agrees = v.pst == found.found
        bad += not agrees
        rows.append({"u": dec.graph.labels[v.u], "v": dec.graph.labels[v.v],
                     "max_fidelity": report.decimal(found.max_fidelity), "agrees": agrees})
    return {"checked": len(rows), "disagreements": bad, "pairs": rows}


def cmd_analyze(args) -> int:
    g = load_graph(args.input, args.format)
    dec = eigen_decompose(g, args.tol)
    rep = classify_graph(dec)
    oracle = _oracle_check(dec, rep) if args.verify_oracle else None
    doc = report.classification_json(g, rep, args.tol, oracle)
    sys.stdout.write(report.render_table(doc) if args.table else report.dumps(doc))
    return EXIT_OK


def cmd_pst(args) -> int:
    g = load_graph(args.input, args.format)
    u, v = _vertex(g, args.u), _vertex(g, args.v)
    if u == v:
        sys.stdout.write(report.dumps({"pst": False, "u": g.labels[u], "v": g.labels[v],
                                       "condition": "hypothesis-unmet", "reason": "trivial pair rejected"}))
        return EXIT_INPUT
    dec = eigen_decompose(g, args.tol)
    verdict = pst_decide_pair(dec, u, v)
    if verdict.pst:
        doc = {"pst": True, "certificate": report.certificate_json(verdict.certificate, g.labels)}
    else:
        doc = {"pst": False, "u": g.labels[u], "v": g.labels[v],
               "condition": verdict.condition, "reason": verdict.reason}
    sys.stdout.write(report.dumps(doc))
    return EXIT_OK if verdict.pst else EXIT_NO


SCAN_COLUMNS = ["line", "graph6", "n", "kind", "extremal", "strongly_cospectral", "antipodal", "pst",
                "drg", "identity"]


def scan_row(job) -> dict:
    """Summarize one census line; never raises."""
    lineno, text, tol, verify = job
    row = {"line": lineno, "graph6": text}
    try:
        g = parse_graph6(text)
    except GraphParseError as exc:
        row["status"] = "ERROR"
        row["error"] = str(exc)
        return row
    try:
        dec = eigen_decompose(g, tol)
        rep = classify_graph(dec)
    except REFUSALS as exc:
        row["status"] = "REFUSED"
        row["error"] = str(exc)
        return row
    dr = rep.distance_regular
    row.update({
        "status": "OK",
        "n": g.n,
        "kind": dec.spectrum.kind.value,
        "extremal": rep.extremal_graph,
        "strongly_cospectral": len(rep.strongly_cospectral),
        "antipodal": len(rep.antipodal_pairs),
        "pst": len(rep.pst_pairs),
        "drg": None if dr is None else dr.distance_regular,
        "identity": None if rep.identity is None else rep.identity.equal,
    })
    if verify:
        row["oracle_disagreements"] = _oracle_check(dec, rep)["disagreements"]
    return row


def _cell(x) -> str:
    if x is None:
        return "-"
    if isinstance(x, bool):
        return "yes" if x else "no"
    return str(x)


def render_scan(rows: list[dict], verify: bool) -> str:
    cols = SCAN_COLUMNS + (["oracle_disagreements"] if verify else [])
    table = [cols]
    for r in rows:
        if r["status"] == "OK":
            table.append([_cell(r.get(c)) for c in cols])
        else:
            table.append([str(r["line"]), r["graph6"], r["status"], r["error"]])
    widths = [max(len(row[i]) for row in table if i < len(row)) for i in range(len(cols))]
    out = []
    for row in table:
        out.append("  ".join(cell.ljust(widths[i]) if i < len(widths) - 1 else cell
                             for i, cell in enumerate(row)).rstrip())
    return "\n".join(out) + "\n"


def cmd_scan(args) -> int:
    lines = [(k, ln.strip()) for k, ln in enumerate(_read_text(args.census).splitlines(), start=1)]
    jobs = [(k, text, args.tol, args.verify_oracle) for k, text in lines if text]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(scan_row, jobs))
    else:
        rows = []
        for job in jobs:
            row = scan_row(job)
            if args.strict and row["status"] != "OK":
                print(f"line {row['line']}: {row['error']}", file=sys.stderr)
                return EXIT_NO
            rows.append(row)
    if args.strict and any(r["status"] != "OK" for r in rows):
        bad = next(r for r in rows if r["status"] != "OK")
        print(f"line {bad['line']}: {bad['error']}", file=sys.stderr)
        return EXIT_NO
    if args.json:
        sys.stdout.write(report.dumps(rows))
    else:
        sys.stdout.write(render_scan(rows, args.verify_oracle))
    return EXIT_OK


def cmd_walk(args) -> int:
    if args.steps < 2:
        raise InputError("--steps must be at least 2")
    if args.t_max <= 0:
        raise InputError("--t-max must be positive")
    g = load_graph(args.input, args.format)
    u, v = _vertex(g, args.u), _vertex(g, args.v)
    dec = eigen_decompose(g, args.tol)
    csv = fidelity_series(dec, u, v, args.t_max, args.steps).to_csv()
    if args.output in (None, "-"):
        sys.stdout.write(csv)
    else:
        try:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(csv)
        except OSError as exc:
            raise InputError(f"cannot write {args.output}: {exc.strerror}") from None
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None,
                        help="eigenvalue clustering tolerance (default: $PSTLAB_TOL or 1e-9)")
    common.add_argument("--format", choices=["g6", "edges", "auto"], default="auto")

    parser = argparse.ArgumentParser(prog="pstlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="full classification report")
    p.add_argument("input", help="graph file or '-' for stdin")
    out = p.add_mutually_exclusive_group()
    out.add_argument("--json", action="store_true", help="JSON report (default)")
    out.add_argument("--table", action="store_true", help="human readable report")
    p.add_argument("--verify-oracle", action="store_true",
                   help="cross-check every PST verdict with a simulator search")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("pst", parents=[common], help="decide PST for one vertex pair")
    p.add_argument("input")
    p.add_argument("u")
    p.add_argument("v")
    p.set_defaults(func=cmd_pst)

    p = sub.add_parser("scan", parents=[common], help="summarize a file of graph6 lines")
    p.add_argument("census")
    p.add_argument("--json", action="store_true")
    p.add_argument("--verify-oracle", action="store_true")
    p.add_argument("--strict", action="store_true", help="stop at the first bad line")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("walk", parents=[common], help="export a fidelity time series as CSV")
    p.add_argument("input")
    p.add_argument("u")
    p.add_argument("v")
    p.add_argument("--t-max", type=float, default=DEFAULT_T_MAX)
    p.add_argument("--steps", type=int, default=1001)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_walk)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.tol is None:
            args.tol = default_tol()
        return args.func(args)
    except InputError as exc:
        print(f"pstlab: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except REFUSALS as exc:
        print(f"pstlab: analysis refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED


if __name__ == "__main__":
    sys.exit(main())
