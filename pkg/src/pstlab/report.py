"""JSON and plain-text rendering of analysis results.

Key order is fixed by construction so reports are byte-identical across
runs with the same input and flags.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction

from . import __version__
from .cospectral import SUPPORT_TOL
from .graph import Graph, encode_graph6
from .partitions import PSEUDO_TOL
from .pst import Classification, PSTCertificate
from .spectral import SNAP_TOL, Spectrum, SpectrumKind
from .walk import CONFIRM_EPS, REFUTE_EPS


def decimal(x: float) -> float:
    """Round to 15 significant digits for serialization."""
    return float(f"{float(x):.15g}")


def number(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    if isinstance(x, int):
        return x
    return decimal(x)


def spectrum_json(s: Spectrum) -> dict:
    if s.kind is SpectrumKind.EXACT_INTEGER:
        values = list(s.eigenvalues)
    elif s.kind is SpectrumKind.QUADRATIC:
        values = [[s.form.a, b, s.form.delta] for b in s.form.b]
    else:
        values = [decimal(x) for x in s.eigenvalues]
    return {
        "kind": s.kind.value,
        "eigenvalues": values,
        "multiplicities": list(s.multiplicities),
        "value_format": {"exact-integer": "integer", "quadratic": "[a, b, delta] = (a + b*sqrt(delta))/2",
                         "floating": "decimal"}[s.kind.value],
    }


def certificate_json(cert: PSTCertificate, labels) -> dict:
    out = cert.to_json()
    out["u"], out["v"] = labels[cert.u], labels[cert.v]
    return out


def tolerances(tol: float) -> dict:
    return {
        "cluster": tol,
        "snap": SNAP_TOL,
        "support": SUPPORT_TOL,
        "pseudo_equitable": PSEUDO_TOL,
        "pst_confirm": CONFIRM_EPS,
        "pst_refute": REFUTE_EPS,
    }


def classification_json(g: Graph, rep: Classification, tol: float, oracle: dict | None = None) -> dict:
    lab = g.labels
    doc = {
        "tool": "pstlab",
        "version": __version__,
        "tolerances": tolerances(tol),
        "graph": {"n": rep.n, "edges": rep.edges, "graph6": encode_graph6(g) if g.n <= 62 else None,
                  "labels": list(lab)},
        "spectrum": spectrum_json(rep.spectrum),
        "regular": rep.regular,
        "diameter": rep.diameter,
        "extremal_graph": rep.extremal_graph,
        "vertices": [
            {"label": lab[u], "eccentricity": rep.eccentricities[u], "dual_degree": rep.dual_degrees[u],
             "extremal": u in rep.extremal_vertices}
            for u in range(rep.n)
        ],
        "strongly_cospectral": [
            {"u": lab[sp.u], "v": lab[sp.v], "sigma": list(sp.sigmas)} for sp in rep.strongly_cospectral
        ],
        "antipodal_pairs": [[lab[a], lab[b]] for a, b in rep.antipodal_pairs],
        "identity": None if rep.identity is None else {
            "lhs": number(rep.identity.lhs), "rhs": number(rep.identity.rhs), "equal": rep.identity.equal},
        "graph_pst": None,
        "pst": {"certificates": [], "rejected": []},
        "distance_regular": None,
        "antipodal_drg": rep.antipodal_drg,
    }
    gv = rep.graph_verdict
    if gv is not None:
        doc["graph_pst"] = {
            "passed": gv.passed, "failed_condition": gv.condition, "reason": gv.reason,
            "theta_differences": list(gv.theta_differences), "valuations": list(gv.valuations),
            "alpha": gv.alpha, "tau": None if gv.tau is None else decimal(gv.tau),
        }
    for v in rep.pst_verdicts:
        if v.pst:
            entry = certificate_json(v.certificate, lab)
            t0 = rep.earliest_times.get((v.u, v.v))
            entry["earliest_grid_time"] = None if t0 is None else decimal(t0)
            doc["pst"]["certificates"].append(entry)
        else:
            doc["pst"]["rejected"].append({"u": lab[v.u], "v": lab[v.v], "condition": v.condition,
                                           "reason": v.reason})
    if oracle is not None:
        doc["pst"]["oracle"] = oracle
    if rep.distance_regular is not None:
        dr = rep.distance_regular
        arr = dr.intersection_array
        doc["distance_regular"] = {
            "value": dr.distance_regular,
            "intersection_array": None if arr is None else {"b": list(arr[0]), "c": list(arr[1])},
            "parameters": None if dr.parameters is None else dr.parameters.tolist(),
        }
    return doc


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _fmt_value(x) -> str:
    if isinstance(x, list):
        a, b, delta = x
        return f"({a}{b:+d}*sqrt({delta}))/2"
    return str(x)


def render_table(doc: dict) -> str:
    """Human readable rendering of a classification document."""
    lines = []
    gr, sp = doc["graph"], doc["spectrum"]
    lines.append(f"graph  n={gr['n']}  edges={gr['edges']}  graph6={gr['graph6']}")
    vals = ", ".join(f"{_fmt_value(v)}^{m}" for v, m in zip(sp["eigenvalues"], sp["multiplicities"]))
    lines.append(f"spectrum ({sp['kind']}): {vals}")
    lines.append(f"regular={doc['regular']}  diameter={doc['diameter']}  "
                 f"spectrally extremal graph={doc['extremal_graph']}")
    lines.append("")
    lines.append(f"{'vertex':>8} {'ecc':>4} {'d*':>4}  extremal")
    for row in doc["vertices"]:
        lines.append(f"{row['label']:>8} {row['eccentricity']:>4} {row['dual_degree']:>4}  {row['extremal']}")
    lines.append("")
    lines.append("strongly cospectral pairs:")
    for row in doc["strongly_cospectral"] or []:
        sig = "".join("+" if s > 0 else "-" for s in row["sigma"])
        lines.append(f"  {row['u']} {row['v']}  sigma={sig}")
    if not doc["strongly_cospectral"]:
        lines.append("  (none)")
    lines.append("antipodal pairs: " + (", ".join(f"{a}-{b}" for a, b in doc["antipodal_pairs"]) or "(none)"))
    if doc["identity"] is not None:
        idn = doc["identity"]
        lines.append(f"antipodal identity: lhs={idn['lhs']} rhs={idn['rhs']} equal={idn['equal']}")
    if doc["graph_pst"] is not None:
        gp = doc["graph_pst"]
        status = "pass" if gp["passed"] else f"fail at {gp['failed_condition']}: {gp['reason']}"
        lines.append(f"graph-level PST at distance d: {status}"
                     + (f"  tau={gp['tau']}" if gp["tau"] is not None else ""))
    lines.append("")
    lines.append("perfect state transfer:")
    for c in doc["pst"]["certificates"]:
        sig = "".join("+" if s > 0 else "-" for s in c["sigma"])
        lines.append(f"  PST   {c['u']} {c['v']}  tau={c['tau']}  alpha={c['alpha']}  delta={c['delta']}  "
                     f"sigma={sig}  fidelity={c['fidelity']}")
    for c in doc["pst"]["rejected"]:
        lines.append(f"  none  {c['u']} {c['v']}  {c['condition']}: {c['reason']}")
    if not doc["pst"]["certificates"] and not doc["pst"]["rejected"]:
        lines.append("  (no eligible pairs)")
    if "oracle" in doc["pst"]:
        o = doc["pst"]["oracle"]
        lines.append(f"oracle cross-check: {o['checked']} pairs, {o['disagreements']} disagreements")
    dr = doc["distance_regular"]
    if dr is not None:
        extra = ""
        if dr["intersection_array"]:
            ia = dr["intersection_array"]
            extra = f"  intersection array {{{','.join(map(str, ia['b']))};{','.join(map(str, ia['c']))}}}"
        lines.append(f"distance-regular={dr['value']}{extra}  antipodal={doc['antipodal_drg']}")
    return "\n".join(lines) + "\n"
