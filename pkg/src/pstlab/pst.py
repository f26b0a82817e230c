"""Number-theoretic decision procedures for perfect state transfer.

A pair ``u, v`` with ``u`` spectrally extremal and ``v`` at maximal distance
admits PST exactly when it is antipodal and the 2-adic valuations of the
differences ``b_0 - b_r`` of its support eigenvalues
``theta_r = (a + b_r sqrt(delta)) / 2`` are constant (``alpha``) on odd
``r`` and larger than ``alpha`` on even ``r``. The transfer time follows from
``t (theta_0 - theta_r) = k_r pi`` with ``k_r`` of the parity of ``r``, which
gives ``tau = 2 pi / (2^alpha sqrt(delta))``. Every certificate is checked
against the walk simulator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .cospectral import (
    SUPPORT_TOL,
    SignPattern,
    eigenvalue_support,
    is_spectrally_extremal,
    strongly_cospectral_pairs,
)
from .errors import PreconditionError, TheoryViolation
from .graph import is_regular, walk_count
from .partitions import (
    antipodal_identity,
    are_antipodal,
    is_antipodal_drg,
    is_distance_regular,
    is_spectrally_extremal_graph,
    perron_weights,
)
from .spectral import Decomposition, QuadraticForm, SpectrumKind, fit_quadratic_family
from .walk import CONFIRM_EPS, fidelity, pst_oracle_search


def two_adic_valuation(m: int) -> int:
    """Exponent of 2 in ``m`` (``m != 0``)."""
    if m == 0:
        raise ValueError("2-adic valuation of 0 is undefined")
    m = abs(m)
    return (m & -m).bit_length() - 1


@dataclass(frozen=True)
class PSTCertificate:
    u: int
    v: int
    alpha: int
    delta: int
    tau: float
    sign_pattern: SignPattern
    oracle_fidelity: float
    b_differences: tuple[int, ...] = ()

    def to_json(self) -> dict:
        return {
            "u": self.u,
            "v": self.v,
            "alpha": self.alpha,
            "delta": self.delta,
            "tau": float(f"{self.tau:.15g}"),
            "sigma": list(self.sign_pattern.sigmas),
            "fidelity": float(f"{self.oracle_fidelity:.15g}"),
        }


@dataclass(frozen=True)
class PSTVerdict:
    u: int
    v: int
    certificate: PSTCertificate | None = None
    reason: str | None = None
    condition: str | None = None

    @property
    def pst(self) -> bool:
        return self.certificate is not None


HYPOTHESIS = "hypothesis-unmet"
ANTIPODAL = "(i) antipodal"
ODD_VALUATION = "(ii) odd-index valuation"
EVEN_VALUATION = "(iii) even-index valuation"
FORM = "eigenvalue form"
INTEGRAL = "(i) integer spectrum"
IDENTITY = "(iv) antipodal identity"


def quadratic_form_of_support(dec: Decomposition, support: Sequence[int]) -> QuadraticForm | None:
    """Write the support eigenvalues as ``(a + b_r sqrt(delta)) / 2``.

    Integer supports get ``delta = 1`` with ``a = 0`` and ``b_r = 2 theta_r``.
    Otherwise a single quadratic family is fitted and confirmed exactly
    against the characteristic polynomial; ``None`` means no such family
    exists, which rules out perfect state transfer from this vertex.
    """
    spec = dec.spectrum
    if spec.kind is SpectrumKind.EXACT_INTEGER:
        return QuadraticForm(1, 0, tuple(2 * spec.eigenvalues[r] for r in support))
    if spec.kind is SpectrumKind.QUADRATIC:
        f = spec.form
        return QuadraticForm(f.delta, f.a, tuple(f.b[r] for r in support))
    return fit_quadratic_family([spec.eigenvalues[r] for r in support], dec.charpoly)


def valuation_conditions(diffs: Sequence[int]) -> tuple[int | None, str | None, str | None]:
    """Check the 2-adic parity conditions on ``diffs[k] = x_0 - x_{k+1}``.

    Returns ``(alpha, failed_condition, reason)``.
    """
    vals = [two_adic_valuation(x) for x in diffs]
    odd = [vals[k] for k in range(0, len(vals), 2)]
    if len(set(odd)) != 1:
        return None, ODD_VALUATION, f"valuations on odd indices are not constant: {odd}"
    alpha = odd[0]
    for k in range(1, len(vals), 2):
        if vals[k] <= alpha:
            return alpha, EVEN_VALUATION, (
                f"valuation of difference {diffs[k]} at index {k + 1} is {vals[k]}, not above alpha={alpha}")
    return alpha, None, None


def pst_decide_pair(dec: Decomposition, u: int, v: int, tol: float = SUPPORT_TOL) -> PSTVerdict:
    """Total PST verdict for ``(u, v)``; unmet hypotheses become ``NoPST`` reasons."""
    g = dec.graph
    info = g.distance_info
    if u == v:
        return PSTVerdict(u, v, reason="trivial pair rejected", condition=HYPOTHESIS)
    if not info.connected:
        return PSTVerdict(u, v, reason="graph is disconnected", condition=HYPOTHESIS)
    if not is_spectrally_extremal(dec, u, tol):
        return PSTVerdict(u, v, reason=f"vertex {u} is not spectrally extremal", condition=HYPOTHESIS)
    if info.dist[u, v] != info.ecc[u]:
        return PSTVerdict(u, v, reason=f"vertex {v} is not at maximal distance from {u}",
                          condition=HYPOTHESIS)
    anti = are_antipodal(dec, u, v, tol)
    if not anti.antipodal:
        return PSTVerdict(u, v, reason=f"not antipodal ({anti.reason})", condition=ANTIPODAL)
    support = eigenvalue_support(dec, u, tol).support
    form = quadratic_form_of_support(dec, support)
    if form is None:
        return PSTVerdict(u, v, reason="support eigenvalues fit no (a + b sqrt(delta))/2 family",
                          condition=FORM)
    diffs = tuple(form.b[0] - b for b in form.b[1:])
    alpha, failed, why = valuation_conditions(diffs)
    if failed:
        return PSTVerdict(u, v, reason=why, condition=failed)
    tau = 2 * math.pi / (2 ** alpha * math.sqrt(form.delta))
    fid = fidelity(dec, u, v, tau)
    if fid < 1 - CONFIRM_EPS:
        raise TheoryViolation(f"certified PST ({u}, {v}) at tau={tau!r} but oracle fidelity is {fid!r}")
    cert = PSTCertificate(u, v, alpha, form.delta, tau, anti.sign_pattern, fid, diffs)
    return PSTVerdict(u, v, certificate=cert)


def certificate_time_is_valid(dec: Decomposition, cert: PSTCertificate) -> bool:
    """``tau (theta_0 - theta_r) / pi`` is an integer with the parity of ``r``.

    With ``tau = 2 pi / (2^alpha sqrt(delta))`` the quotient is
    ``(b_0 - b_r) / 2^alpha``, so the check is exact in rationals.
    """
    for k, diff in enumerate(cert.b_differences, start=1):
        q = Fraction(diff, 2 ** cert.alpha)
        if q.denominator != 1 or q.numerator % 2 != k % 2:
            return False
    return True


@dataclass(frozen=True)
class GraphPSTVerdict:
    passed: bool
    condition: str | None = None
    reason: str | None = None
    theta_differences: tuple[int, ...] = ()
    valuations: tuple[int, ...] = ()
    alpha: int | None = None
    identity: object = None
    tau: float | None = None


def pst_decide_graph(dec: Decomposition) -> GraphPSTVerdict:
    """PST between every pair at distance ``d`` of a regular spectrally extremal graph."""
    g = dec.graph
    if not g.distance_info.connected:
        raise PreconditionError("graph must be connected")
    if is_regular(g) is None:
        raise PreconditionError("graph must be regular")
    if not is_spectrally_extremal_graph(g, dec):
        raise PreconditionError("graph must be spectrally extremal (d + 1 distinct eigenvalues)")
    if dec.spectrum.kind is not SpectrumKind.EXACT_INTEGER:
        return GraphPSTVerdict(False, INTEGRAL, "not all eigenvalues are integers")
    th = dec.spectrum.eigenvalues
    diffs = tuple(th[0] - t for t in th[1:])
    vals = tuple(two_adic_valuation(x) for x in diffs)
    alpha, failed, why = valuation_conditions(diffs)
    ident = antipodal_identity(dec)
    common = dict(theta_differences=diffs, valuations=vals, alpha=alpha, identity=ident)
    if failed:
        return GraphPSTVerdict(False, failed, why, **common)
    if not ident.equal:
        return GraphPSTVerdict(False, IDENTITY, f"identity fails: {ident.lhs} != {ident.rhs}", **common)
    return GraphPSTVerdict(True, tau=math.pi / 2 ** alpha, **common)


def pst_transfer_along_ties(dec: Decomposition, known: PSTCertificate) -> list[tuple[int, int]]:
    """All distance-``d`` pairs whose walk count ties the certified pair.

    Each returned pair is confirmed by the simulator at the same time; a
    pair with a larger walk count than the certified one, or a tied pair
    without PST, raises ``TheoryViolation``.
    """
    g = dec.graph
    if not is_spectrally_extremal_graph(g, dec):
        raise PreconditionError("graph must be spectrally extremal")
    d = g.distance_info.diameter
    dist = g.distance_info.dist
    if dist[known.u, known.v] != d:
        raise PreconditionError("certificate is not for a pair at distance d")
    ref = walk_count(g, d, known.u, known.v)
    out = []
    for z in range(g.n):
        for w in range(z + 1, g.n):
            if dist[z, w] != d:
                continue
            cnt = walk_count(g, d, z, w)
            if cnt > ref:
                raise TheoryViolation(f"pair ({z}, {w}) has {cnt} > {ref} walks of length {d}")
            if cnt == ref:
                fid = fidelity(dec, z, w, known.tau)
                if fid < 1 - CONFIRM_EPS:
                    raise TheoryViolation(f"tied pair ({z}, {w}) has fidelity {fid!r} at tau")
                out.append((z, w))
    return out


# classification --------------------------------------------------------------------

@dataclass
class Classification:
    """Everything the analyses can say about one connected graph."""

    n: int
    edges: int
    spectrum: object
    regular: int | None
    diameter: int
    eccentricities: tuple
    dual_degrees: tuple
    extremal_vertices: tuple
    extremal_graph: bool
    strongly_cospectral: list = field(default_factory=list)
    antipodal_pairs: list = field(default_factory=list)
    identity: object = None
    pst_verdicts: list = field(default_factory=list)
    graph_verdict: GraphPSTVerdict | None = None
    distance_regular: object = None
    antipodal_drg: bool | None = None
    earliest_times: dict = field(default_factory=dict)

    @property
    def pst_pairs(self) -> list[tuple[int, int]]:
        pairs = {tuple(sorted((v.u, v.v))) for v in self.pst_verdicts if v.pst}
        return sorted(pairs)


def classify_graph(dec: Decomposition, tol: float = SUPPORT_TOL) -> Classification:
    """One-shot report of every supported analysis.

    Also asserts the structural implication that a regular spectrally
    extremal graph, all of whose eccentricities equal ``d`` and whose
    distance-``d`` pairs split into a perfect matching of PST pairs, is
    distance-regular.
    """
    g = dec.graph
    info = g.distance_info
    supports = [eigenvalue_support(dec, u, tol) for u in range(g.n)]
    extremal = tuple(u for u in range(g.n) if info.ecc[u] == supports[u].dual_degree)
    ext_graph = is_spectrally_extremal_graph(g, dec)
    rep = Classification(
        n=g.n, edges=len(g.edges), spectrum=dec.spectrum, regular=is_regular(g),
        diameter=info.diameter, eccentricities=info.ecc,
        dual_degrees=tuple(s.dual_degree for s in supports),
        extremal_vertices=extremal, extremal_graph=ext_graph,
    )
    rep.strongly_cospectral = strongly_cospectral_pairs(dec, tol)
    if g.n < 2:
        return rep
    weights = perron_weights(dec)
    rep.antipodal_pairs = [
        (sp.u, sp.v) for sp in rep.strongly_cospectral
        if are_antipodal(dec, sp.u, sp.v, tol, weights).antipodal
    ]
    seen = set()
    for u in extremal:
        for v in range(g.n):
            if v != u and info.dist[u, v] == info.ecc[u] and (v, u) not in seen:
                seen.add((u, v))
                verdict = pst_decide_pair(dec, u, v, tol)
                rep.pst_verdicts.append(verdict)
                if verdict.pst:
                    found = pst_oracle_search(dec, u, v, t_max=verdict.certificate.tau * 1.001)
                    rep.earliest_times[(u, v)] = found.time
    rep.distance_regular = is_distance_regular(g)
    if rep.distance_regular.distance_regular:
        rep.antipodal_drg = is_antipodal_drg(g)
    if rep.regular is not None and ext_graph:
        rep.identity = antipodal_identity(dec)
        rep.graph_verdict = pst_decide_graph(dec)
        d = info.diameter
        pst = rep.pst_pairs
        matched = sorted(x for p in pst for x in p)
        if (all(e == d for e in info.ecc) and matched == list(range(g.n))
                and all(info.dist[a, b] == d for a, b in pst)
                and not rep.distance_regular.distance_regular):
            raise TheoryViolation("PST perfect matching at distance d on a regular extremal graph "
                                  "that is not distance-regular")
    return rep
