"""Eigenvalue supports, (strong) cospectrality and transfer polynomials.

Every test works on the projections ``E_r e_u``. With exact projectors the
comparisons are done on integer numerators and are exact; otherwise they use
an entrywise tolerance (``SUPPORT_TOL`` by default).
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import IllConditionedError, PreconditionError, TheoryViolation
from .graph import walk_count
from .spectral import Decomposition

SUPPORT_TOL = 1e-8


@dataclass(frozen=True)
class EigenSupport:
    vertex: int
    support: tuple[int, ...]

    @property
    def dual_degree(self) -> int:
        return len(self.support) - 1


@dataclass(frozen=True)
class SignPattern:
    """``E_r e_v = sigma_r E_r e_u`` for every ``r`` in ``support``."""

    u: int
    v: int
    support: tuple[int, ...]
    sigmas: tuple[int, ...]

    @property
    def alternating(self) -> bool:
        return all(s == (-1) ** k for k, s in enumerate(self.sigmas))


@dataclass(frozen=True)
class TransferPolynomial:
    """Polynomial ``p`` with ``p(A) e_u`` equal to a target vector.

    ``nodes``/``values`` give ``p`` on the eigenvalue support of ``u``;
    ``coefficients`` are highest degree first (``Fraction`` when exact).
    ``v`` is set when the target is ``e_v``.
    """

    u: int
    v: int | None
    nodes: tuple
    values: tuple
    coefficients: tuple
    exact: bool

    @property
    def degree(self) -> int:
        coeffs = self.coefficients
        if self.exact:
            nz = [k for k, c in enumerate(coeffs) if c != 0]
        else:
            big = max(abs(c) for c in coeffs)
            nz = [k for k, c in enumerate(coeffs) if abs(c) > 1e-9 * big]
        return len(coeffs) - 1 - nz[0] if nz else 0

    def __call__(self, x):
        acc = 0
        for c in self.coefficients:
            acc = acc * x + c
        return acc

    def apply(self, adjacency: np.ndarray, vec) -> np.ndarray:
        """Evaluate ``p(adjacency) @ vec`` by Horner's rule."""
        if self.exact:
            a = np.asarray(adjacency).astype(int).astype(object)
            vec = np.array([Fraction(x) for x in vec], dtype=object)
            acc = np.full(len(vec), Fraction(0), dtype=object)
        else:
            a = np.asarray(adjacency, dtype=float)
            vec = np.asarray(vec, dtype=float)
            acc = np.zeros(len(vec))
        for c in self.coefficients:
            acc = a @ acc + c * vec
        return acc


def interpolate(xs: Sequence, ys: Sequence) -> list:
    """Coefficients (highest first) of the interpolant of degree < len(xs).

    Newton divided differences; exact when given ``Fraction`` inputs.
    """
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly = [coef[-1]]
    for k in range(n - 2, -1, -1):
        new = poly + [0]
        for i, c in enumerate(poly):
            new[i + 1] -= xs[k] * c
        new[-1] += coef[k]
        poly = new
    return poly


# projections -----------------------------------------------------------------

def _column(dec: Decomposition, r: int, u: int):
    P = dec.projectors
    if P.exact:
        return P.numerators[r][:, u]
    return P.float(r)[:, u]


def _is_zero_vec(vec, exact: bool, tol: float) -> bool:
    if exact:
        return not any(vec)
    return float(np.linalg.norm(vec)) <= tol


def eigenvalue_support(dec: Decomposition, u: int, tol: float = SUPPORT_TOL) -> EigenSupport:
    P = dec.projectors
    if P.exact:
        support = tuple(r for r in range(len(P)) if P.numerators[r][u, u] != 0)
    else:
        support = tuple(r for r in range(len(P)) if np.linalg.norm(P.float(r)[:, u]) > tol)
    return EigenSupport(u, support)


def dual_degree(dec: Decomposition, u: int, tol: float = SUPPORT_TOL) -> int:
    return eigenvalue_support(dec, u, tol).dual_degree


def is_spectrally_extremal(dec: Decomposition, u: int, tol: float = SUPPORT_TOL) -> bool:
    """True when the eccentricity of ``u`` equals its dual degree."""
    return dec.graph.distance_info.ecc[u] == dual_degree(dec, u, tol)


def are_cospectral(dec: Decomposition, u: int, v: int, tol: float = SUPPORT_TOL) -> bool:
    P = dec.projectors
    if P.exact:
        return all(N[u, u] == N[v, v] for N in P.numerators)
    return all(abs(E[u, u] - E[v, v]) <= tol for E in (P.float(r) for r in range(len(P))))


def are_strongly_cospectral(dec: Decomposition, u: int, v: int,
                            tol: float = SUPPORT_TOL) -> SignPattern | None:
    """Sign pattern witnessing ``E_r e_v = +-E_r e_u`` for all ``r``, else ``None``.

    The sign is read from the first coordinate of ``E_r e_u`` above ``tol``;
    any coordinate disagreeing with that sign rejects the pair outright.
    """
    exact = dec.projectors.exact
    support, sigmas = [], []
    for r in range(len(dec.projectors)):
        x, y = _column(dec, r, u), _column(dec, r, v)
        zx, zy = _is_zero_vec(x, exact, tol), _is_zero_vec(y, exact, tol)
        if zx and zy:
            continue
        if zx or zy:
            return None
        if exact:
            i = next(k for k, val in enumerate(x) if val != 0)
            if y[i] == 0:
                return None
            sigma = 1 if (x[i] > 0) == (y[i] > 0) else -1
            if any(b != sigma * a for a, b in zip(x, y)):
                return None
        else:
            i = int(np.flatnonzero(np.abs(x) > tol)[0])
            if abs(y[i]) <= tol:
                return None
            sigma = 1 if (x[i] > 0) == (y[i] > 0) else -1
            if np.max(np.abs(y - sigma * x)) > tol:
                return None
        support.append(r)
        sigmas.append(sigma)
    return SignPattern(u, v, tuple(support), tuple(sigmas))


def strongly_cospectral_pairs(dec: Decomposition, tol: float = SUPPORT_TOL) -> list[SignPattern]:
    """All strongly cospectral pairs ``u < v``."""
    out = []
    n = dec.graph.n
    for u in range(n):
        for v in range(u + 1, n):
            sp = are_strongly_cospectral(dec, u, v, tol)
            if sp is not None:
                out.append(sp)
    return out


# walk module -------------------------------------------------------------------

def walk_module_polynomial(dec: Decomposition, u: int, target, tol: float = SUPPORT_TOL,
                           v: int | None = None) -> TransferPolynomial | None:
    """Polynomial ``p`` of degree at most ``d*(u)`` with ``p(A) e_u = target``.

    Works in the eigenprojection basis ``{E_r e_u}`` of the walk module, so
    the unknowns are the values ``p(theta_r)`` on the support of ``u``.
    Returns ``None`` when ``target`` is not in the walk module.
    """
    sup = eigenvalue_support(dec, u, tol).support
    thetas = dec.spectrum.eigenvalues
    P = dec.projectors
    if P.exact:
        y = np.array([Fraction(x) for x in target], dtype=object)
        values = []
        recon = np.full(len(y), Fraction(0), dtype=object)
        for r in sup:
            col = P.fractions(r)[:, u]
            c = (col @ y) / col[u]
            values.append(c)
            recon = recon + c * col
        if any(recon != y):
            return None
        nodes = [Fraction(thetas[r]) for r in sup]
    else:
        y = np.asarray(target, dtype=float)
        values = []
        recon = np.zeros(len(y))
        for r in sup:
            col = P.float(r)[:, u]
            c = float(col @ y / col[u])
            values.append(c)
            recon += c * col
        residual = float(np.linalg.norm(recon - y))
        if residual > math.sqrt(tol):
            if residual >= tol ** 0.25:
                return None
            raise IllConditionedError(
                f"walk-module solve for vertex {u} left residual {residual:.3g}, "
                f"between the accept ({math.sqrt(tol):.1g}) and reject ({tol ** 0.25:.1g}) thresholds"
            )
        nodes = [float(thetas[r]) for r in sup]
    coeffs = interpolate(nodes, values)
    return TransferPolynomial(u, v, tuple(nodes), tuple(values), tuple(coeffs), P.exact)


def transfer_polynomial(dec: Decomposition, u: int, v: int,
                        tol: float = SUPPORT_TOL) -> TransferPolynomial | None:
    """Polynomial with ``p(A) e_u = e_v``, or ``None`` if ``e_v`` is outside the walk module of ``u``.

    For cospectral ``u, v`` the returned polynomial is checked to also send
    ``e_v`` to ``e_u`` and to take only the values +-1 on the support.
    """
    n = dec.graph.n
    ev = [0] * n
    ev[v] = 1
    p = walk_module_polynomial(dec, u, ev, tol, v=v)
    if p is None or not are_cospectral(dec, u, v, tol):
        return p
    eu = [0] * n
    eu[u] = 1
    back = p.apply(dec.graph.adjacency, ev)
    if p.exact:
        ok_back = all(back == np.array(eu))
        ok_vals = all(abs(c) == 1 for c in p.values)
    else:
        ok_back = float(np.max(np.abs(back - np.array(eu)))) <= math.sqrt(tol)
        ok_vals = all(abs(abs(c) - 1) <= math.sqrt(tol) for c in p.values)
    if not (ok_back and ok_vals):
        raise TheoryViolation(
            f"cospectral pair ({u}, {v}): transfer polynomial does not map e_v back to e_u "
            "or takes values other than +-1 on the support"
        )
    return p


# structure around extremal strongly cospectral pairs ---------------------------

def _require_extremal_strong(dec: Decomposition, u: int, v: int, tol: float) -> SignPattern:
    if not is_spectrally_extremal(dec, u, tol):
        raise PreconditionError(f"vertex {u} is not spectrally extremal")
    sp = are_strongly_cospectral(dec, u, v, tol)
    if sp is None:
        raise PreconditionError(f"vertices {u} and {v} are not strongly cospectral")
    return sp


@dataclass(frozen=True)
class UniquenessCheck:
    unique: bool
    counterexample: int | None = None


def unique_at_distance_check(dec: Decomposition, u: int, v: int,
                             tol: float = SUPPORT_TOL) -> UniquenessCheck:
    """Confirm ``v`` is the only vertex at distance ``d(u, v)`` from ``u``.

    Requires ``u`` spectrally extremal and ``u, v`` strongly cospectral. A
    counterexample would contradict the structure theory, so it is returned
    rather than raised to let the caller flag it.
    """
    _require_extremal_strong(dec, u, v, tol)
    dist = dec.graph.distance_info.dist
    g = dist[u, v]
    for w in range(dec.graph.n):
        if w != v and dist[u, w] == g:
            return UniquenessCheck(False, w)
    return UniquenessCheck(True)


@dataclass(frozen=True)
class MaximalityViolation:
    z: int
    w: int
    walks: int
    reference: int
    kind: str


def walk_maximality_scan(dec: Decomposition, u: int, v: int,
                         tol: float = SUPPORT_TOL) -> list[MaximalityViolation]:
    """Check that ``(u, v)`` maximizes the walk count ``(A^g)_{z,w}``.

    Over every ``z`` with the same eigenvalue support as ``u`` and every
    ``w`` at distance ``g = d(u, v)`` from ``z``, the count must not exceed
    ``(A^g)_{u,v}``, with equality exactly for strongly cospectral pairs.
    """
    _require_extremal_strong(dec, u, v, tol)
    graph = dec.graph
    dist = graph.distance_info.dist
    g = int(dist[u, v])
    ref = walk_count(graph, g, u, v)
    sup_u = eigenvalue_support(dec, u, tol).support
    out = []
    for z in range(graph.n):
        if eigenvalue_support(dec, z, tol).support != sup_u:
            continue
        for w in range(graph.n):
            if dist[z, w] != g:
                continue
            cnt = walk_count(graph, g, z, w)
            strong = are_strongly_cospectral(dec, z, w, tol) is not None
            if cnt > ref:
                out.append(MaximalityViolation(z, w, cnt, ref, "exceeds"))
            elif cnt == ref and not strong:
                out.append(MaximalityViolation(z, w, cnt, ref, "equal but not strongly cospectral"))
            elif cnt < ref and strong:
                out.append(MaximalityViolation(z, w, cnt, ref, "strongly cospectral but below maximum"))
    return out


def _component_without(graph, u: int, v: int) -> list[int]:
    seen = {u}
    queue = deque([u])
    while queue:
        x = queue.popleft()
        for y in graph.neighbors[x]:
            if y != v and y not in seen:
                seen.add(y)
                queue.append(y)
    return sorted(seen)


def _exact_rank(rows: list[list[int]]) -> int:
    m = [[Fraction(x) for x in row] for row in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][col] != 0:
                f = m[i][col] / m[rank][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def minimal_poly_in_deleted_graph(dec: Decomposition, u: int, v: int, p: TransferPolynomial,
                                  tol: float = SUPPORT_TOL) -> bool:
    """Check that ``p`` is, up to scaling, the minimal polynomial of ``e_u`` in ``X'``.

    ``X'`` is the component of the graph with ``v`` deleted that contains
    ``u``. Requires ``u`` extremal and ``u, v`` strongly cospectral.
    """
    _require_extremal_strong(dec, u, v, tol)
    if u == v:
        raise PreconditionError("deleting v removes u itself")
    comp = _component_without(dec.graph, u, v)
    sub = dec.graph.subgraph(comp).adjacency
    k = comp.index(u)
    eu = [0] * len(comp)
    eu[k] = 1
    image = p.apply(sub, eu)
    if p.exact:
        if any(image):
            return False
    elif float(np.max(np.abs(image))) > math.sqrt(tol):
        return False
    deg = p.degree
    krylov, vec = [], list(eu)
    for _ in range(deg):
        krylov.append(vec)
        vec = [sum(vec[j] for j in np.flatnonzero(sub[i])) for i in range(len(comp))]
    return _exact_rank(krylov) == deg if deg else True


def sign_pattern_sanity(sp: SignPattern, dec: Decomposition | None = None,
                        tol: float = SUPPORT_TOL) -> bool:
    """False if three consecutive signs are equal.

    With ``dec`` given, the hypotheses (both vertices spectrally extremal and
    strongly cospectral) are verified first.
    """
    if dec is not None:
        _require_extremal_strong(dec, sp.u, sp.v, tol)
        if not is_spectrally_extremal(dec, sp.v, tol):
            raise PreconditionError(f"vertex {sp.v} is not spectrally extremal")
    s = sp.sigmas
    return not any(s[i] == s[i + 1] == s[i + 2] for i in range(len(s) - 2))
