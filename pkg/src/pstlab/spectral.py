"""Spectral decomposition ``A = sum_r theta_r E_r`` of a graph.

The floating eigensolve (cyclic Jacobi) is only used to *locate* the
eigenvalues. Whenever they turn out to be integers, or to lie in a single
family ``(a + b_r sqrt(delta)) / 2``, that is confirmed against the exact
characteristic polynomial before anything downstream relies on it. Integer
spectra additionally get exact rational projectors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import reduce
from typing import Sequence

import numpy as np

from .errors import ClusterAmbiguityError
from .graph import Graph, require_connected

DEFAULT_TOL = 1e-9
SNAP_TOL = 1e-6


# integer polynomials, coefficients highest degree first --------------------

def poly_eval(coeffs: Sequence, x):
    acc = 0
    for c in coeffs:
        acc = acc * x + c
    return acc


def poly_mul(p: Sequence[int], q: Sequence[int]) -> list[int]:
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def poly_divmod_monic(p: Sequence[int], d: Sequence[int]) -> tuple[list[int], list[int]]:
    """Exact division by a monic integer polynomial."""
    if d[0] != 1:
        raise ValueError("divisor must be monic")
    rem = list(p)
    quot = []
    for i in range(len(p) - len(d) + 1):
        c = rem[i]
        quot.append(c)
        if c:
            for j in range(1, len(d)):
                rem[i + j] -= c * d[j]
    tail = rem[len(p) - len(d) + 1:] if len(d) > 1 else []
    return quot or [0], tail


def char_poly(g: Graph) -> list[int]:
    """Characteristic polynomial ``det(xI - A)``, monic, highest degree first.

    Faddeev-LeVerrier in Python integers; every division by ``k`` is exact.
    """
    n = g.n
    a = g.adjacency.astype(object)
    ident = np.identity(n, dtype=int).astype(object)
    coeffs = [1]
    m = ident
    for k in range(1, n + 1):
        am = a @ m
        tr = sum(am[i, i] for i in range(n))
        c = -tr // k
        assert c * k == -tr
        coeffs.append(c)
        m = am + c * ident
    return coeffs


def squarefree_part(m: int) -> int:
    """Return ``s`` with ``m = s * k^2`` and ``s`` square-free (``m > 0``)."""
    s, p = 1, 2
    while p * p <= m:
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        if e % 2:
            s *= p
        p += 1
    return s * m


# Jacobi eigensolver --------------------------------------------------------

def jacobi_eigh(a, max_sweeps: int = 60) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues and orthonormal eigenvectors (columns) of a real symmetric matrix.

    Cyclic Jacobi rotations; each rotation zeroes one off-diagonal pair
    exactly, and sweeping stops once no entry is above roundoff level.
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    v = np.identity(n)
    scale = max(np.linalg.norm(a), 1.0)
    for _ in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-18 * scale:
                    continue
                rotated = True
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.hypot(t, 1.0)
                s = t * c
                colp, colq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * colp - s * colq
                a[:, q] = s * colp + c * colq
                rowp, rowq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * rowp - s * rowq
                a[q, :] = s * rowp + c * rowq
                a[p, q] = a[q, p] = 0.0
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
        if not rotated:
            break
    return np.diag(a).copy(), v


# domain types ----------------------------------------------------------------

class SpectrumKind(str, Enum):
    EXACT_INTEGER = "exact-integer"
    QUADRATIC = "quadratic"
    FLOATING = "floating"


@dataclass(frozen=True)
class QuadraticForm:
    """Eigenvalues written as ``(a + b_r * sqrt(delta)) / 2``."""

    delta: int
    a: int
    b: tuple[int, ...]

    def value(self, r: int) -> float:
        return (self.a + self.b[r] * math.sqrt(self.delta)) / 2

    def min_poly(self, r: int) -> list[int]:
        """Monic integer minimal polynomial of the ``r``-th value."""
        b = self.b[r]
        if self.delta == 1 or b == 0:
            twice = self.a + b if self.delta == 1 else self.a
            return [1, -(twice // 2)]
        return [1, -self.a, (self.a ** 2 - b ** 2 * self.delta) // 4]


@dataclass(frozen=True)
class Spectrum:
    """Distinct eigenvalues in strictly descending order.

    For ``EXACT_INTEGER`` the eigenvalues are Python ``int``; otherwise
    ``float``. ``form`` is set only for ``QUADRATIC``.
    """

    eigenvalues: tuple
    multiplicities: tuple[int, ...]
    kind: SpectrumKind
    form: QuadraticForm | None = None

    @property
    def d(self) -> int:
        return len(self.eigenvalues) - 1

    def __len__(self):
        return len(self.eigenvalues)


class Projectors:
    """Spectral idempotents aligned with ``Spectrum.eigenvalues``.

    Exact projectors are held as integer numerator matrices with one positive
    integer denominator each, ``E_r = numerators[r] / denominators[r]``; a
    float view is always available.
    """

    def __init__(self, matrices, numerators=None, denominators=None, tol: float = DEFAULT_TOL):
        self._float = tuple(np.asarray(m, dtype=float) for m in matrices)
        self.numerators = None if numerators is None else tuple(numerators)
        self.denominators = None if denominators is None else tuple(int(d) for d in denominators)
        self.tol = tol

    @classmethod
    def from_exact(cls, numerators, denominators) -> Projectors:
        mats = [np.array(nm, dtype=float) / d for nm, d in zip(numerators, denominators)]
        return cls(mats, numerators, denominators, tol=0.0)

    @classmethod
    def from_fractions(cls, matrices) -> Projectors:
        nums, dens = [], []
        for m in matrices:
            m = np.asarray(m, dtype=object)
            den = reduce(math.lcm, (Fraction(x).denominator for x in m.flat), 1)
            nums.append(np.vectorize(lambda x: int(Fraction(x) * den), otypes=[object])(m))
            dens.append(den)
        return cls.from_exact(nums, dens)

    @property
    def exact(self) -> bool:
        return self.numerators is not None

    def __len__(self):
        return len(self._float)

    def float(self, r: int) -> np.ndarray:
        return self._float[r]

    def entry(self, r: int, i: int, j: int):
        if self.exact:
            return Fraction(int(self.numerators[r][i, j]), self.denominators[r])
        return float(self._float[r][i, j])

    def fractions(self, r: int) -> np.ndarray:
        if not self.exact:
            raise ValueError("floating projectors have no exact form")
        den = self.denominators[r]
        return np.vectorize(lambda x: Fraction(int(x), den), otypes=[object])(self.numerators[r])


@dataclass(frozen=True)
class Decomposition:
    graph: Graph
    spectrum: Spectrum
    projectors: Projectors
    charpoly: tuple[int, ...] = field(repr=False)
    tol: float = DEFAULT_TOL

    def __iter__(self):
        # allows ``spectrum, projectors = eigen_decompose(g)``
        return iter((self.spectrum, self.projectors))

    @property
    def exact(self) -> bool:
        return self.projectors.exact

    @property
    def thetas(self) -> np.ndarray:
        return np.array([float(x) for x in self.spectrum.eigenvalues])


# quadratic family fit ---------------------------------------------------------

def fit_quadratic_family(values: Sequence[float], charpoly: Sequence[int],
                         tol: float = SNAP_TOL) -> QuadraticForm | None:
    """Find integers ``delta, a, b_r`` with ``values[r] = (a + b_r sqrt(delta)) / 2``.

    ``values`` must be strictly descending. Each candidate is accepted only
    if the minimal polynomial it implies for every value divides
    ``charpoly`` exactly. A family with ``delta == 1`` is reported only when
    every value is an integer, with ``a = 0`` and ``b_r = 2 * values[r]``.
    """
    vals = [float(x) for x in values]
    if all(abs(x - round(x)) <= tol and poly_eval(charpoly, round(x)) == 0 for x in vals):
        return QuadraticForm(delta=1, a=0, b=tuple(2 * round(x) for x in vals))
    if len(vals) < 2:
        return None
    # (2 (theta_0 - theta_r))^2 = (b_0 - b_r)^2 delta must be an integer
    delta = None
    diffs = []
    for x in vals[1:]:
        sq = (2 * (vals[0] - x)) ** 2
        k = round(sq)
        if k <= 0 or abs(sq - k) > tol * max(1.0, sq):
            return None
        s = squarefree_part(k)
        if delta is None:
            delta = s
        elif s != delta:
            return None
        diffs.append(math.isqrt(k // s))
    if delta == 1:
        return None
    root = math.sqrt(delta)
    rho = max(abs(x) for x in vals)
    bound = int(2 * rho / root) + 2
    for b0 in range(-bound, bound + 1):
        a_float = 2 * vals[0] - b0 * root
        a = round(a_float)
        if abs(a_float - a) > tol:
            continue
        form = QuadraticForm(delta=delta, a=a, b=(b0,) + tuple(b0 - d for d in diffs))
        if all(_is_root_family(form, r, charpoly) for r in range(len(vals))):
            return form
    return None


def _is_root_family(form: QuadraticForm, r: int, charpoly: Sequence[int]) -> bool:
    b = form.b[r]
    if b == 0:
        return form.a % 2 == 0 and poly_eval(charpoly, form.a // 2) == 0
    if (form.a ** 2 - b ** 2 * form.delta) % 4:
        return False
    _, rem = poly_divmod_monic(charpoly, form.min_poly(r))
    return not any(rem)


def _verify_quadratic_spectrum(form: QuadraticForm, mults, charpoly) -> bool:
    """Exact check that the claimed spectrum reproduces ``charpoly``."""
    product = [1]
    done = set()
    for r, b in enumerate(form.b):
        if r in done:
            continue
        if b == 0:
            if form.a % 2:
                return False
            factor, power = [1, -(form.a // 2)], mults[r]
            done.add(r)
        else:
            conj = [s for s, bs in enumerate(form.b) if bs == -b]
            if len(conj) != 1 or mults[conj[0]] != mults[r]:
                return False
            if (form.a ** 2 - b ** 2 * form.delta) % 4:
                return False
            factor, power = form.min_poly(r), mults[r]
            done.update((r, conj[0]))
        for _ in range(power):
            product = poly_mul(product, factor)
    return product == list(charpoly)


# decomposition ------------------------------------------------------------------

def _cluster(w: np.ndarray, tol: float) -> list[list[int]]:
    clusters = [[0]]
    for i in range(1, len(w)):
        if w[clusters[-1][-1]] - w[i] <= tol:
            clusters[-1].append(i)
        else:
            clusters.append([i])
    for c1, c2 in zip(clusters, clusters[1:]):
        gap = w[c1[-1]] - w[c2[0]]
        if gap < 10 * tol:
            raise ClusterAmbiguityError(
                f"eigenvalue clusters near {w[c1[-1]]:.15g} and {w[c2[0]]:.15g} are "
                f"{gap:.3g} apart, below the ambiguity threshold {10 * tol:.3g}"
            )
    return clusters


def _lagrange_projectors(adj: np.ndarray, thetas: Sequence[int]):
    n = adj.shape[0]
    d = len(thetas)
    ident = np.identity(n, dtype=int).astype(object)
    a = adj.astype(object)
    factors = [a - t * ident for t in thetas]
    prefix = [ident]
    for f in factors:
        prefix.append(prefix[-1] @ f)
    suffix = [ident]
    for f in reversed(factors):
        suffix.append(f @ suffix[-1])
    suffix.reverse()
    nums, dens = [], []
    for r in range(d):
        num = prefix[r] @ suffix[r + 1]
        den = 1
        for s in range(d):
            if s != r:
                den *= thetas[r] - thetas[s]
        if den < 0:
            num, den = -num, -den
        common = reduce(math.gcd, (int(x) for x in num.flat), den)
        nums.append(num // common)
        dens.append(den // common)
    return nums, dens


def eigen_decompose(g: Graph, tol: float = DEFAULT_TOL) -> Decomposition:
    """Decompose the adjacency matrix of a connected graph.

    Raises ``DisconnectedGraphError`` for disconnected input and
    ``ClusterAmbiguityError`` when two eigenvalue clusters cannot be
    separated safely at ``tol``.
    """
    require_connected(g)
    cp = char_poly(g)
    w, vecs = jacobi_eigh(g.adjacency)
    order = np.argsort(-w, kind="stable")
    w, vecs = w[order], vecs[:, order]
    clusters = _cluster(w, tol)
    centers = [float(np.mean(w[c])) for c in clusters]
    mults = tuple(len(c) for c in clusters)

    snapped = [round(c) for c in centers]
    if all(abs(c - k) <= SNAP_TOL and poly_eval(cp, k) == 0 for c, k in zip(centers, snapped)):
        product = [1]
        for k, m in zip(snapped, mults):
            for _ in range(m):
                product = poly_mul(product, [1, -k])
        if product != cp:
            raise ClusterAmbiguityError(
                "integer eigenvalue multiplicities disagree with the characteristic polynomial"
            )
        nums, dens = _lagrange_projectors(g.adjacency, snapped)
        spectrum = Spectrum(tuple(int(k) for k in snapped), mults, SpectrumKind.EXACT_INTEGER)
        return Decomposition(g, spectrum, Projectors.from_exact(nums, dens), tuple(cp), tol)

    mats = [vecs[:, c] @ vecs[:, c].T for c in clusters]
    projectors = Projectors(mats, tol=tol)
    form = fit_quadratic_family(centers, cp)
    if form is not None and form.delta > 1 and _verify_quadratic_spectrum(form, mults, cp):
        values = tuple(form.value(r) for r in range(len(centers)))
        spectrum = Spectrum(values, mults, SpectrumKind.QUADRATIC, form)
    else:
        spectrum = Spectrum(tuple(centers), mults, SpectrumKind.FLOATING)
    return Decomposition(g, spectrum, projectors, tuple(cp), tol)


# verification -------------------------------------------------------------------

@dataclass(frozen=True)
class IdentityCheck:
    name: str
    passed: bool
    residual: float


@dataclass(frozen=True)
class VerificationReport:
    exact: bool
    tol: float
    checks: tuple[IdentityCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[IdentityCheck]:
        return [c for c in self.checks if not c.passed]

    @property
    def max_residual(self) -> float:
        return max((c.residual for c in self.checks), default=0.0)


SUM_IS_IDENTITY = "sum E_r = I"
ORTHOGONAL_IDEMPOTENT = "E_r E_s = delta_rs E_r"
SYMMETRIC = "E_r^T = E_r"
RECONSTRUCTS_A = "sum theta_r E_r = A"
TRACE_IS_MULTIPLICITY = "trace E_r = m_r"


def verify_decomposition(spectrum: Spectrum, projectors: Projectors, g: Graph,
                         tol: float = DEFAULT_TOL) -> VerificationReport:
    """Check the projector identities; exact for exact projectors, entrywise ``tol`` otherwise."""
    if len(spectrum) != len(projectors):
        raise ValueError("spectrum and projectors are not aligned")
    if projectors.exact:
        mats = [projectors.fractions(r) for r in range(len(projectors))]
        one, zero = Fraction(1), Fraction(0)
        ident = np.full((g.n, g.n), zero, dtype=object)
        for i in range(g.n):
            ident[i, i] = one
        adj = g.adjacency.astype(int).astype(object)
        thetas = [Fraction(t) for t in spectrum.eigenvalues]
        ok = lambda res: res == 0
    else:
        mats = [projectors.float(r) for r in range(len(projectors))]
        ident = np.identity(g.n)
        adj = g.adjacency.astype(float)
        thetas = [float(t) for t in spectrum.eigenvalues]
        ok = lambda res: res <= tol

    def resid(m) -> float | Fraction:
        return max((abs(x) for x in np.asarray(m).flat), default=0)

    checks = []
    r = resid(sum(mats[1:], mats[0]) - ident)
    checks.append(IdentityCheck(SUM_IS_IDENTITY, ok(r), float(r)))
    worst = 0
    for i, ei in enumerate(mats):
        for j, ej in enumerate(mats):
            target = ei if i == j else 0 * ei
            worst = max(worst, resid(ei @ ej - target))
    checks.append(IdentityCheck(ORTHOGONAL_IDEMPOTENT, ok(worst), float(worst)))
    worst = max(resid(m - m.T) for m in mats)
    checks.append(IdentityCheck(SYMMETRIC, ok(worst), float(worst)))
    recon = sum((t * m for t, m in zip(thetas[1:], mats[1:])), thetas[0] * mats[0])
    r = resid(recon - adj)
    checks.append(IdentityCheck(RECONSTRUCTS_A, ok(r), float(r)))
    worst = max(abs(sum(m[i, i] for i in range(g.n)) - k) for m, k in zip(mats, spectrum.multiplicities))
    checks.append(IdentityCheck(TRACE_IS_MULTIPLICITY, ok(worst), float(worst)))
    return VerificationReport(exact=projectors.exact, tol=0.0 if projectors.exact else tol,
                              checks=tuple(checks))
