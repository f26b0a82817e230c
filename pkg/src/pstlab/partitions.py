"""Distance partitions, (pseudo-)equitability, antipodality and distance-regularity."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cospectral import (
    SUPPORT_TOL,
    SignPattern,
    TransferPolynomial,
    are_cospectral,
    are_strongly_cospectral,
    is_spectrally_extremal,
    walk_module_polynomial,
)
from .errors import PreconditionError, TheoryViolation
from .graph import Graph, is_regular, require_connected
from .spectral import Decomposition, SpectrumKind

PSEUDO_TOL = 1e-7


@dataclass(frozen=True)
class Partition:
    classes: tuple[tuple[int, ...], ...]
    origin: str = "user"

    def __post_init__(self):
        seen = [v for c in self.classes for v in c]
        if len(seen) != len(set(seen)):
            raise ValueError("partition classes overlap")
        if any(len(c) == 0 for c in self.classes):
            raise ValueError("partition has an empty class")

    def class_of(self) -> dict[int, int]:
        return {v: i for i, c in enumerate(self.classes) for v in c}

    def as_sets(self) -> frozenset[frozenset[int]]:
        return frozenset(frozenset(c) for c in self.classes)


@dataclass(frozen=True)
class EquitableWitness:
    vertex: int
    cls: int
    target: int
    expected: float
    actual: float


@dataclass(frozen=True)
class EquitableResult:
    equitable: bool
    parameters: np.ndarray | None = None
    witness: EquitableWitness | None = None


@dataclass(frozen=True)
class PerronWeights:
    nu: np.ndarray

    @property
    def D(self) -> np.ndarray:
        return np.diag(self.nu)


def _require_partitionable(g: Graph) -> None:
    require_connected(g)
    if g.n < 2:
        raise PreconditionError("partition analyses need at least two vertices")


def distance_partition(g: Graph, u: int) -> Partition:
    _require_partitionable(g)
    dist = g.distance_info.dist[u]
    ecc = g.distance_info.ecc[u]
    classes = tuple(tuple(int(v) for v in np.flatnonzero(dist == i)) for i in range(ecc + 1))
    return Partition(classes, origin=f"distance-from-{u}")


def _check_constant(part: Partition, sums: np.ndarray, close) -> EquitableResult:
    k = len(part.classes)
    params = np.zeros((k, k), dtype=sums.dtype)
    for i, cls in enumerate(part.classes):
        first = cls[0]
        for v in cls[1:]:
            for j in range(k):
                if not close(sums[v, j], sums[first, j]):
                    return EquitableResult(False, witness=EquitableWitness(
                        v, i, j, sums[first, j].item(), sums[v, j].item()))
        params[i] = sums[first]
    return EquitableResult(True, parameters=params)


def is_equitable(g: Graph, part: Partition) -> EquitableResult:
    """Exact test: neighbor counts into each class depend only on the own class."""
    indicator = np.zeros((g.n, len(part.classes)), dtype=np.int64)
    for j, cls in enumerate(part.classes):
        indicator[list(cls), j] = 1
    sums = g.adjacency.astype(np.int64) @ indicator
    return _check_constant(part, sums, lambda a, b: a == b)


def perron_weights(dec: Decomposition) -> PerronWeights:
    """Positive unit Perron vector, read off a column of ``E_0``."""
    _require_partitionable(dec.graph)
    e0 = dec.projectors.float(0)
    col = e0[:, int(np.argmax(np.diag(e0)))]
    nu = col / np.linalg.norm(col)
    if nu.sum() < 0:
        nu = -nu
    if np.any(nu <= 0):
        raise TheoryViolation("Perron vector of a connected graph is not entrywise positive")
    return PerronWeights(nu)


def is_pseudo_equitable(g: Graph, part: Partition, w: PerronWeights,
                        tol: float = PSEUDO_TOL) -> EquitableResult:
    """Equitability of ``D^-1 A D`` with ``D`` the diagonal Perron matrix."""
    _require_partitionable(g)
    nu = w.nu
    weighted = g.adjacency * nu[None, :] / nu[:, None]
    indicator = np.zeros((g.n, len(part.classes)))
    for j, cls in enumerate(part.classes):
        indicator[list(cls), j] = 1.0
    sums = weighted @ indicator
    return _check_constant(part, sums, lambda a, b: abs(a - b) <= tol)


def outer_layer_polynomial(dec: Decomposition, u: int, weights: PerronWeights | None = None,
                           tol: float = SUPPORT_TOL) -> TransferPolynomial | None:
    """Polynomial sending ``e_u`` to the outermost distance layer of ``u``, if one exists.

    With ``weights`` the target is the layer indicator scaled by ``nu_w / nu_u``,
    i.e. the 0/1 indicator for the conjugated matrix ``D^-1 A D``. That is the
    form in which it matches pseudo-equitability of the distance partition;
    without weights the plain 0/1 indicator is used, which only agrees on
    graphs whose Perron vector is constant on the layer.
    """
    part = distance_partition(dec.graph, u)
    layer = list(part.classes[-1])
    if weights is None:
        target = np.zeros(dec.graph.n, dtype=int)
        target[layer] = 1
        return walk_module_polynomial(dec, u, target.tolist(), tol)
    target = np.zeros(dec.graph.n)
    target[layer] = weights.nu[layer] / weights.nu[u]
    if dec.exact:
        # an integer eigenvalue has a rational Perron vector, so the ratios are rational
        return walk_module_polynomial(dec, u, [Fraction(x).limit_denominator(10**6) for x in target], tol)
    return walk_module_polynomial(dec, u, target.tolist(), tol)


# antipodal pairs ----------------------------------------------------------------

@dataclass(frozen=True)
class AntipodalResult:
    """Both antipodality tests; they are required to agree."""

    u: int
    v: int
    definitional: bool
    spectral: bool
    alternating: bool
    reason: str | None = None
    sign_pattern: SignPattern | None = None

    @property
    def antipodal(self) -> bool:
        return self.definitional


def _definitional_antipodal(dec: Decomposition, u: int, v: int, weights: PerronWeights,
                            tol: float) -> tuple[bool, str | None]:
    g = dec.graph
    info = g.distance_info
    if u == v:
        return False, "trivial pair"
    eps = info.ecc[u]
    if not (info.ecc[v] == eps == info.dist[u, v]):
        return False, "not at maximal distance"
    pu, pv = distance_partition(g, u), distance_partition(g, v)
    if pu.classes[eps] != (v,):
        return False, f"{v} is not alone at distance {eps} from {u}"
    if pu.as_sets() != pv.as_sets() or any(
            set(a) != set(b) for a, b in zip(pu.classes, reversed(pv.classes))):
        return False, "distance partitions of u and v differ"
    if not is_pseudo_equitable(g, pu, weights).equitable:
        return False, "distance partition is not pseudo-equitable"
    if not are_cospectral(dec, u, v, tol):
        return False, "not cospectral"
    return True, None


def are_antipodal(dec: Decomposition, u: int, v: int, tol: float = SUPPORT_TOL,
                  weights: PerronWeights | None = None) -> AntipodalResult:
    """Decide antipodality by definition and by the alternating sign pattern.

    The spectral test is: ``u`` spectrally extremal and
    ``E_r e_v = (-1)^r E_r e_u`` over the descending support. Raises
    ``TheoryViolation`` if the two independent tests disagree.
    """
    _require_partitionable(dec.graph)
    weights = weights or perron_weights(dec)
    definitional, reason = _definitional_antipodal(dec, u, v, weights, tol)
    sp = are_strongly_cospectral(dec, u, v, tol)
    alternating = sp is not None and u != v and sp.alternating
    # alternation alone is not enough: P4's adjacent middle pair alternates
    spectral = alternating and is_spectrally_extremal(dec, u, tol)
    if definitional != spectral:
        raise TheoryViolation(
            f"antipodality tests disagree for ({u}, {v}): definitional={definitional}, "
            f"sign pattern={None if sp is None else sp.sigmas}"
        )
    return AntipodalResult(u, v, definitional, spectral, alternating, reason, sp)


# spectral identity for regular extremal graphs ------------------------------------

@dataclass(frozen=True)
class IdentityResult:
    lhs: Fraction | float
    rhs: Fraction | float
    equal: bool


def is_spectrally_extremal_graph(g: Graph, dec: Decomposition) -> bool:
    return len(dec.spectrum) == g.distance_info.diameter + 1


def antipodal_identity(dec: Decomposition, tol: float = 1e-9) -> IdentityResult:
    """Compare ``n / prod_{s>0}(theta_0 - theta_s)`` with ``sum_r (-1)^r / prod_{s!=r}(theta_r - theta_s)``.

    For a regular spectrally extremal graph the two sides agree exactly when
    every pair at distance ``d`` is antipodal. Exact for integer spectra.
    """
    g = dec.graph
    if is_regular(g) is None:
        raise PreconditionError("identity requires a regular graph")
    if not is_spectrally_extremal_graph(g, dec):
        raise PreconditionError("identity requires a spectrally extremal graph")
    exact = dec.spectrum.kind is SpectrumKind.EXACT_INTEGER
    th = [Fraction(t) if exact else float(t) for t in dec.spectrum.eigenvalues]
    lhs = Fraction(g.n) if exact else float(g.n)
    for s in range(1, len(th)):
        lhs /= th[0] - th[s]
    rhs = 0
    for r in range(len(th)):
        term = Fraction((-1) ** r) if exact else float((-1) ** r)
        for s in range(len(th)):
            if s != r:
                term /= th[r] - th[s]
        rhs += term
    equal = lhs == rhs if exact else math.isclose(lhs, rhs, rel_tol=tol, abs_tol=tol)
    return IdentityResult(lhs, rhs, equal)


# distance-regularity ----------------------------------------------------------------

@dataclass(frozen=True)
class DistanceRegularResult:
    distance_regular: bool
    parameters: np.ndarray | None = None
    reason: str | None = None

    @property
    def intersection_array(self) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
        """``({b_0, ..., b_{d-1}}, {c_1, ..., c_d})``."""
        if self.parameters is None:
            return None
        B = self.parameters
        d = B.shape[0] - 1
        return (tuple(int(B[i, i + 1]) for i in range(d)), tuple(int(B[i, i - 1]) for i in range(1, d + 1)))


def is_distance_regular(g: Graph) -> DistanceRegularResult:
    _require_partitionable(g)
    if is_regular(g) is None:
        return DistanceRegularResult(False, reason="not regular")
    common = None
    for u in range(g.n):
        res = is_equitable(g, distance_partition(g, u))
        if not res.equitable:
            return DistanceRegularResult(False, reason=f"distance partition of {u} is not equitable")
        if common is None:
            common = res.parameters
        elif not np.array_equal(common, res.parameters):
            # regular + all distance partitions equitable already forces this
            raise TheoryViolation(f"regular graph with vertex-dependent parameters at {u}")
    return DistanceRegularResult(True, parameters=common)


def is_antipodal_drg(g: Graph) -> bool:
    """Whether "distance 0 or d" is an equivalence relation on a distance-regular graph."""
    if not is_distance_regular(g).distance_regular:
        raise PreconditionError("graph is not distance-regular")
    dist = g.distance_info.dist
    d = g.distance_info.diameter
    rel = (dist == 0) | (dist == d)
    classes = [frozenset(np.flatnonzero(rel[x])) for x in range(g.n)]
    return all(classes[y] == classes[x] for x in range(g.n) for y in classes[x])
