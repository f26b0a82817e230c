"""Continuous-time quantum walk ``U(t) = exp(itA)`` evaluated by spectral sums.

This is the numerical oracle that every perfect state transfer claim is
checked against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .spectral import Decomposition

CONFIRM_EPS = 1e-9
REFUTE_EPS = 1e-6
DEFAULT_T_MAX = 20 * math.pi

INV_PHI = (math.sqrt(5) - 1) / 2


@dataclass(frozen=True)
class Amplitudes:
    t: float
    amp: np.ndarray

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amp))


@dataclass(frozen=True)
class FidelitySeries:
    u: int
    v: int
    times: np.ndarray
    fidelities: np.ndarray

    @property
    def samples(self) -> list[tuple[float, float]]:
        return list(zip(self.times.tolist(), self.fidelities.tolist()))

    def to_csv(self) -> str:
        rows = ["t,fidelity"]
        rows += [f"{t:.15g},{f:.15g}" for t, f in zip(self.times, self.fidelities)]
        return "\n".join(rows) + "\n"


@dataclass(frozen=True)
class OracleResult:
    """Outcome of a fidelity search on ``[0, t_max]``.

    ``time``/``fidelity`` are the earliest point with fidelity at least
    ``1 - eps`` (``None`` if there is none); ``max_time``/``max_fidelity``
    the best point found anywhere.
    """

    time: float | None
    fidelity: float | None
    max_time: float
    max_fidelity: float

    @property
    def found(self) -> bool:
        return self.time is not None


def evolve(dec: Decomposition, u: int, t: float) -> Amplitudes:
    """``U(t) e_u = sum_r exp(i t theta_r) E_r e_u``."""
    amp = np.zeros(dec.graph.n, dtype=complex)
    for r, theta in enumerate(dec.thetas):
        amp += np.exp(1j * t * theta) * dec.projectors.float(r)[:, u]
    return Amplitudes(float(t), amp)


def evolve_state(dec: Decomposition, state, t: float) -> np.ndarray:
    """Apply ``U(t)`` to an arbitrary complex state."""
    state = np.asarray(state, dtype=complex)
    out = np.zeros(dec.graph.n, dtype=complex)
    for r, theta in enumerate(dec.thetas):
        out += np.exp(1j * t * theta) * (dec.projectors.float(r) @ state)
    return out


def _pair_coefficients(dec: Decomposition, u: int, v: int) -> np.ndarray:
    return np.array([dec.projectors.float(r)[v, u] for r in range(len(dec.projectors))])


def _fidelity_many(thetas: np.ndarray, coeffs: np.ndarray, times) -> np.ndarray:
    times = np.atleast_1d(np.asarray(times, dtype=float))
    return np.abs(np.exp(1j * np.outer(times, thetas)) @ coeffs)


def fidelity(dec: Decomposition, u: int, v: int, t: float) -> float:
    """``|e_v^T U(t) e_u|``."""
    return float(_fidelity_many(dec.thetas, _pair_coefficients(dec, u, v), [t])[0])


def fidelity_series(dec: Decomposition, u: int, v: int, t_max: float, steps: int) -> FidelitySeries:
    if steps < 2:
        raise ValueError("a fidelity series needs at least 2 steps")
    times = np.linspace(0.0, t_max, steps)
    vals = _fidelity_many(dec.thetas, _pair_coefficients(dec, u, v), times)
    return FidelitySeries(u, v, times, vals)


def golden_section_max(f, a: float, b: float, xtol: float = 1e-12) -> tuple[float, float]:
    """Maximize a unimodal ``f`` on ``[a, b]``; returns ``(x, f(x))``."""
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > xtol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    x = (a + b) / 2
    return x, f(x)


def pst_oracle_search(dec: Decomposition, u: int, v: int, t_max: float = DEFAULT_T_MAX,
                      coarse_steps: int | None = None, eps: float = CONFIRM_EPS) -> OracleResult:
    """Scan ``[0, t_max]`` for fidelity at least ``1 - eps``.

    A coarse grid is refined by golden-section search around every local
    maximum that could still reach the threshold or the running maximum.
    The default grid spacing bounds the drop of ``|amp|^2`` between a grid
    point and an adjacent true maximum by ``0.005``; that slack decides which
    local maxima are refined.
    """
    if t_max <= 0:
        raise ValueError("t_max must be positive")
    thetas = dec.thetas
    coeffs = _pair_coefficients(dec, u, v)
    # bound on |d^2/dt^2 |amp|^2|
    curv = float(np.sum(np.abs(np.outer(coeffs, coeffs)) * np.subtract.outer(thetas, thetas) ** 2))
    if coarse_steps is None:
        h = 0.1 / math.sqrt(curv) if curv > 0 else t_max
        coarse_steps = max(int(math.ceil(t_max / h)) + 1, 3)
    times = np.linspace(0.0, t_max, coarse_steps)
    h = times[1] - times[0]
    vals = _fidelity_many(thetas, coeffs, times)
    slack = 0.5 * h * h * curv
    sq = vals ** 2

    peaks = [i for i in range(len(times))
             if (i == 0 or sq[i] >= sq[i - 1]) and (i == len(times) - 1 or sq[i] >= sq[i + 1])]
    target_sq = (1 - eps) ** 2
    best_sq = float(sq.max())
    f = lambda t: float(_fidelity_many(thetas, coeffs, [t])[0])

    first_hit = None
    best_t, best_f = float(times[int(np.argmax(vals))]), float(vals.max())
    for i in peaks:
        if sq[i] < min(target_sq, best_sq) - slack:
            continue
        lo, hi = times[max(i - 1, 0)], times[min(i + 1, len(times) - 1)]
        t_star, f_star = golden_section_max(f, lo, hi)
        if vals[i] > f_star:
            t_star, f_star = float(times[i]), float(vals[i])
        if f_star > best_f:
            best_t, best_f = t_star, f_star
        if first_hit is None and f_star >= 1 - eps:
            first_hit = (t_star, f_star)
    if first_hit is None:
        return OracleResult(None, None, best_t, best_f)
    return OracleResult(first_hit[0], first_hit[1], best_t, best_f)
