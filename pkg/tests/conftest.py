from __future__ import annotations

import functools
from pathlib import Path

import numpy as np
import pytest

from pstlab import eigen_decompose, parse_graph6
from pstlab.generators import NAMED

DATA = Path(__file__).parent / "data"


@functools.lru_cache(maxsize=None)
def census(n: int) -> tuple:
    """All connected graphs on exactly ``n`` vertices, as graph6 strings."""
    return tuple(DATA.joinpath(f"connected_{n}.g6").read_text().split())


def census_upto(n: int) -> list[str]:
    return [s for k in range(1, n + 1) for s in census(k)]


@functools.lru_cache(maxsize=None)
def decomposed(g6: str):
    return eigen_decompose(parse_graph6(g6))


def expm_series(a: np.ndarray, t: float) -> np.ndarray:
    """``exp(i t A)`` by Taylor series with scaling and squaring.

    Independent of the spectral machinery; used only as a cross-check.
    """
    m = 1j * t * np.asarray(a, dtype=complex)
    norm = np.abs(m).sum(axis=1).max()
    s = max(0, int(np.ceil(np.log2(max(norm, 1e-300)))) + 1)
    m = m / 2**s
    out = np.eye(len(a), dtype=complex)
    term = np.eye(len(a), dtype=complex)
    for k in range(1, 30):
        term = term @ m / k
        out = out + term
    for _ in range(s):
        out = out @ out
    return out


@pytest.fixture(scope="session")
def named():
    return {name: eigen_decompose(make()) for name, make in NAMED.items()}
