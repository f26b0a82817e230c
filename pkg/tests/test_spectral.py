from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pstlab import (
    ClusterAmbiguityError,
    DisconnectedGraphError,
    Projectors,
    SpectrumKind,
    char_poly,
    eigen_decompose,
    parse_edge_list,
    parse_graph6,
    verify_decomposition,
)
from pstlab.generators import (
    complete_graph,
    cycle_graph,
    hypercube_graph,
    path_graph,
    petersen_graph,
)
from pstlab.graph import is_regular
from pstlab.spectral import (
    SUM_IS_IDENTITY,
    QuadraticForm,
    fit_quadratic_family,
    jacobi_eigh,
    poly_divmod_monic,
    poly_mul,
    squarefree_part,
)

from conftest import census_upto, decomposed


class TestCharPoly:
    @pytest.mark.parametrize("g, expected", [
        (complete_graph(2), [1, 0, -1]),
        (path_graph(3), [1, 0, -2, 0]),
        (cycle_graph(4), [1, 0, -4, 0, 0]),
        (path_graph(4), [1, 0, -3, 0, 1]),
    ])
    def test_examples(self, g, expected):
        assert char_poly(g) == expected

    def test_petersen(self):
        # (x - 3)(x - 1)^5 (x + 2)^4
        expected = [1]
        for root, m in ((3, 1), (1, 5), (-2, 4)):
            for _ in range(m):
                expected = poly_mul(expected, [1, -root])
        assert char_poly(petersen_graph()) == expected

    def test_agrees_with_numpy_on_census(self):
        for s in census_upto(6):
            g = parse_graph6(s)
            ref = np.poly(g.adjacency.astype(float))
            assert np.allclose(char_poly(g), ref, atol=1e-6)

    def test_divmod(self):
        q, r = poly_divmod_monic([1, 0, -2, 0], [1, 0, -2])
        assert q == [1, 0] and not any(r)


class TestJacobi:
    def test_matches_numpy(self):
        for s in census_upto(6)[::5]:
            a = parse_graph6(s).adjacency.astype(float)
            w, v = jacobi_eigh(a)
            assert np.allclose(np.sort(w), np.linalg.eigvalsh(a), atol=1e-12)
            assert np.allclose(v.T @ v, np.eye(len(a)), atol=1e-12)
            assert np.allclose(v @ np.diag(w) @ v.T, a, atol=1e-12)

    @settings(max_examples=30)
    @given(st.integers(2, 8).flatmap(
        lambda n: st.lists(st.floats(-5, 5), min_size=n * n, max_size=n * n).map(
            lambda xs: np.array(xs).reshape(n, n))))
    def test_random_symmetric(self, m):
        a = m + m.T
        w, v = jacobi_eigh(a)
        assert np.allclose(np.sort(w), np.linalg.eigvalsh(a), atol=1e-9)
        assert np.allclose(v.T @ v, np.eye(len(a)), atol=1e-10)


class TestHelpers:
    @pytest.mark.parametrize("m, sf", [(1, 1), (2, 2), (8, 2), (12, 3), (20, 5), (45, 5), (36, 1)])
    def test_squarefree(self, m, sf):
        assert squarefree_part(m) == sf

    def test_min_poly(self):
        f = QuadraticForm(2, 0, (2, 0, -2))
        assert f.min_poly(0) == [1, 0, -2]
        assert f.min_poly(1) == [1, 0]
        assert QuadraticForm(1, 0, (6,)).min_poly(0) == [1, -3]
        assert QuadraticForm(5, 1, (1,)).min_poly(0) == [1, -1, -1]

    def test_fit_p3(self):
        form = fit_quadratic_family([2**0.5, 0.0, -(2**0.5)], [1, 0, -2, 0])
        assert form == QuadraticForm(2, 0, (2, 0, -2))

    def test_fit_rejects_mixed_a(self):
        phi = (1 + 5**0.5) / 2
        assert fit_quadratic_family([phi, phi - 1, 1 - phi, -phi], [1, 0, -3, 0, 1]) is None

    def test_fit_golden_pair(self):
        phi = (1 + 5**0.5) / 2
        form = fit_quadratic_family([phi, 1 - phi], [1, -1, -1])
        assert form.delta == 5 and form.a == 1 and form.b == (1, -1)


class TestDecompose:
    def test_q3(self):
        s, p = eigen_decompose(hypercube_graph(3))
        assert s.kind is SpectrumKind.EXACT_INTEGER
        assert s.eigenvalues == (3, 1, -1, -3)
        assert s.multiplicities == (1, 3, 3, 1)
        assert p.exact

    def test_p3(self):
        s, _ = eigen_decompose(path_graph(3))
        assert s.kind is SpectrumKind.QUADRATIC
        assert s.form == QuadraticForm(2, 0, (2, 0, -2))
        assert np.allclose(s.eigenvalues, [2**0.5, 0, -(2**0.5)])

    def test_p4(self):
        s, p = eigen_decompose(path_graph(4))
        assert s.kind is SpectrumKind.FLOATING
        phi = (1 + 5**0.5) / 2
        assert np.allclose(s.eigenvalues, [phi, phi - 1, 1 - phi, -phi], atol=1e-12)
        assert not p.exact

    def test_k1(self):
        s, p = eigen_decompose(parse_graph6("@"))
        assert s.eigenvalues == (0,) and p.fractions(0)[0, 0] == 1

    def test_disconnected(self):
        with pytest.raises(DisconnectedGraphError):
            eigen_decompose(parse_edge_list("0 1\n2 3"))

    def test_cluster_ambiguity(self):
        with pytest.raises(ClusterAmbiguityError):
            eigen_decompose(path_graph(4), tol=0.5)

    def test_descending_and_multiplicities(self):
        for s in census_upto(6):
            spec = decomposed(s).spectrum
            vals = [float(x) for x in spec.eigenvalues]
            assert all(a > b for a, b in zip(vals, vals[1:]))
            assert sum(spec.multiplicities) == decomposed(s).graph.n

    def test_trace_identities(self):
        for s in census_upto(7):
            dec = decomposed(s)
            spec = dec.spectrum
            th = np.array([float(x) for x in spec.eigenvalues])
            m = np.array(spec.multiplicities)
            assert abs(th @ m) < 1e-9
            assert abs((th**2) @ m - 2 * len(dec.graph.edges)) < 1e-9

    def test_exact_matches_float_projectors(self):
        for s in census_upto(6):
            dec = decomposed(s)
            if not dec.exact:
                continue
            w, v = np.linalg.eigh(dec.graph.adjacency.astype(float))
            for r, theta in enumerate(dec.spectrum.eigenvalues):
                cols = v[:, np.abs(w - theta) < 1e-6]
                assert np.allclose(cols @ cols.T, dec.projectors.float(r), atol=1e-8)

    def test_regular_perron_projector_is_uniform(self):
        for s in census_upto(7):
            dec = decomposed(s)
            if is_regular(dec.graph) is None or not dec.exact:
                continue
            n = dec.graph.n
            assert np.all(dec.projectors.fractions(0) == Fraction(1, n))


class TestVerify:
    def test_q3_exact(self):
        dec = eigen_decompose(hypercube_graph(3))
        rep = verify_decomposition(*dec, dec.graph)
        assert rep.passed and rep.exact and rep.max_residual == 0

    def test_p4_floating(self):
        dec = eigen_decompose(path_graph(4))
        rep = verify_decomposition(*dec, dec.graph, tol=1e-9)
        assert rep.passed and not rep.exact
        assert rep.max_residual < 1e-12

    def test_fault_injection_floating(self):
        dec = eigen_decompose(path_graph(4))
        mats = [dec.projectors.float(r).copy() for r in range(len(dec.projectors))]
        mats[0][1, 1] += 10 * 1e-9
        rep = verify_decomposition(dec.spectrum, Projectors(mats), dec.graph, tol=1e-9)
        assert not rep.passed
        assert rep.failures[0].name == SUM_IS_IDENTITY

    def test_fault_injection_exact(self):
        dec = eigen_decompose(hypercube_graph(3))
        mats = [dec.projectors.fractions(r) for r in range(4)]
        mats[0][0, 1] += Fraction(1, 10**8)
        mats[0][1, 0] += Fraction(1, 10**8)
        rep = verify_decomposition(dec.spectrum, Projectors.from_fractions(mats), dec.graph)
        assert SUM_IS_IDENTITY in [c.name for c in rep.failures]

    def test_all_census(self):
        for s in census_upto(7):
            dec = decomposed(s)
            rep = verify_decomposition(*dec, dec.graph, tol=1e-8)
            assert rep.passed, (s, rep.failures)
