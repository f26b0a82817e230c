import itertools
from fractions import Fraction

import numpy as np
import pytest

from pstlab import (
    PreconditionError,
    antipodal_identity,
    are_antipodal,
    distance_partition,
    eigen_decompose,
    is_antipodal_drg,
    is_distance_regular,
    is_equitable,
    is_pseudo_equitable,
    is_spectrally_extremal,
    parse_graph6,
    perron_weights,
)
from pstlab.generators import (
    NAMED,
    complete_bipartite_graph,
    complete_graph,
    cycle_graph,
    hypercube_graph,
    paw_graph,
    path_graph,
    petersen_graph,
    star_graph,
)
from pstlab.graph import is_regular
from pstlab.partitions import Partition, is_spectrally_extremal_graph, outer_layer_polynomial

from conftest import census_upto, decomposed


class TestDistancePartition:
    def test_p3(self):
        assert distance_partition(path_graph(3), 0).classes == ((0,), (1,), (2,))

    def test_q3_sizes(self):
        g = hypercube_graph(3)
        for u in range(8):
            assert [len(c) for c in distance_partition(g, u).classes] == [1, 3, 3, 1]

    def test_k4(self):
        assert [len(c) for c in distance_partition(complete_graph(4), 2).classes] == [1, 3]

    def test_trivial_graph_rejected(self):
        with pytest.raises(PreconditionError):
            distance_partition(parse_graph6("@"), 0)

    def test_overlapping_classes_rejected(self):
        with pytest.raises(ValueError):
            Partition(((0, 1), (1, 2)))


class TestEquitable:
    def test_q3_parameters(self):
        g = hypercube_graph(3)
        res = is_equitable(g, distance_partition(g, 0))
        assert res.equitable
        assert res.parameters.tolist() == [[0, 3, 0, 0], [1, 0, 2, 0], [0, 2, 0, 1], [0, 0, 3, 0]]

    def test_paw_from_pendant_is_equitable(self):
        g = paw_graph()
        assert is_equitable(g, distance_partition(g, 0)).equitable

    def test_pinned_negative(self):
        g = parse_graph6("Ch")  # P4, rooted at an inner vertex
        res = is_equitable(g, distance_partition(g, 1))
        assert not res.equitable
        w = res.witness
        assert (w.vertex, w.cls, w.target) == (2, 1, 2)
        assert (w.expected, w.actual) == (0, 1)

    def test_single_class_of_regular(self):
        g = petersen_graph()
        res = is_equitable(g, Partition((tuple(range(10)),)))
        assert res.equitable and res.parameters.tolist() == [[3]]


class TestPerron:
    def test_regular(self):
        w = perron_weights(eigen_decompose(petersen_graph()))
        assert np.allclose(w.nu, np.full(10, 10**-0.5))

    def test_p3(self):
        w = perron_weights(eigen_decompose(path_graph(3)))
        assert np.allclose(w.nu, np.array([1, 2**0.5, 1]) / 2)

    def test_star(self):
        w = perron_weights(eigen_decompose(star_graph(3)))
        assert np.allclose(w.nu, np.array([3**0.5, 1, 1, 1]) / 6**0.5)
        assert np.allclose(w.D, np.diag(w.nu))

    def test_positive_on_census(self):
        for s in census_upto(7)[1:]:
            assert np.all(perron_weights(decomposed(s)).nu > 0)


class TestPseudoEquitable:
    def test_p3(self):
        dec = eigen_decompose(path_graph(3))
        assert is_pseudo_equitable(dec.graph, distance_partition(dec.graph, 0), perron_weights(dec)).equitable

    def test_star_leaf(self):
        dec = eigen_decompose(star_graph(3))
        res = is_pseudo_equitable(dec.graph, distance_partition(dec.graph, 1), perron_weights(dec))
        r3 = 3**0.5
        assert res.equitable
        assert np.allclose(res.parameters, [[0, r3, 0], [1 / r3, 0, 2 / r3], [0, r3, 0]])

    def test_regular_reduces_to_equitable(self):
        for s in census_upto(7)[1:]:
            dec = decomposed(s)
            g = dec.graph
            if is_regular(g) is None:
                continue
            w = perron_weights(dec)
            for u in range(g.n):
                part = distance_partition(g, u)
                assert is_pseudo_equitable(g, part, w).equitable == is_equitable(g, part).equitable

    def test_distance_partition_characterization(self):
        """Pseudo-equitable distance partition iff u is extremal and the weighted outer layer is in u's walk module."""
        literal_misses = []
        for s in census_upto(7)[1:]:
            dec = decomposed(s)
            g = dec.graph
            w = perron_weights(dec)
            for u in range(g.n):
                pseudo = is_pseudo_equitable(g, distance_partition(g, u), w).equitable
                extremal = is_spectrally_extremal(dec, u)
                assert pseudo == (extremal and outer_layer_polynomial(dec, u, w) is not None), (s, u)
                if pseudo != (extremal and outer_layer_polynomial(dec, u) is not None):
                    literal_misses.append((s, u))
        # the unweighted 0/1 target only fails where the Perron vector varies
        assert ("EQKo", 4) in literal_misses
        assert all(is_regular(decomposed(s).graph) is None for s, _ in literal_misses)

    def test_weighted_layer_counterexample(self):
        dec = decomposed("EQKo")
        w = perron_weights(dec)
        assert is_pseudo_equitable(dec.graph, distance_partition(dec.graph, 4), w).equitable
        assert outer_layer_polynomial(dec, 4) is None
        p = outer_layer_polynomial(dec, 4, w)
        image = p.apply(dec.graph.adjacency, np.eye(6)[4])
        assert np.allclose(image, [0.5, 0.5, 0, 0, 0, 1], atol=1e-9)


class TestAntipodal:
    def test_q3(self):
        res = are_antipodal(eigen_decompose(hypercube_graph(3)), 0, 7)
        assert res.definitional and res.spectral
        assert res.sign_pattern.sigmas == (1, -1, 1, -1)

    def test_p3(self):
        res = are_antipodal(eigen_decompose(path_graph(3)), 0, 2)
        assert res.antipodal and res.sign_pattern.sigmas == (1, -1, 1)

    def test_petersen_distance_two(self):
        dec = eigen_decompose(petersen_graph())
        g = dec.graph
        for v in range(10):
            if g.dist(0, v) == 2:
                res = are_antipodal(dec, 0, v)
                assert not res.antipodal and "alone" in res.reason

    def test_p4_inner_pair_alternates_but_is_not_antipodal(self):
        res = are_antipodal(eigen_decompose(path_graph(4)), 1, 2)
        assert res.alternating and not res.antipodal and not res.spectral

    def test_tests_agree_on_census(self):
        # are_antipodal raises if its two tests disagree
        count = 0
        for s in census_upto(7)[1:]:
            dec = decomposed(s)
            w = perron_weights(dec)
            for u, v in itertools.permutations(range(dec.graph.n), 2):
                count += are_antipodal(dec, u, v, weights=w).antipodal
        assert count > 0


class TestIdentity:
    @pytest.mark.parametrize("g, lhs, rhs", [
        (cycle_graph(4), Fraction(1, 2), Fraction(1, 2)),
        (hypercube_graph(3), Fraction(1, 6), Fraction(1, 6)),
        (petersen_graph(), Fraction(1), Fraction(1, 3)),
    ])
    def test_examples(self, g, lhs, rhs):
        res = antipodal_identity(eigen_decompose(g))
        assert (res.lhs, res.rhs, res.equal) == (lhs, rhs, lhs == rhs)

    def test_preconditions(self):
        with pytest.raises(PreconditionError):
            antipodal_identity(eigen_decompose(path_graph(3)))

    def test_prism_is_not_extremal(self):
        # K3 x K2 has spectrum 3, 1, 0, -2 but diameter 2
        dec = eigen_decompose(NAMED["prism3"]())
        assert not is_spectrally_extremal_graph(dec.graph, dec)
        with pytest.raises(PreconditionError):
            antipodal_identity(dec)

    @pytest.mark.parametrize("name", ["q2", "q3", "c4", "c6", "k4", "k33", "petersen"])
    def test_identity_iff_all_far_pairs_antipodal(self, name):
        dec = eigen_decompose(NAMED[name]())
        g = dec.graph
        assert is_spectrally_extremal_graph(g, dec)
        d = g.distance_info.diameter
        far = [(u, v) for u, v in itertools.permutations(range(g.n), 2) if g.dist(u, v) == d]
        all_antipodal = all(are_antipodal(dec, u, v).antipodal for u, v in far)
        assert antipodal_identity(dec).equal == all_antipodal


class TestDistanceRegular:
    def test_petersen(self):
        res = is_distance_regular(petersen_graph())
        assert res.distance_regular
        assert res.intersection_array == ((3, 2), (1, 1))

    def test_q3(self):
        res = is_distance_regular(hypercube_graph(3))
        assert res.intersection_array == ((3, 2, 1), (1, 2, 3))

    def test_paw(self):
        assert not is_distance_regular(paw_graph()).distance_regular

    @pytest.mark.parametrize("g, expected", [
        (hypercube_graph(3), True),
        (petersen_graph(), False),
        (cycle_graph(6), True),
    ])
    def test_antipodal_drg(self, g, expected):
        assert is_antipodal_drg(g) is expected

    def test_antipodal_drg_needs_drg(self):
        with pytest.raises(PreconditionError):
            is_antipodal_drg(paw_graph())

    @pytest.mark.parametrize("g", [hypercube_graph(3), cycle_graph(6), complete_bipartite_graph(3, 3)])
    def test_identity_pipeline_gives_antipodal_drg(self, g):
        dec = eigen_decompose(g)
        d = g.distance_info.diameter
        assert is_regular(g) and is_spectrally_extremal_graph(g, dec)
        assert all(e == d for e in g.distance_info.ecc)
        if antipodal_identity(dec).equal:
            assert is_antipodal_drg(g)
