import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from metzlerzeta.digraph import (
    assemble,
    build_torus,
    complete_edges,
    cycle_edges,
    directed_cycle,
    petersen_edges,
    random_digraph,
    symmetrize,
)
from metzlerzeta.errors import GraphValidationError, StructureMismatchError
from metzlerzeta.polydet import poly_det_pencil
from metzlerzeta.spectra import (
    cluster_means,
    clustered_distance,
    conjugate_pairing_error,
    decay_bound,
    eigenvalues,
    metzler_spectrum_closed,
    multiset_distance,
    pair_roots,
    regular_cubic_coef,
    torus_adjacency_spectrum,
)


class TestEigenvalues:
    def test_diagonal(self):
        ev = eigenvalues(np.diag([1.0, 2.0, 3.0])).eigenvalues
        assert multiset_distance(ev, [1, 2, 3]) <= 1e-14

    def test_rotation(self):
        ev = eigenvalues(np.array([[0.0, -1.0], [1.0, 0.0]])).eigenvalues
        assert multiset_distance(ev, [1j, -1j]) <= 1e-14

    def test_companion(self):
        comp = np.array([[6.0, -11.0, 6.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
        assert multiset_distance(eigenvalues(comp).eigenvalues, [1, 2, 3]) <= 1e-10

    def test_rejects_non_square(self):
        with pytest.raises(ValueError):
            eigenvalues(np.zeros((2, 3)))

    def test_pairs_order(self):
        res = eigenvalues(np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 2.0]]))
        assert res.pairs()[0] == pytest.approx((2.0, 0.0))
        assert res.pairs()[1][1] < res.pairs()[2][1]


class TestDistances:
    def test_multiset_distance_matches_permutations(self):
        a = np.array([1.0, 2.0, 3.0 + 1j])
        assert multiset_distance(a, a[::-1]) == 0.0
        assert multiset_distance(a, a + 0.1) == pytest.approx(0.1)

    def test_size_mismatch(self):
        with pytest.raises(ValueError):
            multiset_distance([1, 2], [1])

    def test_cluster_means_restore_defective_root(self):
        # a triple root perturbed at the eps^(1/3) scale
        jitter = 1e-5 * np.exp(2j * np.pi * np.arange(3) / 3)
        ev = np.concatenate([2.0 + jitter, [5.0]])
        np.testing.assert_allclose(cluster_means(ev, 1e-3), [2, 2, 2, 5], atol=1e-14)
        assert clustered_distance(ev, [2, 2, 2, 5]) <= 1e-14
        assert multiset_distance(ev, [2, 2, 2, 5]) > 1e-6

    def test_conjugate_pairing(self, graph_corpus):
        for g in graph_corpus.values():
            ev = eigenvalues(assemble(g).A_cal).eigenvalues
            assert conjugate_pairing_error(ev) <= 1e-8


class TestClosedForm:
    def test_pair_roots(self):
        np.testing.assert_allclose(pair_roots(0.7, 0.3), [-0.6, -2.0])

    def test_printed_roots_differ(self):
        assert multiset_distance(pair_roots(0.7, 0.3, "published"), pair_roots(0.7, 0.3)) > 1e-3

    def test_decoupled_roots_exact(self):
        for b in (0.1, 1.0, 3.7):
            roots = pair_roots(b, 0.0)
            assert multiset_distance(roots, [0.0, -2 * b]) <= 1e-10

    def test_cubic_at_mu_matches_det(self):
        b, d, k, mu = 0.6, 0.9, 3, 1.0
        c = regular_cubic_coef(b, d, k, mu)
        assert c[0] == 1.0 and len(c) == 4

    @pytest.mark.parametrize(
        "g",
        [
            symmetrize(4, cycle_edges(4)),
            symmetrize(5, cycle_edges(5)),
            symmetrize(4, complete_edges(4)),
            symmetrize(10, petersen_edges()),
            build_torus(2, 3),
        ],
    )
    def test_matches_numeric(self, g):
        rng = np.random.default_rng(3)
        for _ in range(5):
            b, d = rng.uniform(0.1, 2.0, 2)
            closed = metzler_spectrum_closed(g, b, d)
            numeric = eigenvalues(assemble(g.with_rates(b, d)).A_cal)
            assert closed.dimension == numeric.dimension
            assert multiset_distance(closed.eigenvalues, numeric.eigenvalues) <= 1e-6

    def test_defective_case_needs_clustering(self):
        g = symmetrize(10, petersen_edges(), 1.0, 1.0)
        closed = metzler_spectrum_closed(g, 1.0, 1.0).eigenvalues
        numeric = eigenvalues(assemble(g).A_cal).eigenvalues
        assert clustered_distance(closed, numeric) <= 1e-9

    def test_structure_errors(self):
        with pytest.raises(StructureMismatchError):
            metzler_spectrum_closed(directed_cycle(3), 1.0, 1.0)
        with pytest.raises(StructureMismatchError):
            metzler_spectrum_closed(symmetrize(3, [(0, 1), (1, 2)]), 1.0, 1.0)


class TestTorusSpectrum:
    def test_cycle_four(self):
        np.testing.assert_allclose(torus_adjacency_spectrum(1, 4), [-2, 0, 0, 2], atol=1e-14)

    def test_cycle_three(self):
        np.testing.assert_allclose(torus_adjacency_spectrum(1, 3), [-1, -1, 2], atol=1e-14)

    def test_two_dim(self):
        s = torus_adjacency_spectrum(2, 3)
        assert s.size == 9 and s.max() == pytest.approx(4.0)

    def test_matches_adjacency(self):
        for d, N in ((1, 5), (2, 4), (3, 3)):
            A = build_torus(d, N).adjacency()
            np.testing.assert_allclose(torus_adjacency_spectrum(d, N), np.linalg.eigvalsh(A), atol=1e-10)

    def test_rejects_small(self):
        with pytest.raises(GraphValidationError):
            torus_adjacency_spectrum(1, 2)


class TestDecayBound:
    def test_single_arc(self):
        from metzlerzeta.digraph import single_arc

        db = decay_bound(assemble(single_arc(1.0, 1.0)))
        assert db.bound == pytest.approx(1.0)

    def test_rightmost_is_real(self, graph_corpus):
        for g in graph_corpus.values():
            assert decay_bound(assemble(g)).dominant_imag <= 1e-9


@settings(max_examples=25)
@given(n=st.integers(2, 7), seed=st.integers(0, 2**32 - 1))
def test_reciprocal_eigenvalues_are_pencil_roots(n, seed):
    # backward form: forward root errors are limited by root conditioning
    a = assemble(random_digraph(n, np.random.default_rng(seed)))
    ev = eigenvalues(a.A_cal).eigenvalues
    p = poly_det_pencil(a.A_cal)
    assert p.degree() == np.count_nonzero(np.abs(ev) > 1e-9)
    for lam in ev[np.abs(ev) > 1e-9]:
        u = 1.0 / lam
        scale = np.sum(np.abs(p.coef) * np.abs(u) ** np.arange(len(p.coef)))
        assert abs(p(u)) <= 1e-10 * scale


@pytest.mark.parametrize("g", [directed_cycle(3, 2.0, 1.0), symmetrize(2, [(0, 1)], 0.7, 0.4), symmetrize(3, complete_edges(3), 0.3, 1.1)])
def test_pencil_roots_forward_small_graphs(g):
    ev = eigenvalues(assemble(g).A_cal).eigenvalues
    roots = poly_det_pencil(assemble(g).A_cal).roots()
    # repeated roots split at the sqrt(eps) scale; their cluster means stay accurate
    assert clustered_distance(1.0 / roots, ev[np.abs(ev) > 1e-9], rel_radius=1e-3) <= 1e-6
