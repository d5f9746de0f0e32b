import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from metzlerzeta.errors import ConvergenceDomainError
from metzlerzeta.zeta import (
    CoinWalk,
    block_product_error,
    fourier_symbol,
    limit_convergence_table,
    metzler_zeta_finite,
    metzler_zeta_limit,
    metzler_zeta_spectral,
    walk_operator,
    walk_zeta,
    wave_vectors,
)


def _random_coin(rng, k):
    c = rng.normal(size=(k, k)) + 1j * rng.normal(size=(k, k))
    return c / np.linalg.norm(c, 2)


class TestWalkOperator:
    def test_identity_coin_three_cycle(self):
        M = walk_operator(CoinWalk(1, 3, np.eye(2)))
        for u in (0.2, 0.5, -0.4):
            assert np.linalg.det(np.eye(6) - u * M) == pytest.approx((1 - u**3) ** 2, abs=1e-13)

    def test_flip_coin_doubly_stochastic(self):
        M = walk_operator(CoinWalk(1, 2, np.array([[0.0, 1.0], [1.0, 0.0]])))
        assert M.shape == (4, 4)
        np.testing.assert_allclose(M.sum(axis=0), 1)
        np.testing.assert_allclose(M.sum(axis=1), 1)

    @pytest.mark.parametrize("d, N", [(2, 2), (1, 5), (2, 3)])
    def test_fourier_block_spectrum(self, d, N):
        from metzlerzeta.spectra import clustered_distance

        rng = np.random.default_rng(d * 10 + N)
        w = CoinWalk(d, N, _random_coin(rng, 2 * d))
        full = np.linalg.eigvals(walk_operator(w))
        blocks = np.concatenate([np.linalg.eigvals(fourier_symbol(w, k)) for k in wave_vectors(d, N)])
        assert clustered_distance(full, blocks) <= 1e-8

    def test_rejects_bad_coin(self):
        with pytest.raises(ValueError):
            CoinWalk(2, 3, np.eye(2))


class TestWalkZeta:
    def test_zero(self):
        direct, fourier = walk_zeta(CoinWalk(1, 4, np.eye(2)), 0.0)
        assert direct.value == fourier.value == 1.0

    def test_identity_closed_form(self):
        direct, fourier = walk_zeta(CoinWalk(1, 4, np.eye(2)), 0.5)
        expected = ((1 - 0.5**4) ** 2) ** 0.25
        assert abs(direct.value - expected) <= 1e-12
        assert abs(fourier.value - expected) <= 1e-12

    def test_stochastic_coin(self):
        coin = np.array([[0.3, 0.6], [0.7, 0.4]])
        direct, fourier = walk_zeta(CoinWalk(1, 6, coin), 0.3)
        assert abs(direct.value - fourier.value) <= 1e-10 * abs(direct.value)
        assert direct.method == "direct-det" and fourier.method == "fourier-product"

    def test_block_product_branch_free(self):
        rng = np.random.default_rng(11)
        w = CoinWalk(2, 3, _random_coin(rng, 4))
        assert block_product_error(w, 0.9 + 0.2j) <= 1e-9

    def test_winding_rejected(self):
        # a unitary coin at |u| > 1 drives block determinants around the origin
        with pytest.raises(ConvergenceDomainError):
            walk_zeta(CoinWalk(1, 6, np.array([[1, 1], [1, -1]]) / np.sqrt(2)), 3.0)


@settings(max_examples=25)
@given(
    d=st.integers(1, 2),
    N=st.integers(2, 6),
    seed=st.integers(0, 2**32 - 1),
    r=st.floats(0.0, 0.3),
    phi=st.floats(0.0, 2 * np.pi),
)
def test_walk_direct_equals_fourier(d, N, seed, r, phi):
    w = CoinWalk(d, N, _random_coin(np.random.default_rng(seed), 2 * d))
    direct, fourier = walk_zeta(w, r * np.exp(1j * phi))
    assert abs(direct.value - fourier.value) <= 1e-9 * abs(direct.value)


class TestMetzlerZeta:
    def test_zero(self):
        direct, spectral = metzler_zeta_finite(1, 4, 1.0, 1.0, 0.0)
        assert direct.value == pytest.approx(1.0) and spectral.value == pytest.approx(1.0)
        assert metzler_zeta_limit(1, 1.0, 1.0, 0.0, 64)[0].value == pytest.approx(1.0)

    @pytest.mark.parametrize("d, N, b, dl, u", [(1, 4, 1.0, 1.0, 0.1), (2, 3, 0.5, 0.25, 0.05), (1, 8, 0.3, 0.7, -0.05)])
    def test_direct_equals_spectral(self, d, N, b, dl, u):
        direct, spectral = metzler_zeta_finite(d, N, b, dl, u)
        assert abs(direct.log_value - spectral.log_value) <= 1e-10

    def test_printed_exponent_disagrees(self):
        direct, printed = metzler_zeta_finite(1, 4, 1.0, 1.0, 0.1, exponent="published")
        assert abs(direct.log_value - printed.log_value) > 1e-3

    def test_limit_is_grid_sum(self):
        lim, _ = metzler_zeta_limit(1, 1.0, 1.0, 0.1, Q=32)
        assert lim.log_value == metzler_zeta_spectral(1, 32, 1.0, 1.0, 0.1).log_value

    def test_quadrature_resolution(self):
        a, _ = metzler_zeta_limit(1, 1.0, 1.0, 0.1, Q=64)
        b, _ = metzler_zeta_limit(1, 1.0, 1.0, 0.1, Q=128)
        assert abs(a.value - b.value) < 1e-10

    def test_domain_error(self):
        with pytest.raises(ConvergenceDomainError):
            metzler_zeta_limit(1, 1.0, 1.0, -1.0, 64)

    def test_convergence_d1(self):
        rows = limit_convergence_table(1, 1.0, 1.0, 0.1, [4, 8, 16, 32])
        diffs = [r.diff for r in rows[1:]]
        for a, b in zip(diffs, diffs[1:]):
            assert b <= max(a / 10, 1e-14)

    def test_convergence_d2(self):
        rows = limit_convergence_table(2, 1.0, 1.0, 0.1, [3, 6, 12])
        assert rows[2].diff < rows[1].diff

    def test_convergence_at_zero(self):
        rows = limit_convergence_table(1, 1.0, 1.0, 0.0, [4, 8])
        assert rows[0].log_zeta_recip == 0.0 and rows[1].diff == 0.0
