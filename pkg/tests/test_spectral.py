import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from statecert.generators import random_projector, random_psd, random_unitary
from statecert.linalg import hs_norm_sq, opnorm_proxy
from statecert.spectral import (
    NotHermitianError,
    eigh,
    principal_minors_psd,
    psd_oracle,
    spectral_norm,
    sqrt_oracle,
    trace_norm,
)

from conftest import TATARSKIJ, random_complex, random_hermitian


class TestEigh:
    def test_diagonal(self):
        np.testing.assert_allclose(eigh(np.diag([3.0, 1.0, 2.0])).eigenvalues, [1, 2, 3])

    def test_pauli_x(self):
        np.testing.assert_allclose(eigh(np.array([[0, 1], [1, 0]])).eigenvalues, [-1, 1], atol=1e-14)

    @pytest.mark.parametrize("dim", [1, 2, 5, 8, 17, 40])
    def test_reconstruction_and_orthonormality(self, rng, dim):
        a = random_hermitian(rng, dim)
        spec = eigh(a, method="jacobi")
        v = spec.eigenvectors
        np.testing.assert_allclose(v.conj().T @ v, np.eye(dim), atol=1e-10)
        assert np.abs(spec.reconstruct() - a).max() <= 1e-9
        assert np.abs(a @ v - v * spec.eigenvalues).max() <= 1e-9
        assert np.all(np.diff(spec.eigenvalues) >= 0)

    def test_jacobi_matches_lapack(self, rng):
        a = random_hermitian(rng, 12)
        np.testing.assert_allclose(eigh(a, method="jacobi").eigenvalues,
                                   eigh(a, method="lapack").eigenvalues, atol=1e-10)

    def test_large_dim_uses_lapack(self, rng):
        a = random_hermitian(rng, 100)
        spec = eigh(a)
        assert spec.sweeps == 0
        assert np.abs(spec.reconstruct() - a).max() <= 1e-9

    def test_rejects_non_hermitian(self):
        with pytest.raises(NotHermitianError):
            eigh(np.array([[0, 1j], [1j, 0]]))

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            eigh(np.eye(2), method="qr")

    @given(st.floats(-5, 5), st.floats(-5, 5), st.floats(-5, 5), st.floats(-5, 5))
    def test_2x2_quadratic_formula(self, a, d, br, bi):
        m = np.array([[a, br + 1j * bi], [br - 1j * bi, d]])
        disc = np.sqrt(((a - d) / 2) ** 2 + br**2 + bi**2)
        expected = [(a + d) / 2 - disc, (a + d) / 2 + disc]
        np.testing.assert_allclose(eigh(m).eigenvalues, expected, atol=1e-10)


class TestPsd:
    def test_examples(self, rng):
        assert psd_oracle(np.diag([0.5, 0.5]))
        assert not psd_oracle(TATARSKIJ)
        b = random_complex(rng, 5)
        assert psd_oracle(b.conj().T @ b)

    def test_minors_examples(self):
        assert principal_minors_psd(np.array([[1, 0], [0, 0]]))
        assert not principal_minors_psd(TATARSKIJ)
        assert principal_minors_psd(np.array([[2, 1], [1, 2]]) / 4)

    def test_minors_not_just_leading(self):
        # leading minors 0 and 0 pass, the trailing 1x1 minor -1 does not
        assert not principal_minors_psd(np.diag([0.0, -1.0]))

    def test_minors_dim_cap(self):
        with pytest.raises(ValueError):
            principal_minors_psd(np.eye(13))

    def test_minors_agree_with_oracle(self):
        rng = np.random.default_rng(99)
        for _ in range(500):
            dim = int(rng.integers(1, 7))
            # shift a random Hermitian so roughly half the samples are PSD
            a = random_hermitian(rng, dim, 0.3)
            a = a - eigh(a).eigenvalues[0] * np.eye(dim) + rng.uniform(-0.3, 0.3) * np.eye(dim)
            assert principal_minors_psd(a, 1e-9) == psd_oracle(a, 1e-9)


class TestNorms:
    def test_trace_norm_examples(self):
        for p in (0.0, 0.3, 1.0):
            assert trace_norm(np.diag([p, 1 - p])) == pytest.approx(1.0)
        assert trace_norm(TATARSKIJ) == pytest.approx(5 / 3)
        assert trace_norm(np.zeros((3, 3))) == 0.0

    def test_norm_chain(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            a = random_complex(rng, int(rng.integers(1, 9)))
            op, hs, tr = spectral_norm(a), np.sqrt(hs_norm_sq(a)), trace_norm(a)
            assert hs - op >= -1e-10
            assert tr - hs >= -1e-10

    def test_column_sum_proxy_bounds_spectral_norm(self, rng):
        a = random_hermitian(rng, 6)
        assert opnorm_proxy(a) >= spectral_norm(a) - 1e-12

    def test_column_sum_proxy_not_below_hs_norm(self):
        # a single full column: column sum 2 against Hilbert-Schmidt norm sqrt 2,
        # so only the spectral norm belongs at the bottom of the chain
        a = np.array([[1.0, 0.0], [1.0, 0.0]])
        assert opnorm_proxy(a) == 2.0
        assert np.sqrt(hs_norm_sq(a)) == pytest.approx(math.sqrt(2))
        assert spectral_norm(a) <= np.sqrt(hs_norm_sq(a)) + 1e-12


class TestSqrtOracle:
    def test_examples(self, rng):
        np.testing.assert_allclose(sqrt_oracle(np.array([[4.0]])), [[2.0]])
        p = random_projector(4, rng)
        np.testing.assert_allclose(sqrt_oracle(p), p, atol=1e-9)

    def test_squares_back(self, rng):
        a = random_psd(7, rng)
        r = sqrt_oracle(a)
        assert np.linalg.norm(r @ r - a) <= 1e-9

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            sqrt_oracle(TATARSKIJ)

    def test_unitary_covariance(self, rng):
        a = random_psd(4, rng)
        u = random_unitary(4, rng)
        np.testing.assert_allclose(sqrt_oracle(u @ a @ u.conj().T),
                                   u @ sqrt_oracle(a) @ u.conj().T, atol=1e-10)
