import numpy as np
import pytest

from statecert import criteria as C
from statecert._validation import DimensionError
from statecert.kernel import (
    KernelOperator,
    identity_kernel,
    kernel_compose,
    kernel_hs_norm_sq,
    kernel_is_symmetric,
    kernel_to_matrix,
    kernel_trace,
    mixture_kernel,
    oscillator_eigenfunctions,
    projector_kernel,
    trapezoid_weights,
)
from statecert.linalg import ToleranceConfig, hs_norm_sq

RELAXED = ToleranceConfig(hermiticity_tol=1e-4, sum_tol=1e-4, series_tol=1e-4)


@pytest.fixture(scope="module")
def p0():
    return projector_kernel(0)


@pytest.fixture(scope="module")
def small_grid_kernels():
    # a coarser grid keeps the pairwise composition tests quick
    return [projector_kernel(n, n_points=241) for n in range(5)]


def rel_l2(a, b):
    return np.linalg.norm(a.values - b.values) / np.linalg.norm(b.values)


class TestKernelType:
    def test_grid(self, p0):
        assert p0.n_points == 801
        assert p0.dx == pytest.approx(0.02)
        assert p0.x[0] == -8 and p0.x[-1] == 8

    def test_values_read_only(self, p0):
        with pytest.raises(ValueError):
            p0.values[0, 0] = 1

    @pytest.mark.parametrize("values", [np.zeros((3, 4)), np.zeros((1, 1)), np.full((2, 2), np.inf)])
    def test_invalid_values(self, values):
        with pytest.raises(ValueError):
            KernelOperator(0.0, 1.0, values)

    def test_invalid_range(self):
        with pytest.raises(ValueError):
            KernelOperator(1.0, 1.0, np.zeros((2, 2)))

    def test_trapezoid_weights(self):
        np.testing.assert_array_equal(trapezoid_weights(4), [0.5, 1, 1, 0.5])


class TestEigenfunctions:
    def test_orthonormal(self):
        x = np.linspace(-8, 8, 801)
        psi = oscillator_eigenfunctions(6, x)
        w = trapezoid_weights(801) * 0.02
        gram = (psi * w) @ psi.T
        np.testing.assert_allclose(gram, np.eye(7), atol=1e-10)

    def test_ground_state_closed_form(self):
        x = np.linspace(-3, 3, 7)
        hbar = 0.7
        np.testing.assert_allclose(oscillator_eigenfunctions(0, x, hbar)[0],
                                   (np.pi * hbar) ** -0.25 * np.exp(-x**2 / (2 * hbar)))

    def test_invalid(self):
        with pytest.raises(ValueError):
            oscillator_eigenfunctions(-1, [0.0])
        with pytest.raises(ValueError):
            oscillator_eigenfunctions(2, [0.0], hbar=0)


class TestCompose:
    def test_identity_kernel(self, p0):
        out = kernel_compose(identity_kernel(), p0)
        assert rel_l2(out, p0) < 1e-12

    def test_ground_projector_idempotent(self, p0):
        assert rel_l2(kernel_compose(p0, p0), p0) < 1e-6

    def test_cyclic_trace(self):
        rng = np.random.default_rng(0)
        a = KernelOperator(-8, 8, rng.normal(size=(201, 201)) + 1j * rng.normal(size=(201, 201)))
        b = KernelOperator(-8, 8, rng.normal(size=(201, 201)))
        assert abs(kernel_trace(kernel_compose(a, b)) - kernel_trace(kernel_compose(b, a))) < 1e-8

    def test_projector_algebra(self, small_grid_kernels):
        ks = small_grid_kernels
        for m, km in enumerate(ks):
            for n, kn in enumerate(ks):
                prod = kernel_compose(km, kn)
                if m == n:
                    assert rel_l2(prod, kn) < 1e-5
                else:
                    assert np.linalg.norm(prod.values) < 1e-5 * np.linalg.norm(kn.values)

    def test_grid_mismatch(self, p0):
        with pytest.raises(DimensionError):
            kernel_compose(p0, projector_kernel(0, n_points=201))


class TestFunctionals:
    def test_trace(self, p0):
        assert kernel_trace(p0) == pytest.approx(1.0, abs=1e-6)
        assert kernel_trace(KernelOperator(-1, 1, np.zeros((5, 5)))) == 0
        assert kernel_trace(p0 + projector_kernel(1)) == pytest.approx(2.0, abs=1e-6)

    def test_hs_norm(self, p0):
        assert kernel_hs_norm_sq(p0) == pytest.approx(1.0, abs=1e-6)
        assert kernel_hs_norm_sq(mixture_kernel([0.5, 0.5])) == pytest.approx(0.5, abs=1e-6)
        assert kernel_hs_norm_sq(KernelOperator(-1, 1, np.zeros((5, 5)))) == 0

    def test_symmetry(self, p0):
        assert kernel_is_symmetric(p0)
        vals = np.array(p0.values)
        vals[0, 1] += 1e-3j
        assert not kernel_is_symmetric(KernelOperator(-8, 8, vals), tol=1e-6)
        rng = np.random.default_rng(1)
        z = rng.normal(size=(50, 50)) + 1j * rng.normal(size=(50, 50))
        assert kernel_is_symmetric(KernelOperator(0, 1, (z + z.conj().T) / 2))

    def test_from_function(self):
        k = KernelOperator.from_function(lambda x, y: np.exp(-(x**2 + y**2)), -4, 4, 101)
        assert kernel_is_symmetric(k)
        assert k.values.shape == (101, 101)


class TestToMatrix:
    def test_preserves_functionals(self):
        rng = np.random.default_rng(4)
        z = rng.normal(size=(101, 101)) + 1j * rng.normal(size=(101, 101))
        k = KernelOperator(-2, 2, z)
        m = kernel_to_matrix(k)
        assert abs(np.trace(m) - kernel_trace(k)) < 1e-8
        assert abs(hs_norm_sq(m) - kernel_hs_norm_sq(k)) < 1e-8 * kernel_hs_norm_sq(k)

    def test_products_match_composition(self):
        a = mixture_kernel([0.3, 0.5, 0.2], n_points=161)
        b = projector_kernel(1, n_points=161)
        np.testing.assert_allclose(kernel_to_matrix(a) @ kernel_to_matrix(b),
                                   kernel_to_matrix(kernel_compose(a, b)), atol=1e-12)

    def test_hermitian_preserved(self, p0):
        m = kernel_to_matrix(p0)
        assert np.abs(m - m.conj().T).max() <= 1e-15

    def test_ground_state_is_pure(self, p0):
        m = kernel_to_matrix(p0)
        assert C.check_pure_infinite(m, RELAXED).accepted
        assert C.check_pure_finite(m, RELAXED).accepted

    def test_tatarskij_kernel_rejected(self):
        m = kernel_to_matrix(mixture_kernel([2 / 3, 2 / 3, -1 / 3]))
        v = C.run_all(m, criteria=[C.FINITE_DEF2, C.TRACE_SQRT_SQUARE, C.BINOMIAL_SUMS])
        assert not v.is_state
        assert v.reports[C.BINOMIAL_SUMS].diagnostics["witness"] == 2

    def test_zero(self):
        k = KernelOperator(-1, 1, np.zeros((4, 4)))
        assert not np.any(kernel_to_matrix(k))
