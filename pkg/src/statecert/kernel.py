"""Operators on L2(R) as sampled two-point kernels.

A kernel ``A(x, y)`` is stored on a uniform grid and integrated with the
trapezoid rule. :func:`kernel_to_matrix` maps a kernel to a matrix whose
trace, Hilbert-Schmidt norm and products reproduce the kernel-side
quadratures, so every matrix criterion applies to kernels unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._validation import DimensionError, check_positive_int

DEFAULT_X_MIN = -8.0
DEFAULT_X_MAX = 8.0
DEFAULT_N_POINTS = 801


@dataclass(frozen=True, eq=False)
class KernelOperator:
    """Kernel values ``values[i, j] ~ A(x_i, x_j)`` on a uniform grid.

    Parameters
    ----------
    x_min, x_max : float
        Grid end points, both included.
    values : array_like, shape (n_points, n_points)
        Complex kernel samples.
    """

    x_min: float
    x_max: float
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=np.complex128)
        if vals.ndim != 2 or vals.shape[0] != vals.shape[1] or vals.shape[0] < 2:
            raise DimensionError(f"kernel values must be n x n with n >= 2, got {vals.shape}")
        if not np.all(np.isfinite(vals)):
            raise ValueError("kernel values contain non-finite entries")
        if not float(self.x_max) > float(self.x_min):
            raise ValueError("x_max must exceed x_min")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "x_min", float(self.x_min))
        object.__setattr__(self, "x_max", float(self.x_max))

    @property
    def n_points(self) -> int:
        return self.values.shape[0]

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n_points)

    @property
    def weights(self) -> np.ndarray:
        """Trapezoid weights (1 inside, 1/2 at both ends)."""
        return trapezoid_weights(self.n_points)

    def same_grid(self, other: "KernelOperator") -> bool:
        return (self.n_points == other.n_points and self.x_min == other.x_min
                and self.x_max == other.x_max)

    @classmethod
    def from_function(cls, func, x_min: float = DEFAULT_X_MIN, x_max: float = DEFAULT_X_MAX,
                      n_points: int = DEFAULT_N_POINTS) -> "KernelOperator":
        """Sample ``func(x[:, None], y[None, :])`` on the grid."""
        n_points = check_positive_int(n_points, "n_points", minimum=2)
        x = np.linspace(x_min, x_max, n_points)
        return cls(x_min, x_max, np.asarray(func(x[:, None], x[None, :])) * np.ones((n_points, n_points)))

    def __add__(self, other: "KernelOperator") -> "KernelOperator":
        _check_grids(self, other)
        return KernelOperator(self.x_min, self.x_max, self.values + other.values)

    def __mul__(self, scalar) -> "KernelOperator":
        return KernelOperator(self.x_min, self.x_max, self.values * scalar)

    __rmul__ = __mul__


def trapezoid_weights(n: int) -> np.ndarray:
    w = np.ones(n)
    w[0] = w[-1] = 0.5
    return w


def _check_grids(a: KernelOperator, b: KernelOperator) -> None:
    if not a.same_grid(b):
        raise DimensionError("kernels live on different grids")


def kernel_compose(a: KernelOperator, b: KernelOperator) -> KernelOperator:
    """``(AB)(x, z) = int A(x, y) B(y, z) dy`` by the trapezoid rule."""
    _check_grids(a, b)
    w = a.weights * a.dx
    return KernelOperator(a.x_min, a.x_max, (a.values * w[None, :]) @ b.values)


def kernel_trace(a: KernelOperator) -> complex:
    """``int A(x, x) dx``."""
    return complex(np.sum(np.diagonal(a.values) * a.weights) * a.dx)


def kernel_hs_norm_sq(a: KernelOperator) -> float:
    """``int int |A(x, y)|^2 dx dy``."""
    w = a.weights * a.dx
    return float(np.einsum("i,ij,j->", w, np.abs(a.values) ** 2, w))


def kernel_is_symmetric(a: KernelOperator, tol: float = 1e-10) -> bool:
    """``A(x, y) == conj(A(y, x))`` at every grid pair, within ``tol``."""
    return bool(np.max(np.abs(a.values - a.values.conj().T)) <= tol)


def kernel_to_matrix(a: KernelOperator) -> np.ndarray:
    """``M_ij = A(x_i, x_j) dx sqrt(w_i w_j)``.

    The symmetric square-root weighting keeps ``M`` Hermitian for a
    Hermitian kernel, and ``Tr M``, ``||M||_2`` and ``M**k`` match the
    trapezoid quadratures of the kernel.
    """
    s = np.sqrt(a.weights) * np.sqrt(a.dx)
    return a.values * s[:, None] * s[None, :]


def identity_kernel(x_min: float = DEFAULT_X_MIN, x_max: float = DEFAULT_X_MAX,
                    n_points: int = DEFAULT_N_POINTS) -> KernelOperator:
    """Discrete delta: the kernel that :func:`kernel_compose` treats as the identity."""
    w = trapezoid_weights(n_points) * (x_max - x_min) / (n_points - 1)
    return KernelOperator(x_min, x_max, np.diag(1.0 / w))


def oscillator_eigenfunctions(n_max: int, x, hbar: float = 1.0) -> np.ndarray:
    """Rows ``psi_0 .. psi_n_max`` of the unit-mass, unit-frequency
    oscillator eigenfunctions evaluated at ``x``.

    Uses the normalized Hermite recurrence, which stays bounded where the
    plain Hermite polynomials overflow.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    if not hbar > 0:
        raise ValueError("hbar must be positive")
    x = np.asarray(x, dtype=float)
    u = x / np.sqrt(hbar)
    out = np.empty((n_max + 1,) + x.shape)
    out[0] = (np.pi * hbar) ** -0.25 * np.exp(-0.5 * u**2)
    if n_max >= 1:
        out[1] = np.sqrt(2.0) * u * out[0]
    for n in range(1, n_max):
        out[n + 1] = np.sqrt(2.0 / (n + 1)) * u * out[n] - np.sqrt(n / (n + 1)) * out[n - 1]
    return out


def mixture_kernel(coeffs, hbar: float = 1.0, x_min: float = DEFAULT_X_MIN,
                   x_max: float = DEFAULT_X_MAX,
                   n_points: int = DEFAULT_N_POINTS) -> KernelOperator:
    """``sum_n coeffs[n] psi_n(x) psi_n(y)`` over oscillator eigenfunctions."""
    coeffs = np.asarray([float(c) for c in coeffs])
    if coeffs.size == 0:
        raise ValueError("coeffs must be nonempty")
    x = np.linspace(x_min, x_max, n_points)
    psi = oscillator_eigenfunctions(coeffs.size - 1, x, hbar)
    return KernelOperator(x_min, x_max, (psi.T * coeffs) @ psi)


def projector_kernel(n: int, hbar: float = 1.0, x_min: float = DEFAULT_X_MIN,
                     x_max: float = DEFAULT_X_MAX,
                     n_points: int = DEFAULT_N_POINTS) -> KernelOperator:
    """``psi_n(x) psi_n(y)``, the projector onto the n-th oscillator level."""
    coeffs = np.zeros(n + 1)
    coeffs[n] = 1.0
    return mixture_kernel(coeffs, hbar, x_min, x_max, n_points)
