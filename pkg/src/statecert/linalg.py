"""Dense complex matrix arithmetic, trace and norm functionals, and the
monitored binomial square-root series.

Matrices are plain 2-D ``complex128`` numpy arrays; every function here is
pure and never mutates its inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal

import numpy as np

from ._validation import check_matrix, check_positive_int, check_same_dim

Status = Literal["converged", "diverged", "max_terms_reached"]


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical tolerances and truncation limits used by every criterion.

    Attributes
    ----------
    hermiticity_tol : float
        Largest admissible ``|a_ij - conj(a_ji)|``.
    sum_tol : float
        Tolerance for trace / Hilbert-Schmidt equalities and sign tests on sums.
    series_tol : float
        Convergence threshold for series and sequences, in operator norm.
    max_terms : int
        Truncation of every series or sequence.
    divergence_threshold : float
        Magnitude beyond which a sequence is declared divergent.
    """

    hermiticity_tol: float = 1e-10
    sum_tol: float = 1e-9
    series_tol: float = 1e-9
    max_terms: int = 2000
    divergence_threshold: float = 1e6

    def __post_init__(self):
        for name in ("hermiticity_tol", "sum_tol", "series_tol"):
            if not getattr(self, name) >= 0:
                raise ValueError(f"{name} must be >= 0")
        check_positive_int(self.max_terms, "max_terms")
        if not self.divergence_threshold > 1:
            raise ValueError("divergence_threshold must be > 1")

    def replace(self, **changes) -> "ToleranceConfig":
        values = {**self.as_dict(), **changes}
        return ToleranceConfig(**values)

    def as_dict(self) -> dict:
        return {
            "hermiticity_tol": self.hermiticity_tol,
            "sum_tol": self.sum_tol,
            "series_tol": self.series_tol,
            "max_terms": self.max_terms,
            "divergence_threshold": self.divergence_threshold,
        }


@dataclass(frozen=True)
class ConvergenceReport:
    status: Status
    terms_used: int
    final_residual: float
    term_norms: tuple[float, ...] = field(default=(), repr=False)

    def as_dict(self) -> dict:
        return {
            "status": self.status,
            "terms_used": self.terms_used,
            "final_residual": self.final_residual,
        }


def mat_mul(a, b) -> np.ndarray:
    a = check_matrix(a, name="a")
    b = check_matrix(b, name="b")
    check_same_dim(a, b)
    return a @ b


def trace(a) -> complex:
    return complex(np.trace(check_matrix(a)))


def hs_norm_sq(a) -> float:
    """Squared Hilbert-Schmidt norm, ``sum_ij |a_ij|**2``."""
    a = check_matrix(a)
    return float(np.sum(a.real**2 + a.imag**2))


def hermiticity_defect(a) -> float:
    a = check_matrix(a)
    return float(np.max(np.abs(a - a.conj().T)))


def is_hermitian(a, tol: float = 1e-10) -> bool:
    return hermiticity_defect(a) <= tol


def opnorm_proxy(a: np.ndarray) -> float:
    """Maximum absolute column sum, an upper bound on the spectral norm
    for Hermitian input."""
    return float(np.max(np.sum(np.abs(a), axis=0)))


def matrix_power(a, k: int) -> np.ndarray:
    """``a**k`` by repeated squaring."""
    a = check_matrix(a)
    k = check_positive_int(k, "k")
    result = None
    base = a
    while True:
        if k & 1:
            result = base if result is None else result @ base
        k >>= 1
        if not k:
            return result.copy() if result is a else result
        base = base @ base


def sqrt_coefficients(n_terms: int, exact: bool = False) -> list:
    """First ``n_terms`` coefficients of ``sqrt(1 + x) = 1 + sum c_n x**n``.

    Uses the ratio ``c_{n+1} / c_n = -(2n - 1) / (2n + 2)`` so no double
    factorial is ever formed.
    """
    one = Fraction(1) if exact else 1.0
    coeffs = [one / 2]
    for n in range(1, n_terms):
        coeffs.append(-coeffs[-1] * (2 * n - 1) / (2 * n + 2))
    return coeffs


def sqrt_coefficient_closed_form(n: int) -> Fraction:
    """``(-1)**(n+1) (2n-3)!! / (n! 2**n)`` with ``(-1)!! = 1``."""
    dfact = math.prod(range(2 * n - 3, 0, -2)) if n >= 2 else 1
    return Fraction((-1) ** (n + 1) * dfact, math.factorial(n) * 2**n)


def sqrt_series(a, cfg: ToleranceConfig | None = None) -> tuple[np.ndarray, ConvergenceReport]:
    """Evaluate ``1 + sum_n c_n (A - 1)**n`` term by term.

    The caller is responsible for Hermiticity. After each term the
    remaining tail is estimated from the last term norm ``t`` and the
    ratio ``r`` of consecutive term norms as ``t / (1 - r)``; the series
    is converged once that estimate is below ``cfg.series_tol``. A term
    norm above ``cfg.divergence_threshold`` stops with ``diverged``.
    """
    cfg = cfg or ToleranceConfig()
    a = check_matrix(a)
    eye = np.eye(a.shape[0], dtype=np.complex128)
    shifted = a - eye
    total = eye.copy()
    power = eye
    prev_norm = None
    norms = []
    residual = math.inf
    c = 0.5
    for n in range(1, cfg.max_terms + 1):
        power = power @ shifted
        term = c * power
        total += term
        t = opnorm_proxy(term)
        norms.append(t)
        if t > cfg.divergence_threshold:
            return total, ConvergenceReport("diverged", n, t, tuple(norms))
        if t == 0.0:
            residual = 0.0
        elif prev_norm:
            ratio = t / prev_norm
            residual = t / (1.0 - ratio) if ratio < 1.0 else math.inf
        if residual <= cfg.series_tol:
            return total, ConvergenceReport("converged", n, residual, tuple(norms))
        prev_norm = t
        c = -c * (2 * n - 1) / (2 * n + 2)
    return total, ConvergenceReport("max_terms_reached", cfg.max_terms, residual, tuple(norms))


def sqrt_series_powers_term(a_powers, l: int) -> np.ndarray:
    """The ``l``-th term of the square root written in positive powers of A.

    ``a_powers[j]`` must hold ``A**(j + 1)`` for ``j < l``. The term is
    ``c_l * sum_{r<l} (-1)**r C(l, r) A**(l - r)``.
    """
    if l < 1:
        raise ValueError("l must be >= 1")
    if len(a_powers) < l:
        raise ValueError(f"need A**1..A**{l}, got {len(a_powers)} powers")
    c = sqrt_coefficients(l)[-1]
    acc = np.zeros_like(np.asarray(a_powers[0], dtype=np.complex128))
    for r in range(l):
        acc = acc + (-1) ** r * math.comb(l, r) * np.asarray(a_powers[l - r - 1])
    return c * acc
