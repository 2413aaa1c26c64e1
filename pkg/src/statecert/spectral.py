"""Spectral ground truth for Hermitian matrices.

A cyclic complex Jacobi eigensolver plus the positivity tests, norms and
square root derived from it. Criteria never consult these functions for
their verdicts (except the trace norm that one criterion is stated in);
tests use them as the independent oracle.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from ._validation import check_matrix
from .linalg import hermiticity_defect

MAX_MINOR_DIM = 12
# Larger inputs go to LAPACK; Jacobi costs O(n^3) per sweep in Python-level rounds.
JACOBI_MAX_DIM = 64


class NotHermitianError(ValueError):
    pass


@dataclass(frozen=True)
class Spectrum:
    """Ascending eigenvalues and the matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sweeps: int = 0

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def _round_robin(m: int):
    """Pairings for one sweep over ``m`` (even) indices; each round is a
    set of disjoint pairs covering every index once."""
    players = list(range(m))
    for _ in range(m - 1):
        yield [(players[i], players[m - 1 - i]) for i in range(m // 2)]
        players = [players[0], players[-1], *players[1:-1]]


def _jacobi(a: np.ndarray, max_sweeps: int = 60) -> tuple[np.ndarray, np.ndarray, int]:
    n = a.shape[0]
    a = a.copy()
    v = np.eye(n, dtype=np.complex128)
    if n == 1:
        return a.diagonal().real.copy(), v, 0
    scale = np.linalg.norm(a)
    target = 1e-12 * scale
    m = n + (n % 2)
    rounds = []
    for pairs in _round_robin(m):
        pairs = [(p, q) if p < q else (q, p) for p, q in pairs if p < n and q < n]
        rounds.append((np.array([p for p, _ in pairs]), np.array([q for _, q in pairs])))

    sweeps = 0
    for sweeps in range(1, max_sweeps + 1):
        off = np.linalg.norm(a - np.diag(a.diagonal()))
        if off <= target:
            sweeps -= 1
            break
        for p, q in rounds:
            beta = a[p, q]
            mag = np.abs(beta)
            active = mag > 1e-300
            if not np.any(active):
                continue
            alpha = a[p, p].real
            gamma = a[q, q].real
            theta = 0.5 * np.arctan2(2 * mag, gamma - alpha)
            c = np.cos(theta)
            s = np.sin(theta)
            phase = np.where(active, np.exp(-1j * np.angle(beta)), 1.0)
            u00, u01 = c, s
            u10, u11 = -s * phase, c * phase

            cp, cq = a[:, p], a[:, q]
            a[:, p] = cp * u00 + cq * u10
            a[:, q] = cp * u01 + cq * u11
            rp, rq = a[p, :], a[q, :]
            a[p, :] = np.conj(u00)[:, None] * rp + np.conj(u10)[:, None] * rq
            a[q, :] = np.conj(u01)[:, None] * rp + np.conj(u11)[:, None] * rq
            a[p, q] = 0.0
            a[q, p] = 0.0

            vp, vq = v[:, p], v[:, q]
            v[:, p] = vp * u00 + vq * u10
            v[:, q] = vp * u01 + vq * u11
    w = a.diagonal().real.copy()
    return w, v, sweeps


def eigh(a, tol: float = 1e-10, method: str = "auto") -> Spectrum:
    """Full eigendecomposition of a Hermitian matrix.

    ``method="jacobi"`` runs cyclic Jacobi rotations (round-robin ordering,
    one vectorised round at a time); ``"lapack"`` defers to
    ``numpy.linalg.eigh``. ``"auto"`` picks Jacobi up to
    ``JACOBI_MAX_DIM``.

    Raises
    ------
    NotHermitianError
        If ``max |a - a^H| > tol``.
    """
    a = check_matrix(a)
    if hermiticity_defect(a) > tol:
        raise NotHermitianError(f"matrix is not Hermitian within {tol:g}")
    a = 0.5 * (a + a.conj().T)
    if method == "auto":
        method = "jacobi" if a.shape[0] <= JACOBI_MAX_DIM else "lapack"
    if method == "jacobi":
        w, v, sweeps = _jacobi(a)
    elif method == "lapack":
        w, v = np.linalg.eigh(a)
        sweeps = 0
    else:
        raise ValueError(f"unknown method {method!r}")
    order = np.argsort(w, kind="stable")
    return Spectrum(w[order], v[:, order], sweeps)


def psd_oracle(a, tol: float = 1e-9) -> bool:
    return bool(eigh(a, tol=max(tol, 1e-10)).eigenvalues[0] >= -tol)


def trace_norm(a) -> float:
    """Sum of singular values, via the eigenvalues of ``a^H a``."""
    a = check_matrix(a)
    gram = a.conj().T @ a
    lam = eigh(gram, tol=1e-8 * max(1.0, float(np.abs(gram).max()))).eigenvalues
    return float(np.sum(np.sqrt(np.clip(lam, 0.0, None))))


def spectral_norm(a) -> float:
    a = check_matrix(a)
    gram = a.conj().T @ a
    lam = eigh(gram, tol=1e-8 * max(1.0, float(np.abs(gram).max()))).eigenvalues
    return float(np.sqrt(max(lam[-1], 0.0)))


def sqrt_oracle(a, tol: float = 1e-9) -> np.ndarray:
    spec = eigh(a, tol=max(tol, 1e-10))
    lam = spec.eigenvalues
    if lam[0] < -tol:
        raise ValueError(f"matrix has eigenvalue {lam[0]:.3g} < -{tol:g}")
    v = spec.eigenvectors
    return (v * np.sqrt(np.clip(lam, 0.0, None))) @ v.conj().T


def principal_minors_psd(a, tol: float = 1e-9) -> bool:
    """PSD test by enumerating all ``2**dim - 1`` principal minors.

    Leading minors alone would only certify definiteness, hence the full
    enumeration and the dimension cap.
    """
    a = check_matrix(a)
    n = a.shape[0]
    if n > MAX_MINOR_DIM:
        raise ValueError(f"principal minor enumeration limited to dim <= {MAX_MINOR_DIM}")
    if hermiticity_defect(a) > max(tol, 1e-10):
        raise NotHermitianError("matrix is not Hermitian")
    for k in range(1, n + 1):
        for idx in itertools.combinations(range(n), k):
            sub = a[np.ix_(idx, idx)]
            if np.linalg.det(sub).real < -tol:
                return False
    return True
