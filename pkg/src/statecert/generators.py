"""Seeded random test inputs: unitaries, density matrices, indefinite
trace-one matrices."""

from __future__ import annotations

import numpy as np


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_unitary(dim: int, seed=None) -> np.ndarray:
    """Haar-distributed unitary from the QR decomposition of a Ginibre matrix."""
    rng = _rng(seed)
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def with_spectrum(eigenvalues, seed=None) -> np.ndarray:
    """``U diag(eigenvalues) U^H`` for a random unitary ``U``."""
    lam = np.asarray(eigenvalues, dtype=float)
    u = random_unitary(lam.size, seed)
    m = (u * lam) @ u.conj().T
    return 0.5 * (m + m.conj().T)


def random_density(dim: int, seed=None, rank: int | None = None) -> np.ndarray:
    """Convex mixture ``sum_j p_j |v_j><v_j|`` of orthonormal projectors."""
    rng = _rng(seed)
    rank = dim if rank is None else rank
    p = np.zeros(dim)
    p[:rank] = rng.dirichlet(np.ones(rank))
    return with_spectrum(p, rng)


def random_projector(dim: int, seed=None) -> np.ndarray:
    rng = _rng(seed)
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    v /= np.linalg.norm(v)
    return np.outer(v, v.conj())


def random_psd(dim: int, seed=None, low: float = 0.01, high: float = 0.99) -> np.ndarray:
    """PSD matrix with eigenvalues drawn uniformly from ``[low, high]``."""
    rng = _rng(seed)
    return with_spectrum(rng.uniform(low, high, size=dim), rng)


def random_trace_one_spectrum(dim: int, seed=None, *, negative: bool | None = None,
                              min_positive: float = 0.04, min_negative: float = 0.05,
                              max_tries: int = 1000) -> np.ndarray:
    """Eigenvalues summing to one with ``sum lam**2 <= 1``.

    Nonzero eigenvalues keep a gap of ``min_positive`` above and
    ``min_negative`` below zero; truncated criteria cannot decide sooner
    than roughly ``1 / gap**2`` terms inside that band.
    """
    rng = _rng(seed)
    if negative is None:
        negative = bool(rng.integers(2))
    # trace one with a negative eigenvalue forces sum lam**2 > 1 in dim 2
    negative = negative and dim >= 3
    for _ in range(max_tries):
        n_neg = int(rng.integers(1, max(2, dim // 3 + 1))) if negative else 0
        y = rng.uniform(min_negative, 0.3, size=n_neg)
        w = rng.uniform(0.5, 1.0, size=dim - n_neg)
        x = w / w.sum() * (1.0 + y.sum())
        lam = np.concatenate([x, -y])
        if x.min() >= min_positive and np.sum(lam**2) <= 1.0:
            return rng.permutation(lam)
    raise RuntimeError(f"could not draw a gapped trace-one spectrum for dim={dim}")
