"""Wigner functions on the flat phase space R^2.

Functions are sampled on a uniform ``(q, p)`` grid. The Moyal product is
evaluated through the Weyl correspondence: a phase-space function ``f``
is mapped to the position kernel

    K_f(x, x') = (1 / 2 pi hbar) int f((x + x') / 2, p) exp(i p (x - x') / hbar) dp,

kernels are composed as integral operators, and the result is mapped back
by ``f(q, p) = int K(q + y/2, q - y/2) exp(-i p y / hbar) dy``. This is the
same integral product as the twisted-convolution formula, at O(N^3) cost
with dense Fourier matrices cached per grid.

Star powers needed by the criteria stay in operator form, where
``int f dq dp = 2 pi hbar Tr M_f``; only results that must be returned
on the grid are transformed back.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np
from numpy.polynomial import laguerre

from ._validation import DimensionError, check_positive_int
from .criteria import (
    ACCEPT,
    LIMIT_WINDOW,
    REJECT,
    TAIL_MARGIN,
    Check,
    CriterionReport,
    _diagonal_sqrt_terms,
    _finish,
    _tail_estimate,
    _tail_weights,
)
from .linalg import ConvergenceReport, ToleranceConfig, sqrt_coefficients

W_GATES = "W_GATES"
W_TRACE_SQRT = "W_TRACE_SQRT"
W_BINOMIAL = "W_BINOMIAL"
W_LIMIT = "W_LIMIT"
W_PURE = "W_PURE"
PHASE_CRITERIA = (W_TRACE_SQRT, W_BINOMIAL, W_LIMIT, W_PURE)
PHASE_POSITIVITY = (W_TRACE_SQRT, W_BINOMIAL, W_LIMIT)

DEFAULT_M_MAX = 60
MAX_FOCK = 20

PhaseCriterionReport = CriterionReport


@dataclass(frozen=True)
class PhaseGrid:
    """Uniform grid on ``[q_min, q_max] x [p_min, p_max]``, end points included.

    The star product needs the phase ``exp(i p y / hbar)`` resolved across the
    q range, so accuracy drops once ``dp (q_max - q_min)`` grows well past
    ``pi hbar``; the default grid is accurate to rounding for ``hbar >= 0.3``.
    """

    q_min: float = -8.0
    q_max: float = 8.0
    p_min: float = -8.0
    p_max: float = 8.0
    n_q: int = 256
    n_p: int = 256

    def __post_init__(self):
        for name in ("n_q", "n_p"):
            n = check_positive_int(getattr(self, name), name, minimum=2)
            if n & (n - 1):
                raise ValueError(f"{name} must be a power of two, got {n}")
        if not (self.q_max > self.q_min and self.p_max > self.p_min):
            raise ValueError("grid ranges must be increasing")
        for name in ("q_min", "q_max", "p_min", "p_max"):
            object.__setattr__(self, name, float(getattr(self, name)))
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    @property
    def dq(self) -> float:
        return (self.q_max - self.q_min) / (self.n_q - 1)

    @property
    def dp(self) -> float:
        return (self.p_max - self.p_min) / (self.n_p - 1)

    @property
    def q(self) -> np.ndarray:
        return np.linspace(self.q_min, self.q_max, self.n_q)

    @property
    def p(self) -> np.ndarray:
        return np.linspace(self.p_min, self.p_max, self.n_p)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.q, self.p, indexing="ij")


DEFAULT_GRID = PhaseGrid()


@dataclass(frozen=True, eq=False)
class WignerGrid:
    """Samples ``values[i, j] = W(q_i, p_j)`` with ``hbar`` attached.

    Wigner functions are real; complex values only arise as intermediate
    star products of two different functions.
    """

    grid: PhaseGrid
    hbar: float
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values)
        if not np.iscomplexobj(vals):
            vals = vals.astype(float)
        else:
            vals = vals.astype(np.complex128)
        if vals.shape != (self.grid.n_q, self.grid.n_p):
            raise DimensionError(
                f"values shape {vals.shape} does not match grid ({self.grid.n_q}, {self.grid.n_p})")
        if not np.all(np.isfinite(vals)):
            raise ValueError("values contain non-finite entries")
        if not (math.isfinite(self.hbar) and self.hbar > 0):
            raise ValueError("hbar must be positive")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "hbar", float(self.hbar))

    q_min = property(lambda self: self.grid.q_min)
    q_max = property(lambda self: self.grid.q_max)
    p_min = property(lambda self: self.grid.p_min)
    p_max = property(lambda self: self.grid.p_max)
    n_q = property(lambda self: self.grid.n_q)
    n_p = property(lambda self: self.grid.n_p)

    @property
    def scale(self) -> float:
        """``2 pi hbar``."""
        return 2.0 * math.pi * self.hbar

    @property
    def imag_max(self) -> float:
        return float(np.max(np.abs(self.values.imag))) if np.iscomplexobj(self.values) else 0.0

    def real(self) -> "WignerGrid":
        return WignerGrid(self.grid, self.hbar, self.values.real.copy())

    def integral(self) -> complex | float:
        """``sum W dq dp``."""
        s = np.sum(self.values) * self.grid.dq * self.grid.dp
        return complex(s) if np.iscomplexobj(self.values) else float(s)

    def l2_norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.grid.dq * self.grid.dp))

    def compatible(self, other: "WignerGrid") -> bool:
        return self.grid == other.grid and self.hbar == other.hbar

    def _like(self, values) -> "WignerGrid":
        return WignerGrid(self.grid, self.hbar, values)

    def __add__(self, other: "WignerGrid") -> "WignerGrid":
        _check_compatible(self, other)
        return self._like(self.values + other.values)

    def __sub__(self, other: "WignerGrid") -> "WignerGrid":
        _check_compatible(self, other)
        return self._like(self.values - other.values)

    def __mul__(self, scalar) -> "WignerGrid":
        return self._like(self.values * complex(scalar) if isinstance(scalar, complex)
                          else self.values * float(scalar))

    __rmul__ = __mul__

    @classmethod
    def constant(cls, value: float = 1.0, grid: PhaseGrid = DEFAULT_GRID,
                 hbar: float = 1.0) -> "WignerGrid":
        return cls(grid, hbar, np.full((grid.n_q, grid.n_p), float(value)))

    @classmethod
    def from_function(cls, func, grid: PhaseGrid = DEFAULT_GRID, hbar: float = 1.0) -> "WignerGrid":
        qq, pp = grid.mesh()
        return cls(grid, hbar, func(qq, pp))


def _check_compatible(f: WignerGrid, g: WignerGrid) -> None:
    if f.grid != g.grid:
        raise DimensionError("phase-space functions live on different grids")
    if f.hbar != g.hbar:
        raise ValueError(f"hbar mismatch: {f.hbar} vs {g.hbar}")


# --- Weyl correspondence -------------------------------------------------


@dataclass(frozen=True)
class _WeylTables:
    forward: np.ndarray   # (n_p, 2 n_q - 1): exp(i p_l d dq / hbar) dp / (2 pi hbar)
    backward: np.ndarray  # (2 n_q - 1, n_p): 2 dq exp(-i p_j 2 k dq / hbar)
    sum_idx: np.ndarray
    diff_idx: np.ndarray
    back_mask: np.ndarray
    back_rows: np.ndarray
    back_cols: np.ndarray


@lru_cache(maxsize=8)
def _weyl_tables(grid: PhaseGrid, hbar: float) -> _WeylTables:
    n = grid.n_q
    dq, dp = grid.dq, grid.dp
    p = grid.p
    shifts = np.arange(-(n - 1), n)
    forward = np.exp(1j * np.outer(p, shifts) * dq / hbar) * dp / (2 * math.pi * hbar)
    backward = 2 * dq * np.exp(-2j * np.outer(shifts, p) * dq / hbar)
    a = np.arange(n)
    sum_idx = a[:, None] + a[None, :]
    diff_idx = a[:, None] - a[None, :] + (n - 1)
    rows = a[:, None] + shifts[None, :]
    cols = a[:, None] - shifts[None, :]
    mask = (rows >= 0) & (rows < n) & (cols >= 0) & (cols < n)
    return _WeylTables(forward, backward, sum_idx, diff_idx, mask, rows[mask], cols[mask])


def _half_point_samples(values: np.ndarray) -> np.ndarray:
    """Band-limited interpolation along q onto the half-step grid
    ``q_min + s dq / 2``, ``s = 0 .. 2 n_q - 2``."""
    n = values.shape[0]
    spec = np.fft.fft(values, axis=0)
    padded = np.zeros((2 * n,) + values.shape[1:], dtype=np.complex128)
    h = n // 2
    padded[:h] = spec[:h]
    if h > 1:
        padded[2 * n - h + 1:] = spec[h + 1:]
    # the Nyquist bin of an even-length transform is split symmetrically
    padded[h] = 0.5 * spec[h]
    padded[2 * n - h] = 0.5 * spec[h]
    up = 2.0 * np.fft.ifft(padded, axis=0)[: 2 * n - 1]
    return up if np.iscomplexobj(values) else up.real


def to_operator(w: WignerGrid) -> np.ndarray:
    """Matrix ``M_f = K_f dq`` of the operator with Weyl symbol ``f``,
    in the position grid basis. ``M_{f * g} = M_f M_g``."""
    t = _weyl_tables(w.grid, w.hbar)
    half = _half_point_samples(w.values)
    combined = half @ t.forward
    return combined[t.sum_idx, t.diff_idx] * w.grid.dq


def from_operator(m: np.ndarray, grid: PhaseGrid, hbar: float) -> np.ndarray:
    """Weyl symbol values of the operator with matrix ``m`` (inverse of
    :func:`to_operator`)."""
    t = _weyl_tables(grid, hbar)
    kernel = m / grid.dq
    gathered = np.zeros(t.back_mask.shape, dtype=np.complex128)
    gathered[t.back_mask] = kernel[t.back_rows, t.back_cols]
    return gathered @ t.backward


def operator_integral(m: np.ndarray, hbar: float) -> complex:
    """``int f dq dp`` from the operator matrix of ``f``."""
    return complex(2 * math.pi * hbar * np.trace(m))


def moyal_star(f: WignerGrid, g: WignerGrid) -> WignerGrid:
    """Moyal product ``f * g`` on the grid.

    The result is complex-valued; for ``f * f`` with real ``f`` its
    imaginary part measures discretization error (``imag_max``).
    """
    _check_compatible(f, g)
    prod = to_operator(f) @ to_operator(g)
    return WignerGrid(f.grid, f.hbar, from_operator(prod, f.grid, f.hbar))


def star_power(w: WignerGrid, m: int) -> WignerGrid:
    """``w * w * ... * w`` (m factors); ``m = 1`` returns ``w``."""
    m = check_positive_int(m, "m")
    if m == 1:
        return w
    base = to_operator(w)
    acc = base
    for _ in range(m - 1):
        acc = acc @ base
    return WignerGrid(w.grid, w.hbar, from_operator(acc, w.grid, w.hbar))


def phase_trace(w: WignerGrid) -> float:
    """Trace functional ``(1 / 2 pi hbar) sum W dq dp`` (trace density 1)."""
    return float(np.real(w.integral())) / w.scale


# --- test states ---------------------------------------------------------


def fock_wigner(n: int, grid: PhaseGrid = DEFAULT_GRID, hbar: float = 1.0) -> WignerGrid:
    """Wigner function of the n-th oscillator level (unit mass and frequency):
    ``(-1)**n / (pi hbar) L_n(2 r^2 / hbar) exp(-r^2 / hbar)``."""
    if isinstance(n, bool) or int(n) != n or not 0 <= n <= MAX_FOCK:
        raise ValueError(f"Fock index must be an integer in [0, {MAX_FOCK}], got {n!r}")
    qq, pp = grid.mesh()
    r2 = qq**2 + pp**2
    coeffs = np.zeros(int(n) + 1)
    coeffs[-1] = 1.0
    vals = (-1) ** n / (math.pi * hbar) * laguerre.lagval(2 * r2 / hbar, coeffs) * np.exp(-r2 / hbar)
    return WignerGrid(grid, hbar, vals)


def fock_mixture(coeffs: Sequence, grid: PhaseGrid = DEFAULT_GRID, hbar: float = 1.0) -> WignerGrid:
    """``sum_n coeffs[n] W_n`` over Fock Wigner functions."""
    coeffs = [float(c) for c in coeffs]
    if not coeffs:
        raise ValueError("coeffs must be nonempty")
    vals = sum(c * fock_wigner(n, grid, hbar).values for n, c in enumerate(coeffs) if c)
    if isinstance(vals, int):
        vals = np.zeros((grid.n_q, grid.n_p))
    return WignerGrid(grid, hbar, vals)


TATARSKIJ_COEFFS = (Fraction(2, 3), Fraction(2, 3), Fraction(-1, 3))


def build_tatarskij(grid: PhaseGrid = DEFAULT_GRID, hbar: float = 1.0) -> WignerGrid:
    """``(2/3) W_0 + (2/3) W_1 - (1/3) W_2``: normalized, Hilbert-Schmidt
    bound saturated, yet not a Wigner function."""
    return fock_mixture(TATARSKIJ_COEFFS, grid, hbar)


# --- grid criteria -------------------------------------------------------


class StarPowers:
    """Operator form of a Wigner function, shared read-only by the criteria.

    ``rho = 2 pi hbar M_W`` is the density operator on the position grid,
    so ``int W^{*m} = Tr(rho^m) / (2 pi hbar)^(m-1)``.
    """

    def __init__(self, w: WignerGrid):
        self.w = w
        self.scale = w.scale
        self.rho = self.scale * to_operator(w)
        self._square_grid = None

    def integral(self, m: int) -> float:
        """``int W^{*m} dq dp``."""
        m = check_positive_int(m, "m")
        power = self.rho if m == 1 else np.linalg.matrix_power(self.rho, m)
        return float(np.trace(power).real) / self.scale ** (m - 1)

    @property
    def square_grid(self) -> WignerGrid:
        """``W * W`` on the grid (complex, with its imaginary diagnostic)."""
        if self._square_grid is None:
            m = to_operator(self.w)
            self._square_grid = WignerGrid(self.w.grid, self.w.hbar,
                                           from_operator(m @ m, self.w.grid, self.w.hbar))
        return self._square_grid

    def binomial_sums(self, m_max: int):
        """Yield ``T_0 .. T_m_max``, ``T_m = int W * (1 - 2 pi hbar W)^{*m}``,
        evaluated in factored form ``Tr(rho (1 - rho)^m)``."""
        step = np.eye(self.rho.shape[0]) - self.rho
        cur = self.rho.copy()
        for _ in range(m_max + 1):
            yield float(np.trace(cur).real)
            cur = cur @ step


def _phase_gate_checks(sp: StarPowers, cfg: ToleranceConfig) -> list[Check]:
    w = sp.w
    bound = 1.0 / sp.scale
    sq = sp.integral(2)
    square = sp.square_grid
    imag = square.imag_max / max(float(np.max(np.abs(square.values))), 1e-300)
    real_ok = w.imag_max <= cfg.hermiticity_tol and imag <= cfg.hermiticity_tol
    norm = float(np.real(w.integral()))
    return [
        Check("star_square_integral_le_bound", sq <= bound + cfg.sum_tol, sq),
        Check("real", real_ok, imag),
        Check("normalized", abs(norm - 1.0) <= cfg.sum_tol, norm),
    ]


def _w_gated(cid, w, cfg, powers):
    cfg = cfg or PHASE_TOLERANCES
    sp = powers or StarPowers(w)
    checks = _phase_gate_checks(sp, cfg)
    failed = None
    if not all(c.passed for c in checks):
        failed = _finish(cid, checks, {"skipped": "gate failed"}, w.n_q)
    return sp, cfg, checks, failed


def w_gate_conditions(w: WignerGrid, cfg: ToleranceConfig | None = None,
                      powers: StarPowers | None = None) -> CriterionReport:
    """Shared conditions: ``int W^{*2} <= 1 / (2 pi hbar)``, realness of the
    star square, ``int W = 1``."""
    sp, cfg, checks, _ = _w_gated(W_GATES, w, cfg, powers)
    return _finish(W_GATES, checks, {"star_square_integral": sp.integral(2)}, w.n_q)


def criterion_w_trace_sqrt(w: WignerGrid, cfg: ToleranceConfig | None = None,
                           powers: StarPowers | None = None) -> CriterionReport:
    """The phase-space square-root sum must equal ``1 / (2 pi hbar)``.

    The series in star powers of ``W^{*2}`` is summed in diagonal order,
    ``sum_j tau_j int A * (1 - A)^{*j}`` with ``A = (2 pi hbar)^2 W * W``,
    which converges geometrically to ``Tr |rho| / (2 pi hbar)`` and is
    monotone in ``j``. It is summed to convergence so the value is reported
    even after the bound is crossed.
    """
    sp, cfg, checks, failed = _w_gated(W_TRACE_SQRT, w, cfg, powers)
    if failed:
        return failed
    a = sp.rho @ sp.rho
    unit = 1.0 / sp.scale
    total, prev, crossed_at = 0.0, None, None
    status, residual, n = "max_terms_reached", math.inf, 0
    for j, term in _diagonal_sqrt_terms(a, cfg.max_terms):
        n = j + 1
        t = float(np.trace(term).real) * unit
        total += t
        if crossed_at is None and total > unit + cfg.sum_tol:
            crossed_at = n
        residual = _tail_estimate(abs(t), prev)
        if residual <= TAIL_MARGIN * cfg.sum_tol:
            status = "converged"
            break
        prev = abs(t)
    diagnostics = {
        "trace_sqrt_sum": total,
        "trace_sqrt_sum_scaled": total * sp.scale,
        "bound_crossed_at_term": crossed_at,
        "terms": n,
        "summation": "diagonal",
        "convergence": ConvergenceReport(status, n, residual),
    }
    if crossed_at is not None:
        checks.append(Check("trace_sqrt_sum_eq_bound", False, total))
    elif status == "converged":
        checks.append(Check("trace_sqrt_sum_eq_bound", abs(total - unit) <= cfg.sum_tol, total))
    return _finish(W_TRACE_SQRT, checks, diagnostics, w.n_q,
                   inconclusive=status == "max_terms_reached")


def criterion_w_binomial(w: WignerGrid, m_max: int = DEFAULT_M_MAX,
                         cfg: ToleranceConfig | None = None,
                         powers: StarPowers | None = None) -> CriterionReport:
    """Every ``T_m >= 0`` for ``m <= m_max``; the first negative one is the witness.

    ``T_0 = int W = 1``. The same sequence multiplied by ``2 pi hbar`` is
    recorded as ``sums_scaled``.
    """
    sp, cfg, checks, failed = _w_gated(W_BINOMIAL, w, cfg, powers)
    if failed:
        return failed
    sums, witness = [], None
    for m, t in enumerate(sp.binomial_sums(m_max)):
        sums.append(t)
        if t < -cfg.sum_tol:
            witness = m
            break
    checks.append(Check("binomial_sums_nonnegative", witness is None,
                        sums[-1] if witness is not None else min(sums)))
    diagnostics = {"sums": sums, "sums_scaled": [t * sp.scale for t in sums],
                   "witness": witness, "m_max": m_max}
    return _finish(W_BINOMIAL, checks, diagnostics, w.n_q)


def criterion_w_limit(w: WignerGrid, cfg: ToleranceConfig | None = None,
                      m_max: int | None = None,
                      powers: StarPowers | None = None) -> CriterionReport:
    """``T_m -> 0``: accept after ``LIMIT_WINDOW`` consecutive ``|T_m| <= sum_tol``;
    reject on a negative ``T_m`` or one beyond ``divergence_threshold``."""
    sp, cfg, checks, failed = _w_gated(W_LIMIT, w, cfg, powers)
    if failed:
        return failed
    horizon = cfg.max_terms if m_max is None else m_max
    sums, witness, settled, diverged = [], None, 0, False
    for m, t in enumerate(sp.binomial_sums(horizon)):
        sums.append(t)
        if t < -cfg.sum_tol or abs(t) > cfg.divergence_threshold:
            witness = m
            diverged = abs(t) > cfg.divergence_threshold
            break
        settled = settled + 1 if abs(t) <= cfg.sum_tol else 0
        if settled >= LIMIT_WINDOW:
            break
    if witness is not None:
        checks.append(Check("limit_is_zero", False, sums[-1]))
    elif settled >= LIMIT_WINDOW:
        checks.append(Check("limit_is_zero", True, sums[-1]))
    diagnostics = {
        "sums": sums if len(sums) <= 200 else sums[:100] + sums[-100:],
        "m_evaluated": len(sums),
        "witness": witness,
        "diverged": diverged,
    }
    return _finish(W_LIMIT, checks, diagnostics, w.n_q,
                   inconclusive=witness is None and settled < LIMIT_WINDOW)


def criterion_w_pure(w: WignerGrid, cfg: ToleranceConfig | None = None,
                     powers: StarPowers | None = None) -> CriterionReport:
    """Pure-state test: ``int W^{*2} = 1 / (2 pi hbar)``, real,
    ``W * W = W / (2 pi hbar)`` in L2, ``int W = 1``."""
    cfg = cfg or PHASE_TOLERANCES
    sp = powers or StarPowers(w)
    gates = _phase_gate_checks(sp, cfg)
    sq = sp.integral(2)
    square = sp.square_grid
    defect = (square - w * (1.0 / sp.scale)).l2_norm()
    rel = defect / max(w.l2_norm() / sp.scale, 1e-300)
    checks = [
        Check("star_square_integral_eq_bound", abs(sq - 1.0 / sp.scale) <= cfg.sum_tol, sq),
        gates[1],
        Check("star_idempotent", rel <= cfg.series_tol, rel),
        gates[2],
    ]
    return _finish(W_PURE, checks, {"idempotency_defect_l2": defect}, w.n_q)


def run_phase_criteria(w: WignerGrid, cfg: ToleranceConfig | None = None,
                       m_max: int = DEFAULT_M_MAX,
                       criteria: Sequence[str] | None = None) -> dict[str, CriterionReport]:
    """Run the selected phase-space criteria (all by default) on one shared
    star-power cache."""
    cfg = cfg or PHASE_TOLERANCES
    sp = StarPowers(w)
    selected = PHASE_CRITERIA if criteria is None else tuple(criteria)
    funcs = {
        W_GATES: lambda: w_gate_conditions(w, cfg, sp),
        W_TRACE_SQRT: lambda: criterion_w_trace_sqrt(w, cfg, sp),
        W_BINOMIAL: lambda: criterion_w_binomial(w, m_max, cfg, sp),
        W_LIMIT: lambda: criterion_w_limit(w, cfg, powers=sp),
        W_PURE: lambda: criterion_w_pure(w, cfg, sp),
    }
    out = {}
    for cid in selected:
        if cid not in funcs:
            raise ValueError(f"unknown phase-space criterion {cid!r}")
        out[cid] = funcs[cid]()
    return out


# Grid quadrature is far less accurate than matrix arithmetic; these are
# the tolerances the grid criteria use by default.
PHASE_TOLERANCES = ToleranceConfig(hermiticity_tol=1e-8, sum_tol=1e-8,
                                   series_tol=1e-6, max_terms=5000)


# --- exact orthogonal mixtures -------------------------------------------


@dataclass(frozen=True)
class OrthogonalMixture:
    """``(2 pi hbar)^(-scale_power) * sum_i c_i W_i`` over mutually
    orthogonal pure-state Wigner functions, with exact rational ``c_i``.

    The algebra is fixed by ``W_i * W_j = delta_ij W_i / (2 pi hbar)`` and
    ``int W_i = 1``.
    """

    hbar: float
    coeffs: tuple
    scale_power: int = 0

    def __post_init__(self):
        coeffs = tuple(Fraction(c) for c in self.coeffs)
        if not coeffs:
            raise ValueError("coeffs must be nonempty")
        if not self.hbar > 0:
            raise ValueError("hbar must be positive")
        object.__setattr__(self, "coeffs", coeffs)

    def integral(self) -> Fraction:
        """``int W`` in units of ``(2 pi hbar)^(-scale_power)``."""
        return sum(self.coeffs, Fraction(0))

    def integral_value(self) -> float:
        return float(self.integral()) * (2 * math.pi * self.hbar) ** (-self.scale_power)


def mixture_star_power(mix: OrthogonalMixture, m: int) -> OrthogonalMixture:
    """``W^{*m} = (2 pi hbar)^(-(m-1)) sum_i c_i^m W_i`` (exact)."""
    m = check_positive_int(m, "m")
    return OrthogonalMixture(mix.hbar, tuple(c**m for c in mix.coeffs),
                             m * mix.scale_power + (m - 1))


def _exact_check(label, passed, value) -> Check:
    return Check(label, bool(passed), value)


def mixture_binomial_sums(coeffs: Sequence[Fraction], m_max: int) -> list[Fraction]:
    """``T_m = sum_i c_i (1 - c_i)^m``, the dimensionless binomial sums."""
    return [sum((c * (1 - c) ** m for c in coeffs), Fraction(0)) for m in range(m_max + 1)]


def mixture_binomial_sums_from_integrals(coeffs: Sequence[Fraction], m_max: int) -> list[Fraction]:
    """The binomial sums from the star-power integrals as written:
    ``sum_k (-1)^k C(m, k) (2 pi hbar)^k int W^{*(k+1)}``, in exact arithmetic."""
    integrals = [sum((c ** (k + 1) for c in coeffs), Fraction(0)) for k in range(m_max + 1)]
    return [sum(((-1) ** k * math.comb(m, k) * integrals[k] for k in range(m + 1)), Fraction(0))
            for m in range(m_max + 1)]


def mixture_trace_sqrt_partial_sums(coeffs: Sequence[Fraction], n_terms: int) -> list[Fraction]:
    """Partial sums of the square-root series over star powers of ``W^{*2}``
    in its original ordering, exact, in units of ``1 / (2 pi hbar)``."""
    cs = sqrt_coefficients(n_terms, exact=True)
    even = [sum((c ** (2 * k) for c in coeffs), Fraction(0)) for k in range(1, n_terms + 1)]
    sums, total = [], Fraction(0)
    for l in range(1, n_terms + 1):
        inner = sum(((-1) ** r * math.comb(l, r) * even[l - r - 1] for r in range(l)), Fraction(0))
        total += cs[l - 1] * inner
        sums.append(total)
    return sums


def _limit_behaviour(coeffs: Sequence[Fraction]) -> str:
    """Exact limit of ``sum_i c_i (1 - c_i)^m``: ``"0"``, ``"-inf"``,
    ``"+inf"`` or ``"oscillating"``."""
    active = [c for c in coeffs if c != 0]
    if not active:
        return "0"
    rate = max(abs(1 - c) for c in active)
    if rate < 1:
        return "0"
    lead = [c for c in active if abs(1 - c) == rate]
    if rate == 1:
        # only c = 2 reaches |1 - c| = 1 with c != 0: bounded, sign-alternating
        return "oscillating"
    if all(1 - c > 0 for c in lead):
        return "-inf" if sum(lead) < 0 else "+inf"
    return "oscillating"


def mixture_criteria(mix: OrthogonalMixture, m_max: int = DEFAULT_M_MAX,
                     n_series_terms: int = 40) -> list[CriterionReport]:
    """Gates plus the four phase-space criteria in exact arithmetic.

    Values are reported in units of the relevant power of ``1 / (2 pi hbar)``.
    The square-root criterion uses the closed form ``sum |c_i|``; the
    original-order partial sums are recorded alongside with the rigorous
    gap bound ``rank * tau_L``.
    """
    if mix.scale_power != 0:
        raise ValueError("criteria apply to a Wigner function, not a star power")
    cs = mix.coeffs
    norm = mix.integral()
    hs = sum((c * c for c in cs), Fraction(0))
    gates = [
        _exact_check("star_square_integral_le_bound", hs <= 1, hs),
        _exact_check("real", True, Fraction(0)),
        _exact_check("normalized", norm == 1, norm),
    ]
    gates_ok = all(c.passed for c in gates)
    dim = len(cs)
    reports = [CriterionReport(W_GATES, ACCEPT if gates_ok else REJECT, list(gates),
                               {"units": "1/(2 pi hbar) for the star square"}, dim)]

    def gated(cid, extra_checks, diagnostics):
        checks = list(gates) + extra_checks
        if not gates_ok:
            diagnostics = {**diagnostics, "skipped": "gate failed"}
            checks = list(gates)
        verdict = ACCEPT if all(c.passed for c in checks) else REJECT
        return CriterionReport(cid, verdict, checks, diagnostics, dim)

    closed = sum((abs(c) for c in cs), Fraction(0))
    partial = mixture_trace_sqrt_partial_sums(cs, n_series_terms)
    rank = sum(1 for c in cs if c != 0)
    tau = _tail_weights(n_series_terms + 1)[n_series_terms]
    reports.append(gated(W_TRACE_SQRT, [_exact_check("trace_sqrt_sum_eq_bound", closed == 1, closed)], {
        "trace_sqrt_sum": closed,
        "units": "1/(2 pi hbar)",
        "partial_sums": partial,
        "partial_sum_gap_bound": rank * tau,
    }))

    sums = mixture_binomial_sums(cs, m_max)
    witness = next((m for m, t in enumerate(sums) if t < 0), None)
    shown = sums if witness is None else sums[: witness + 1]
    reports.append(gated(W_BINOMIAL, [_exact_check("binomial_sums_nonnegative", witness is None,
                                                   shown[-1] if witness is not None else min(sums))],
                         {"sums": shown, "witness": witness, "m_max": m_max,
                          "units": "dimensionless; multiply by 2 pi hbar for the scaled form"}))

    limit = _limit_behaviour(cs)
    reports.append(gated(W_LIMIT, [_exact_check("limit_is_zero", limit == "0", limit)],
                         {"limit": limit, "sums": sums}))

    idempotent = all(c * c == c for c in cs)
    pure_checks = [
        _exact_check("star_square_integral_eq_bound", hs == 1, hs),
        gates[1],
        _exact_check("star_idempotent", idempotent, Fraction(int(not idempotent))),
        gates[2],
    ]
    reports.append(CriterionReport(W_PURE, ACCEPT if all(c.passed for c in pure_checks) else REJECT,
                                   pure_checks, {}, dim))
    return reports
