"""Recognition criteria for density matrices.

Each ``criterion_*`` / ``check_*`` function returns a :class:`CriterionReport`.
All of them share the three gate conditions (Hilbert-Schmidt bound,
Hermiticity, unit trace); a failed gate is an immediate rejection.

Infinite-dimensional inputs are handled as user-supplied truncations: a
report certifies the truncated matrix and records its dimension. Criteria
that quantify over every ``n`` are evaluated up to a finite horizon, so an
acceptance means "no counterexample up to the horizon".
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from ._validation import check_matrix
from .linalg import (
    ConvergenceReport,
    ToleranceConfig,
    hermiticity_defect,
    hs_norm_sq,
    opnorm_proxy,
    sqrt_coefficients,
    sqrt_series,
)
from .spectral import MAX_MINOR_DIM, principal_minors_psd, psd_oracle, trace_norm

ACCEPT = "accept"
REJECT = "reject"
INCONCLUSIVE = "inconclusive"

GATES = "GATES"
FINITE_DEF2 = "FINITE_DEF2"
PURE_FINITE = "PURE_FINITE"
POWER_SEQ = "POWER_SEQ"
SQRT_SERIES = "SQRT_SERIES"
SQRT_SQUARE_TRACE = "SQRT_SQUARE_TRACE"
TRACE_SQRT_SQUARE = "TRACE_SQRT_SQUARE"
BINOMIAL_SUMS = "BINOMIAL_SUMS"
BINOMIAL_LIMIT = "BINOMIAL_LIMIT"
PURE_INFINITE = "PURE_INFINITE"

POSITIVITY_CRITERIA = (
    FINITE_DEF2,
    POWER_SEQ,
    SQRT_SERIES,
    SQRT_SQUARE_TRACE,
    TRACE_SQRT_SQUARE,
    BINOMIAL_SUMS,
    BINOMIAL_LIMIT,
)
PURITY_CRITERIA = (PURE_FINITE, PURE_INFINITE)
ALL_CRITERIA = POSITIVITY_CRITERIA + PURITY_CRITERIA

DEFAULT_N_MAX = 60
LIMIT_WINDOW = 5
# Monotone series stop once the estimated tail is this fraction of the
# tolerance they are compared against.
TAIL_MARGIN = 0.1


@dataclass
class Check:
    label: str
    passed: bool
    value: float | None = None

    def as_dict(self) -> dict:
        return {"label": self.label, "passed": self.passed, "value": self.value}


@dataclass
class CriterionReport:
    """Verdict of one criterion plus the measurements behind it."""

    criterion_id: str
    verdict: str
    checks: list[Check] = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)
    dim: int | None = None

    @property
    def accepted(self) -> bool:
        return self.verdict == ACCEPT

    @property
    def first_failure(self) -> str | None:
        for c in self.checks:
            if not c.passed:
                return c.label
        return None

    def check(self, label: str) -> Check:
        for c in self.checks:
            if c.label == label:
                return c
        raise KeyError(label)

    def as_dict(self) -> dict:
        diag = {}
        for key, val in self.diagnostics.items():
            diag[key] = val.as_dict() if isinstance(val, ConvergenceReport) else val
        return {
            "criterion_id": self.criterion_id,
            "verdict": self.verdict,
            "dim": self.dim,
            "checks": [c.as_dict() for c in self.checks],
            "diagnostics": diag,
        }


@dataclass
class StateVerdict:
    is_state: bool
    is_pure: bool | None
    agreeing_criteria: list[str]
    conflicting: list[str]
    reports: dict[str, CriterionReport] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "is_state": self.is_state,
            "is_pure": self.is_pure,
            "agreeing_criteria": list(self.agreeing_criteria),
            "conflicting": list(self.conflicting),
            "reports": {k: r.as_dict() for k, r in self.reports.items()},
        }


def _finish(cid: str, checks: list[Check], diagnostics: dict, dim: int,
            inconclusive: bool = False) -> CriterionReport:
    if not all(c.passed for c in checks):
        verdict = REJECT
    elif inconclusive:
        verdict = INCONCLUSIVE
    else:
        verdict = ACCEPT
    return CriterionReport(cid, verdict, checks, diagnostics, dim)


def _hermitian_check(m: np.ndarray, cfg: ToleranceConfig) -> Check:
    defect = hermiticity_defect(m)
    return Check("hermitian", defect <= cfg.hermiticity_tol, defect)


def _trace_check(m: np.ndarray, cfg: ToleranceConfig) -> Check:
    tr = complex(np.trace(m))
    return Check("trace_one", abs(tr - 1.0) <= cfg.sum_tol, tr.real)


def _gate_checks(m: np.ndarray, cfg: ToleranceConfig) -> list[Check]:
    hs = hs_norm_sq(m)
    return [
        Check("hs_norm_sq_le_1", hs <= 1.0 + cfg.sum_tol, hs),
        _hermitian_check(m, cfg),
        _trace_check(m, cfg),
    ]


def gate_conditions(m, cfg: ToleranceConfig | None = None) -> CriterionReport:
    """The three conditions every criterion shares: ``sum |m_ij|^2 <= 1``,
    Hermiticity and unit trace. They do not detect negative eigenvalues."""
    cfg = cfg or ToleranceConfig()
    m = check_matrix(m)
    return _finish(GATES, _gate_checks(m, cfg), {}, m.shape[0])


def _gated(cid: str, m, cfg: ToleranceConfig | None):
    cfg = cfg or ToleranceConfig()
    m = check_matrix(m)
    checks = _gate_checks(m, cfg)
    failed = None
    if not all(c.passed for c in checks):
        failed = _finish(cid, checks, {"skipped": "gate failed"}, m.shape[0])
    return m, cfg, checks, failed


def check_finite_def2(m, cfg: ToleranceConfig | None = None) -> CriterionReport:
    """Complete finite-dimensional test: Hermitian, unit trace, positive.

    Positivity is decided from all principal minors up to dim 12 and from
    the spectrum beyond that.
    """
    cfg = cfg or ToleranceConfig()
    m = check_matrix(m)
    checks = [_hermitian_check(m, cfg), _trace_check(m, cfg)]
    diagnostics = {}
    if checks[0].passed:
        if m.shape[0] <= MAX_MINOR_DIM:
            positive = principal_minors_psd(m, tol=cfg.sum_tol)
            diagnostics["positivity_method"] = "principal_minors"
        else:
            positive = psd_oracle(m, tol=cfg.sum_tol)
            diagnostics["positivity_method"] = "spectrum"
        checks.append(Check("positive", positive))
    return _finish(FINITE_DEF2, checks, diagnostics, m.shape[0])


def check_pure_finite(m, cfg: ToleranceConfig | None = None) -> CriterionReport:
    cfg = cfg or ToleranceConfig()
    m = check_matrix(m)
    dim = m.shape[0]
    defect = float(np.linalg.norm(m @ m - m))
    checks = [
        _hermitian_check(m, cfg),
        _trace_check(m, cfg),
        Check("idempotent", defect <= cfg.series_tol * dim, defect),
    ]
    return _finish(PURE_FINITE, checks, {}, dim)


def check_pure_infinite(m, cfg: ToleranceConfig | None = None) -> CriterionReport:
    """Pure-state test: HS norm exactly one, Hermitian, projector, unit trace."""
    cfg = cfg or ToleranceConfig()
    m = check_matrix(m)
    hs = hs_norm_sq(m)
    defect = float(np.max(np.abs(m @ m - m)))
    checks = [
        Check("hs_norm_sq_eq_1", abs(hs - 1.0) <= cfg.sum_tol, hs),
        _hermitian_check(m, cfg),
        Check("idempotent", defect <= cfg.series_tol, defect),
        _trace_check(m, cfg),
    ]
    return _finish(PURE_INFINITE, checks, {}, m.shape[0])


def _tail_estimate(norm: float, prev: float | None) -> float:
    if norm == 0.0:
        return 0.0
    if not prev:
        return math.inf
    ratio = norm / prev
    return norm / (1.0 - ratio) if ratio < 1.0 else math.inf


def criterion_power_sequence(m, cfg: ToleranceConfig | None = None) -> CriterionReport:
    """Convergence of ``(1 - m)**n``.

    On acceptance the limit is the projector onto the kernel of ``m``; its
    idempotency defect and ``Tr(L m)`` are recorded.
    """
    m, cfg, checks, failed = _gated(POWER_SEQ, m, cfg)
    if failed:
        return failed
    dim = m.shape[0]
    step = np.eye(dim, dtype=np.complex128) - m
    power = step.copy()
    prev = None
    status, residual, n = "max_terms_reached", math.inf, 0
    for n in range(1, cfg.max_terms + 1):
        nxt = power @ step
        size = opnorm_proxy(nxt)
        if size > cfg.divergence_threshold:
            status, residual = "diverged", size
            break
        diff = opnorm_proxy(nxt - power)
        residual = _tail_estimate(diff, prev)
        power = nxt
        if residual <= cfg.series_tol:
            status = "converged"
            break
        prev = diff
    report = ConvergenceReport(status, n, residual)
    checks.append(Check("power_sequence_converges", status != "diverged", residual))
    diagnostics = {"convergence": report}
    if status == "converged":
        diagnostics["limit_idempotency_defect"] = float(np.linalg.norm(power @ power - power))
        diagnostics["trace_limit_times_m"] = float(abs(np.trace(power @ m)))
    return _finish(POWER_SEQ, checks, diagnostics, dim, inconclusive=status != "converged")


def criterion_sqrt_series(m, cfg: ToleranceConfig | None = None) -> CriterionReport:
    """Convergence of the binomial series for ``sqrt(m)`` around the identity."""
    m, cfg, checks, failed = _gated(SQRT_SERIES, m, cfg)
    if failed:
        return failed
    dim = m.shape[0]
    root, report = sqrt_series(m, cfg)
    diagnostics = {"convergence": report}
    checks.append(Check("sqrt_series_converges", report.status != "diverged",
                        report.final_residual))
    if report.status == "converged":
        fidelity = float(np.linalg.norm(root @ root - m))
        diagnostics["square_residual"] = fidelity
        checks.append(Check("square_reproduces_m", fidelity <= cfg.series_tol * dim, fidelity))
    return _finish(SQRT_SERIES, checks, diagnostics, dim,
                   inconclusive=report.status == "max_terms_reached")


def _tail_weights(n_terms: int) -> list[float]:
    """``tau_j = 1 - sum_{l<=j} |c_l|``, the tail mass of the square-root
    coefficients; ``tau_0 = 1``."""
    coeffs = sqrt_coefficients(n_terms)
    taus = [1.0]
    for c in coeffs[:-1]:
        taus.append(taus[-1] - abs(c))
    return taus


def _diagonal_sqrt_terms(a: np.ndarray, max_terms: int):
    """Yield the terms ``tau_j * A (1 - A)**j`` of ``sqrt(A)``.

    This is the constant-free square-root series in positive powers of A
    with its double sum regrouped along diagonals. For PSD ``A`` with
    ``||A|| <= 1`` every term is PSD, so the regrouping is exact and the
    partial sums increase monotonically to ``sqrt(A)``. The ungrouped
    ordering converges only like ``L**-0.5`` on every nonzero eigenvalue.
    """
    dim = a.shape[0]
    comp = np.eye(dim, dtype=np.complex128) - a
    cur = a.copy()
    taus = _tail_weights(max_terms)
    for j in range(max_terms):
        yield j, taus[j] * cur
        cur = cur @ comp


def criterion_sqrt_square_trace(m, cfg: ToleranceConfig | None = None) -> CriterionReport:
    """``m = sqrt(m^2)`` tested through trace-norm convergence of the
    positive-power square-root series of ``m^2``.

    Partial sums ``rho_n`` never exceed ``|m|``, so ``Tr rho_n > Tr m``
    already proves a negative eigenvalue.
    """
    m, cfg, checks, failed = _gated(SQRT_SQUARE_TRACE, m, cfg)
    if failed:
        return failed
    dim = m.shape[0]
    a = m @ m
    partial = np.zeros_like(m)
    trace_m = float(np.trace(m).real)
    prev = None
    status, residual, n = "max_terms_reached", math.inf, 0
    overshoot = None
    for j, term in _diagonal_sqrt_terms(a, cfg.max_terms):
        n = j + 1
        partial += term
        t = opnorm_proxy(term)
        excess = float(np.trace(partial).real) - trace_m
        if excess > cfg.sum_tol:
            overshoot = excess
            status = "stopped"
            break
        residual = _tail_estimate(t, prev)
        if residual <= TAIL_MARGIN * cfg.series_tol:
            status = "converged"
            break
        prev = t
    distance = trace_norm(partial - m)
    diagnostics = {"trace_norm_residual": distance, "summation": "diagonal", "terms": n}
    if status != "stopped":
        diagnostics["convergence"] = ConvergenceReport(status, n, residual)
    if overshoot is not None:
        diagnostics["trace_excess"] = overshoot
        checks.append(Check("partial_sum_trace_le_trace_m", False, overshoot))
    elif status == "converged":
        checks.append(Check("trace_norm_residual_vanishes", distance <= cfg.series_tol * dim, distance))
    return _finish(SQRT_SQUARE_TRACE, checks, diagnostics, dim,
                   inconclusive=status == "max_terms_reached")


def trace_sqrt_square_literal(power_traces: Sequence[float], n_terms: int) -> list[float]:
    """Partial sums of the scalar series for ``Tr sqrt(m^2)`` in its
    original ordering, from ``power_traces[k] = Tr m^(2(k+1))``.

    Converges only like ``n_terms**-0.5``; kept as a diagnostic.
    """
    coeffs = sqrt_coefficients(n_terms)
    sums, total = [], 0.0
    for l in range(1, n_terms + 1):
        inner = sum((-1) ** r * math.comb(l, r) * power_traces[l - r - 1] for r in range(l))
        total += coeffs[l - 1] * inner
        sums.append(total)
    return sums


def criterion_trace_sqrt_square(m, cfg: ToleranceConfig | None = None) -> CriterionReport:
    """``Tr sqrt(m^2) = 1``.

    The scalar series is summed in diagonal order (see
    :func:`_diagonal_sqrt_terms`); partial sums increase towards the sum of
    ``|eigenvalues|``, so crossing ``1 + sum_tol`` is a definitive rejection.
    """
    m, cfg, checks, failed = _gated(TRACE_SQRT_SQUARE, m, cfg)
    if failed:
        return failed
    dim = m.shape[0]
    a = m @ m
    total = 0.0
    prev = None
    status, residual, n = "max_terms_reached", math.inf, 0
    for j, term in _diagonal_sqrt_terms(a, cfg.max_terms):
        n = j + 1
        t = float(np.trace(term).real)
        total += t
        if total > 1.0 + cfg.sum_tol:
            status = "stopped"
            break
        residual = _tail_estimate(abs(t), prev)
        if residual <= TAIL_MARGIN * cfg.sum_tol:
            status = "converged"
            break
        prev = abs(t)

    k_lit = min(30, cfg.max_terms)
    even_traces, p = [], a.copy()
    for _ in range(k_lit):
        even_traces.append(float(np.trace(p).real))
        p = p @ a
    diagnostics = {
        "trace_sqrt_square": total,
        "terms": n,
        "summation": "diagonal",
        "literal_partial_sums": trace_sqrt_square_literal(even_traces, k_lit),
    }
    if status == "stopped":
        checks.append(Check("trace_sqrt_square_eq_1", False, total))
    else:
        diagnostics["convergence"] = ConvergenceReport(status, n, residual)
    if status == "converged":
        checks.append(Check("trace_sqrt_square_eq_1", abs(total - 1.0) <= cfg.sum_tol, total))
    return _finish(TRACE_SQRT_SQUARE, checks, diagnostics, dim,
                   inconclusive=status == "max_terms_reached")


def binomial_sums_from_traces(power_traces: Sequence[float], n_max: int) -> list[float]:
    """``S_n = sum_k (-1)^k C(n, k) Tr m^(k+1)`` exactly as written,
    from ``power_traces[k] = Tr m^(k+1)``.

    The alternating binomial weights cancel catastrophically in floating
    point beyond ``n`` of roughly 20; prefer :func:`binomial_sums`.
    """
    return [
        sum((-1) ** k * math.comb(n, k) * power_traces[k] for k in range(n + 1))
        for n in range(n_max + 1)
    ]


def binomial_sums(m, n_max: int) -> Iterable[float]:
    """Yield ``S_0 .. S_n_max`` in factored form ``Tr(m (1 - m)^n)``.

    Algebraically identical to the binomial expansion over traces of
    powers, without its cancellation.
    """
    m = check_matrix(m)
    step = np.eye(m.shape[0], dtype=np.complex128) - m
    cur = m.copy()
    for _ in range(n_max + 1):
        yield float(np.trace(cur).real)
        cur = cur @ step


def criterion_binomial_sums(m, n_max: int = DEFAULT_N_MAX,
                            cfg: ToleranceConfig | None = None) -> CriterionReport:
    """Every ``S_n`` nonnegative for ``n <= n_max``; the first negative one
    is the rejection witness."""
    m, cfg, checks, failed = _gated(BINOMIAL_SUMS, m, cfg)
    if failed:
        return failed
    sums, witness = [], None
    for n, s in enumerate(binomial_sums(m, n_max)):
        sums.append(s)
        if s < -cfg.sum_tol:
            witness = n
            break
    checks.append(Check("binomial_sums_nonnegative", witness is None,
                        sums[-1] if witness is not None else min(sums)))
    diagnostics = {"sums": sums, "witness": witness, "n_max": n_max}
    return _finish(BINOMIAL_SUMS, checks, diagnostics, m.shape[0])


def criterion_binomial_limit(m, cfg: ToleranceConfig | None = None) -> CriterionReport:
    """``S_n -> 0``. The horizon is ``cfg.max_terms``; acceptance needs
    ``LIMIT_WINDOW`` consecutive ``|S_n| <= sum_tol``."""
    m, cfg, checks, failed = _gated(BINOMIAL_LIMIT, m, cfg)
    if failed:
        return failed
    sums, witness, settled = [], None, 0
    diverged = False
    for n, s in enumerate(binomial_sums(m, cfg.max_terms)):
        sums.append(s)
        if s < -cfg.sum_tol or abs(s) > cfg.divergence_threshold:
            witness = n
            diverged = abs(s) > cfg.divergence_threshold
            break
        settled = settled + 1 if abs(s) <= cfg.sum_tol else 0
        if settled >= LIMIT_WINDOW:
            break
    if witness is not None:
        checks.append(Check("limit_is_zero", False, sums[-1]))
    elif settled >= LIMIT_WINDOW:
        checks.append(Check("limit_is_zero", True, sums[-1]))
    diagnostics = {
        "sums": sums if len(sums) <= 200 else sums[:100] + sums[-100:],
        "n_evaluated": len(sums),
        "witness": witness,
        "diverged": diverged,
    }
    return _finish(BINOMIAL_LIMIT, checks, diagnostics, m.shape[0],
                   inconclusive=witness is None and settled < LIMIT_WINDOW)


def run_criterion(cid: str, m, cfg: ToleranceConfig | None = None,
                  n_max: int = DEFAULT_N_MAX) -> CriterionReport:
    if cid == BINOMIAL_SUMS:
        return criterion_binomial_sums(m, n_max, cfg)
    funcs = {
        FINITE_DEF2: check_finite_def2,
        PURE_FINITE: check_pure_finite,
        POWER_SEQ: criterion_power_sequence,
        SQRT_SERIES: criterion_sqrt_series,
        SQRT_SQUARE_TRACE: criterion_sqrt_square_trace,
        TRACE_SQRT_SQUARE: criterion_trace_sqrt_square,
        BINOMIAL_LIMIT: criterion_binomial_limit,
        PURE_INFINITE: check_pure_infinite,
        GATES: gate_conditions,
    }
    try:
        return funcs[cid](m, cfg)
    except KeyError:
        raise ValueError(f"unknown criterion {cid!r}") from None


def aggregate(reports: dict[str, CriterionReport]) -> StateVerdict:
    """Combine per-criterion reports; accept/reject disagreement among the
    positivity criteria is surfaced in ``conflicting``."""
    positivity = {k: r for k, r in reports.items() if k in POSITIVITY_CRITERIA}
    accepts = [k for k, r in positivity.items() if r.verdict == ACCEPT]
    rejects = [k for k, r in positivity.items() if r.verdict == REJECT]
    conflicting = sorted(accepts + rejects) if accepts and rejects else []
    is_state = bool(accepts) and not rejects
    pure_reports = [r for k, r in reports.items() if k in PURITY_CRITERIA]
    if pure_reports:
        is_pure = all(r.accepted for r in pure_reports)
        if is_pure and rejects:
            conflicting = sorted(set(conflicting) | {r.criterion_id for r in pure_reports} | set(rejects))
        if is_pure and not positivity:
            is_state = True
    else:
        is_pure = None
    agreeing = sorted(k for k, r in positivity.items()
                      if (r.verdict == ACCEPT) == is_state and r.verdict != INCONCLUSIVE)
    return StateVerdict(is_state, is_pure, agreeing, conflicting, reports)


def run_all(m, cfg: ToleranceConfig | None = None, n_max: int = DEFAULT_N_MAX,
            criteria: Sequence[str] | None = None) -> StateVerdict:
    """Run the gates, the selected criteria (all by default) and aggregate."""
    cfg = cfg or ToleranceConfig()
    m = check_matrix(m)
    selected = ALL_CRITERIA if criteria is None else tuple(criteria)
    reports = {cid: run_criterion(cid, m, cfg, n_max) for cid in selected}
    return aggregate(reports)
