"""End-to-end acceptance suite.

Each test prints one ``[acceptance N] PASS|FAIL`` line (visible under
``pytest -v`` as well as ``-s``) before asserting.
"""

import math
import time
from fractions import Fraction

import numpy as np
import pytest

from statecert import criteria as C
from statecert.generators import (
    random_projector,
    random_psd,
    random_trace_one_spectrum,
    with_spectrum,
)
from statecert.kernel import kernel_to_matrix, kernel_trace, mixture_kernel, projector_kernel
from statecert.linalg import ToleranceConfig, hs_norm_sq, opnorm_proxy, sqrt_series
from statecert.phase_space import (
    DEFAULT_GRID,
    TATARSKIJ_COEFFS,
    W_BINOMIAL,
    W_LIMIT,
    W_PURE,
    W_TRACE_SQRT,
    OrthogonalMixture,
    StarPowers,
    WignerGrid,
    build_tatarskij,
    criterion_w_pure,
    fock_wigner,
    mixture_binomial_sums,
    mixture_criteria,
    moyal_star,
    run_phase_criteria,
)
from statecert.spectral import psd_oracle, spectral_norm, sqrt_oracle, trace_norm

SCALE = 2 * math.pi  # 2 pi hbar at hbar = 1


@pytest.fixture
def report(capsys):
    def _report(n, title, failures, detail=""):
        status = "PASS" if not failures else "FAIL"
        with capsys.disabled():
            print(f"\n[acceptance {n}] {status} {title}" + (f" ({detail})" if detail else ""))
            for f in failures:
                print(f"    {f}")
        assert not failures, failures
    return _report


def test_1_tatarskij_exact(report):
    t0 = time.perf_counter()
    reps = {r.criterion_id: r for r in mixture_criteria(OrthogonalMixture(1.0, TATARSKIJ_COEFFS))}
    elapsed = time.perf_counter() - t0
    fails = []
    sq = reps[W_TRACE_SQRT].diagnostics["trace_sqrt_sum"]
    if sq != Fraction(5, 3) or reps[W_TRACE_SQRT].verdict != C.REJECT:
        fails.append(f"square-root sum {sq}, verdict {reps[W_TRACE_SQRT].verdict}")
    sums = reps[W_BINOMIAL].diagnostics["sums"]
    if sums != [1, 0, Fraction(-4, 9)] or reps[W_BINOMIAL].diagnostics["witness"] != 2:
        fails.append(f"binomial sums {sums}")
    # the limit sequence strictly decreases without bound from m = 1 on
    limit_seq = mixture_binomial_sums(TATARSKIJ_COEFFS, 60)
    decreasing = all(b < a for a, b in zip(limit_seq[1:], limit_seq[2:]))
    if reps[W_LIMIT].diagnostics["limit"] != "-inf" or not decreasing or limit_seq[-1] > -1e6:
        fails.append(f"limit {reps[W_LIMIT].diagnostics['limit']}, T_60 = {float(limit_seq[-1]):.3g}")
    if elapsed >= 1.0:
        fails.append(f"runtime {elapsed:.2f} s")
    report(1, "Tatarskij golden values, exact path", fails,
           f"sum 5/3, T = 1, 0, -4/9, witness 2, limit -inf, {elapsed * 1e3:.0f} ms")


def test_2_tatarskij_grid(report):
    t0 = time.perf_counter()
    w = build_tatarskij()
    sp = StarPowers(w)
    grid = run_phase_criteria(w)
    elapsed = time.perf_counter() - t0
    exact = {r.criterion_id: r.verdict for r in mixture_criteria(OrthogonalMixture(1.0, TATARSKIJ_COEFFS))}
    fails = []
    norm = float(w.integral())
    if abs(norm - 1) > 1e-6:
        fails.append(f"int W = {norm!r}")
    sq = sp.integral(2)
    if abs(sq * SCALE - 1) > 2e-3:
        fails.append(f"int W*W = {sq!r}")
    tsum = grid[W_TRACE_SQRT].diagnostics["trace_sqrt_sum"]
    if abs(tsum / (5 / 3 / SCALE) - 1) > 5e-3:
        fails.append(f"square-root sum {tsum!r}")
    sums = grid[W_BINOMIAL].diagnostics["sums"]
    if len(sums) < 3 or abs(sums[2] + 4 / 9) > 5e-3:
        fails.append(f"T_2 = {sums[2] if len(sums) > 2 else None!r}")
    for cid in (W_TRACE_SQRT, W_BINOMIAL, W_LIMIT, W_PURE):
        if grid[cid].verdict != exact[cid]:
            fails.append(f"{cid}: grid {grid[cid].verdict} vs exact {exact[cid]}")
    if elapsed >= 60:
        fails.append(f"runtime {elapsed:.1f} s")
    report(2, "Tatarskij golden values, 256x256 grid", fails,
           f"sum x 2 pi hbar = {tsum * SCALE:.7f}, T_2 = {sums[2]:.7f}, {elapsed:.2f} s")


def test_3_oracle_equivalence(report):
    cfg = ToleranceConfig(max_terms=30000)
    rng = np.random.default_rng(2024)
    t0 = time.perf_counter()
    fails, n_psd = [], 0
    for i in range(200):
        dim = int(rng.integers(2, 17))
        m = with_spectrum(random_trace_one_spectrum(dim, rng), rng)
        truth = psd_oracle(m, 1e-8)
        n_psd += truth
        assert hs_norm_sq(m) <= 1 + 1e-12
        for cid in C.POSITIVITY_CRITERIA:
            rep = C.run_criterion(cid, m, cfg)
            if rep.verdict != (C.ACCEPT if truth else C.REJECT):
                fails.append(f"matrix {i} (dim {dim}, psd={truth}): {cid} -> {rep.verdict}")
    elapsed = time.perf_counter() - t0
    if not 0 < n_psd < 200:
        fails.append(f"sign mix degenerate: {n_psd} PSD of 200")
    if elapsed >= 120:
        fails.append(f"runtime {elapsed:.1f} s")
    report(3, "positivity criteria agree with the spectral oracle", fails,
           f"200 matrices, {n_psd} PSD, {len(C.POSITIVITY_CRITERIA)} criteria each, "
           f"{len(fails)} disagreements, {elapsed:.1f} s")


def test_4_sqrt_series_fidelity(report):
    cfg = ToleranceConfig(max_terms=2000)
    rng = np.random.default_rng(4)
    fails, worst = [], 0.0
    for i in range(50):
        dim = int(rng.integers(1, 13))
        a = random_psd(dim, rng, 0.01, 0.99)
        b, rep = sqrt_series(a, cfg)
        err_sq = np.linalg.norm(b @ b - a)
        err_or = np.linalg.norm(b - sqrt_oracle(a))
        worst = max(worst, err_sq, err_or)
        if rep.status != "converged" or err_sq > 1e-6 or err_or > 1e-6:
            fails.append(f"matrix {i}: {rep.status}, |B^2-A| {err_sq:.2e}, |B-sqrt A| {err_or:.2e}")
    report(4, "square-root series fidelity", fails,
           f"50 matrices, spectrum in [0.01, 0.99], worst error {worst:.2e}")


def test_5_pure_classification(report):
    rng = np.random.default_rng(5)
    fails = []
    for i in range(40):
        dim = int(rng.integers(1, 17))
        p = random_projector(dim, rng)
        for check in (C.check_pure_finite, C.check_pure_infinite):
            rep = check(p)
            if not rep.accepted:
                fails.append(f"projector {i} (dim {dim}): {rep.criterion_id} {rep.first_failure}")
    mixed = C.check_pure_infinite(np.diag([0.5, 0.5]))
    hs = mixed.check("hs_norm_sq_eq_1")
    if mixed.accepted or hs.passed or abs(hs.value - 0.5) > 1e-12:
        fails.append(f"diag(1/2, 1/2): hs_norm_sq check {hs}")
    w0 = fock_wigner(0)
    pure = criterion_w_pure(w0)
    rel = pure.check("star_idempotent").value
    if not pure.accepted or rel > 1e-3:
        fails.append(f"Fock-0 grid: {pure.verdict}, relative defect {rel:.2e}")
    report(5, "pure-state classification", fails,
           f"40 rank-1 projectors, diag(1/2,1/2) hs = {hs.value}, Fock-0 defect {rel:.1e}")


def _random_gaussian(rng):
    qq, pp = DEFAULT_GRID.mesh()
    a, b, c = rng.normal(size=3)
    q0, p0 = rng.uniform(-1, 1, size=2)
    width = rng.uniform(0.5, 1.0)
    env = np.exp(-((qq - q0) ** 2 + (pp - p0) ** 2) / (2 * width**2))
    return WignerGrid(DEFAULT_GRID, 1.0, (a + b * (qq - q0) + c * (pp - p0)) * env)


def test_6_moyal_identities(report):
    rng = np.random.default_rng(6)
    dqdp = DEFAULT_GRID.dq * DEFAULT_GRID.dp
    one = WignerGrid.constant(1.0)
    worst = {"unit": 0.0, "trace": 0.0, "assoc": 0.0, "proj": 0.0}
    funcs = [_random_gaussian(rng) for _ in range(4)] + [fock_wigner(3), build_tatarskij()]
    for f in funcs:
        err = max(np.abs((moyal_star(f, one) - f).values).max(),
                  np.abs((moyal_star(one, f) - f).values).max())
        worst["unit"] = max(worst["unit"], err)
    for _ in range(4):
        f, g = _random_gaussian(rng), _random_gaussian(rng)
        plain = np.sum(f.values * g.values) * dqdp
        star = moyal_star(f, g).integral()
        worst["trace"] = max(worst["trace"], abs(star - plain) / abs(plain))
    for _ in range(2):
        f, g, h = (_random_gaussian(rng) for _ in range(3))
        left = moyal_star(moyal_star(f, g), h)
        right = moyal_star(f, moyal_star(g, h))
        worst["assoc"] = max(worst["assoc"], (left - right).l2_norm() / left.l2_norm())
    fock = [fock_wigner(n) for n in range(5)]
    for m in range(5):
        for n in range(5):
            val = SCALE * moyal_star(fock[m], fock[n]).integral()
            worst["proj"] = max(worst["proj"], abs(val - (m == n)))
    limits = {"unit": 1e-8, "trace": 1e-6, "assoc": 1e-5, "proj": 2e-3}
    fails = [f"{k}: {worst[k]:.2e} > {limits[k]:.0e}" for k in limits if worst[k] > limits[k]]
    report(6, "Moyal engine identities", fails,
           ", ".join(f"{k} {v:.1e}" for k, v in worst.items()))


def test_7_norm_chain(report):
    rng = np.random.default_rng(7)
    fails, min_slack = [], math.inf
    proxy_above_hs = 0
    for i in range(200):
        dim = int(rng.integers(1, 9))
        a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        op, hs, tr = spectral_norm(a), math.sqrt(hs_norm_sq(a)), trace_norm(a)
        slack = min(hs - op, tr - hs)
        min_slack = min(min_slack, slack)
        if slack < -1e-10:
            fails.append(f"matrix {i}: |A| {op}, |A|_2 {hs}, |A|_1 {tr}")
        proxy_above_hs += opnorm_proxy(a) > hs
    report(7, "norm chain |A| <= |A|_2 <= |A|_1", fails,
           f"200 matrices, min slack {min_slack:.2e}; column-sum bound exceeds |A|_2 "
           f"on {proxy_above_hs}, so the chain uses the spectral norm")


def test_8_kernel_path(report):
    relaxed = ToleranceConfig(hermiticity_tol=1e-4, sum_tol=1e-4, series_tol=1e-4)
    fails = []
    p0 = projector_kernel(0)
    tr = kernel_trace(p0).real
    if abs(tr - 1) > 1e-6:
        fails.append(f"kernel trace {tr!r}")
    m = kernel_to_matrix(p0)
    for check in (C.check_pure_finite, C.check_pure_infinite):
        rep = check(m, relaxed)
        if not rep.accepted:
            fails.append(f"ground projector: {rep.criterion_id} {rep.first_failure}")
    bad = kernel_to_matrix(mixture_kernel([2 / 3, 2 / 3, -1 / 3]))
    verdict = C.run_all(bad, criteria=[C.FINITE_DEF2, C.BINOMIAL_SUMS, C.TRACE_SQRT_SQUARE])
    if verdict.is_state:
        fails.append("three-projector mixture (2/3, 2/3, -1/3) was not rejected")
    report(8, "L2 kernel path", fails,
           f"trace {tr:.10f}, mixture witness {verdict.reports[C.BINOMIAL_SUMS].diagnostics['witness']}")
