"""Acceptance criteria, each at its stated tolerance.

Every test records one ``PASS``/``FAIL`` line; the lines are printed as the
suite runs and again in a summary section at the end of the session.
Run directly (``python tests/test_acceptance.py``) to get only the lines.
"""
import math
import time

import numpy as np
import pytest

from twisted_cheeger import cli
from twisted_cheeger import geometry as geo
from twisted_cheeger import mathcore as mc
from twisted_cheeger import optimize as opt
from twisted_cheeger import verify as ver

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script
    ACCEPTANCE_LINES = []


def record(name, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'}  {name}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line, flush=True)
    assert ok, line


def xbar_curve(n, qs):
    return np.array([s.x_bar for s in opt.minimizer_curve(n, qs)])


# ---------------------------------------------------------------------------


def test_threshold_n2():
    q = opt.threshold(2).q_tilde
    record("threshold n=2", abs(q - 1.75) <= 1e-9, f"q_tilde={q!r}, |q-7/4|={abs(q - 1.75):.2e} (tol 1e-9)")


def test_threshold_bounds():
    bad, vals = [], []
    for n in range(3, 11):
        q = opt.threshold(n).q_tilde
        vals.append(f"{n}:{q:.10f}")
        if not 1 + 1 / n < q < 1 + 1 / n + 1 / n**2:
            bad.append(n)
    record("threshold bounds n=3..10", not bad, f"q_tilde {' '.join(vals)}; outside: {bad}")


def test_coexisting_minimizers_and_jump():
    worst_gap, worst_ratio, bad = 0.0, math.inf, []
    for n in range(3, 11):
        t = opt.threshold(n)
        xt = t.minimizers_at_threshold[1]
        gap = abs(float(mc.f(n, t.q_tilde, xt)) - 1.0)
        # Delta q = 1e-4 grid straddling the threshold
        qs = t.q_tilde + 1e-4 * (np.arange(-20, 21) + 0.5)
        jump = np.max(np.diff(xbar_curve(n, qs)))
        worst_gap = max(worst_gap, gap)
        worst_ratio = min(worst_ratio, jump / xt)
        if not (gap <= 1e-9 and xt > 0.01 and jump >= xt / 2):
            bad.append(n)
    record(
        "coexistence and jump n=3..10",
        not bad,
        f"max |f(x~)-1|={worst_gap:.1e} (tol 1e-9), min jump/x~={worst_ratio:.3f} (need >= 0.5); failing n: {bad}",
    )


def test_n2_curve():
    # zeros and monotonicity on the whole interval
    qs = np.linspace(1.0, 2.0 - 1e-9, 2001)
    xb = xbar_curve(2, qs)
    zero_ok = bool(np.all(xb[qs <= 1.75] == 0))
    mono_ok = bool(np.all(np.diff(xb) >= 0))
    # continuity across 7/4: max consecutive difference on [1.7, 1.8] under refinement
    maxdiff = []
    for dq in (1e-2, 1e-3, 1e-4):
        grid = 1.7 + dq * np.arange(round(0.1 / dq) + 1)
        maxdiff.append(float(np.max(np.diff(xbar_curve(2, grid)))))
    ratios = [maxdiff[i + 1] / maxdiff[i] for i in range(2)]
    cont_ok = all(r <= 0.2 for r in ratios)
    record(
        "n=2 minimizer curve",
        zero_ok and mono_ok and cont_ok,
        f"zero for q<=7/4: {zero_ok}; nondecreasing: {mono_ok}; "
        f"max diffs {', '.join(f'{d:.4f}' for d in maxdiff)} ratios {', '.join(f'{r:.3f}' for r in ratios)} (need <= 0.2)",
    )


def test_second_derivative_closed_form():
    rng = np.random.default_rng(ver.DEFAULT_SEED)
    worst = 0.0
    h = 1e-5
    for _ in range(100):
        n = int(rng.integers(2, 11))
        q = float(rng.uniform(1.0, n / (n - 1)))
        exact = 1 + 1 / n + 1 / n**2 - q
        # (f(h) - 2 f(0) + f(-h)) / h^2 with f - 1 formed exactly through expm1
        num = (np.expm1(mc.log_f(n, q, h)) + np.expm1(mc.log_f(n, q, -h))) / h**2
        rel = abs(num - exact) / abs(exact)
        worst = max(worst, rel)
    record("second derivative at 0", worst <= 1e-6, f"max rel err {worst:.2e} over 100 (n,q) (tol 1e-6)")


def test_cubic_coefficient():
    r = ver.check_claim("claim6")
    n3 = mc.cubic_coefficient_at_qbar(3)
    ok = r.passed and n3 == pytest.approx(-416 / 9477, rel=1e-15)
    record("cubic coefficient n=3..12", ok, f"{r.details}; n=3 value {n3!r} vs -416/9477={-416 / 9477!r}")


def test_seven_quarters_factorization():
    x = np.linspace(0.02, 20.0, 1000)
    a = mc.A(2, 1.75, x)
    rhs = ver.a2_seven_quarters_factored(x)
    rel = float(np.max(np.abs(a - rhs) / np.abs(rhs)))
    dom = bool(np.all(a > 2 * np.sinh(x / 4) ** 3))
    record("A_2 factorization at q=7/4", rel <= 1e-12 and dom, f"max rel err {rel:.2e} (tol 1e-12); dominates 2 sinh^3(x/4): {dom}")


def test_three_sinh_zero_count():
    t0 = time.perf_counter()
    r = ver.check_claim("lemma33", n_draws=10_000, xmax=50.0)
    dt = time.perf_counter() - t0
    record("three-sinh zero count", r.passed and dt < 60, f"{r.details}; {dt:.1f} s (limit 60 s)")


def test_reduction_identity():
    r = ver.check_claim("reduction", n_pairs=10_000, rtol=1e-12)
    record("two-level reduction identity", r.passed, r.details)


def test_cross_module_identity():
    worst = 0.0
    for n in range(2, 9):
        for q in np.linspace(1.0, n / (n - 1) - 1e-6, 9):
            for x in np.linspace(-15, 15, 31):
                direct = geo.quotient_Q(geo.x_to_radii(n, x).to_pair(), q)
                reduced = geo.normalized_pair_quotient(n, q, x)
                worst = max(worst, abs(direct - reduced) / reduced)
    record("ball pair quotient vs reduced objective", worst <= 1e-12, f"max rel err {worst:.2e} on 7x9x31 grid (tol 1e-12)")


def test_cheeger_bound():
    viol, worst_eq = [], 0.0
    for n in range(2, 11):
        bound = geo.cheeger_constant_bound(n)
        for q in np.linspace(1.0, n / (n - 1) - 1e-6, 25):
            J = geo.scale_invariant_optimum(n, q, opt.global_min(n, q).f_star)
            if J < bound:
                viol.append((n, q))
            for r in (0.5, 1.0, 3.0):
                worst_eq = max(worst_eq, abs(geo.single_ball_cheeger(n, r, q) / bound - 1))
    record("Cheeger lower bound", not viol and worst_eq <= 1e-12, f"violations {len(viol)}; single-ball max rel dev {worst_eq:.1e} (tol 1e-12)")


def test_gradient_suite():
    worst_x = worst_q = 0.0
    h = 1e-5
    xs = np.linspace(-10, 10, 1001)
    for n in (2, 3, 4, 6, 10):
        for q in np.linspace(1.0, n / (n - 1) - 1e-3, 8):
            an = mc.dfdx(n, q, xs)
            num = (mc.f(n, q, xs + h) - mc.f(n, q, xs - h)) / (2 * h)
            worst_x = max(worst_x, float(np.max(np.abs(num - an) / np.maximum(np.abs(an), 1e-4))))
            if q - h >= 1.0:
                aq = mc.dlogf_dq(n, q, xs)
                nq = (mc.log_f(n, q + h, xs) - mc.log_f(n, q - h, xs)) / (2 * h)
                worst_q = max(worst_q, float(np.max(np.abs(nq - aq) / np.maximum(np.abs(aq), 1e-4))))
    record(
        "gradient suite",
        worst_x <= 1e-6 and worst_q <= 1e-6,
        f"dfdx max rel err {worst_x:.1e}, dlogf/dq max rel err {worst_q:.1e} (tol 1e-6, floor 1e-4)",
    )


def test_degeneration():
    seqs, ok = [], True
    for n in (2, 3, 4):
        qc = n / (n - 1)
        xb = [s.x_bar for s in opt.minimizer_curve(n, [qc - 1e-2, qc - 1e-3, qc - 1e-4])]
        seqs.append(f"n={n}: " + " < ".join(f"{v:.3f}" for v in xb))
        ok &= xb[0] < xb[1] < xb[2]
        x = np.linspace(0.1, 30, 300)
        fs = np.array([mc.f(n, qc - d, x) for d in (1e-1, 1e-2, 1e-3, 1e-4, 1e-6)])
        err = np.abs(fs - mc.f_star(n, x))
        ok &= bool(np.all(np.diff(fs, axis=0) < 0) and np.all(np.diff(err, axis=0) < 0))
    record("degeneration toward one ball", bool(ok), "; ".join(seqs) + "; f decreases to f_star pointwise")


def test_grid_argmin_agreement():
    rng = np.random.default_rng(ver.DEFAULT_SEED)
    t0 = time.perf_counter()
    worst, bad = 0.0, []
    for _ in range(50):
        n = int(rng.integers(2, 11))
        q = float(rng.uniform(1.0, n / (n - 1) - 1e-3))
        r = opt.global_min(n, q)
        xg, fg, h = opt.grid_argmin(n, q)
        worst = max(worst, abs(r.x_star - xg) / h)
        if abs(r.x_star - xg) > h or r.f_star > fg * (1 + 1e-15):
            bad.append((n, q))
    dt = time.perf_counter() - t0
    record("minimizer vs 1e6-point grid", not bad and dt < 120, f"max |x*-x_grid|/h={worst:.2f}; failures {len(bad)}; {dt:.1f} s (limit 120 s)")


if __name__ == "__main__":
    import sys

    failed = 0
    for name, fn in list(globals().items()):
        if name.startswith("test_") and callable(fn):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
