"""Registry of falsifiable numerical checks of the symmetry-breaking results.

Each entry runs one property over a grid (seeded where random) and returns a
:class:`ClaimReport`; a report passes iff it carries no counterexamples.
"""
from __future__ import annotations

import inspect
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import geometry as geo
from . import mathcore as mc
from . import optimize as opt

DEFAULT_SEED = 20240611
SLACK = 1e-14
MAX_COUNTEREXAMPLES = 10


@dataclass
class ClaimReport:
    claim_id: str
    params: dict
    passed: bool
    details: str
    counterexamples: list = field(default_factory=list)

    def to_dict(self):
        return asdict(self)


class UnknownClaim(KeyError):
    pass


def _report(claim_id, params, bad, details):
    return ClaimReport(claim_id, params, not bad, details, bad[:MAX_COUNTEREXAMPLES])


def _q_grid(n, count, lo=1.0, hi=None):
    hi = mc.critical_exponent(n) - 1e-6 if hi is None else hi
    return np.linspace(lo, hi, count)


# ---------------------------------------------------------------------------
# sinh combinations


def _scaled_terms(coeffs, freqs, xs):
    """``coef * sinh(freq * x) * exp(-max_freq * x)`` per term, shape (..., 3, len(xs))."""
    coeffs = np.asarray(coeffs, dtype=float)[..., None]
    freqs = np.asarray(freqs, dtype=float)[..., None]
    m = np.max(freqs, axis=-2, keepdims=True)
    return coeffs * 0.5 * (np.exp((freqs - m) * xs) - np.exp(-(freqs + m) * xs))


def count_sign_changes(coeffs, freqs, xmax: float, npts: int = 4000, start: float = 1e-6):
    """Sign changes of ``sum_i a_i sinh(w_i x)`` on a grid over ``(0, xmax]``.

    ``coeffs`` and ``freqs`` have shape ``(3,)`` or ``(N, 3)``.  Values below a
    rounding floor relative to the term magnitudes count as zero and are skipped.
    """
    xs = np.unique(np.concatenate([np.geomspace(start, xmax, npts // 2), np.linspace(start, xmax, npts // 2)]))
    terms = _scaled_terms(coeffs, freqs, xs)
    val = terms.sum(axis=-2)
    floor = 1e-12 * np.abs(terms).sum(axis=-2)
    s = np.sign(val)
    s[np.abs(val) <= floor] = 0.0
    s = np.atleast_2d(s)
    counts = np.empty(s.shape[0], dtype=int)
    for i, row in enumerate(s):
        r = row[row != 0]
        counts[i] = np.count_nonzero(r[1:] != r[:-1])
    return counts if np.ndim(coeffs) == 2 else int(counts[0])


def sinh_combination_zeros(a, b, c, alpha, beta, gamma, xmax, npts: int = 4000, tol: float = 1e-13):
    """Positive zeros of ``a sinh(alpha x) + b sinh(beta x) + c sinh(gamma x)`` on ``(0, xmax]``.

    A dense grid locates sign changes; each is refined by bisection.  Grid
    cells where ``|A|`` has a local minimum without a sign change are
    resampled finely so that close pairs of zeros are not missed.
    """
    coeffs = np.array([a, b, c], dtype=float)
    freqs = np.array([alpha, beta, gamma], dtype=float)
    if np.any(freqs < 0):
        raise mc.DomainError("frequencies must be nonnegative")
    if not xmax > 0:
        raise mc.DomainError("xmax must be positive")
    # merge equal frequencies; the lemma is about a nontrivial combination
    merged = {}
    for cf, fr in zip(coeffs, freqs):
        if fr != 0.0:
            merged[fr] = merged.get(fr, 0.0) + cf
    if not any(v != 0.0 for v in merged.values()):
        raise mc.DomainError("trivial combination: all effective coefficients vanish")
    m = float(freqs.max())

    def g(x):
        return float(sum(cf * 0.5 * (math.exp((fr - m) * x) - math.exp(-(fr + m) * x)) for cf, fr in zip(coeffs, freqs)))

    xs = np.unique(np.concatenate([np.geomspace(1e-6, xmax, npts // 2), np.linspace(1e-6, xmax, npts // 2)]))
    terms = _scaled_terms(coeffs, freqs, xs)
    val = terms.sum(axis=0)
    floor = 1e-12 * np.abs(terms).sum(axis=0)
    # resample around interior local minima of |A| that do not change sign
    av = np.abs(val)
    dips = np.nonzero((av[1:-1] < av[:-2]) & (av[1:-1] < av[2:]) & (av[1:-1] > floor[1:-1]))[0] + 1
    if dips.size:
        extra = [np.linspace(xs[i - 1], xs[i + 1], 201) for i in dips]
        xs = np.unique(np.concatenate([xs, *extra]))
        terms = _scaled_terms(coeffs, freqs, xs)
        val = terms.sum(axis=0)
        floor = 1e-12 * np.abs(terms).sum(axis=0)
    s = np.sign(val)
    keep = (np.abs(val) > floor) & (s != 0)
    xk, sk = xs[keep], s[keep]
    zeros = []
    for i in np.nonzero(sk[1:] != sk[:-1])[0]:
        zeros.append(opt._bisect(g, float(xk[i]), float(xk[i + 1]), float(sk[i]), tol))
    return zeros


def lemma_sinh_zero_count(a, b, c, alpha, beta, gamma, xmax) -> int:
    """Number of positive zeros (sign changes) of a three-term sinh combination."""
    return len(sinh_combination_zeros(a, b, c, alpha, beta, gamma, xmax))


# ---------------------------------------------------------------------------
# individual checks


def check_claim1(n=(2, 3, 4, 5, 6), n_q=200):
    ns = [int(k) for k in np.atleast_1d(n)]
    bad = []
    hist = {}
    for nn in ns:
        for q in _q_grid(nn, n_q):
            X = 2.0 * opt.bracket_xmax(nn, q)
            zs = opt.sign_change_brackets(nn, q, X)
            pts = opt.stationary_points(nn, q, X=X)
            nmin = sum(p.kind == "min" for p in pts)
            npos_min = sum(p.kind == "min" and p.x > 0 for p in pts)
            hist[len(zs)] = hist.get(len(zs), 0) + 1
            if len(zs) > 2 or nmin > 2 or npos_min > 1:
                bad.append({"n": nn, "q": float(q), "zeros": len(zs), "minima": nmin})
    details = "positive zeros of A histogram: " + json.dumps({str(k): hist[k] for k in sorted(hist)})
    return _report("claim1", {"n": ns, "n_q": n_q}, bad, details)


def check_claim2(n=(2, 3, 4, 5, 6), n_samples=100, seed=DEFAULT_SEED, xmax=20.0):
    ns = [int(k) for k in np.atleast_1d(n)]
    rng = np.random.default_rng(seed)
    bad = []
    for nn in ns:
        qs_hi = mc.critical_exponent(nn) - 1e-6
        for _ in range(n_samples):
            x = float(rng.uniform(1e-3, xmax))
            q1, q2 = sorted(rng.uniform(1.0, qs_hi, size=2))
            if q2 - q1 < 1e-9:
                continue
            f1, f2 = float(mc.f(nn, q1, x)), float(mc.f(nn, q2, x))
            d1, d2 = float(mc.dfdx(nn, q1, x)), float(mc.dfdx(nn, q2, x))
            dq = float(mc.dlogf_dq(nn, q1, x))
            if f2 - f1 > SLACK * abs(f1) or d2 - d1 > SLACK * max(abs(d1), 1.0) or dq >= 0:
                bad.append({"n": nn, "x": x, "q1": float(q1), "q2": float(q2)})
    return _report(
        "claim2",
        {"n": ns, "n_samples": n_samples, "seed": seed, "xmax": xmax},
        bad,
        "f and df/dx strictly decrease in q; d log f / dq < 0",
    )


def a2_seven_quarters_factored(x):
    """``(2/7) sinh^3(x/4) (6 cosh x + 2 cosh(3x/2) - 1)``."""
    x = np.asarray(x, dtype=float)
    return (2.0 / 7.0) * np.sinh(x / 4.0) ** 3 * (6.0 * np.cosh(x) + 2.0 * np.cosh(1.5 * x) - 1.0)


def check_claim3(n_q=50, n_x=1000, x_id_max=20.0):
    bad = []
    for q in np.linspace(1.0, 1.75, n_q):
        X = opt.bracket_xmax(2, q)
        xs = opt._scan_grid(X)
        s = opt._signs(2, q, xs)
        if np.any(s < 0) or opt.origin_kind(2, q) != "min":
            bad.append({"q": float(q), "x": float(xs[np.argmax(s < 0)]) if np.any(s < 0) else 0.0})
    xs = np.linspace(x_id_max / n_x, x_id_max, n_x)
    lhs = mc.A(2, 1.75, xs)
    rhs = a2_seven_quarters_factored(xs)
    rel = np.abs(lhs - rhs) / np.abs(rhs)
    for i in np.nonzero((rel > 1e-12) | (rhs <= 2.0 * np.sinh(xs / 4.0) ** 3))[0]:
        bad.append({"identity_x": float(xs[i]), "rel": float(rel[i])})
    return _report(
        "claim3",
        {"n": 2, "n_q": n_q, "n_x": n_x, "x_id_max": x_id_max},
        bad,
        f"f_2 increasing for q <= 7/4; factorization max rel err {rel.max():.3e}",
    )


def check_claim4(n_q=100):
    bad = []
    for q in np.linspace(1.75, 2.0, n_q + 2)[1:-1]:
        pts = opt.stationary_points(2, q)
        pos = [p for p in pts[1:]]
        if pts[0].kind != "max" or len(pos) != 1 or pos[0].kind != "min":
            bad.append({"q": float(q), "points": [(p.x, p.kind) for p in pts]})
    return _report("claim4", {"n": 2, "n_q": n_q}, bad, "unique interior minimizer for 7/4 < q < 2")


def check_claim5(n=(3, 4, 5, 6, 7, 8, 9, 10), n_q=20, n_x=500):
    ns = [int(k) for k in np.atleast_1d(n) if k >= 3]
    bad = []
    for nn in ns:
        for q in np.linspace(1.0, 1.0 + 1.0 / nn, n_q):
            X = opt.bracket_xmax(nn, q)
            s = opt._signs(nn, q, opt._scan_grid(X))
            if np.any(s < 0) or opt.origin_kind(nn, q) != "min":
                bad.append({"n": nn, "q": float(q)})
        xs = np.linspace(-20.0, 20.0, n_x)
        closed = np.cosh(xs) ** (1.0 / (nn * nn + nn)) * np.cosh(xs / nn) ** (1.0 / (nn + 1))
        rel = np.abs(mc.f(nn, 1.0 + 1.0 / nn, xs) - closed) / closed
        if rel.max() > 1e-12:
            bad.append({"n": nn, "closed_form_rel": float(rel.max())})
    return _report("claim5", {"n": ns, "n_q": n_q, "n_x": n_x}, bad, "f_n increasing for q <= 1 + 1/n")


def cubic_numerator_shifted(m):
    """The numerator ``-n^5+3n^3+5n^2+4n+1`` rewritten in ``m = n - 3``."""
    return -(m**5) - 15 * m**4 - 87 * m**3 - 238 * m**2 - 290 * m - 104


def third_derivative_fd(func, h=1e-2):
    """Central five-point stencil for the third derivative at 0 (error O(h^2))."""
    return (func(2 * h) - 2 * func(h) + 2 * func(-h) - func(-2 * h)) / (2 * h**3)


def check_claim6(n=tuple(range(3, 13)), n_q=20, rtol=1e-6):
    ns = [int(k) for k in np.atleast_1d(n) if k >= 3]
    bad = []
    for nn in ns:
        qbar = mc.qbar(nn)
        # exact integer identity of the numerator polynomial
        num = -(nn**5) + 3 * nn**3 + 5 * nn**2 + 4 * nn + 1
        if num != cubic_numerator_shifted(nn - 3) or num >= 0:
            bad.append({"n": nn, "numerator": num})
        # Richardson-extrapolated finite differences of A at 0
        d3 = [third_derivative_fd(lambda t: float(mc.A(nn, qbar, t)), h) for h in (4e-3, 2e-3)]
        d3_fd = (4.0 * d3[1] - d3[0]) / 3.0
        closed = mc.cubic_coefficient_at_qbar(nn)
        if abs(d3_fd - closed) > rtol * abs(closed):
            bad.append({"n": nn, "d3A_fd": d3_fd, "closed": closed})
        h = 1e-3
        a0 = float(mc.A(nn, qbar, 0.0))
        a1 = (float(mc.A(nn, qbar, h)) - float(mc.A(nn, qbar, -h))) / (2 * h)
        a2 = (float(mc.A(nn, qbar, h)) - 2 * a0 + float(mc.A(nn, qbar, -h))) / h**2
        if max(abs(a0), abs(a1), abs(a2)) > 1e-6:
            bad.append({"n": nn, "A": a0, "dA": a1, "d2A": a2})
        for q in np.linspace(qbar, mc.critical_exponent(nn) - 1e-6, n_q):
            pts = opt.stationary_points(nn, q)
            pos = pts[1:]
            if pts[0].kind != "max" or len(pos) != 1 or pos[0].kind != "min":
                bad.append({"n": nn, "q": float(q), "points": [(p.x, p.kind) for p in pts]})
    return _report(
        "claim6",
        {"n": ns, "n_q": n_q, "rtol": rtol},
        bad,
        "origin is a local maximum for q >= 1 + 1/n + 1/n^2; cubic coefficient matches",
    )


def check_claim7(n=tuple(range(3, 11)), tol_q=opt.TOL_Q, tie_tol=opt.TIE_TOL):
    ns = [int(k) for k in np.atleast_1d(n) if k >= 3]
    bad = []
    rows = []
    for nn in ns:
        res = opt.threshold(nn, tol_q, tie_tol)
        lo, hi = 1.0 + 1.0 / nn, 1.0 + 1.0 / nn + 1.0 / nn**2
        xt = res.minimizers_at_threshold[-1]
        gap = float(mc.f(nn, res.q_tilde, xt)) - 1.0
        rows.append(f"n={nn}: q~={res.q_tilde:.15g}, x~={xt:.10g}")
        if not (lo < res.q_tilde < hi) or len(res.minimizers_at_threshold) != 2:
            bad.append({"n": nn, "q_tilde": res.q_tilde})
        if abs(gap) > 1e-9 or xt <= 0.01:
            bad.append({"n": nn, "x_tilde": xt, "gap": gap})
        for q in (res.q_tilde - 1e-6, res.q_tilde + 1e-6):
            r = opt.global_min(nn, q, tie_tol=tie_tol)
            if r.tie is not None:
                bad.append({"n": nn, "q": q, "tie": r.tie})
        if opt.global_min(nn, res.q_tilde - 1e-6).x_star != 0.0:
            bad.append({"n": nn, "below_threshold_positive": True})
    return _report("claim7", {"n": ns, "tol_q": tol_q, "tie_tol": tie_tol}, bad, "; ".join(rows))


def check_lemma33(n_draws=10_000, seed=DEFAULT_SEED, xmax=50.0, freq_max=3.0, npts=2000):
    rng = np.random.default_rng(seed)
    coeffs = rng.normal(size=(n_draws, 3))
    freqs = rng.uniform(0.0, freq_max, size=(n_draws, 3))
    counts = np.concatenate(
        [count_sign_changes(coeffs[i : i + 500], freqs[i : i + 500], xmax, npts) for i in range(0, n_draws, 500)]
    )
    bad = [
        {"coeffs": coeffs[i].tolist(), "freqs": freqs[i].tolist(), "zeros": int(counts[i])}
        for i in np.nonzero(counts > 2)[0]
    ]
    # closed-form instance: sinh(2x) - 3 sinh(x) vanishes at arccosh(3/2)
    z = sinh_combination_zeros(1.0, -3.0, 0.0, 2.0, 1.0, 0.0, xmax)
    if len(z) != 1 or abs(z[0] - math.acosh(1.5)) > 1e-12:
        bad.append({"closed_form_zeros": z})
    hist = np.bincount(counts)
    return _report(
        "lemma33",
        {"n_draws": n_draws, "seed": seed, "xmax": xmax, "freq_max": freq_max, "npts": npts},
        bad,
        "zero count histogram: " + json.dumps({str(k): int(v) for k, v in enumerate(hist)}),
    )


def check_cheeger_bound(n=tuple(range(2, 11)), n_q=50):
    ns = [int(k) for k in np.atleast_1d(n)]
    bad = []
    for nn in ns:
        bound = geo.cheeger_constant_bound(nn)
        for q in _q_grid(nn, n_q, hi=mc.critical_exponent(nn) - 1e-4):
            J = geo.scale_invariant_optimum(nn, q, opt.global_min(nn, q).f_star)
            if J < bound:
                bad.append({"n": nn, "q": float(q), "J": J, "bound": bound})
            single = geo.single_ball_cheeger(nn, 1.7, q)
            if abs(single - bound) > 1e-12 * bound:
                bad.append({"n": nn, "q": float(q), "single_ball": single})
    return _report("cheeger_bound", {"n": ns, "n_q": n_q}, bad, "J(n,q) >= n w_n^(1/n); single-ball equality")


def check_reduction(n_pairs=10_000, seed=DEFAULT_SEED, rtol=1e-12):
    rng = np.random.default_rng(seed)
    bad = []
    worst = 0.0
    for _ in range(n_pairs):
        n = int(rng.integers(2, 11))
        q = float(rng.uniform(1.0, mc.critical_exponent(n)))
        pair = geo.random_geometric_pair(rng, n)
        a, b = geo.two_level_functional(pair, q), geo.quotient_Q(pair, q)
        rel = abs(a - b) / abs(b)
        worst = max(worst, rel)
        if rel > rtol:
            bad.append({"n": n, "q": q, "pair": asdict(pair), "rel": rel})
    return _report(
        "reduction", {"n_pairs": n_pairs, "seed": seed, "rtol": rtol}, bad, f"max rel diff {worst:.3e}"
    )


def check_limit_qstar(n=(2, 3, 4), n_x=201, xmax=20.0, atol=1e-4):
    ns = [int(k) for k in np.atleast_1d(n)]
    bad = []
    xs = np.linspace(0.0, xmax, n_x)
    for nn in ns:
        qc = mc.critical_exponent(nn)
        qs = qc - np.array([1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6])
        vals = np.array([mc.f(nn, q, xs) for q in qs])
        fs = mc.f_star(nn, xs)
        # monotone decrease in q, bounded below by the limit
        if np.any(np.diff(vals, axis=0) > SLACK * vals[:-1]) or np.any(vals < fs * (1 - SLACK)):
            bad.append({"n": nn, "monotone": False})
        err = np.abs(vals[-1] - fs).max()
        if err > atol:
            bad.append({"n": nn, "limit_err": float(err)})
        if np.any(mc.dfstar_dx(nn, xs[1:]) >= 0):
            bad.append({"n": nn, "f_star_not_decreasing": True})
        xb = [opt.global_min(nn, qc - e).x_star for e in (1e-2, 1e-3, 1e-4)]
        if not (xb[0] < xb[1] < xb[2]):
            bad.append({"n": nn, "x_bar": xb})
    return _report("limit_qstar", {"n": ns, "n_x": n_x, "xmax": xmax, "atol": atol}, bad, "f -> f* monotonically as q -> 1*")


REGISTRY = {
    "claim1": check_claim1,
    "claim2": check_claim2,
    "claim3": check_claim3,
    "claim4": check_claim4,
    "claim5": check_claim5,
    "claim6": check_claim6,
    "claim7": check_claim7,
    "lemma33": check_lemma33,
    "cheeger_bound": check_cheeger_bound,
    "reduction": check_reduction,
    "limit_qstar": check_limit_qstar,
}


def check_claim(claim_id: str, **params) -> ClaimReport:
    """Run one registry entry; ``params`` override its defaults."""
    try:
        fn = REGISTRY[claim_id]
    except KeyError:
        raise UnknownClaim(f"unknown claim {claim_id!r}; known: {', '.join(REGISTRY)}") from None
    return fn(**params)


def run_all(claims=None, **overrides):
    """Run the registry (or a subset) in registry order.

    ``overrides`` are passed only to checks that accept the keyword.
    """
    ids = list(REGISTRY) if claims is None else list(claims)
    reports = []
    for cid in ids:
        if cid not in REGISTRY:
            raise UnknownClaim(f"unknown claim {cid!r}")
        sig = inspect.signature(REGISTRY[cid]).parameters
        kw = {k: v for k, v in overrides.items() if k in sig and v is not None}
        reports.append(check_claim(cid, **kw))
    return reports
