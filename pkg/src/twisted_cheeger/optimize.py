"""Structure-aware minimization of the reduced objective.

Stationary points of ``f(n, q, .)`` on ``[0, inf)`` are the origin plus the
positive zeros of ``A``, of which there are at most two.  They are located by
scanning the sign of ``A`` on a mixed geometric/linear grid and refining each
sign change by bisection.  The symmetry-breaking exponent is the supremum of
the ``q`` for which the origin is a global minimizer, found by bisection in
``q`` (the predicate is monotone because ``f`` decreases in ``q``).
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import mathcore as mc

SCAN_START = 1e-8
TOL_X = 1e-13
TIE_TOL = 1e-12
TOL_Q = 1e-12
MAX_BISECT = 400


class SolverError(RuntimeError):
    """Root refinement or threshold bisection did not behave as expected."""

    def __init__(self, message, state=None):
        super().__init__(message)
        self.state = state or {}


@dataclass(frozen=True)
class StationaryPoint:
    x: float
    value: float
    kind: str  # "min", "max" or "degenerate"


@dataclass
class MinimizationResult:
    x_star: float
    f_star: float
    stationary_points: list
    tie: Optional[float] = None

    @property
    def local_minima(self):
        return [p for p in self.stationary_points if p.kind == "min"]


@dataclass
class ThresholdResult:
    n: int
    q_tilde: float
    bracket: tuple
    iterations: int
    minimizers_at_threshold: list = field(default_factory=list)


@dataclass(frozen=True)
class CurveSample:
    q: float
    x_bar: float
    f_bar: float
    tie: bool = False


def bracket_xmax(n: int, q: float) -> float:
    """Return ``X`` such that ``f(n, q, x) > 1`` for every ``x >= X``.

    Uses ``log cosh t >= |t| - log 2`` and ``log cosh t <= |t|`` which give
    ``log f(x) >= gamma*x - (gamma/2 + 1) log 2`` with ``gamma`` the growth rate.
    """
    gamma = mc.growth_rate(n, q)
    x0 = (0.5 * gamma + 1.0) * mc.LOG2 / gamma
    X = 1.05 * x0
    # sanity scan; the bound above is rigorous so this should never enlarge X
    for _ in range(20):
        probe = np.geomspace(X, 4.0 * X, 256)
        if np.all(mc.log_f(n, q, probe) > 0.0):
            return float(X)
        X *= 2.0
    raise SolverError(f"could not certify growth of f beyond X for n={n}, q={q}", {"X": X})


def _a_sign_fn(n, q):
    """Scalar evaluator of ``A * exp(-m x)`` for x > 0 (fast path for bisection)."""
    coeffs, freqs = mc.sinh_terms(n, q)
    m = freqs[0]
    terms = list(zip(coeffs, freqs))

    def g(x):
        if x * m <= 1.0:
            return float(mc.A(n, q, x)) * math.exp(-m * x)
        if x * m < mc.SINH_SAFE:
            return sum(cf * math.sinh(fr * x) for cf, fr in terms) * math.exp(-m * x)
        return sum(cf * 0.5 * (math.exp((fr - m) * x) - math.exp(-(fr + m) * x)) for cf, fr in terms)

    return g


def _scan_grid(X: float, start: float = SCAN_START) -> np.ndarray:
    geo = np.geomspace(start, X, 3000)
    lin = np.linspace(start, min(X, 60.0), 4000)
    parts = [geo, lin]
    if X > 60.0:
        parts.append(np.linspace(60.0, X, 2000))
    return np.unique(np.concatenate(parts))


def _signs(n, q, xs):
    """Sign of ``A`` on ``xs``, with values inside the rounding floor set to 0."""
    coeffs, freqs = mc.sinh_terms(n, q)
    val = mc.A_scaled(n, q, xs)
    # magnitude of the individual terms, for a relative noise floor
    m = freqs[0]
    small = xs * m < mc.SINH_SAFE
    xsm = np.where(small, xs, 0.0)
    mag = np.zeros_like(xs)
    for cf, fr in zip(coeffs, freqs):
        direct = np.abs(cf * np.sinh(fr * xsm)) * np.exp(-m * xsm)
        big = np.abs(cf) * 0.5 * np.exp((fr - m) * np.where(small, mc.SINH_SAFE, xs))
        mag += np.where(small, direct, big)
    s = np.sign(val)
    s[np.abs(val) <= 1e-13 * mag] = 0.0
    return s


def sign_change_brackets(n: int, q: float, X: float, start: float = SCAN_START):
    """Brackets ``(lo, hi, s_lo)`` of sign changes of ``A`` on ``(start, X]``."""
    xs = _scan_grid(X, start)
    s = _signs(n, q, xs)
    keep = s != 0
    xk, sk = xs[keep], s[keep]
    idx = np.nonzero(sk[1:] != sk[:-1])[0]
    return [(float(xk[i]), float(xk[i + 1]), float(sk[i])) for i in idx]


def _bisect(g, lo, hi, s_lo, tol):
    for it in range(MAX_BISECT):
        width = hi - lo
        if width <= max(tol, 4.0 * math.ulp(hi)):
            return 0.5 * (lo + hi)
        mid = 0.5 * (lo + hi)
        gm = g(mid)
        if gm == 0.0:
            return mid
        if (gm > 0) == (s_lo > 0):
            lo = mid
        else:
            hi = mid
    raise SolverError(
        "bisection did not converge", {"lo": lo, "hi": hi, "iterations": MAX_BISECT}
    )


def origin_kind(n: int, q: float) -> str:
    d2 = mc.d2fdx2_at_zero(n, q)
    if d2 == 0.0:
        d3 = mc.d3A_at_zero(n, q)
        if d3 == 0.0:
            return "degenerate"
        return "min" if d3 > 0 else "max"
    return "min" if d2 > 0 else "max"


def stationary_points(n: int, q: float, tol: float = TOL_X, X: Optional[float] = None):
    """Stationary points of ``f(n, q, .)`` on ``[0, X]``, origin first.

    Positive points are sign changes of ``A``; a change from negative to
    positive is a local minimum of ``f``, the reverse a local maximum.
    """
    if not tol > 0:
        raise mc.DomainError(f"tol must be positive, got {tol}")
    q = mc.check_exponent(n, q)
    if X is None:
        X = bracket_xmax(n, q)
    g = _a_sign_fn(n, q)
    pts = [StationaryPoint(0.0, 1.0, origin_kind(n, q))]
    for lo, hi, s_lo in sign_change_brackets(n, q, X):
        x = _bisect(g, lo, hi, s_lo, tol)
        pts.append(StationaryPoint(x, float(mc.f(n, q, x)), "min" if s_lo < 0 else "max"))
    return pts


def global_min(n: int, q: float, tol: float = TOL_X, tie_tol: float = TIE_TOL) -> MinimizationResult:
    """Global minimizer of ``f(n, q, .)`` over ``[0, inf)``.

    When the origin and a positive local minimum agree to within ``tie_tol``
    both are reported: ``x_star`` is the lower one, ``tie`` the other.
    """
    pts = stationary_points(n, q, tol)
    mins = [p for p in pts if p.kind == "min" or (p.x == 0.0 and p.kind == "degenerate")]
    if not mins:
        raise SolverError(f"no local minimum found for n={n}, q={q}", {"points": pts})
    best = min(mins, key=lambda p: p.value)
    tie = None
    if pts[0] in mins:
        pos = [p for p in mins if p.x > 0]
        if pos:
            bp = min(pos, key=lambda p: p.value)
            if abs(bp.value - 1.0) <= tie_tol:
                tie = bp.x if best.x == 0.0 else 0.0
    return MinimizationResult(best.x, best.value, pts, tie)


def origin_is_global(n: int, q: float, tie_tol: float = TIE_TOL, tol: float = TOL_X) -> bool:
    """True when ``x = 0`` is a global minimizer of ``f(n, q, .)``."""
    pts = stationary_points(n, q, tol)
    if pts[0].kind == "max":
        return False
    return all(p.value >= 1.0 - tie_tol for p in pts[1:] if p.kind == "min")


def initial_threshold_bracket(n: int):
    n = mc.check_dim(n)
    if n == 2:
        return 1.5, 1.9
    return 1.0 + 1.0 / n, mc.qbar(n)


def threshold(n: int, tol_q: float = TOL_Q, tie_tol: float = TIE_TOL) -> ThresholdResult:
    """Symmetry-breaking exponent: sup of ``q`` with the origin a global minimizer."""
    if not tol_q > 0:
        raise mc.DomainError(f"tol_q must be positive, got {tol_q}")
    n = mc.check_dim(n)
    lo, hi = initial_threshold_bracket(n)
    if not origin_is_global(n, lo, tie_tol) or origin_is_global(n, hi, tie_tol):
        raise SolverError(
            f"threshold bracket [{lo}, {hi}] has wrong orientation for n={n}",
            {"lo": lo, "hi": hi},
        )
    it = 0
    while hi - lo > tol_q:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if origin_is_global(n, mid, tie_tol):
            lo = mid
        else:
            hi = mid
        it += 1
    # lo is the last exponent where the predicate held, so the tie is visible there
    qt = lo
    minimizers = [0.0]
    if n >= 3:
        pos = [p for p in stationary_points(n, qt) if p.kind == "min" and p.x > 0]
        if not pos:
            raise SolverError(f"no interior minimizer at threshold for n={n}", {"q": qt})
        minimizers.append(min(pos, key=lambda p: p.value).x)
    return ThresholdResult(n, qt, (lo, hi), it, minimizers)


def _curve_point(args):
    n, q, tol, tie_tol = args
    res = global_min(n, q, tol, tie_tol)
    if res.tie is not None:
        x = max(res.x_star, res.tie)
        return CurveSample(q, x, float(mc.f(n, q, x)), True)
    return CurveSample(q, res.x_star, res.f_star)


def minimizer_curve(
    n: int,
    q_grid: Sequence[float],
    tol: float = TOL_X,
    tie_tol: float = TIE_TOL,
    workers: Optional[int] = None,
):
    """Global minimizer ``x_bar(q)`` along an ascending grid of exponents.

    At a tie the interior minimizer is recorded and the sample flagged.
    ``workers > 1`` evaluates grid points in separate processes; the output
    order always follows ``q_grid``.
    """
    qs = [mc.check_exponent(n, q) for q in q_grid]
    if any(b < a for a, b in zip(qs, qs[1:])):
        raise mc.DomainError("q_grid must be sorted ascending")
    jobs = [(n, q, tol, tie_tol) for q in qs]
    if workers and workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            return list(ex.map(_curve_point, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    return [_curve_point(j) for j in jobs]


def grid_argmin(n: int, q: float, npts: int = 10**6, X: Optional[float] = None):
    """Brute-force argmin of ``f`` on a uniform grid over ``[0, X]``."""
    if X is None:
        X = bracket_xmax(n, q)
    xs = np.linspace(0.0, X, npts)
    lf = mc.log_f(n, q, xs)
    i = int(np.argmin(lf))
    return float(xs[i]), float(np.exp(lf[i])), X / (npts - 1)


def has_interior_critical_point(n: int, q: float) -> bool:
    return bool(sign_change_brackets(n, q, bracket_xmax(n, q)))


def fold_exponent(n: int, tol_q: float = 1e-10) -> float:
    """Smallest ``q`` at which ``f(n, q, .)`` acquires positive stationary points (``n >= 3``).

    Below it the origin is the only stationary point; between it and the
    threshold a local max/min pair exists with the origin still global.
    """
    n = mc.check_dim(n)
    if n < 3:
        raise mc.DomainError("the fold only occurs for n >= 3")
    lo, hi = 1.0 + 1.0 / n, threshold(n).q_tilde
    if has_interior_critical_point(n, lo) or not has_interior_critical_point(n, hi):
        raise SolverError("fold bracket has wrong orientation", {"lo": lo, "hi": hi})
    while hi - lo > tol_q:
        mid = 0.5 * (lo + hi)
        if has_interior_critical_point(n, mid):
            hi = mid
        else:
            lo = mid
    return hi
