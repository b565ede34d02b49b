"""Reduced one-dimensional objective for normalized pairs of balls.

For a pair of disjoint balls with radii ``r1**n + r2**n == 1`` the twisted
Cheeger quotient is, up to the constant ``n * 2**(1/n) * omega_n**(1 - 1/q)``,

    f(x) = cosh(x)**(1/q + 1/n - 1) * cosh(x/n) * cosh(x*(q - 1))**(-1/q)

with ``x = 0.5 * log(r1**n / r2**n)``.  Every power of ``cosh`` is evaluated
through :func:`log_cosh` so that nothing overflows for large ``|x|``.

All functions accept scalars or numpy arrays for ``x``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

LOG2 = math.log(2.0)
# below this argument sinh is evaluated directly (no overflow, full relative accuracy)
SINH_SAFE = 300.0


class DomainError(ValueError):
    """Raised when an argument lies outside the admissible range."""


def check_dim(n) -> int:
    if isinstance(n, bool) or int(n) != n or n < 2:
        raise DomainError(f"dimension must be an integer >= 2, got {n!r}")
    return int(n)


def critical_exponent(n: int) -> float:
    """Return ``1* = n / (n - 1)``."""
    n = check_dim(n)
    return n / (n - 1)


def check_exponent(n: int, q: float) -> float:
    n = check_dim(n)
    q = float(q)
    if not (1.0 <= q < n / (n - 1)):
        raise DomainError(
            f"exponent q={q!r} outside [1, n/(n-1)) = [1, {n / (n - 1)!r}) for n={n}"
        )
    return q


@dataclass(frozen=True)
class Exponent:
    """An admissible exponent ``q`` in ``[1, n/(n-1))`` for dimension ``n``."""

    q: float
    n: int

    def __post_init__(self):
        object.__setattr__(self, "n", check_dim(self.n))
        object.__setattr__(self, "q", check_exponent(self.n, self.q))

    @property
    def critical(self) -> float:
        return self.n / (self.n - 1)


def log_cosh(x):
    """``log(cosh(x))`` to full relative accuracy for every finite ``x``.

    Small arguments use ``log1p(2 sinh(x/2)**2)`` (no cancellation near 0),
    large ones ``|x| + log1p(exp(-2|x|)) - log 2`` (no overflow).
    """
    ax = np.abs(x)
    small = ax < 20.0
    s = np.sinh(0.5 * np.where(small, ax, 0.0))
    return np.where(small, np.log1p(2.0 * s * s), ax + np.log1p(np.exp(-2.0 * ax)) - LOG2)[()]


def _log_abs_sinh(x):
    ax = np.abs(x)
    with np.errstate(divide="ignore"):
        return ax + np.log1p(-np.exp(-2.0 * ax)) - LOG2


def log_f(n: int, q: float, x):
    q = check_exponent(n, q)
    a = 1.0 / q + 1.0 / n - 1.0
    return a * log_cosh(x) + log_cosh(np.divide(x, n)) - log_cosh(np.multiply(x, q - 1.0)) / q


def f(n: int, q: float, x):
    """The reduced objective ``f_n(x, q)``; equals 1 at ``x = 0``."""
    return np.exp(log_f(n, q, x))


def growth_rate(n: int, q: float) -> float:
    """Asymptotic slope of ``log f`` as ``|x| -> inf``; positive for ``q < 1*``."""
    q = check_exponent(n, q)
    return 2.0 * (1.0 / q + 1.0 / n - 1.0)


def sinh_terms(n: int, q: float):
    """Coefficients and frequencies of the three sinh terms making up ``A``."""
    q = check_exponent(n, q)
    coeffs = (1.0 / n + 1.0 / q - 1.0, 1.0 / n, -(1.0 - 1.0 / q))
    freqs = (q + 1.0 / n, 2.0 - q + 1.0 / n, q - 1.0 / n)
    return coeffs, freqs


def _scaled_tail(coeffs, freqs, ax):
    """``sum coef * sinh(freq * ax) * exp(-max_freq * ax)`` for large ``ax >= 0``."""
    m = freqs[0]
    # sinh(fr x) e^{-m x} = (e^{(fr-m)x} - e^{-(fr+m)x}) / 2
    return sum(cf * 0.5 * (np.exp((fr - m) * ax) - np.exp(-(fr + m) * ax)) for cf, fr in zip(coeffs, freqs))


def _a_small(n, q, coeffs, freqs, x):
    """Direct sum for moderate ``|x|``; odd Taylor series when ``(q + 1/n)|x| <= 1``."""
    direct = sum(cf * np.sinh(fr * x) for cf, fr in zip(coeffs, freqs))
    # near 0 the three terms cancel to O(x^3); the linear coefficient of the
    # series is taken from its closed form 2 (1 + 1/n + 1/n^2 - q)
    small = np.abs(x) * freqs[0] <= 1.0
    if not np.any(small):
        return direct
    xs = np.where(small, x, 0.0)
    x2 = xs * xs
    series = 2.0 * d2fdx2_at_zero(n, q) * xs
    term = xs
    for k in range(3, 24, 2):
        term = term * x2 / ((k - 1) * k)
        series = series + sum(cf * fr**k for cf, fr in zip(coeffs, freqs)) * term
    return np.where(small, series, direct)


def A(n: int, q: float, x):
    """Sinh combination whose sign is the sign of ``df/dx``.

    Overflows to ``+-inf`` once ``(q + 1/n)*|x|`` passes ~710; use
    :func:`A_scaled` for sign information at large ``x``.
    """
    coeffs, freqs = sinh_terms(n, q)
    x = np.asarray(x, dtype=float)
    m = freqs[0]
    ax = np.abs(x)
    moderate = ax * m < SINH_SAFE
    out = _a_small(n, q, coeffs, freqs, np.where(moderate, x, 0.0))
    if np.all(moderate):
        return out
    with np.errstate(over="ignore"):
        big = np.sign(x) * _scaled_tail(coeffs, freqs, np.where(moderate, SINH_SAFE, ax)) * np.exp(m * ax)
    return np.where(moderate, out, big)


def A_scaled(n: int, q: float, x):
    """``A(x) * exp(-(q + 1/n) |x|)``: same sign as ``A``, never overflows."""
    coeffs, freqs = sinh_terms(n, q)
    x = np.asarray(x, dtype=float)
    m = freqs[0]
    ax = np.abs(x)
    moderate = ax * m < SINH_SAFE
    xs = np.where(moderate, ax, 0.0)
    direct = _a_small(n, q, coeffs, freqs, xs) * np.exp(-m * xs)
    scaled = _scaled_tail(coeffs, freqs, np.where(moderate, SINH_SAFE, ax))
    return np.sign(x) * np.where(moderate, direct, scaled)


def log_c(n: int, q: float, x):
    q = check_exponent(n, q)
    return (
        -LOG2
        - (1.0 / q + 1.0) * log_cosh(np.multiply(x, q - 1.0))
        + (1.0 / q + 1.0 / n - 2.0) * log_cosh(x)
    )


def c(n: int, q: float, x):
    """Positive prefactor with ``df/dx = c * A``."""
    return np.exp(log_c(n, q, x))


def dfdx(n: int, q: float, x):
    """Analytic ``df/dx`` as ``c * A``, assembled in log space."""
    q = check_exponent(n, q)
    x = np.asarray(x, dtype=float)
    m = q + 1.0 / n
    s = A_scaled(n, q, x)
    with np.errstate(divide="ignore"):
        mag = np.exp(log_c(n, q, x) + m * np.abs(x) + np.log(np.abs(s)))
    return np.sign(s) * mag


def d2fdx2_at_zero(n: int, q: float) -> float:
    """Closed form of ``f''(0) = 1 + 1/n + 1/n**2 - q``, rounded once.

    Evaluated exactly for the given binary ``q`` so that its sign is right
    even when ``q`` is the nearest double to ``1 + 1/n + 1/n**2``.
    """
    q = check_exponent(n, q)
    return float(1 + Fraction(1, n) + Fraction(1, n * n) - Fraction(q))


def qbar(n: int) -> float:
    """Smallest double ``>= 1 + 1/n + 1/n**2`` (where ``f''(0)`` changes sign)."""
    n = check_dim(n)
    exact = 1 + Fraction(1, n) + Fraction(1, n * n)
    v = float(exact)
    return v if Fraction(v) >= exact else math.nextafter(v, math.inf)


def d3A_at_zero(n: int, q: float) -> float:
    """Third derivative of ``A`` at the origin, ``sum coef * freq**3``."""
    coeffs, freqs = sinh_terms(n, q)
    return sum(cf * fr**3 for cf, fr in zip(coeffs, freqs))


def cubic_coefficient_at_qbar(n: int) -> float:
    """Closed form of ``A'''(0)`` at ``q = 1 + 1/n + 1/n**2``."""
    n = check_dim(n)
    return 4.0 * (-(n**5) + 3 * n**3 + 5 * n**2 + 4 * n + 1) / (n**6 * (n**2 + n + 1))


def dlogf_dq(n: int, q: float, x):
    """Partial derivative of ``log f`` with respect to ``q``."""
    q = check_exponent(n, q)
    x = np.asarray(x, dtype=float)
    t = x * (q - 1.0)
    return -(log_cosh(x) - log_cosh(t)) / q**2 - x * np.tanh(t) / q


def f_star(n: int, x):
    """Pointwise limit of ``f(n, q, x)`` as ``q -> n/(n-1)``."""
    n = check_dim(n)
    return np.exp(log_cosh(np.divide(x, n)) + (1.0 / n - 1.0) * log_cosh(np.divide(x, n - 1)))


def dfstar_dx(n: int, x):
    n = check_dim(n)
    x = np.asarray(x, dtype=float)
    u = x / (n * n - n)
    mag = np.exp(_log_abs_sinh(u) + (1.0 / n - 2.0) * log_cosh(x / (n - 1)))
    return -np.sign(u) * mag / n
