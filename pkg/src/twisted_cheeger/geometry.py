"""Measure/perimeter descriptors, the two-set quotient and ball pairs.

Sets are represented only by ``(measure, perimeter)``; disjointness of the
two sets in a pair is an assumption of the model and is not checked.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .mathcore import DomainError, check_dim, check_exponent, f


def unit_ball_volume(n: int) -> float:
    """Volume of the unit ball, by the recursion ``w_n = w_{n-2} * 2*pi/n``."""
    n = check_dim(n)
    w = 2.0 if n % 2 else math.pi
    for k in range(4 if n % 2 == 0 else 3, n + 1, 2):
        w *= 2.0 * math.pi / k
    return w


@dataclass(frozen=True)
class ShapeStats:
    measure: float
    perimeter: float
    geometric: bool = False

    def __post_init__(self):
        if not (self.measure > 0 and self.perimeter > 0):
            raise DomainError(
                f"measure and perimeter must be positive, got {self.measure}, {self.perimeter}"
            )

    def scaled(self, lam: float, n: int) -> "ShapeStats":
        """Stats of the image of the set under ``x -> lam * x``."""
        return ShapeStats(self.measure * lam**n, self.perimeter * lam ** (n - 1), self.geometric)

    def satisfies_isoperimetric(self, n: int, rtol: float = 1e-12) -> bool:
        bound = n * unit_ball_volume(n) ** (1.0 / n) * self.measure ** ((n - 1) / n)
        return self.perimeter >= bound * (1.0 - rtol)


@dataclass(frozen=True)
class ShapePair:
    first: ShapeStats
    second: ShapeStats

    def swapped(self) -> "ShapePair":
        return ShapePair(self.second, self.first)

    def scaled(self, lam: float, n: int) -> "ShapePair":
        return ShapePair(self.first.scaled(lam, n), self.second.scaled(lam, n))


@dataclass(frozen=True)
class BallPairConfig:
    dim: int
    r1: float
    r2: float

    def __post_init__(self):
        check_dim(self.dim)
        if not (self.r1 > 0 and self.r2 > 0):
            raise DomainError(f"radii must be positive, got {self.r1}, {self.r2}")

    def is_normalized(self, atol: float = 1e-12) -> bool:
        return abs(self.r1**self.dim + self.r2**self.dim - 1.0) <= atol

    def to_pair(self) -> ShapePair:
        return ShapePair(ball_stats(self.dim, self.r1), ball_stats(self.dim, self.r2))


def ball_stats(n: int, r: float) -> ShapeStats:
    if not r > 0:
        raise DomainError(f"radius must be positive, got {r}")
    w = unit_ball_volume(n)
    return ShapeStats(w * r**n, n * w * r ** (n - 1), geometric=True)


def quotient_Q(pair: ShapePair, q: float) -> float:
    """``(P1/|E1| + P2/|E2|) / (|E1|**(1-q) + |E2|**(1-q))**(1/q)``."""
    q = float(q)
    m1, m2 = pair.first.measure, pair.second.measure
    num = pair.first.perimeter / m1 + pair.second.perimeter / m2
    return num / (m1 ** (1.0 - q) + m2 ** (1.0 - q)) ** (1.0 / q)


def two_level_functional(pair: ShapePair, q: float) -> float:
    """Total variation over ``L^q`` norm of ``|E2| 1_{E1} - |E1| 1_{E2}``.

    The function has zero mean; its ratio coincides with :func:`quotient_Q`.
    """
    q = float(q)
    m1, p1 = pair.first.measure, pair.first.perimeter
    m2, p2 = pair.second.measure, pair.second.perimeter
    tv = m2 * p1 + m1 * p2
    return tv / (m2**q * m1 + m1**q * m2) ** (1.0 / q)


def homothety_exponent(n: int, q: float) -> float:
    """``Q(lam * pair) = lam**e * Q(pair)`` with ``e = (n(q-1) - q)/q < 0``."""
    return (n * (q - 1.0) - q) / q


def x_to_radii(n: int, x: float) -> BallPairConfig:
    n = check_dim(n)
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"x must be finite, got {x}")
    # log r1**n = -log(1 + e^{-2x}), log r2**n = -log(1 + e^{2x}), both without cancellation
    log_v1 = -_log1pexp(-2.0 * x)
    log_v2 = -_log1pexp(2.0 * x)
    return BallPairConfig(n, math.exp(log_v1 / n), math.exp(log_v2 / n))


def _log1pexp(t: float) -> float:
    return t + math.log1p(math.exp(-t)) if t > 0 else math.log1p(math.exp(t))


def radii_to_x(cfg: BallPairConfig) -> float:
    if not cfg.is_normalized():
        raise DomainError(
            f"radii not normalized: r1^n + r2^n = {cfg.r1**cfg.dim + cfg.r2**cfg.dim!r}"
        )
    n = cfg.dim
    return 0.5 * (n * math.log(cfg.r1) - n * math.log(cfg.r2))


def normalized_pair_quotient(n: int, q: float, x) -> float:
    """``Q`` of the normalized ball pair, via the reduced objective."""
    w = unit_ball_volume(n)
    return n * 2.0 ** (1.0 / n) * w ** (1.0 - 1.0 / q) * f(n, q, x)


def isoperimetric_replacement(pair: ShapePair, n: int) -> ShapePair:
    """Replace each set by the ball of the same measure."""
    n = check_dim(n)
    w = unit_ball_volume(n)

    def ball_of(s: ShapeStats) -> ShapeStats:
        return ball_stats(n, (s.measure / w) ** (1.0 / n))

    return ShapePair(ball_of(pair.first), ball_of(pair.second))


def cheeger_constant_bound(n: int) -> float:
    """``n * w_n**(1/n)``: lower bound of ``C_q(W) |W|**(1/q - (n-1)/n)``."""
    return n * unit_ball_volume(n) ** (1.0 / n)


def single_ball_cheeger(n: int, r: float, q: float) -> float:
    """``P(B)/|B|**(1/q) * |B|**(1/q - (n-1)/n)`` for one ball; scale free."""
    s = ball_stats(n, r)
    return s.perimeter / s.measure ** (1.0 / q) * s.measure ** (1.0 / q - (n - 1) / n)


def scale_invariant_optimum(n: int, q: float, fmin: float) -> float:
    """Optimal dilation-invariant value ``K_q(W) |W|**(1/q - (n-1)/n)``.

    ``fmin`` is the minimum over ``x`` of the reduced objective.
    """
    check_exponent(n, q)
    if not fmin > 0:
        raise DomainError(f"fmin must be positive, got {fmin}")
    return n * 2.0 ** (1.0 / n) * unit_ball_volume(n) ** (1.0 / n) * fmin


def random_geometric_pair(rng: np.random.Generator, n: int, inflate_max: float = 3.0) -> ShapePair:
    """Random pair whose perimeters satisfy the isoperimetric inequality."""
    w = unit_ball_volume(n)
    out = []
    for _ in range(2):
        m = float(np.exp(rng.uniform(-4.0, 4.0)))
        base = n * w ** (1.0 / n) * m ** ((n - 1) / n)
        out.append(ShapeStats(m, base * float(rng.uniform(1.0, inflate_max)), geometric=True))
    return ShapePair(*out)
