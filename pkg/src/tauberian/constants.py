"""Gamma, zeta(2), certified prime products and the leading constant A.

Products over primes are evaluated as compensated sums of logarithms. Each
local factor is formed exactly from integers and rounded to double once.

Tail bound: write factor = 1 + g(t) with g_1 = 0. For t <= 1/(P+1),
|g(t)| <= K t^2 with K = sum_{k>=2} |g_k| (divided by a lower bound on the
divisor when the factor is a quotient). Once K t^2 <= 1/2 we have
|log(1+g)| <= 2|g|, and sum_{p>P} p^-2 < 1/(P-1).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce

from .errors import ContractError
from .exact_algebra import (Poly, RationalLike, as_rational, euler_regularize,
                            format_rational, pole_order, reduced_factor)
from .sieve import primes_upto

DEFAULT_CUTOFF = 10 ** 6


def gamma(alpha: float) -> float:
    """Gamma at a positive real argument."""
    alpha = float(alpha)
    if not alpha > 0:
        raise ValueError(f"gamma is only supported for alpha > 0, got {alpha}")
    return math.gamma(alpha)


def zeta2() -> float:
    return math.pi ** 2 / 6


@dataclass(frozen=True)
class EulerProductSpec:
    """prod_{p <= cutoff} (factor(1/p) / divisor(1/p)) ** exponent."""

    factor: Poly
    exponent: int
    prime_cutoff: int
    divisor: Poly = field(default_factory=Poly.one)

    def __post_init__(self) -> None:
        if self.factor.coeff(0) != 1 or self.divisor.coeff(0) != 1:
            raise ValueError("local factors must have constant term 1")
        if self.prime_cutoff < 2:
            raise ValueError("prime cutoff must be at least 2")


@dataclass(frozen=True)
class ProductValue:
    value: float
    cutoff: int
    tail_bound: float
    log_value: float


def _integer_form(*polys: Poly) -> tuple[list[list[int]], int]:
    # Scale all polynomials by a common denominator and pad to one degree.
    deg = max(p.degree for p in polys)
    den = reduce(math.lcm, (c.denominator for p in polys for c in p.coeffs), 1)
    ints = [[int(p.coeff(k) * den) for k in range(deg + 1)] for p in polys]
    return ints, deg


def _horner_reversed(coeffs: list[int], p: int) -> int:
    # sum_k coeffs[k] * p^(deg-k) = p^deg * poly(1/p)
    acc = 0
    for c in coeffs:
        acc = acc * p + c
    return acc


def tail_constant(factor: Poly, divisor: Poly, cutoff: int) -> float:
    """K with |factor/divisor - 1| <= K t^2 for 0 <= t <= 1/(cutoff+1)."""
    numer = factor - divisor
    if numer.coeff(1) != 0:
        raise ContractError("product tail not certifiable (nonzero linear coefficient), extract zeta first")
    t_max = Fraction(1, cutoff + 1)
    d_min = 1 - sum(abs(c) for c in divisor.coeffs[1:]) * t_max
    if d_min <= 0:
        raise ContractError("divisor may vanish beyond the cutoff; raise the prime cutoff")
    return float(sum(abs(c) for c in numer.coeffs[2:]) / d_min)


def euler_product(spec: EulerProductSpec) -> ProductValue:
    """Truncated prime product with a rigorous bound on the log tail."""
    K = tail_constant(spec.factor, spec.divisor, spec.prime_cutoff)
    if K / (spec.prime_cutoff + 1) ** 2 > 0.5:
        raise ContractError(f"cutoff {spec.prime_cutoff} too small to certify the tail")
    tail = 2.0 * abs(spec.exponent) * K / (spec.prime_cutoff - 1)

    (num, den), deg = _integer_form(spec.factor, spec.divisor)
    logs = []
    for p in primes_upto(spec.prime_cutoff).tolist():
        a = _horner_reversed(num, p)
        b = _horner_reversed(den, p)
        if a == 0 or b == 0 or (a > 0) != (b > 0):
            raise ContractError(f"local factor is not positive at p = {p}")
        # (a - b) / b is correctly rounded by int true division
        logs.append(math.log1p((a - b) / b))
    log_value = spec.exponent * math.fsum(logs)
    return ProductValue(math.exp(log_value), spec.prime_cutoff, tail, log_value)


@dataclass(frozen=True)
class PoleData:
    """Profile of a pole of order l/m at s = d with leading constant A.

    ``tail_bound`` bounds |log A_true - log A|.
    """

    d: float
    l: int
    m: int
    alpha: float
    A: float
    c: Fraction | None = None
    cutoff: int | None = None
    tail_bound: float = 0.0

    def __post_init__(self) -> None:
        if self.l < 1 or self.m < 1:
            raise ValueError("l and m must be positive integers")
        if self.alpha != self.l / self.m:
            raise ValueError("alpha must equal l/m")
        if not (self.A > 0 and self.d > 0):
            raise ValueError("A and d must be positive")

    @classmethod
    def simple(cls, d: float, l: int, m: int, A: float, **kw) -> PoleData:
        return cls(d, l, m, l / m, A, **kw)

    def to_json(self) -> dict:
        return {"c": None if self.c is None else format_rational(self.c),
                "d": self.d, "l": self.l, "m": self.m, "alpha": self.alpha, "A": self.A,
                "cutoff": self.cutoff, "tail_bound": self.tail_bound}


def leading_constant(c: RationalLike, prime_cutoff: int = DEFAULT_CUTOFF) -> PoleData:
    """A = [prod_p (1-1/p)^l (1-c/p)^(-m)]^(1/m) from the regularized local factors."""
    c = as_rational(c)
    l, m, _ = euler_regularize(c)
    spec = EulerProductSpec(Poly([1, -1]) ** l, 1, prime_cutoff,
                            divisor=Poly([1, -c]) ** m)
    prod = euler_product(spec)
    return PoleData.simple(1.0, l, m, math.exp(prod.log_value / m), c=c,
                           cutoff=prime_cutoff, tail_bound=prod.tail_bound / m)


@dataclass(frozen=True)
class ZetaRoute:
    """A^m = zeta(2)^(-l) F(1)^(-1), with F the reduced factor product."""

    A: float
    F1: ProductValue
    tail_bound: float


def leading_constant_via_zeta2(c: RationalLike, prime_cutoff: int = DEFAULT_CUTOFF) -> ZetaRoute:
    c = as_rational(c)
    l, m = pole_order(c)
    F1 = euler_product(EulerProductSpec(reduced_factor(c), 1, prime_cutoff))
    log_A = -(l * math.log(zeta2()) + F1.log_value) / m
    return ZetaRoute(math.exp(log_A), F1, F1.tail_bound / m)


def per_prime_identity_check(p: int) -> bool:
    """(1-1/p)^2 (1-(2/3)/p)^-3 == (1-1/p^2)^2 / quintic(1/p), exactly."""
    t = Fraction(1, p)
    lhs = (1 - t) ** 2 / (1 - Fraction(2, 3) * t) ** 3
    rhs = (1 - t ** 2) ** 2 / reduced_factor(Fraction(2, 3))(t)
    return lhs == rhs
