"""Exact rational polynomials and truncated power series in t = p^(-s).

Coefficients are :class:`fractions.Fraction` throughout; nothing here ever
touches floating point.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Fraction
RationalLike = Union[Fraction, int, str]

DEFAULT_ORDER = 6

# Quintic local factor of the c = 2/3 example, index = power of t.
QUINTIC = (Fraction(1), Fraction(0), Fraction(-5, 3), Fraction(10, 27),
           Fraction(20, 27), Fraction(-8, 27))


def as_rational(x: RationalLike) -> Fraction:
    if isinstance(x, float):
        raise TypeError("floats are not accepted as exact rationals")
    return Fraction(x)


def format_rational(q: Fraction) -> str:
    """Serialize as ``num/den`` (denominator always written)."""
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    """Parse ``l/m`` or an integer literal; rejects decimals."""
    text = text.strip()
    num, sep, den = text.partition("/")
    try:
        n = int(num)
        d = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"not a rational of the form l/m: {text!r}") from None
    if d == 0:
        raise ZeroDivisionError(f"zero denominator in {text!r}")
    return Fraction(n, d)


def rat_arith(a: RationalLike, b: RationalLike, op: str) -> Fraction:
    """Apply ``op`` (add, sub, mul, div, pow) exactly.

    For ``pow`` the second operand must be an integer; a negative power of
    zero raises ``ZeroDivisionError`` just like division by zero.
    """
    a = as_rational(a)
    if op == "pow":
        b = as_rational(b)
        if b.denominator != 1:
            raise ValueError("exponent must be an integer")
        k = b.numerator
        if k < 0 and a == 0:
            raise ZeroDivisionError("zero raised to a negative power")
        return a ** k
    b = as_rational(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if b == 0:
            raise ZeroDivisionError("division by zero")
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def _trim(coeffs: Iterable[RationalLike]) -> tuple[Fraction, ...]:
    out = [as_rational(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


class Poly:
    """Polynomial in t with exact rational coefficients.

    ``coeffs[k]`` is the coefficient of t**k; the zero polynomial has no
    coefficients at all.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[RationalLike] = ()):
        self.coeffs = _trim(coeffs)

    @classmethod
    def one(cls) -> Poly:
        return cls([1])

    @classmethod
    def linear(cls, a: RationalLike) -> Poly:
        """The binomial ``1 + a t``."""
        return cls([1, a])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __call__(self, t: RationalLike) -> Fraction:
        t = as_rational(t)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other: Poly) -> Poly:
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self.coeff(k) + other.coeff(k) for k in range(n))

    def __neg__(self) -> Poly:
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other: Poly) -> Poly:
        return self + (-other)

    def __mul__(self, other: Poly) -> Poly:
        return poly_mul(self, other)

    def __pow__(self, k: int) -> Poly:
        return poly_pow(self, k)

    def __repr__(self) -> str:
        return f"Poly([{', '.join(format_rational(c) for c in self.coeffs)}])"

    def to_json(self) -> list[str]:
        return [format_rational(c) for c in self.coeffs]


def poly_mul(p: Poly, q: Poly) -> Poly:
    if not p.coeffs or not q.coeffs:
        return Poly()
    out = [Fraction(0)] * (len(p.coeffs) + len(q.coeffs) - 1)
    for i, a in enumerate(p.coeffs):
        if a == 0:
            continue
        for j, b in enumerate(q.coeffs):
            out[i + j] += a * b
    return Poly(out)


def poly_pow(p: Poly, k: int) -> Poly:
    if k < 0:
        raise ValueError("polynomial power must be non-negative")
    result = Poly.one()
    base = p
    while k:
        if k & 1:
            result = poly_mul(result, base)
        k >>= 1
        if k:
            base = poly_mul(base, base)
    return result


@dataclass(frozen=True)
class TruncatedSeries:
    """Power series in t known modulo t**(order+1)."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if not self.coeffs:
            raise ValueError("a truncated series carries at least the t^0 term")
        object.__setattr__(self, "coeffs", tuple(as_rational(c) for c in self.coeffs))

    @classmethod
    def from_poly(cls, p: Poly, order: int) -> TruncatedSeries:
        return cls(tuple(p.coeff(k) for k in range(order + 1)))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k]

    def _check(self, other: TruncatedSeries) -> None:
        if other.order != self.order:
            raise ValueError(f"series orders differ ({self.order} vs {other.order})")

    def __add__(self, other: TruncatedSeries) -> TruncatedSeries:
        self._check(other)
        return TruncatedSeries(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: TruncatedSeries) -> TruncatedSeries:
        self._check(other)
        return TruncatedSeries(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __mul__(self, other: TruncatedSeries | Poly) -> TruncatedSeries:
        if isinstance(other, Poly):
            other = TruncatedSeries.from_poly(other, self.order)
        self._check(other)
        n = self.order + 1
        out = [Fraction(0)] * n
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j in range(n - i):
                out[i + j] += a * other.coeffs[j]
        return TruncatedSeries(tuple(out))

    def is_one(self) -> bool:
        return self.coeffs[0] == 1 and all(c == 0 for c in self.coeffs[1:])

    def to_json(self) -> list[str]:
        return [format_rational(c) for c in self.coeffs]


def series_inv(p: Poly, order: int) -> TruncatedSeries:
    """Reciprocal of ``p`` as a power series modulo t**(order+1).

    ``p`` must have constant term 1.
    """
    if order < 0:
        raise ValueError("order must be non-negative")
    if p.coeff(0) != 1:
        raise ValueError("series inversion requires constant term 1")
    inv = [Fraction(1)] + [Fraction(0)] * order
    for k in range(1, order + 1):
        acc = Fraction(0)
        for j in range(1, min(k, p.degree) + 1):
            acc += p.coeffs[j] * inv[k - j]
        inv[k] = -acc
    return TruncatedSeries(tuple(inv))


def pole_order(c: RationalLike) -> tuple[int, int]:
    """Return (l, m) with l/m = c in lowest terms; requires 0 < c <= 1."""
    c = as_rational(c)
    if not 0 < c <= 1:
        raise ValueError(f"c must lie in (0, 1], got {format_rational(c)}")
    return c.numerator, c.denominator


def euler_regularize(c: RationalLike, order: int = DEFAULT_ORDER) -> tuple[int, int, TruncatedSeries]:
    """Expand the local factor of L^m / zeta^l for a_n = c^Omega(n).

    Returns ``(l, m, G)`` where ``G = (1-t)^l (1-ct)^(-m)`` truncated at
    ``order``. The t^1 coefficient of ``G`` is ``m*c - l`` which is zero, so
    ``L^m / zeta^l`` has neither pole nor zero at s = 1.
    """
    c = as_rational(c)
    l, m = pole_order(c)
    zeta_part = Poly([1, -1]) ** l
    g = series_inv(Poly([1, -c]) ** m, order) * zeta_part
    return l, m, g


def reduced_factor(c: RationalLike) -> Poly:
    """``(1+t)^l (1-ct)^m``: the factor left after pulling out zeta(2s)^(-l).

    For c = 2/3 this is the quintic ``1 - 5/3 t^2 + 10/27 t^3 + 20/27 t^4 - 8/27 t^5``.
    """
    c = as_rational(c)
    l, m = pole_order(c)
    return Poly([1, 1]) ** l * Poly([1, -c]) ** m


def quintic_identity_check(quintic: Sequence[RationalLike] = QUINTIC) -> bool:
    """Does (1+t)^2 (1 - 2/3 t)^3 equal the given coefficient list exactly?"""
    lhs = poly_mul(Poly([1, 1]) ** 2, Poly([1, Fraction(-2, 3)]) ** 3)
    return lhs == Poly(quintic)
