"""Compare partial sums with the Tauberian main term; spot-check its analytic inputs."""
from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
from scipy import integrate

from .constants import PoleData, gamma
from .errors import ContractError, QuadratureError
from .exact_algebra import RationalLike, as_rational, format_rational
from .sieve import power_table, sieve_omega_segment, primes_upto

# integral of (sin u / u)^2 over the real line
KERNEL_MASS = math.pi
# same mass under lambda = (2 pi)^(-1/2) * Lebesgue
KERNEL_MASS_LAMBDA = math.sqrt(math.pi / 2)

TRUNCATION_TARGET = 1e-12


def predict(pole: PoleData, X: float) -> float:
    """A X^d / (d Gamma(alpha) (log X)^(1-alpha))."""
    if X < 10:
        raise ValueError(f"prediction is only defined for X >= 10, got {X}")
    main = pole.A * X ** pole.d / (pole.d * gamma(pole.alpha))
    if pole.l == pole.m:
        return main
    return main / math.log(X) ** (1 - pole.alpha)


def decade_of(X: int) -> int:
    """k with 10^k < X <= 10^(k+1)."""
    return len(str(X - 1)) - 1


@dataclass
class AsymptoticReport:
    rows: list[tuple[int, float, float, float]]
    decade_stats: list[tuple[int, float]]
    pole: PoleData

    def decade_medians(self) -> dict[int, float]:
        return dict(self.decade_stats)

    def trailer(self) -> dict:
        return {
            "decades": [{"decade": [10 ** k, 10 ** (k + 1)], "median_abs_dev": med}
                        for k, med in self.decade_stats],
            "pole": self.pole.to_json(),
        }

    def to_csv(self) -> str:
        lines = ["X,S,prediction,ratio"]
        lines += [f"{x},{s!r},{p!r},{r!r}" for x, s, p, r in self.rows]
        return "\n".join(lines) + "\n"


def compare(series, pole: PoleData) -> AsymptoticReport:
    """Ratio S(X)/predict(X) per checkpoint and median |ratio - 1| per decade.

    Checkpoints below 10 are outside the asymptotic regime and are skipped.
    """
    if pole.c is not None and as_rational(series.c) != pole.c:
        raise ValueError(f"series built for c = {format_rational(series.c)} "
                         f"but pole for c = {format_rational(pole.c)}")
    rows = []
    by_decade: dict[int, list[float]] = {}
    for x, s, *_ in series.rows:
        if x < 10:
            continue
        pred = predict(pole, x)
        ratio = s / pred
        if not (math.isfinite(ratio) and ratio > 0):
            raise ContractError(f"non-positive or non-finite ratio at X = {x}")
        rows.append((x, s, pred, ratio))
        by_decade.setdefault(decade_of(x), []).append(abs(ratio - 1))
    stats = [(k, statistics.median(v)) for k, v in sorted(by_decade.items())]
    return AsymptoticReport(rows, stats, pole)


@dataclass
class KernelCheckSpec:
    alpha: float = 2 / 3
    s_samples: Sequence[float] = (1.5, 2.0)
    v_grid: Sequence[float] = (50.0, 100.0, 200.0)
    truncation: Optional[float] = None
    tolerance: float = 1e-11

    def __post_init__(self) -> None:
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if any(s <= 1 for s in self.s_samples):
            raise ValueError("s samples must exceed 1")
        if any(b <= a for a, b in zip(self.v_grid, self.v_grid[1:])):
            raise ValueError("v grid must be increasing")
        if any(v <= 1 for v in self.v_grid):
            raise ValueError("v grid must lie above 1")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")


def _quad(f, a, b, tol, rel=0.0, **kw) -> float:
    out = integrate.quad(f, a, b, epsabs=tol, epsrel=rel, full_output=1, **kw)
    if len(out) > 3:
        raise QuadratureError(f"quadrature on [{a}, {b}] did not converge: {out[3].splitlines()[0]}")
    return out[0]


def laplace_tail_bound(alpha: float, s: float, U: float) -> float:
    """Bound on Gamma(alpha)^-1 * int_U^inf e^{-(s-1)u} u^{alpha-1} du (needs U >= 2(alpha-1)/(s-1))."""
    a = s - 1
    return 2 * math.exp(-a * U) * U ** (alpha - 1) / (a * gamma(alpha))


def choose_truncation(alpha: float, s: float, target: float = TRUNCATION_TARGET) -> float:
    """Smallest power-of-two U with e^{-(s-1)U} U^alpha (1 + 1/(s-1)) < target."""
    a = s - 1
    U = max(2.0, 2 * (alpha - 1) / a)
    while math.exp(-a * U) * U ** alpha * (1 + 1 / a) >= target:
        U *= 2
    return U


def laplace_power_integral(alpha: float, s: float, spec: Optional[KernelCheckSpec] = None) -> tuple[float, float]:
    """Gamma(alpha)^-1 * int_0^U e^{-(s-1)u} u^{alpha-1} du and its truncation bound."""
    if s <= 1 or alpha <= 0:
        raise ValueError("need s > 1 and alpha > 0")
    spec = spec or KernelCheckSpec(alpha=alpha)
    a = s - 1
    U = spec.truncation if spec.truncation is not None else choose_truncation(alpha, s)
    U = max(U, 1.0, 2 * (alpha - 1) / a)
    tol = spec.tolerance / 2
    # u = w^(1/alpha) on [0, 1] removes the endpoint singularity
    head = _quad(lambda w: math.exp(-a * w ** (1 / alpha)) / alpha, 0.0, 1.0, tol)
    body = _quad(lambda u: math.exp(-a * u) * u ** (alpha - 1), 1.0, U, tol, limit=200)
    return (head + body) / gamma(alpha), laplace_tail_bound(alpha, s, U)


def laplace_identity_check(alpha: float, s: float, spec: Optional[KernelCheckSpec] = None) -> float:
    """|Gamma(alpha)^-1 int_0^U e^{-(s-1)u} u^{alpha-1} du - (s-1)^(-alpha)|."""
    value, _ = laplace_power_integral(alpha, s, spec)
    return abs(value - (s - 1) ** (-alpha))


def fejer(u):
    """(sin u / u)^2, continuous at 0."""
    return np.sinc(np.asarray(u) / np.pi) ** 2


def kernel_integral(alpha: float, v: float, tol: float = 1e-11) -> float:
    """int_0^inf Phi(v - u) u^{alpha-1} du (Lebesgue measure) for v > 1."""
    head = _quad(lambda w: float(fejer(v - w ** (1 / alpha))) / alpha, 0.0, 1.0, tol)
    b = 2 * v + 10
    body = _quad(lambda u: float(fejer(v - u)) * u ** (alpha - 1), 1.0, b, tol,
                 points=[v], limit=5000)
    # beyond b: sin^2(u - v) = (1 - cos 2u cos 2v - sin 2u sin 2v) / 2
    h = lambda u: u ** (alpha - 1) / (u - v) ** 2
    smooth = _quad(h, b, np.inf, tol)
    cos_part = _quad(h, b, np.inf, tol, weight="cos", wvar=2.0)
    sin_part = _quad(h, b, np.inf, tol, weight="sin", wvar=2.0)
    tail = 0.5 * (smooth - math.cos(2 * v) * cos_part - math.sin(2 * v) * sin_part)
    return head + body + tail


def kernel_limit_check(alpha: float, spec: Optional[KernelCheckSpec] = None) -> list[tuple[float, float]]:
    """v^(1-alpha) int_0^inf Phi(v-u) u^(alpha-1) du / int Phi, for each v in the grid.

    Both integrals use the same measure, so the ratio tends to 1.
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    spec = spec or KernelCheckSpec(alpha=alpha)
    return [(float(v), v ** (1 - alpha) * kernel_integral(alpha, v, spec.tolerance) / KERNEL_MASS)
            for v in spec.v_grid]


def coefficients(c: RationalLike, N: int) -> np.ndarray:
    """a_n = c^Omega(n) for n = 1..N as doubles."""
    omega = np.zeros(N, dtype=np.uint8)
    if N >= 2:
        omega[1:] = sieve_omega_segment(2, N, primes_upto(math.isqrt(N)))
    return power_table(c, N)[omega]


def step_transform_routes(c: RationalLike, s: float, N: int, nodes: int = 10) -> tuple[float, float, float]:
    """Three evaluations of int_0^inf f(u) e^{-su} du, f(u) = sum_{n<=N} a_n [u >= log n].

    Returns (closed form of the integral term by term, (1/s) times the
    truncated Dirichlet series, Gauss-Legendre quadrature of the step
    function piece by piece).
    """
    if s <= 1:
        raise ValueError("need s > 1")
    if N < 1:
        raise ValueError("need N >= 1")
    a = coefficients(c, N)
    n = np.arange(1, N + 1, dtype=float)

    closed = math.fsum(a * np.exp(-s * np.log(n))) / s
    dirichlet = math.fsum(a * n ** (-s)) / s

    # f equals S(n) on [log n, log(n+1))
    S = np.cumsum(a)
    x, w = np.polynomial.legendre.leggauss(nodes)
    lo = np.log(n[:-1])
    hi = np.log(n[1:])
    half = (hi - lo) / 2
    mid = (hi + lo) / 2
    pieces = half * (np.exp(-s * (mid[:, None] + half[:, None] * x[None, :])) @ w)
    last = S[-1] * _quad(lambda u: math.exp(-s * u), math.log(N), np.inf, 0.0, rel=1e-13)
    quadrature = math.fsum(S[:-1] * pieces) + last
    return closed, dirichlet, quadrature


def laplace_of_step_check(c: RationalLike, s: float, N: int, nodes: int = 10) -> float:
    """Largest pairwise gap between the routes of :func:`step_transform_routes`."""
    vals = step_transform_routes(c, s, N, nodes)
    return max(abs(p - q) for p in vals for q in vals)
