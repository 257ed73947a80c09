"""Segmented Omega sieve and checkpointed partial sums of c^Omega(n).

Omega(n) counts prime factors with multiplicity. Each segment keeps one
byte of Omega and one machine integer holding the product of the prime
powers found so far; a product short of n means exactly one prime factor
above sqrt(x_max) remains.
"""
from __future__ import annotations

import csv
import io
import math
import os
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Optional, Sequence

import numba
import numpy as np

from .errors import ContractError
from .exact_algebra import RationalLike, as_rational, format_rational

DEFAULT_SEGMENT = 1 << 20
DEFAULT_PER_DECADE = 10
# n and the running prime-power product are held in int64
MAX_X = 1 << 62


def primes_upto(n: int) -> np.ndarray:
    """All primes <= n by the sieve of Eratosthenes."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    is_p = np.ones(n + 1, dtype=bool)
    is_p[:2] = False
    is_p[4::2] = False
    for i in range(3, math.isqrt(n) + 1, 2):
        if is_p[i]:
            is_p[i * i::2 * i] = False
    return np.flatnonzero(is_p).astype(np.int64)


def omega_of(n: int) -> int:
    """Omega(n) by trial division. Reference oracle for the sieve."""
    if n < 1:
        raise ValueError("Omega is defined for n >= 1")
    count = 0
    while n % 2 == 0:
        n //= 2
        count += 1
    d = 3
    while d * d <= n:
        while n % d == 0:
            n //= d
            count += 1
        d += 2
    return count + (n > 1)


def _prime_powers(base_primes: Sequence[int], limit: int) -> list[tuple[int, int]]:
    out = []
    for p in base_primes:
        q = p
        while q <= limit:
            out.append((q, p))
            q *= p
    return out


def _sieve_into(omega: np.ndarray, prod: np.ndarray, lo: int,
                powers: list[tuple[int, int]]) -> None:
    """Credit every prime power <= sqrt-bound dividing lo..lo+len-1.

    Leaves the cofactor test (prod != n) to the caller.
    """
    hi = lo + len(omega) - 1
    omega.fill(0)
    prod.fill(1)
    for q, p in powers:
        if q > hi:
            continue
        start = (-lo) % q
        omega[start::q] += 1
        prod[start::q] *= p


def sieve_omega_segment(lo: int, hi: int, base_primes: Sequence[int]) -> np.ndarray:
    """Omega(n) for every n in [lo, hi] as a uint8 array.

    ``base_primes`` must contain every prime up to sqrt(hi).
    """
    if not 2 <= lo <= hi:
        raise ValueError("need 2 <= lo <= hi")
    if hi >= MAX_X:
        raise ContractError(f"hi must be below 2^62, got {hi}")
    root = math.isqrt(hi)
    bp = np.asarray(base_primes, dtype=np.int64)
    needed = primes_upto(root)
    if not np.array_equal(np.intersect1d(bp, needed), needed):
        raise ValueError(f"base primes do not cover all primes up to sqrt({hi}) = {root}")
    bp = bp[bp <= root]
    size = hi - lo + 1
    omega = np.empty(size, dtype=np.uint8)
    prod = np.empty(size, dtype=np.int64)
    _sieve_into(omega, prod, lo, _prime_powers(bp.tolist(), hi))
    omega += prod != np.arange(lo, hi + 1, dtype=np.int64)
    return omega


@numba.njit(cache=True)
def _fold_segment(omega, prod, lo, powers, s, comp, checkpoints, out_s, out_c, ci):
    # Neumaier summation in ascending n; records (s + comp, comp) at checkpoints.
    n = lo
    for i in range(omega.shape[0]):
        k = omega[i]
        if prod[i] != n:
            k += 1
        x = powers[k]
        t = s + x
        if abs(s) >= abs(x):
            comp += (s - t) + x
        else:
            comp += (x - t) + s
        s = t
        while ci < checkpoints.shape[0] and checkpoints[ci] == n:
            out_s[ci] = s + comp
            out_c[ci] = comp
            ci += 1
        n += 1
    return s, comp, ci


def power_table(c: RationalLike, x_max: int) -> np.ndarray:
    """c**k for 0 <= k <= floor(log2 x_max), each rounded once from the exact power."""
    c = as_rational(c)
    return np.array([float(c ** k) for k in range(max(x_max, 1).bit_length())])


def checkpoint_grid(x_max: int, per_decade: int = DEFAULT_PER_DECADE) -> list[int]:
    """Geometric grid round(10^(k/per_decade)) within [10, x_max], plus x_max."""
    if per_decade < 1:
        raise ValueError("per_decade must be >= 1")
    pts = set()
    k = per_decade
    while True:
        x = round(10 ** (k / per_decade))
        if x > x_max:
            break
        pts.add(x)
        k += 1
    pts.add(x_max)
    return sorted(pts)


@dataclass
class SieveConfig:
    x_max: int
    c: Fraction = Fraction(2, 3)
    checkpoints: Optional[list[int]] = None
    segment_size: int = DEFAULT_SEGMENT

    def __post_init__(self) -> None:
        self.c = as_rational(self.c)
        if not 0 < self.c <= 1:
            raise ValueError(f"c must lie in (0, 1], got {format_rational(self.c)}")
        if self.x_max < 1:
            raise ValueError("x_max must be positive")
        if self.x_max >= MAX_X:
            raise ContractError(f"x_max={self.x_max} exceeds the supported range (< 2^62)")
        if self.segment_size < 2:
            raise ValueError("segment_size must be >= 2")
        if self.checkpoints is None:
            self.checkpoints = checkpoint_grid(self.x_max)
        cps = list(self.checkpoints)
        if any(x < 1 for x in cps):
            raise ValueError("checkpoints must be positive")
        if any(b <= a for a, b in zip(cps, cps[1:])):
            raise ValueError("checkpoints must be strictly increasing")
        if cps and cps[-1] > self.x_max:
            raise ValueError("last checkpoint exceeds x_max")
        self.checkpoints = cps


@dataclass
class SieveState:
    """Resume record: the next n to sieve and the Neumaier accumulator."""

    next_n: int = 1
    running_sum: float = 0.0
    compensation: float = 0.0

    def dumps(self) -> str:
        return f"{self.next_n} {self.running_sum!r} {self.compensation!r}\n"

    @classmethod
    def loads(cls, text: str) -> SieveState:
        lines = text.splitlines()
        parts = lines[0].split() if len(lines) == 1 else []
        if len(parts) != 3:
            raise ValueError("malformed resume record: expected 'next_n running_sum compensation'")
        try:
            state = cls(int(parts[0]), float(parts[1]), float(parts[2]))
        except ValueError:
            raise ValueError(f"malformed resume record: {lines[0]!r}") from None
        if state.next_n < 1 or not (math.isfinite(state.running_sum) and math.isfinite(state.compensation)):
            raise ValueError(f"malformed resume record: {lines[0]!r}")
        return state

    @classmethod
    def read(cls, path: str | os.PathLike) -> SieveState:
        return cls.loads(Path(path).read_text())

    def write(self, path: str | os.PathLike) -> None:
        path = Path(path)
        fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=path.name, suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            fh.write(self.dumps())
        os.replace(tmp, path)


@dataclass
class PartialSumSeries:
    rows: list[tuple[int, float, float]] = field(default_factory=list)
    c: Fraction = Fraction(2, 3)
    x_max: int = 0

    @property
    def xs(self) -> list[int]:
        return [r[0] for r in self.rows]

    @property
    def sums(self) -> list[float]:
        return [r[1] for r in self.rows]

    def to_csv(self) -> str:
        buf = io.StringIO()
        write_csv_rows(buf, self.rows, header=True)
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, c: RationalLike, x_max: Optional[int] = None) -> PartialSumSeries:
        reader = csv.reader(io.StringIO(text))
        header = next(reader, None)
        if header != ["X", "S"]:
            raise ValueError(f"expected CSV header X,S, got {header}")
        rows = []
        for rec in reader:
            if not rec:
                continue
            if len(rec) != 2:
                raise ValueError(f"malformed CSV row {rec}")
            rows.append((int(rec[0]), float(rec[1]), 0.0))
        if any(b[0] <= a[0] for a, b in zip(rows, rows[1:])):
            raise ValueError("CSV rows are not strictly increasing in X")
        top = x_max if x_max is not None else (rows[-1][0] if rows else 0)
        return cls(rows, as_rational(c), top)


def write_csv_rows(fh, rows, header: bool = False) -> None:
    if header:
        fh.write("X,S\n")
    for x, s, _ in rows:
        fh.write(f"{x},{s!r}\n")


def partial_sums(
    config: SieveConfig,
    resume: Optional[SieveState] = None,
    state_path: Optional[str | os.PathLike] = None,
    on_segment: Optional[Callable[[list[tuple[int, float, float]], SieveState], None]] = None,
) -> PartialSumSeries:
    """S(X) = sum_{n<=X} c^Omega(n) at each checkpoint.

    Summation is Neumaier-compensated in ascending n, so the result does not
    depend on ``segment_size``. Starting from ``resume`` only checkpoints
    ``>= resume.next_n`` are returned. After each segment ``on_segment``
    receives that segment's rows and the new state, then the state is
    written to ``state_path`` if given.
    """
    x_max = config.x_max
    state = SieveState() if resume is None else SieveState(
        resume.next_n, resume.running_sum, resume.compensation)
    if state.next_n > x_max + 1:
        raise ContractError(f"resume point {state.next_n} lies beyond x_max + 1 = {x_max + 1}")

    powers = power_table(config.c, x_max)
    base = primes_upto(math.isqrt(x_max)).tolist()
    pp = _prime_powers(base, x_max)
    cps_all = [x for x in config.checkpoints if x >= state.next_n]
    checkpoints = np.array(cps_all, dtype=np.int64)
    out_s = np.zeros(len(cps_all))
    out_c = np.zeros(len(cps_all))

    seg = min(config.segment_size, x_max)
    prod_dtype = np.int32 if x_max < 2**31 else np.int64
    omega_buf = np.empty(seg, dtype=np.uint8)
    prod_buf = np.empty(seg, dtype=prod_dtype)

    s, comp, ci = state.running_sum, state.compensation, 0
    lo = state.next_n
    while lo <= x_max:
        hi = min(lo + seg - 1, x_max)
        omega = omega_buf[: hi - lo + 1]
        prod = prod_buf[: hi - lo + 1]
        _sieve_into(omega, prod, lo, pp)
        ci0 = ci
        s, comp, ci = _fold_segment(omega, prod, lo, powers, s, comp,
                                    checkpoints, out_s, out_c, ci)
        state = SieveState(hi + 1, s, comp)
        new_rows = [(cps_all[i], float(out_s[i]), float(out_c[i])) for i in range(ci0, ci)]
        if on_segment is not None:
            on_segment(new_rows, state)
        if state_path is not None:
            state.write(state_path)
        lo = hi + 1

    rows = [(cps_all[i], float(out_s[i]), float(out_c[i])) for i in range(ci)]
    return PartialSumSeries(rows, config.c, x_max)
