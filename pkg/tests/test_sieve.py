import math
from fractions import Fraction as F

import numpy as np
import pytest

from tauberian.errors import ContractError
from tauberian.sieve import (PartialSumSeries, SieveConfig, SieveState, checkpoint_grid,
                             omega_of, partial_sums, power_table, primes_upto,
                             sieve_omega_segment)


def omega_spf(N):
    """Omega(0..N) from a smallest-prime-factor table, independent of the segment sieve."""
    spf = np.arange(N + 1)
    for p in range(2, math.isqrt(N) + 1):
        if spf[p] == p:
            block = spf[p * p::p]
            np.copyto(block, p, where=block == np.arange(p * p, N + 1, p))
    omega = np.zeros(N + 1, dtype=np.int64)
    lo = 2
    while lo <= N:
        hi = min(2 * lo, N + 1)
        n = np.arange(lo, hi)
        omega[lo:hi] = omega[n // spf[n]] + 1
        lo = hi
    return omega


def test_primes_upto():
    assert primes_upto(1).tolist() == []
    assert primes_upto(2).tolist() == [2]
    assert primes_upto(30).tolist() == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert len(primes_upto(10 ** 6)) == 78498


def test_omega_of_examples():
    assert omega_of(1) == 0
    assert omega_of(12) == 3
    assert omega_of(97) == 1
    assert omega_of(2 ** 10 * 3 ** 4) == 14
    with pytest.raises(ValueError):
        omega_of(0)


def test_segment_examples():
    assert sieve_omega_segment(2, 10, [2, 3]).tolist() == [omega_of(n) for n in range(2, 11)]
    assert sieve_omega_segment(2, 10, [2, 3]).tolist() == [1, 1, 2, 1, 2, 1, 3, 2, 2]
    assert sieve_omega_segment(2, 2, []).tolist() == [1]
    assert sieve_omega_segment(10 ** 6, 10 ** 6, primes_upto(1000)).tolist() == [12]


def test_segment_needs_base_primes():
    with pytest.raises(ValueError):
        sieve_omega_segment(2, 100, [2, 3, 5])
    with pytest.raises(ValueError):
        sieve_omega_segment(1, 10, [2, 3])


def test_sieve_matches_trial_division_exhaustively():
    N = 10 ** 5
    sieved = sieve_omega_segment(2, N, primes_upto(math.isqrt(N)))
    oracle = np.array([omega_of(n) for n in range(2, N + 1)])
    assert np.array_equal(sieved, oracle)


def test_sieve_matches_spf_on_offset_window():
    lo, hi = 987_654, 1_234_567
    oracle = omega_spf(hi)[lo:]
    assert np.array_equal(sieve_omega_segment(lo, hi, primes_upto(2000)), oracle)


def test_checkpoint_grid():
    assert checkpoint_grid(100, 1) == [10, 100]
    assert checkpoint_grid(1000, 2) == [10, 32, 100, 316, 1000]
    assert checkpoint_grid(10, 10) == [10]
    assert checkpoint_grid(150, 1) == [10, 100, 150]
    assert len(checkpoint_grid(10 ** 7)) == 61
    with pytest.raises(ValueError):
        checkpoint_grid(100, 0)


def test_partial_sum_s10():
    expected = sum(F(2, 3) ** omega_of(n) for n in range(1, 11))
    assert expected == F(155, 27)
    series = partial_sums(SieveConfig(10, F(2, 3), [1, 10]))
    assert series.rows[0][:2] == (1, 1.0)
    assert series.rows[1][1] == pytest.approx(155 / 27, rel=1e-14)


def test_c_one_counts_integers():
    grid = checkpoint_grid(10 ** 6, 10)
    series = partial_sums(SieveConfig(10 ** 6, 1, grid, segment_size=1 << 16))
    assert series.xs == grid
    assert series.sums == [float(x) for x in grid]
    assert partial_sums(SieveConfig(1000, 1, [1000])).sums == [1000.0]


def test_partial_sums_monotone():
    series = partial_sums(SieveConfig(10 ** 5, F(2, 3), list(range(1, 10 ** 5 + 1, 997))))
    assert all(b >= a for a, b in zip(series.sums, series.sums[1:]))


def test_segment_size_independence():
    x = 3 * 10 ** 5 + 7
    grid = checkpoint_grid(x, 10)
    ref = partial_sums(SieveConfig(x, F(2, 3), grid, 1 << 20)).rows
    for seg in (1 << 12, 1 << 16, 1000, 2):
        if seg == 2:
            small = partial_sums(SieveConfig(5000, F(2, 3), checkpoint_grid(5000), seg)).rows
            assert small == partial_sums(SieveConfig(5000, F(2, 3), checkpoint_grid(5000))).rows
            continue
        assert partial_sums(SieveConfig(x, F(2, 3), grid, seg)).rows == ref


def test_omega_bound_and_power_table():
    x_max = 10 ** 6
    table = power_table(F(2, 3), x_max)
    assert len(table) == math.floor(math.log2(x_max)) + 1
    assert omega_spf(x_max).max() == len(table) - 1 == 19
    assert table[3] == float(F(8, 27))
    assert power_table(1, 2 ** 20).tolist() == [1.0] * 21


def test_compensated_sum_against_exact_reference():
    N = 10 ** 6
    counts = np.bincount(omega_spf(N)[1:])
    exact = sum(int(k) * F(2, 3) ** j for j, k in enumerate(counts))
    S = partial_sums(SieveConfig(N, F(2, 3), [N])).sums[0]
    assert abs(F(S) - exact) / exact < F(1, 10 ** 12)


def test_config_validation():
    with pytest.raises(ValueError):
        SieveConfig(100, F(3, 2))
    with pytest.raises(ValueError):
        SieveConfig(100, 0)
    with pytest.raises(ValueError):
        SieveConfig(100, F(2, 3), [10, 10])
    with pytest.raises(ValueError):
        SieveConfig(100, F(2, 3), [10, 200])
    with pytest.raises(ValueError):
        SieveConfig(100, F(2, 3), segment_size=1)
    with pytest.raises(ContractError):
        SieveConfig(2 ** 63)


def test_state_round_trip(tmp_path):
    state = SieveState(1048577, 284667.03268675123, -1.1368683772161603e-13)
    assert SieveState.loads(state.dumps()) == state
    path = tmp_path / "state.txt"
    state.write(path)
    assert SieveState.read(path) == state
    assert path.read_text().count("\n") == 1


@pytest.mark.parametrize("text", ["", "1 2", "a b c", "1 2 3 4", "5 nan 0", "0 1.0 0.0", "1 2 3\n4 5 6"])
def test_state_rejects_malformed(text):
    with pytest.raises(ValueError):
        SieveState.loads(text)


def test_resume_reproduces_uninterrupted_run(tmp_path):
    x, seg = 200_000, 1 << 14
    grid = checkpoint_grid(x, 10)
    full = partial_sums(SieveConfig(x, F(2, 3), grid, seg))

    class Stop(Exception):
        pass

    seen = []

    def interrupt(rows, state):
        seen.extend(rows)
        if state.next_n > 5 * seg:
            raise Stop

    path = tmp_path / "state"
    with pytest.raises(Stop):
        partial_sums(SieveConfig(x, F(2, 3), grid, seg), state_path=path, on_segment=interrupt)
    state = SieveState.read(path)
    assert state.next_n == 4 * seg + 1
    rest = partial_sums(SieveConfig(x, F(2, 3), grid, seg), resume=state)
    kept = [r for r in seen if r[0] < state.next_n]
    assert kept + rest.rows == full.rows


def test_resume_past_end_is_rejected():
    with pytest.raises(ContractError):
        partial_sums(SieveConfig(100), resume=SieveState(500, 0.0, 0.0))


def test_csv_round_trip():
    series = partial_sums(SieveConfig(1000, F(2, 3), checkpoint_grid(1000)))
    text = series.to_csv()
    assert text.splitlines()[0] == "X,S"
    back = PartialSumSeries.from_csv(text, F(2, 3))
    assert back.xs == series.xs and back.sums == series.sums
    with pytest.raises(ValueError):
        PartialSumSeries.from_csv("X,Y\n1,1\n", F(2, 3))
