import math
from fractions import Fraction as F

import pytest
from scipy import special

from tauberian.constants import (EulerProductSpec, PoleData, euler_product, gamma,
                                 leading_constant, leading_constant_via_zeta2,
                                 per_prime_identity_check, tail_constant, zeta2)
from tauberian.errors import ContractError
from tauberian.exact_algebra import QUINTIC, Poly
from tauberian.sieve import primes_upto

QUINTIC_POLY = Poly(QUINTIC)


def test_gamma_values():
    assert gamma(1) == 1
    assert abs(gamma(0.5) - math.sqrt(math.pi)) < 1e-12
    g23 = gamma(2 / 3)
    assert abs(g23 * gamma(1 / 3) - 2 * math.pi / math.sqrt(3)) < 1e-12 * 2 * math.pi / math.sqrt(3)
    assert g23 == pytest.approx(float(special.gamma(2 / 3)), rel=1e-14)


@pytest.mark.parametrize("x", [1 / 3, 2 / 5, 1 / 2, 2 / 3])
def test_gamma_reflection(x):
    ref = math.pi / math.sin(math.pi * x)
    assert abs(gamma(x) * gamma(1 - x) - ref) < 1e-12 * ref


@pytest.mark.parametrize("x", [k / 20 for k in range(1, 101)])
def test_gamma_recurrence(x):
    assert abs(gamma(x + 1) - x * gamma(x)) < 1e-12 * gamma(x + 1)


@pytest.mark.parametrize("bad", [0, -0.5, -2, float("nan")])
def test_gamma_domain(bad):
    with pytest.raises(ValueError):
        gamma(bad)


def test_zeta2():
    assert zeta2() == pytest.approx(1.6449340668482264, abs=1e-16)
    assert zeta2() ** 2 == pytest.approx((math.pi ** 4) / 36, rel=1e-15)


def test_zeta2_from_prime_product():
    pv = euler_product(EulerProductSpec(Poly([1, 0, -1]), -1, 10 ** 6))
    assert pv.tail_bound == pytest.approx(2 / (10 ** 6 - 1))
    assert abs(pv.log_value - math.log(zeta2())) <= pv.tail_bound


def test_trivial_factor():
    pv = euler_product(EulerProductSpec(Poly.one(), 7, 1000))
    assert pv.value == 1 and pv.tail_bound == 0


def test_tail_bound_formula():
    # sum of |g_k| over k >= 2 for the quintic is 83/27
    assert tail_constant(QUINTIC_POLY, Poly.one(), 100) == pytest.approx(83 / 27)
    pv = euler_product(EulerProductSpec(QUINTIC_POLY, -1, 1000))
    assert pv.tail_bound == pytest.approx(2 * (83 / 27) / 999)


def test_linear_term_not_certifiable():
    with pytest.raises(ContractError, match="extract zeta"):
        euler_product(EulerProductSpec(Poly([1, F(-2, 3)]), -1, 1000))


def test_spec_validation():
    with pytest.raises(ValueError):
        EulerProductSpec(Poly([2, 0, 1]), 1, 100)
    with pytest.raises(ValueError):
        EulerProductSpec(QUINTIC_POLY, 1, 1)


def test_truncated_product_matches_direct_float_product():
    pv = euler_product(EulerProductSpec(QUINTIC_POLY, -1, 1000))
    direct = 1.0
    for p in primes_upto(1000).tolist():
        t = 1.0 / p
        direct /= 1 - 5 / 3 * t ** 2 + 10 / 27 * t ** 3 + 20 / 27 * t ** 4 - 8 / 27 * t ** 5
    assert pv.value == pytest.approx(direct, rel=1e-13)


def test_quintic_two_cutoff_agreement():
    lo = euler_product(EulerProductSpec(QUINTIC_POLY, -1, 10 ** 5))
    hi = euler_product(EulerProductSpec(QUINTIC_POLY, -1, 10 ** 6))
    assert hi.tail_bound < 1e-5
    assert abs(hi.log_value - lo.log_value) <= lo.tail_bound + hi.tail_bound
    # F(1)^-1 lies in [2.0802, 2.0804]
    assert 2.0802 < hi.value < 2.0804


def test_leading_constant_c_one():
    pole = leading_constant(1, 1000)
    assert (pole.l, pole.m, pole.alpha, pole.A, pole.d) == (1, 1, 1.0, 1.0, 1.0)


def test_leading_constant_two_thirds_identities():
    pole = leading_constant(F(2, 3), 10 ** 5)
    assert (pole.l, pole.m) == (2, 3)
    route = leading_constant_via_zeta2(F(2, 3), 10 ** 5)
    assert abs(route.A ** 3 * zeta2() ** 2 * route.F1.value - 1) < 1e-12
    assert abs(math.log(pole.A) - math.log(route.A)) <= pole.tail_bound + route.tail_bound + 1e-12


def test_leading_constant_half_two_cutoffs():
    lo = leading_constant(F(1, 2), 10 ** 5)
    hi = leading_constant(F(1, 2), 10 ** 6)
    assert (hi.l, hi.m) == (1, 2)
    assert abs(math.log(hi.A) - math.log(lo.A)) <= lo.tail_bound + hi.tail_bound
    # the zeta(2) route gives the same constant
    route = leading_constant_via_zeta2(F(1, 2), 10 ** 6)
    assert abs(math.log(hi.A) - math.log(route.A)) <= hi.tail_bound + route.tail_bound + 1e-12


def test_leading_constant_domain():
    with pytest.raises(ValueError):
        leading_constant(F(3, 2), 100)


def test_pole_data_invariants():
    with pytest.raises(ValueError):
        PoleData(1.0, 2, 3, 0.5, 1.0)
    with pytest.raises(ValueError):
        PoleData.simple(1.0, 2, 3, -1.0)


@pytest.mark.parametrize("p", [2, 3, 97])
def test_per_prime_identity_examples(p):
    assert per_prime_identity_check(p)


def test_per_prime_identity_first_thousand_primes():
    ps = primes_upto(7919).tolist()
    assert len(ps) == 1000
    assert all(per_prime_identity_check(p) for p in ps)
