import math
from fractions import Fraction

import numpy as np
import pytest

from tau3var import constants as cst

GAMMA_REF = 0.5772156649015329  # accelerated-limit value, frozen
GAMMA1_REF = -0.07281584548367672
STIELTJES_HALF = 1.9635100260214235  # gamma + 2 log 2, frozen from the raw limit
ZETA3_REF = 1.2020569031595943


def test_euler_gamma_against_accelerated_limit():
    assert abs(cst.euler_gamma() - GAMMA_REF) < 1e-12
    # independent raw-limit route (Richardson at m = 1e6)
    assert abs(cst.stieltjes0_limit(1.0, m=10**6) - cst.euler_gamma()) < 1e-11


def test_stieltjes0_examples():
    assert abs(cst.stieltjes0(1) - cst.euler_gamma()) < 1e-12
    assert abs(cst.stieltjes0(Fraction(1, 2)) - STIELTJES_HALF) < 1e-12
    assert abs(cst.stieltjes0(Fraction(1, 3)) - cst.stieltjes0_limit(1 / 3, m=10**6)) < 1e-9


def test_stieltjes0_domain():
    with pytest.raises(ValueError):
        cst.stieltjes0(0)
    with pytest.raises(ValueError):
        cst.stieltjes0(1.5)


def test_stieltjes0_raw_limit_sweep():
    for q in range(1, 51):
        for a in range(1, q + 1):
            if math.gcd(a, q) == 1:
                x = a / q
                assert abs(cst.stieltjes0(x) - cst.stieltjes0_limit(x, m=10**5)) < 1e-8


def test_stieltjes1_value_and_oracle():
    assert abs(cst.stieltjes1(1.0) - GAMMA1_REF) < 1e-13
    for x in (1.0, 0.5, 1 / 3, 0.2):
        assert abs(cst.stieltjes1(x) - cst.stieltjes1_limit(x, m=10**5)) < 1e-8


def test_stieltjes1_gauss_sum_identity():
    # sum_{r<=q} gamma1(r/q) = q (gamma_1 - gamma log q - log^2 q / 2)
    for q in (2, 7, 24, 60):
        lhs = float(np.sum(cst.stieltjes1(np.arange(1, q + 1) / q)))
        rhs = q * (
            cst.STIELTJES_GAMMA1
            - cst.EULER_GAMMA * math.log(q)
            - 0.5 * math.log(q) ** 2
        )
        assert abs(lhs - rhs) < 1e-9 * q


def test_zeta_known_points():
    assert abs(cst.zeta(2.0) - math.pi**2 / 6) < 1e-14
    assert abs(cst.zeta(3.0) - ZETA3_REF) < 1e-14
    assert abs(cst.zeta(4.0) - math.pi**4 / 90) < 1e-14
    with pytest.raises(ValueError):
        cst.zeta(1.0)


def test_f_coefficients():
    assert [cst.f_coefficient(v) for v in range(7)] == [1, 0, -9, 16, -9, 0, 1]
    assert all(cst.f_coefficient(v) == 0 for v in range(7, 12))


def test_f_coefficients_match_power_series():
    # (1-x)^9 * sum_v C(v+2,2)^2 x^v through x^10
    nine = [math.comb(9, r) * (-1) ** r for r in range(10)]
    series = [math.comb(v + 2, 2) ** 2 for v in range(11)]
    conv = [
        sum(nine[r] * series[v - r] for r in range(0, min(v, 9) + 1))
        for v in range(11)
    ]
    assert conv == [cst.f_coefficient(v) for v in range(11)]


def test_euler_product_s8():
    res = cst.s8_constant(10**6)
    assert abs(res.value - 1.22326e-6) < 5e-11
    assert res.tail_bound >= 0


def test_euler_product_consistency_and_stability():
    a3 = cst.euler_product_A3(10**5)
    s8 = cst.s8_constant(10**5)
    assert abs(a3.value / math.factorial(8) - s8.value) < 1e-12
    doubled = cst.euler_product_A3(2 * 10**5)
    assert abs(doubled.value - a3.value) < a3.tail_bound


def test_dirichlet_F_domain():
    with pytest.raises(ValueError):
        cst.dirichlet_F(0.5)
    assert abs(cst.dirichlet_F(1.0, 10**5) - cst.euler_product_A3(10**5).value) < 1e-15


def test_dirichlet_series_identity_desk_scale(tau3_1e6):
    # sum tau3(n)^2 n^-s = zeta(s)^9 F(s), truncated at 1e6, within the
    # Rankin tail bound
    vals = tau3_1e6.values[1:].astype(float)
    ns = np.arange(1, 10**6 + 1, dtype=float)
    for s in (2.0, 2.5, 3.0):
        partial = float(np.sum(vals * vals * ns ** (-s)))
        full = cst.zeta(s) ** 9 * cst.dirichlet_F(s, 10**5)
        tail = cst.tau3_squared_dirichlet_tail(s, 10**6)
        assert abs(full - partial) <= tail


def test_stieltjes_value_wrapper():
    sv = cst.stieltjes_value(Fraction(1, 2))
    assert sv.alpha == Fraction(1, 2)
    assert sv.value == cst.stieltjes0(Fraction(1, 2))
    assert cst.stieltjes_value(1).value == pytest.approx(cst.euler_gamma(), abs=1e-12)
