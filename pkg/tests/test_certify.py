import math

import mpmath
import numpy as np
import pytest

from rankone import certify
from rankone.errors import AdmissibilityError, DiscrepancyError, DivergenceError, DomainError
from rankone.geometry import GroupDatum, catalog


def test_base_case():
    cert = certify.build_bound_polynomial(0.7, 0.4, 0)
    assert cert.degree == 0
    assert cert.base_constant == pytest.approx(float(mpmath.beta(0.5, 0.4)), rel=1e-13)
    assert cert.polynomial(3.0, 2.0, 9.0) == pytest.approx(cert.base_constant)


def test_degree_two_and_nonnegative():
    cert = certify.build_bound_polynomial(1.0, 1.0, 1)
    assert cert.degree == 2
    assert np.all(cert.poly_coeffs >= 0)


def test_recursion_matches_hand_expansion():
    # P_1(x, y, z) = z(z+x+1) P_0 + x(2z+y) P_0 for constant P_0
    cert = certify.build_bound_polynomial(1.0, 1.0, 1)
    b0 = cert.base_constant
    for x, y, z in ((0.3, 1.2, 2.0), (2.0, 0.5, 4.5)):
        assert cert.polynomial(x, y, z) == pytest.approx(b0 * (z * (z + x + 1) + x * (2 * z + y)), rel=1e-13)


def test_polynomial_monotone():
    cert = certify.build_bound_polynomial(0.5, 0.5, 2)
    rng = np.random.default_rng(1)
    for _ in range(200):
        p = rng.uniform(0, 5, 3)
        base = cert.polynomial(*p)
        for i in range(3):
            q = p.copy()
            q[i] += rng.uniform(0, 1)
            assert cert.polynomial(*q) >= base


def test_poly_algebra():
    P = certify._monomial(1, 0, 2, 3.0)
    Q = certify._monomial(0, 1, 0, 2.0)
    R = certify.poly_mul(P, Q)
    assert certify.poly_eval(R, 2.0, 3.0, 0.5) == pytest.approx(3 * 2 * 0.25 * 2 * 3)
    S = certify.poly_shift(P, (1.0, 0.0, 2.0))
    assert certify.poly_eval(S, 2.0, 0.0, 0.5) == pytest.approx(3 * 3 * 2.5**2)


def test_x_zero_dominated():
    cert = certify.build_bound_polynomial(0.5, 0.5, 0)
    r = certify.check_bound(cert, 0.5, 1.0, 3.0, 0.0)
    assert r.ok and r.value == pytest.approx(1.0)


def test_example_near_one():
    cert = certify.build_bound_polynomial(0.5, 0.5, 0)
    r = certify.check_bound(cert, 0.5, 1.0, 3.0, 0.99)
    assert r.ok and r.margin >= 0


def test_admissibility_rejected():
    cert = certify.build_bound_polynomial(0.5, 0.5, 0)
    with pytest.raises(AdmissibilityError, match="Re\\(c-a-b\\)"):
        certify.check_bound(cert, 2.0, 1.0, 3.0, 0.5)


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_random_domination(k):
    cert = certify.build_bound_polynomial(1.0, 1.0, k)
    rng = np.random.default_rng(100 + k)
    for a, b, c, x in certify.sample_admissible(cert, 200, rng):
        assert certify.check_bound(cert, a, b, c, x).ok


@pytest.mark.parametrize("g", [g for g in catalog() if g.m1 + g.m2 > 1], ids=lambda g: g.name)
def test_small_t_instance(g):
    for lam in (0.5j, 1.0 + 0.2j, 4.0 + 2.0j):
        a, b, c, k, R1, R2 = certify.small_t_parameters(lam, g)
        cert = certify.build_bound_polynomial(R1, R2, k)
        for x in (0.0, 0.5, 0.99):
            assert certify.check_bound(cert, a, b, c, x).ok


def test_small_t_log_case():
    with pytest.raises(DomainError):
        certify.small_t_parameters(0.5j, GroupDatum(1, 0))


def test_ratio_equal_parameters():
    fit = certify.fit_ratio_envelope(certify.gamma_ratio_sampler(1.3, 1.3), 0.0)
    assert fit.interval == (1.0, 1.0)
    assert all(abs(s) < 1e-12 for s in fit.slopes.values())


def test_ratio_slope_example():
    fit = certify.fit_ratio_envelope(certify.gamma_ratio_sampler(1.5, 0.5), 1.0, rays=(math.pi / 3,))
    assert abs(fit.slopes[math.pi / 3] - 1.0) < 0.05
    assert 0 < fit.interval[0] <= fit.interval[1] < math.inf


def test_c_pattern_example():
    g = GroupDatum(4, 3)
    a, b, c = g.rho / 2, (g.m1 + 2) / 4, 1.0
    fit = certify.fit_ratio_envelope(certify.c_pattern_sampler(a, b, c), a + b - c - 0.5)
    assert all(abs(s - (a + b - c - 0.5)) < 0.05 for s in fit.slopes.values())


def test_ratio_ray_leaving_sector():
    with pytest.raises(DomainError):
        certify.fit_ratio_envelope(certify.gamma_ratio_sampler(1.5, 0.5), 1.0, rays=(math.pi,))


def test_ratio_wrong_prediction():
    with pytest.raises(DiscrepancyError):
        certify.fit_ratio_envelope(certify.gamma_ratio_sampler(1.5, 0.5), 2.0)


def test_fit_exponent_constant():
    fit = certify.fit_exponent(lambda lam: 3.0, [1j, 2 + 1j, 10 + 5j])
    assert fit.exponent == 0 and fit.constant == pytest.approx(3.0)


def test_fit_exponent_power():
    fit = certify.fit_exponent(lambda lam: (1 + abs(lam)) ** 2.5, np.linspace(1, 50, 10) + 1j)
    assert fit.exponent == pytest.approx(2.5, abs=1e-10)


def test_fit_exponent_unbounded():
    with pytest.raises(DivergenceError):
        certify.fit_exponent(lambda lam: math.exp(abs(lam)), np.linspace(1, 200, 20))


def test_delta_examples():
    g = GroupDatum(2, 1)
    t = np.linspace(0, 40, 401)
    assert certify.delta_infinity_plus(t, np.ones_like(t), g).value == 0
    k = math.pi / (2 * g.rho)
    est = certify.delta_infinity_plus(t, log_abs=-np.exp(k * t), g=g)
    assert abs(est.value - 1) < 1e-12
    lam = 2j * g.rho
    est = certify.delta_infinity_plus(t, 1 / (t**2 - lam**2), g)
    assert abs(est.value) < 1e-3


def test_delta_skips_zeros():
    t = np.linspace(0, 20, 21)
    v = np.ones_like(t)
    v[-3:] = 0
    est = certify.delta_infinity_plus(t, v, rho=1.0)
    assert est.skipped == 3 and est.value == 0
