import math

import numpy as np
import pytest

from rankone.errors import DivergenceError, NonConvergenceError, TailBoundError
from rankone.quadrature import (
    Decay,
    PanelIntegrator,
    QuadratureSpec,
    adaptive_panels,
    integrate_radial,
    truncated_integrals,
)


def test_zero_integrand():
    r = integrate_radial(lambda t: np.zeros_like(t), Decay(rate=1.0))
    assert r.scalar() == 0


def test_sinh_against_exponential():
    # int_0^inf 2 sinh t e^{-2t} dt = 2/3
    r = integrate_radial(lambda t: 2 * np.sinh(t) * np.exp(-2 * t), Decay(rate=1.0))
    assert abs(r.scalar() - 2 / 3) < 1e-12
    assert np.all(r.tail_bound < 1e-9)


def test_endpoint_singularity():
    # int_0^inf t^{-1/2} e^{-t} dt = sqrt(pi)
    r = integrate_radial(lambda t: t**-0.5 * np.exp(-t), Decay(rate=1.0, power=-0.5))
    assert abs(r.scalar() - math.sqrt(math.pi)) < 1e-8


def test_log_singularity():
    # int_0^inf log(1/t) e^{-t} dt = Euler's gamma
    r = integrate_radial(lambda t: -np.log(t) * np.exp(-t), Decay(rate=1.0, power=0.1))
    assert abs(r.scalar() - 0.5772156649015329) < 1e-10


def test_vectorized_parameters():
    a = np.array([1.0, 2.0, 3.0])
    r = integrate_radial(lambda t: np.exp(-np.outer(a, t)), Decay(rate=1.0))
    assert np.allclose(r.value, 1 / a, rtol=1e-11)


def test_compact_support():
    r = integrate_radial(lambda t: np.where(t < 2, 1.0, 0.0), Decay(support=2.0))
    assert abs(r.scalar() - 2) < 1e-12


def test_no_decay_is_divergent():
    with pytest.raises(DivergenceError):
        integrate_radial(lambda t: np.ones_like(t), Decay(rate=0.0))


def test_tail_bound_error_when_T_fixed():
    with pytest.raises(TailBoundError):
        integrate_radial(lambda t: np.exp(-0.1 * t), Decay(rate=0.1), QuadratureSpec(tail_T=5.0))


def test_non_finite_integrand():
    with pytest.raises(NonConvergenceError):
        adaptive_panels(lambda t: np.full_like(t, np.nan), np.array([0.0, 1.0]))


def test_truncated_integrals_grow():
    vals = truncated_integrals(lambda t: np.exp(0.1 * t), [5, 10, 20])
    exact = [10 * (math.exp(0.1 * T) - 1) for T in (5, 10, 20)]
    assert np.allclose(vals, exact, rtol=1e-10)


def test_panel_integrator_head_tail():
    P, res = PanelIntegrator.build(lambda t: np.exp(-t), Decay(rate=1.0))
    assert abs(res.scalar() - 1) < 1e-12
    for t in (0.05, 0.5, 1.7, 6.3):
        assert abs(P.head(t)[0] - (1 - math.exp(-t))) < 1e-11
        assert abs(P.tail(t)[0] - math.exp(-t)) < 1e-9
