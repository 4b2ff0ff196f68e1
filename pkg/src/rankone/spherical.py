"""The c-function, the spherical functions phi and Phi, and the kernel b.

All evaluators broadcast over ``lam`` and ``t``.  For the functions that
grow or decay exponentially the ``*_scaled`` variants strip the leading
exponential so that callers working at large t never see overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import specfun
from .errors import DomainError, NonConvergenceError, PoleError
from .geometry import GroupDatum, log_2cosh, log_2sinh

# sinh t = 1: switch between the direct and Pfaff-transformed forms of phi.
T_MID = math.asinh(1.0)
# sech^2 t = 0.9: below this t, Phi uses the sinh form.  The cosh-form power
# series stays accurate up to that argument, while the connection formula
# around 1 loses digits to cancellation when |lambda| is large.
PHI_SERIES_MAX = 0.9
T_PHI = math.acosh(1.0 / math.sqrt(PHI_SERIES_MAX))
L1_GUARD = 1e-12
# Refuse Phi evaluations whose estimated cancellation loss exceeds this
# relative level (largest intermediate term / result * eps).
PRECISION_LIMIT = 1e-9
_EPS = np.finfo(float).eps
_LOG2 = math.log(2.0)


def _prep(lam, t):
    scalar = np.ndim(lam) == 0 and np.ndim(t) == 0
    lam, t = np.broadcast_arrays(np.asarray(lam, dtype=complex), np.asarray(t, dtype=float))
    return scalar, np.array(lam), np.array(t)


def _out(v, scalar):
    return complex(v.reshape(())) if scalar else v


def _sech2(t):
    e = np.exp(-2.0 * t)
    return 4.0 * e / (1.0 + e) ** 2


@dataclass(frozen=True)
class SpectralPoint:
    """A spectral parameter with the classification used across the package."""

    lam: complex

    @property
    def upper_half(self) -> bool:
        return self.lam.imag > 0

    @property
    def exceptional(self) -> bool:
        """lambda in i*Z, where Phi_lambda and Phi_{-lambda} stop being independent."""
        return self.lam.real == 0 and float(self.lam.imag).is_integer()

    def l1_region(self, g: GroupDatum) -> bool:
        return self.lam.imag > g.rho + L1_GUARD

    def intermediate(self, g: GroupDatum) -> bool:
        return 0 < self.lam.imag <= g.rho + L1_GUARD

    def classify(self, g: GroupDatum) -> dict:
        return {
            "upper_half": self.upper_half,
            "l1_region": self.l1_region(g),
            "intermediate": self.intermediate(g),
            "exceptional": self.exceptional,
        }


@dataclass(frozen=True)
class EvaluationEnvelope:
    """C * t**power * exp(exp_rate * t); ``logarithmic`` means log(1/t) instead of a power."""

    kind: str
    constant: float
    power: float
    exp_rate: float
    logarithmic: bool = False


def c_function(lam, g: GroupDatum):
    """Harish-Chandra c-function, normalized so that c(-i rho) = 1."""
    scalar = np.ndim(lam) == 0
    lam = np.asarray(lam, dtype=complex)
    il = 1j * lam
    if specfun._near_nonpositive_integer(il).any():
        raise PoleError("c-function has a pole at lambda = 0 and i*lambda = -1, -2, ...")
    c0 = (g.m1 + g.m2 + 1) / 2
    q = specfun.gamma_quotient([c0 + 0 * il, il], [(g.rho + il) / 2, (g.m1 + 2) / 4 + il / 2])
    v = np.exp((g.rho - il) * _LOG2) * np.asarray(q)
    return complex(v) if scalar else v


def _phi_direct(lam, t, g):
    """phi * exp(rho t) from the defining series, with the cancellation loss."""
    il = 1j * lam
    a = (g.rho - il) / 2
    b = (g.rho + il) / 2
    c = np.full(lam.shape, (g.m1 + g.m2 + 1) / 2, dtype=complex)
    out = np.empty(lam.shape, dtype=complex)
    loss = np.empty(lam.shape)
    sh2 = np.sinh(np.minimum(t, T_MID)) ** 2
    near = (t <= T_MID) & (sh2 <= specfun.Z_SWITCH)
    if near.any():
        v, sc = specfun.hyp2f1_series(a[near], b[near], c[near], -sh2[near], with_scale=True)
        out[near] = v * np.exp(g.rho * t[near])
        loss[near] = _loss(v, sc)
    mid = (t <= T_MID) & ~near
    if mid.any():
        tm = t[mid]
        v, sc = specfun.hyp2f1_series(c[mid] - a[mid], b[mid], c[mid], np.tanh(tm) ** 2, with_scale=True)
        logch = log_2cosh(tm) - _LOG2
        out[mid] = np.exp(-2.0 * b[mid] * logch + g.rho * tm) * v
        loss[mid] = _loss(v, sc)
    big = t > T_MID
    if big.any():
        tb = t[big]
        logch = log_2cosh(tb) - _LOG2
        v, sc = specfun.hyp2f1_complement(c[big] - a[big], b[big], c[big], _sech2(tb), with_scale=True)
        out[big] = np.exp(-2.0 * b[big] * logch + g.rho * tb) * v
        loss[big] = _loss(v, sc)
    return out, loss


def _phi_connection(lam, t, g):
    """phi * exp(rho t) as c(lam) Phi_lam + c(-lam) Phi_-lam, with the loss."""
    s1, l1 = _phi2_scaled_with_loss(lam, t, g)
    s2, l2 = _phi2_scaled_with_loss(-lam, t, g)
    p1 = c_function(lam, g) * s1 * np.exp(1j * lam * t)
    p2 = c_function(-lam, g) * s2 * np.exp(-1j * lam * t)
    v = p1 + p2
    with np.errstate(divide="ignore", invalid="ignore"):
        loss = (np.abs(p1) * np.maximum(l1, _EPS) + np.abs(p2) * np.maximum(l2, _EPS)) / np.abs(v)
    return v, np.where(np.isfinite(loss), loss, np.inf)


def phi(lam, t, g: GroupDatum):
    """Elementary spherical function phi_lambda(a_t)."""
    scalar, lam, t = _prep(lam, t)
    return _out(np.asarray(phi_scaled(lam, t, g)) * np.exp(-g.rho * t), scalar)


def phi_scaled(lam, t, g: GroupDatum):
    """phi_lambda(a_t) * exp(rho t), which grows at most like (1 + t) exp(|Im lambda| t).

    Evaluated from the defining series (Pfaff-transformed past sinh t = 1).
    For large |lambda| those series cancel badly at moderate t; such points
    fall back on the connection formula through Phi_{+-lambda}.
    """
    scalar, lam, t = _prep(lam, t)
    if np.any(t < 0):
        raise DomainError("phi needs t >= 0")
    shape = lam.shape
    lam, t = lam.ravel(), t.ravel()
    out, loss = _phi_direct(lam, t, g)
    il = 1j * lam
    off_axis = np.abs(il - np.round(il.real)) > 1e-3
    retry = (loss > PRECISION_LIMIT) & off_axis & (t > 0)
    if retry.any():
        v, l2 = _phi_connection(lam[retry], t[retry], g)
        better = l2 < loss[retry]
        idx = np.flatnonzero(retry)[better]
        out[idx], loss[idx] = v[better], l2[better]
    bad = loss > PRECISION_LIMIT
    if bad.any():
        i = int(np.argmax(np.where(bad, loss, -1.0)))
        raise NonConvergenceError(
            "phi evaluation loses too many digits to cancellation (|lambda| too large for this t)",
            {"lambda": complex(lam[i]), "t": float(t[i]), "relative_loss": float(loss[i])},
        )
    return _out(out.reshape(shape), scalar)


def _check_phi2(lam, t):
    if np.any(t <= 0):
        raise DomainError("Phi needs t > 0")
    bad = specfun._near_nonpositive_integer(1.0 - 1j * lam)
    if bad.any():
        raise PoleError(f"Phi is undefined at lambda = {lam[bad].ravel()[0]} (1 - i lambda a pole)")


def _phi2_cosh_route(lam, t, g):
    il = 1j * lam
    pref = np.exp((il - g.rho) * np.log1p(np.exp(-2.0 * t)))
    val, scale = specfun.hyp2f1_series(
        (g.rho - il) / 2, (g.m1 + 2) / 4 - il / 2, 1.0 - il, _sech2(t), with_scale=True
    )
    return pref * val, _loss(val, scale)


def _phi2_sinh_route(lam, t, g):
    # sinh form, Pfaff-mapped: its argument becomes sech^2 t, close to 1 for
    # small t, so evaluate through the complement tanh^2 t.
    il = 1j * lam
    al = (g.rho - il) / 2
    ga = 1.0 - il
    bp = (2 - g.m1) / 4 - il / 2
    # combined in log space: each factor alone overflows for tiny t
    pref = np.exp((il - g.rho) * np.log(-np.expm1(-2.0 * t)) - 2.0 * bp * (log_2cosh(t) - log_2sinh(t)))
    val, scale = specfun.hyp2f1_complement(ga - al, bp, ga, np.tanh(t) ** 2, with_scale=True)
    return pref * val, _loss(val, scale)


def _loss(val, scale):
    with np.errstate(divide="ignore", invalid="ignore"):
        loss = _EPS * scale / np.abs(val)
    return np.where(np.isfinite(loss), loss, np.inf)


# Windows where each route is still cheap enough to serve as a fallback.
_COSH_FALLBACK_MIN_T = 0.1
_SINH_FALLBACK_MAX_T = 1.5


def phi_second_kind_scaled(lam, t, g: GroupDatum):
    """Phi_lambda(a_t) * exp(-(i lambda - rho) t); tends to 1 as t -> inf.

    The cosh-form series serves t >= T_PHI and the sinh form smaller t.  A
    point whose estimated cancellation loss exceeds ``PRECISION_LIMIT`` is
    retried on the other route, and refused if that fails as well.
    """
    scalar, lam, t = _prep(lam, t)
    _check_phi2(lam, t)
    shape = lam.shape
    out, loss = _phi2_scaled_with_loss(lam.ravel(), t.ravel(), g)
    lam, t = lam.ravel(), t.ravel()
    bad = loss > PRECISION_LIMIT
    if bad.any():
        i = int(np.argmax(np.where(bad, loss, -1.0)))
        raise NonConvergenceError(
            "Phi evaluation loses too many digits to cancellation (|lambda| too large for this t)",
            {"lambda": complex(lam[i]), "t": float(t[i]), "relative_loss": float(loss[i])},
        )
    return _out(out.reshape(shape), scalar)


def _phi2_scaled_with_loss(lam, t, g):
    out = np.empty(lam.shape, dtype=complex)
    loss = np.empty(lam.shape)
    big = t >= T_PHI
    if big.any():
        out[big], loss[big] = _phi2_cosh_route(lam[big], t[big], g)
    small = ~big
    if small.any():
        out[small], loss[small] = _phi2_sinh_route(lam[small], t[small], g)
    retry = (loss > PRECISION_LIMIT) & big & (t <= _SINH_FALLBACK_MAX_T)
    if retry.any():
        v, l2 = _phi2_sinh_route(lam[retry], t[retry], g)
        better = l2 < loss[retry]
        idx = np.flatnonzero(retry)[better]
        out[idx], loss[idx] = v[better], l2[better]
    retry = (loss > PRECISION_LIMIT) & small & (t >= _COSH_FALLBACK_MIN_T)
    if retry.any():
        v, l2 = _phi2_cosh_route(lam[retry], t[retry], g)
        better = l2 < loss[retry]
        idx = np.flatnonzero(retry)[better]
        out[idx], loss[idx] = v[better], l2[better]
    return out, loss


def phi_second_kind(lam, t, g: GroupDatum):
    """Second solution Phi_lambda(a_t), singular at t = 0."""
    scalar, lam, t = _prep(lam, t)
    v = np.asarray(phi_second_kind_scaled(lam, t, g)) * np.exp((1j * lam - g.rho) * t)
    return _out(v, scalar)


def phi_second_kind_sinh_form(lam, t, g: GroupDatum):
    """Phi through the sinh-form expression at any t > 0 (reference route)."""
    scalar, lam, t = _prep(lam, t)
    _check_phi2(lam, t)
    il = 1j * lam
    al = (g.rho - il) / 2
    bp = (2 - g.m1) / 4 - il / 2
    ga = 1.0 - il
    z = -1.0 / np.sinh(t) ** 2
    v = np.exp((il - g.rho) * log_2sinh(t)) * specfun.hyp2f1(al, bp, ga, z)
    return _out(v, scalar)


def phi_second_kind_cosh_form(lam, t, g: GroupDatum):
    """Phi through the cosh-form expression at any t > 0 (reference route)."""
    scalar, lam, t = _prep(lam, t)
    _check_phi2(lam, t)
    il = 1j * lam
    al = (g.rho - il) / 2
    be = (g.m1 + 2) / 4 - il / 2
    v = np.exp((il - g.rho) * log_2cosh(t)) * specfun.hyp2f1(al, be, 1.0 - il, _sech2(t))
    return _out(v, scalar)


def b_prefactor(lam, g: GroupDatum):
    """P(lambda) with b_lambda = P(lambda) Phi_lambda; equals i / (2 lambda c(-lambda))."""
    scalar = np.ndim(lam) == 0
    il = 1j * np.asarray(lam, dtype=complex)
    c0 = (g.m1 + g.m2 + 1) / 2
    q = specfun.gamma_quotient(
        [(g.rho - il) / 2, (g.m1 + 2) / 4 - il / 2], [c0 + 0 * il, 1.0 - il]
    )
    v = np.exp((-g.rho - 1.0 - il) * _LOG2) * np.asarray(q)
    return complex(v) if scalar else v


def _check_upper(lam):
    if np.any(np.imag(lam) <= 0):
        raise DomainError("b-kernel needs Im lambda > 0")


def b_kernel_scaled(lam, t, g: GroupDatum):
    """b_lambda(a_t) * exp(-(i lambda - rho) t)."""
    scalar, lam, t = _prep(lam, t)
    _check_upper(lam)
    v = np.asarray(b_prefactor(lam, g)) * np.asarray(phi_second_kind_scaled(lam, t, g))
    return _out(v, scalar)


def b_kernel(lam, t, g: GroupDatum):
    """Resolvent kernel b_lambda(a_t) for Im lambda > 0."""
    scalar, lam, t = _prep(lam, t)
    v = np.asarray(b_kernel_scaled(lam, t, g)) * np.exp((1j * lam - g.rho) * t)
    return _out(v, scalar)


def log_abs_b_kernel(lam, t, g: GroupDatum):
    """log |b_lambda(a_t)| without forming b itself."""
    scalar, lam, t = _prep(lam, t)
    s = np.asarray(b_kernel_scaled(lam, t, g))
    v = np.log(np.abs(s)) + (-lam.imag - g.rho) * t
    return float(v) if scalar else v


def product_rule_K_integral(lam, s, t, g: GroupDatum):
    """b_lambda(a_max(s,t)) phi_lambda(a_min(s,t)); stands in for the K-average."""
    scalar = all(np.ndim(x) == 0 for x in (lam, s, t))
    lam, s, t = np.broadcast_arrays(
        np.asarray(lam, dtype=complex), np.asarray(s, dtype=float), np.asarray(t, dtype=float)
    )
    if np.any(s == t):
        raise DomainError("product rule is not defined at s = t")
    if np.any(s < 0) or np.any(t < 0):
        raise DomainError("radii must be nonnegative")
    hi, lo = np.maximum(s, t), np.minimum(s, t)
    v = np.asarray(b_kernel(lam, hi, g)) * np.asarray(phi(lam, lo, g))
    return _out(np.asarray(v), scalar)


def b_envelopes(lam, g: GroupDatum):
    """Qualitative near-zero and near-infinity envelopes of |b_lambda|.

    The constants are left at 1: only the exponents are claimed.
    """
    lam = complex(lam)
    n = g.m1 + g.m2
    near0 = EvaluationEnvelope("near-zero", 1.0, -(n - 1) if n > 1 else 0.0, 0.0, logarithmic=(n == 1))
    near_inf = EvaluationEnvelope("near-infinity", 1.0, 0.0, -(lam.imag + g.rho))
    return near0, near_inf


FUNCTIONS = {
    "phi": phi,
    "Phi": phi_second_kind,
    "b": b_kernel,
}


def evaluate(name: str, lam, t, g: GroupDatum):
    """Dispatch used by the CLI: ``name`` in {phi, Phi, b, c}."""
    if name == "c":
        return np.broadcast_to(np.asarray(c_function(lam, g)), np.shape(t))
    try:
        fn = FUNCTIONS[name]
    except KeyError:
        raise DomainError(f"unknown function {name!r}; choose phi, Phi, b or c") from None
    return fn(lam, t, g)
