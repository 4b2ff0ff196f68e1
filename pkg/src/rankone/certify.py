"""Certified hypergeometric bounds near x = 1 and empirical fits of growth constants.

The certificate is the polynomial bound built by induction on k from the
contiguous relation

    c(c+1) F(a,b;c;x) = c(c-a+1) F(a,b+1;c+2;x) + a[c-(c-b)x] F(a+1,b+1;c+2;x),

with the base case bounded by an Euler integral.  In the variables
x = |a|, y = |b|, z = |c| the polynomials satisfy

    P_0 = B(1/2, min(R1, R2)),
    P_{n+1} = z (z + x + 1) P_n(x, y+1, z+2) + x (2z + y) P_n(x+1, y+1, z+2),

and |F(a,b;c;x)| <= P_k(|a|,|b|,|c|) / |(c)_2k| * |Gamma(c+2k) / (Gamma(b+k) Gamma(c-b+k))|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import beta, comb

from . import specfun
from .errors import AdmissibilityError, DiscrepancyError, DivergenceError, DomainError, PreconditionError
from .geometry import GroupDatum


# ---------------------------------------------------------------------------
# Dense polynomials in three variables
# ---------------------------------------------------------------------------


def _shift_matrix(deg: int, h: float) -> np.ndarray:
    """S with (S @ p)[j] the y^j coefficient of p(y + h), p given by coefficients."""
    j = np.arange(deg + 1)
    S = comb(j[None, :], j[:, None]) * float(h) ** np.maximum(j[None, :] - j[:, None], 0)
    return np.triu(S)


def poly_shift(P: np.ndarray, shifts) -> np.ndarray:
    """P(x + h0, y + h1, z + h2) as a coefficient table of the same shape."""
    out = P
    for axis, h in enumerate(shifts):
        if h == 0:
            continue
        S = _shift_matrix(P.shape[axis] - 1, h)
        out = np.moveaxis(np.tensordot(S, np.moveaxis(out, axis, 0), axes=(1, 0)), 0, axis)
    return out


def poly_mul(P: np.ndarray, Q: np.ndarray) -> np.ndarray:
    """Product of two coefficient tables; Q is expected to be small."""
    shape = tuple(p + q - 1 for p, q in zip(P.shape, Q.shape))
    out = np.zeros(shape)
    for idx in zip(*np.nonzero(Q)):
        sl = tuple(slice(i, i + n) for i, n in zip(idx, P.shape))
        out[sl] += Q[idx] * P
    return out


def poly_eval(P: np.ndarray, x, y, z):
    x, y, z = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (x, y, z)))
    out = np.zeros(x.shape)
    # Horner on each axis
    for i in range(P.shape[0] - 1, -1, -1):
        inner = np.zeros(x.shape)
        for j in range(P.shape[1] - 1, -1, -1):
            inner = inner * y + np.polynomial.polynomial.polyval(z, P[i, j])
        out = out * x + inner
    return out


def _monomial(i, j, l, c=1.0, size=3):
    Q = np.zeros((size, size, size))
    Q[i, j, l] = c
    return Q


def _pad(P, size):
    out = np.zeros((size,) * 3)
    out[: P.shape[0], : P.shape[1], : P.shape[2]] = P
    return out


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------


@dataclass
class BoundCertificate:
    """|F(a,b;c;x)| <= P(|a|,|b|,|c|) / |(c)_2k| * |Gamma(c+2k) / (Gamma(b+k) Gamma(c-b+k))|."""

    k: int
    R1: float
    R2: float
    poly_coeffs: np.ndarray = field(repr=False)

    @property
    def degree(self) -> int:
        idx = np.argwhere(self.poly_coeffs != 0)
        return int(idx.sum(axis=1).max()) if idx.size else 0

    @property
    def base_constant(self) -> float:
        return float(beta(0.5, min(self.R1, self.R2)))

    def polynomial(self, x, y, z):
        return poly_eval(self.poly_coeffs, x, y, z)

    def gamma_factor(self, a, b, c):
        """|Gamma(c+2k) / (Gamma(b+k) Gamma(c-b+k))| / |(c)_2k|."""
        k = self.k
        g = specfun.gamma_quotient([c + 2 * k], [b + k, c - b + k])
        return np.abs(g) / np.abs(specfun.pochhammer(c, 2 * k))

    def bound(self, a, b, c):
        a, b, c = (np.asarray(v, dtype=complex) for v in (a, b, c))
        return self.polynomial(np.abs(a), np.abs(b), np.abs(c)) * self.gamma_factor(a, b, c)

    def as_dict(self) -> dict:
        nz = np.argwhere(self.poly_coeffs != 0)
        return {
            "k": self.k,
            "R1": self.R1,
            "R2": self.R2,
            "degree": self.degree,
            "coefficients": [[int(i), int(j), int(l), float(self.poly_coeffs[i, j, l])] for i, j, l in nz],
            "gamma_factor": "|Gamma(c+2k)/(Gamma(b+k)Gamma(c-b+k))| / |(c)_2k|",
        }


def build_bound_polynomial(R1: float, R2: float, k: int) -> BoundCertificate:
    if R1 <= 0 or R2 <= 0:
        raise PreconditionError("R1 and R2 must be positive")
    if k < 0 or int(k) != k:
        raise PreconditionError("k must be a nonnegative integer")
    k = int(k)
    P = np.zeros((1, 1, 1))
    P[0, 0, 0] = beta(0.5, min(R1, R2))
    # z (z + x + 1) and x (2 z + y)
    f1 = _monomial(0, 0, 2) + _monomial(1, 0, 1) + _monomial(0, 0, 1)
    f2 = _monomial(1, 0, 1, 2.0) + _monomial(1, 1, 0)
    for n in range(k):
        t1 = poly_mul(poly_shift(P, (0, 1, 2)), f1)
        t2 = poly_mul(poly_shift(P, (1, 1, 2)), f2)
        P = _trim(t1 + t2, 2 * n + 2)
    return BoundCertificate(k, float(R1), float(R2), P)


def _trim(P, deg):
    """Cut the table to total degree ``deg``; higher entries must be zero."""
    i, j, l = np.indices(P.shape)
    if np.any(P[(i + j + l) > deg] != 0):
        raise AssertionError("certificate polynomial exceeded its degree")
    n = deg + 1
    return _pad(P[:n, :n, :n], n)


@dataclass
class BoundCheck:
    ok: bool
    margin: float
    bound: float
    value: float


def admissibility(cert: BoundCertificate, a, b, c):
    """List of violated inequalities (empty when admissible)."""
    a, b, c = complex(a), complex(b), complex(c)
    fails = []
    if not (c - a - b).real > cert.R1:
        fails.append(f"Re(c-a-b) = {(c - a - b).real:.6g} must exceed R1 = {cert.R1:g}")
    if not (c - b).real > cert.R2:
        fails.append(f"Re(c-b) = {(c - b).real:.6g} must exceed R2 = {cert.R2:g}")
    if not b.real > -cert.k + 0.5:
        fails.append(f"Re b = {b.real:.6g} must exceed -k + 1/2 = {-cert.k + 0.5:g}")
    if specfun._near_nonpositive_integer(np.array([c]), 0.0).any():
        fails.append("c is a nonpositive integer")
    return fails


def check_bound(cert: BoundCertificate, a, b, c, x: float) -> BoundCheck:
    fails = admissibility(cert, a, b, c)
    if fails:
        raise AdmissibilityError("; ".join(fails))
    if not 0 <= x < 1:
        raise DomainError("x must lie in [0, 1)")
    value = abs(specfun.hyp2f1(a, b, c, x))
    bound = float(cert.bound(a, b, c))
    return BoundCheck(bool(bound >= value), bound - value, bound, value)


def small_t_parameters(lam, g: GroupDatum):
    """(a, b, c, k, R1, R2) of the small-t bound for Phi_lambda.

    Re(c - a - b) equals (m1 + m2 - 1)/2 exactly, so R1 is taken a hair below
    it; groups with m1 + m2 = 1 are the logarithmic case and have no
    certificate of this form.
    """
    lam = complex(lam)
    if lam.imag <= 0:
        raise DomainError("certificate instance needs Im lambda > 0")
    gap = (g.m1 + g.m2 - 1) / 2
    if gap <= 0:
        raise DomainError("m1 + m2 = 1 is the logarithmic case: Re(c-a-b) = 0")
    il = 1j * lam
    a = (2 - g.rho) / 2 - il / 2
    b = (2 - g.m1) / 4 - il / 2
    c = 1 - il
    k = int(math.floor(g.m1 / 4 + 1))
    return a, b, c, k, gap * (1 - 1e-9), (g.m1 + 2) / 4


def sample_admissible(cert: BoundCertificate, n: int, rng: np.random.Generator, scale=5.0, margin=0.05):
    """Random (a, b, c, x) satisfying the certificate's admissibility strictly."""
    k = cert.k
    out = []
    while len(out) < n:
        b = complex(rng.uniform(-k + 0.5 + margin, scale), rng.uniform(-scale, scale))
        w2 = complex(rng.uniform(cert.R2 + margin, scale + cert.R2), rng.uniform(-scale, scale))
        w1 = complex(rng.uniform(cert.R1 + margin, scale + cert.R1), rng.uniform(-scale, scale))
        c = b + w2
        a = w2 - w1
        x = float(rng.uniform(0.0, 0.999))
        if admissibility(cert, a, b, c):
            continue
        out.append((a, b, c, x))
    return out


# ---------------------------------------------------------------------------
# Empirical fits
# ---------------------------------------------------------------------------


@dataclass
class EstimateFit:
    exponent: float
    constant: float
    residual: float
    interval: tuple = (math.nan, math.nan)
    slopes: dict = field(default_factory=dict)
    grid: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "fitted_exponent": self.exponent,
            "fitted_constant": self.constant,
            "residual": self.residual,
            "interval": list(self.interval),
            "slopes": {str(k): v for k, v in self.slopes.items()},
            "grid": self.grid,
        }


def _lsq(logx, logy):
    A = np.stack([logx, np.ones_like(logx)], axis=1)
    (slope, icept), *_ = np.linalg.lstsq(A, logy, rcond=None)
    res = logy - (slope * logx + icept)
    return float(slope), float(icept), float(np.sqrt(np.mean(res**2)))


DEFAULT_RAYS = (0.0, math.pi / 3, 2 * math.pi / 3)


def fit_ratio_envelope(
    log_sampler, predicted_power, rays=DEFAULT_RAYS, rmin=1.0, rmax=1e4, n=41, fit_from=100.0, delta=1e-2, tol=0.05
):
    """Slope of log|q(z)| against log(1 + |z|) on each ray.

    ``log_sampler(z)`` returns log|q(z)| (log space keeps the c-function
    pattern finite at |z| = 1e4).  The slope is fitted on |z| >= ``fit_from``
    where the power law has taken over; every sample enters the bounded-ratio
    interval [C1, C2] of |q(z)| / (1 + |z|)^predicted_power.  Raises
    :class:`DiscrepancyError` when a slope misses ``predicted_power`` by ``tol``
    or more.
    """
    r = np.geomspace(rmin, rmax, n)
    far = r >= fit_from
    slopes, logratios, resid = {}, [], []
    for th in rays:
        if abs(th) > math.pi - delta:
            raise DomainError(f"ray arg {th:.6g} leaves the sector |arg z| <= pi - {delta:g}")
        lv = np.real(np.asarray(log_sampler(r * np.exp(1j * th))))
        lx = np.log1p(r)
        s, _, rr = _lsq(lx[far], lv[far])
        slopes[float(th)] = s
        resid.append(rr)
        logratios.append(lv - predicted_power * lx)
    logratios = np.concatenate(logratios)
    worst = max(slopes.values(), key=lambda s: abs(s - predicted_power))
    fit = EstimateFit(
        exponent=float(np.mean(list(slopes.values()))),
        constant=float(np.exp(logratios.max())),
        residual=float(max(resid)),
        interval=(float(np.exp(logratios.min())), float(np.exp(logratios.max()))),
        slopes=slopes,
        grid={"rays": [float(t) for t in rays], "rmin": rmin, "rmax": rmax, "n": n, "fit_from": fit_from},
    )
    if abs(worst - predicted_power) >= tol:
        raise DiscrepancyError(f"fitted slope {worst:.4f} misses predicted power {predicted_power:.4f} by {tol:g} or more")
    return fit


def gamma_ratio_sampler(a, b):
    """log|Gamma(a + z) / Gamma(b + z)|."""

    def s(z):
        z = np.asarray(z, dtype=complex)
        return np.real(specfun.log_gamma(a + z) - specfun.log_gamma(b + z))

    return s


def c_pattern_sampler(a, b, c):
    """log(2^{Re z} |Gamma(a + z/2) Gamma(b + z/2) / Gamma(c + z)|)."""

    def s(z):
        z = np.asarray(z, dtype=complex)
        lg = specfun.log_gamma(a + z / 2) + specfun.log_gamma(b + z / 2) - specfun.log_gamma(c + z)
        return np.real(lg) + z.real * math.log(2.0)

    return s


MAX_EXPONENT = 32.0


def fit_exponent(sampler, lambda_grid, max_exponent=MAX_EXPONENT) -> EstimateFit:
    """Fit q(lambda) <= C (1 + |lambda|)^K over the grid.

    K is the least-squares slope of log q against log(1 + |lambda|), floored
    at 0; C is then the smallest constant dominating every sample.
    """
    lam = np.asarray(lambda_grid, dtype=complex).ravel()
    q = np.abs(np.array([sampler(x) for x in lam], dtype=complex))
    if not np.all(np.isfinite(q)):
        raise DivergenceError("sampled quantity is not finite", {"lambda": lam.tolist()})
    lx = np.log1p(np.abs(lam))
    pos = q > 0
    if pos.any() and np.ptp(lx[pos]) > 0 and np.ptp(q[pos]) > 0:
        K, _, res = _lsq(lx[pos], np.log(q[pos]))
    else:
        K, res = 0.0, 0.0
    K = max(K, 0.0)
    C = float(np.max(q / (1 + np.abs(lam)) ** K)) if q.size else 0.0
    fit = EstimateFit(
        exponent=K,
        constant=C,
        residual=res,
        grid={"lambda_re": lam.real.tolist(), "lambda_im": lam.imag.tolist()},
    )
    if K > max_exponent:
        raise DivergenceError(f"no polynomial exponent <= {max_exponent:g} dominates (fitted {K:.3g})", fit)
    return fit


# ---------------------------------------------------------------------------
# Decay functional
# ---------------------------------------------------------------------------


@dataclass
class DeltaEstimate:
    value: float
    window: tuple
    skipped: int

    def as_dict(self):
        return {"value": self.value, "window": list(self.window), "skipped": self.skipped}


def delta_infinity_plus(t, values=None, g: GroupDatum | None = None, log_abs=None, rho=None) -> DeltaEstimate:
    """Finite-sample estimator -max_{t in [T/2, T]} e^{-pi t / (2 rho)} log|F(t)|.

    Pass either ``values`` or ``log_abs`` (log|F|, useful when F underflows).
    Zero samples count as log|F| = -inf and are skipped with a count.
    """
    t = np.asarray(t, dtype=float)
    if t.ndim != 1 or np.any(np.diff(t) <= 0):
        raise PreconditionError("sample points must be increasing")
    if t[-1] < 10:
        raise PreconditionError("need samples up to T_max >= 10")
    rho = g.rho if g is not None else rho
    if rho is None or rho <= 0:
        raise PreconditionError("need a group or a positive rho")
    if log_abs is None:
        if values is None:
            raise PreconditionError("pass values or log_abs")
        with np.errstate(divide="ignore"):
            log_abs = np.log(np.abs(np.asarray(values)))
    log_abs = np.asarray(log_abs, dtype=float)
    T = t[-1]
    win = t >= T / 2
    lv = log_abs[win]
    ok = np.isfinite(lv)
    skipped = int((~ok).sum())
    if not ok.any():
        return DeltaEstimate(math.inf, (T / 2, T), skipped)
    w = np.exp(-math.pi * t[win][ok] / (2 * rho)) * lv[ok]
    return DeltaEstimate(float(-w.max()), (float(T / 2), float(T)), skipped)


delta_infinity_minus = delta_infinity_plus
