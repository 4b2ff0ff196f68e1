"""Spherical transform, convolution with b, the T operator, synthesis and the resolvent.

Every integral here is a radial one, int_0^inf (...) Delta(t) dt, evaluated by
:mod:`rankone.quadrature` with a tail bound derived from the decay of the
factors involved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import spherical
from .errors import (
    DiscrepancyError,
    DivergenceError,
    DomainError,
    InsufficientDecayError,
    PreconditionError,
    TruncationError,
    ZeroDivisorError,
)
from .geometry import GroupDatum, strip_halfwidth
from .quadrature import (
    Decay,
    PanelIntegrator,
    QuadratureSpec,
    adaptive_panels,
    integrate_radial,
    truncated_integrals,
)
from .radial import BKernel, RadialFunction, Sampled, Spherical

DEFAULT_Q = QuadratureSpec()
T_FORM_TOL = 1e-7
ZERO_DIVISOR = 1e-12
BOUNDARY_GUARD = 1e-12


def _phi_decay(lam, g: GroupDatum) -> Decay:
    """Envelope of |phi_lambda|: (1 + t) exp((|Im lambda| - rho) t)."""
    return Decay(rate=g.rho - float(np.max(np.abs(np.imag(lam)))), power=1.0)


def _as_lams(lam):
    scalar = np.ndim(lam) == 0
    return scalar, np.atleast_1d(np.asarray(lam, dtype=complex)).ravel(), np.shape(lam)


def _shape_out(v, scalar, shape):
    v = np.asarray(v)
    return complex(v.reshape(-1)[0]) if scalar else v.reshape(shape)


def transform_detailed(f: RadialFunction, lam, g: GroupDatum, q: QuadratureSpec = DEFAULT_Q):
    """Spherical transform on a grid of lambda with error estimate and tail data."""
    _, lams, _ = _as_lams(lam)
    decay = f.weighted_decay(g).times(_phi_decay(lams, g))
    if not decay.compact and decay.rate <= 0 and decay.gauss_width is None:
        raise DomainError(
            "lambda lies outside the strip where the transform of this function converges "
            f"(max |Im lambda| = {np.max(np.abs(lams.imag)):.6g}, rho = {g.rho})"
        )

    def F(t):
        return f.weighted(t, g)[None, :] * spherical.phi(lams[:, None], t[None, :], g)

    return integrate_radial(F, decay, q, breakpoints=_support_breaks(f))


def _support_breaks(f):
    s = f.support
    return (s,) if math.isfinite(s) and s > 0 else ()


def spherical_transform(f: RadialFunction, lam, g: GroupDatum, q: QuadratureSpec = DEFAULT_Q):
    """hat f(lambda) = int_0^inf f(a_t) phi_lambda(a_t) Delta(t) dt."""
    scalar, lams, shape = _as_lams(lam)
    if f.support == 0:
        return _shape_out(np.zeros(lams.shape, dtype=complex), scalar, shape)
    res = transform_detailed(f, lams, g, q)
    return _shape_out(res.value, scalar, shape)


def truncated_l1_norms(f: RadialFunction, g: GroupDatum, Ts, q: QuadratureSpec = DEFAULT_Q):
    """int_0^T |f| Delta for each T in ``Ts``."""

    def F(t):
        return np.abs(f.weighted(t, g))

    return np.real(truncated_integrals(F, Ts, q))


DIVERGENCE_PROBES = (5.0, 10.0, 20.0, 40.0)


def l1_norm(f: RadialFunction, g: GroupDatum, q: QuadratureSpec = DEFAULT_Q):
    """int_0^inf |f(a_t)| Delta(t) dt.

    When the envelope of |f| Delta does not decay, the truncated norms at
    T = 5, 10, 20, 40 are computed and a :class:`DivergenceError` carries
    them; it is raised if they keep growing.
    """
    if f.support == 0:
        return 0.0
    decay = f.weighted_decay(g)
    if not decay.compact and decay.rate <= 0 and decay.gauss_width is None:
        Ts = np.array(DIVERGENCE_PROBES)
        norms = truncated_l1_norms(f, g, Ts, q)
        partial = {float(T): float(v) for T, v in zip(Ts, norms)}
        raise DivergenceError(
            f"L1 norm diverges: truncated norms {', '.join(f'{v:.4g}' for v in norms)} "
            f"at T = {', '.join(f'{T:g}' for T in Ts)}",
            partial,
        )

    def F(t):
        return np.abs(f.weighted(t, g))

    return float(np.real(integrate_radial(F, decay, q, breakpoints=_support_breaks(f)).value))


# ---------------------------------------------------------------------------
# Convolution with b and the T operator
# ---------------------------------------------------------------------------


@dataclass
class _Moments:
    """Running integrals of f phi_lambda Delta and f b_lambda Delta."""

    phi: PanelIntegrator
    b: PanelIntegrator
    upper: float


def _moments(f: RadialFunction, lam: complex, g: GroupDatum, q: QuadratureSpec) -> _Moments:
    lam = complex(lam)
    if lam.imag <= 0:
        raise DomainError("convolution with b needs Im lambda > 0")
    kernel = BKernel(lam)
    fd = f.weighted_decay(g)

    def Fphi(t):
        return f.weighted(t, g) * spherical.phi(lam, t, g)

    def Fb(t):
        return f.weighted(t, g) * spherical.b_kernel(lam, t, g)

    d_phi = fd.times(_phi_decay(lam, g))
    d_b = fd.times(kernel.decay(g))
    if not d_phi.compact and d_phi.rate <= 0 and d_phi.gauss_width is None:
        raise DomainError("f does not decay fast enough for phi_lambda at this lambda")
    ip, rp = PanelIntegrator.build(Fphi, d_phi, q, _support_breaks(f))
    ib, rb = PanelIntegrator.build(Fb, d_b, q, _support_breaks(f))
    return _Moments(ip, ib, max(rp.tail_T, rb.tail_T))


def convolve_with_b(f: RadialFunction, lam, t, g: GroupDatum, q: QuadratureSpec = DEFAULT_Q, moments=None):
    """(f * b_lambda)(a_t) through the product rule, split at s = t.

    b_lambda(a_t) int_0^t f phi_lambda Delta + phi_lambda(a_t) int_t^inf f b_lambda Delta.
    """
    scalar = np.ndim(t) == 0
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t <= 0):
        raise DomainError("convolution is evaluated at t > 0")
    m = moments or _moments(f, lam, g, q)
    v = spherical.b_kernel(lam, t, g) * m.phi.head(t) + spherical.phi(lam, t, g) * m.b.tail(t)
    return complex(v[0]) if scalar else v


class BConvolution(RadialFunction):
    """f * b_lambda as a radial function, for compactly supported f."""

    name = "conv"

    def __init__(self, f: RadialFunction, lam, g: GroupDatum, q: QuadratureSpec = DEFAULT_Q):
        if not math.isfinite(f.support):
            raise PreconditionError("f * b_lambda is built for compactly supported f")
        self.f = f
        self.lam = complex(lam)
        self.g = g
        self._m = _moments(f, self.lam, g, q)
        self._b = BKernel(self.lam)
        self._phi = Spherical(self.lam)

    def values(self, t, g):
        return convolve_with_b(self.f, self.lam, np.asarray(t, dtype=float), g, moments=self._m)

    def weighted(self, t, g):
        t = np.asarray(t, dtype=float)
        return self._b.weighted(t, g) * self._m.phi.head(t) + self._phi.weighted(t, g) * self._m.b.tail(t)

    def decay(self, g):
        # beyond the support only b_lambda(a_t) times a constant remains
        return self._b.decay(g)

    def describe(self):
        return {"family": self.name, "lambda": [self.lam.real, self.lam.imag], "f": self.f.describe()}


@dataclass
class TResult:
    """T_lambda f at a grid of t: tail-integral form, definition form, discrepancy."""

    t: np.ndarray
    value: np.ndarray
    definition: np.ndarray
    discrepancy: float
    scale: np.ndarray = field(repr=False, default=None)


def _check_T_lambda(lam, g):
    lam = complex(lam)
    if not (0 < lam.imag < g.rho):
        raise DomainError(f"T operator needs 0 < Im lambda < rho = {g.rho}, got {lam.imag:.6g}")
    return lam


def T_operator(f: RadialFunction, lam, t, g: GroupDatum, q: QuadratureSpec = DEFAULT_Q, tol=T_FORM_TOL):
    """T_lambda f = hat f(lambda) b_lambda - f * b_lambda, evaluated two ways.

    The returned value is the tail form
    b_lambda(a_t) int_t^inf f phi_lambda Delta - phi_lambda(a_t) int_t^inf f b_lambda Delta.
    The definition form uses an independently computed hat f(lambda) and the
    convolution.  Their difference, relative to the size of the terms that
    cancel (at least 1), must stay below ``tol``.
    """
    lam = _check_T_lambda(lam, g)
    t = np.atleast_1d(np.asarray(t, dtype=float))
    m = _moments(f, lam, g, q)
    bt = spherical.b_kernel(lam, t, g)
    pt = spherical.phi(lam, t, g)
    tail_phi = m.phi.tail(t)
    tail_b = m.b.tail(t)
    value = bt * tail_phi - pt * tail_b
    fhat = spherical_transform(f, lam, g, q)
    conv = convolve_with_b(f, lam, t, g, q, moments=m)
    definition = fhat * bt - conv
    scale = np.maximum.reduce([np.ones(t.shape), np.abs(bt * fhat), np.abs(pt * tail_b)])
    disc = float(np.max(np.abs(value - definition) / scale))
    if disc > tol:
        raise DiscrepancyError(f"T operator forms disagree: normalized discrepancy {disc:.3g} > {tol:g}")
    return TResult(t, value, definition, disc, scale)


class TLambdaFunction(RadialFunction):
    """T_lambda f as a radial function (tail-integral form)."""

    name = "T"

    def __init__(self, f: RadialFunction, lam, g: GroupDatum, q: QuadratureSpec = DEFAULT_Q):
        self.f = f
        self.lam = _check_T_lambda(lam, g)
        self.g = g
        self.q = q
        if not math.isfinite(f.support):
            raise PreconditionError("T_lambda f is built for compactly supported f")
        self._m = _moments(f, self.lam, g, q)
        self._b = BKernel(self.lam)
        self._phi = Spherical(self.lam)

    def _check_group(self, g):
        if g != self.g:
            raise PreconditionError("TLambdaFunction was built for another group")

    def values(self, t, g):
        self._check_group(g)
        t = np.asarray(t, dtype=float)
        bt = spherical.b_kernel(self.lam, t, g)
        pt = spherical.phi(self.lam, t, g)
        return bt * self._m.phi.tail(t) - pt * self._m.b.tail(t)

    def weighted(self, t, g):
        self._check_group(g)
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape, dtype=complex)
        m = t < self.f.support
        if m.any():
            tm = t[m]
            out[m] = self._b.weighted(tm, g) * self._m.phi.tail(tm) - self._phi.weighted(tm, g) * self._m.b.tail(tm)
        return out

    def decay(self, g):
        return Decay(support=self.f.support)

    @property
    def support(self):
        return self.f.support

    def describe(self):
        return {"family": self.name, "lambda": [self.lam.real, self.lam.imag], "f": self.f.describe()}


def T_transform_identity(f: RadialFunction, lam, xi, g: GroupDatum, q: QuadratureSpec = DEFAULT_Q):
    """Left and right sides of hat(T_lambda f)(xi) = (hat f(lambda) - hat f(xi)) / (xi^2 - lambda^2)."""
    lam = _check_T_lambda(lam, g)
    xi = np.atleast_1d(np.asarray(xi, dtype=complex))
    if np.any(np.abs(xi**2 - lam**2) < 1e-12):
        raise DomainError("xi^2 = lambda^2: the identity is a removable 0/0 there")
    Tf = TLambdaFunction(f, lam, g, q)
    lhs = spherical_transform(Tf, xi, g, q)
    fl = spherical_transform(f, lam, g, q)
    fx = spherical_transform(f, xi, g, q)
    rhs = (fl - fx) / (xi**2 - lam**2)
    return lhs, rhs


# ---------------------------------------------------------------------------
# Paley-Wiener synthesis
# ---------------------------------------------------------------------------


class PWExpression:
    """An even entire function with |F(z)| <= C |z|^-power on the synthesis line."""

    name = "pw"
    real_symmetric = True

    def __call__(self, z):
        raise NotImplementedError

    def decay_constant(self, height: float) -> float:
        raise NotImplementedError

    power: float = 0.0

    def __add__(self, other):
        return PWSum([(1.0, self), (1.0, other)])

    def __rmul__(self, c):
        return PWSum([(c, self)])

    def describe(self):
        return {"expression": self.name}


@dataclass
class SincPower(PWExpression):
    """(sin(a z) / (a z))^n with n even: the transform of a function supported in [0, n a]."""

    n: int = 4
    a: float = 1.0
    name = "sincpow"

    def __post_init__(self):
        if self.n < 2 or self.n % 2:
            raise PreconditionError("sinc power must be an even integer >= 2")
        if self.a <= 0:
            raise PreconditionError("sinc scale must be positive")

    @property
    def power(self):
        return float(self.n)

    def __call__(self, z):
        w = self.a * np.asarray(z, dtype=complex)
        out = np.ones(w.shape, dtype=complex)
        nz = w != 0
        out[nz] = (np.sin(w[nz]) / w[nz]) ** self.n
        return out

    def decay_constant(self, height):
        return (math.cosh(self.a * height) / self.a) ** self.n

    def describe(self):
        return {"expression": self.name, "n": self.n, "a": self.a}


@dataclass
class PWZero(PWExpression):
    name = "zero"
    power = math.inf

    def __call__(self, z):
        return np.zeros(np.shape(z), dtype=complex)

    def decay_constant(self, height):
        return 0.0


@dataclass
class PWSum(PWExpression):
    terms: list = field(default_factory=list)
    name = "sum"

    @property
    def power(self):
        return min((f.power for _, f in self.terms), default=math.inf)

    @property
    def real_symmetric(self):
        return all(complex(c).imag == 0 and f.real_symmetric for c, f in self.terms)

    def __call__(self, z):
        return sum(c * f(z) for c, f in self.terms)

    def decay_constant(self, height):
        # |sum c_i F_i| <= sum |c_i| C_i |z|^-p_i <= (sum |c_i| C_i) |z|^-p_min for |z| >= 1
        return sum(abs(c) * f.decay_constant(height) for c, f in self.terms)

    def describe(self):
        return {"expression": self.name, "terms": [{"coef": complex(c).real, **f.describe()} for c, f in self.terms]}


PW_EXPRESSIONS = {
    "sinc4": lambda **kw: SincPower(4, kw.get("a", 1.0)),
    "sincpow": lambda **kw: SincPower(int(kw.get("n", 4)), kw.get("a", 1.0)),
    "zero": lambda **kw: PWZero(),
}


@dataclass
class PWSpec:
    expression: PWExpression
    contour_height: float | None = None  # default rho + 1
    halfwidth: float | None = None  # default: chosen from the truncation bound
    panel: float = 0.5
    nodes: int = 20
    truncation_tol: float = 1e-6
    max_halfwidth: float = 200.0

    def height(self, g: GroupDatum) -> float:
        return g.rho + 1.0 if self.contour_height is None else self.contour_height


@dataclass
class SynthesisResult:
    t: np.ndarray
    value: np.ndarray
    halfwidth: float
    truncation_bound: np.ndarray
    quadrature_error: np.ndarray


def _check_even(expr: PWExpression, height: float):
    z = np.array([0.3 + 0.1j, 1.7 + height * 1j, -2.2 + 0.5j, 4.0 + height * 1j])
    a, b = expr(z), expr(-z)
    if np.max(np.abs(a - b)) > 1e-12 * max(1.0, float(np.max(np.abs(a)))):
        raise PreconditionError("Paley-Wiener expression is not even")


def _kernel_growth(g: GroupDatum) -> float:
    """|b_z(a_t)| grows like |z|^((m1+m2)/2 - 1) along horizontal lines."""
    return (g.m1 + g.m2) / 2.0 - 1.0


def _truncation_bound(p: PWSpec, t, R, g: GroupDatum):
    """(1/pi) int_R^inf 2|z| |F(z)| |b_z(a_t)| dx with the envelopes fitted on [R/2, R]."""
    y0 = p.height(g)
    kappa = _kernel_growth(g)
    q_exp = p.expression.power - 1.0 - kappa
    if q_exp <= 1.0:
        raise InsufficientDecayError(
            f"transform decays like |z|^-{p.expression.power:g}, need more than "
            f"|z|^-{2.0 + kappa:g} against the kernel growth for this group"
        )
    xs = np.linspace(R / 2, R, 9)
    z = xs + 1j * y0
    kb = np.abs(spherical.b_kernel(z[None, :], t[:, None], g)) / np.abs(z[None, :]) ** kappa
    K = kb.max(axis=1)
    C = p.expression.decay_constant(y0)
    # |z| <= x (1 + y0/R) on the tail
    infl = (1.0 + y0 / R) ** (1.0 + abs(kappa))
    return (2.0 / math.pi) * C * K * infl * R ** (1.0 - q_exp) / (q_exp - 1.0)


def synthesize_from_pw(p: PWSpec, t, g: GroupDatum, q: QuadratureSpec = DEFAULT_Q) -> SynthesisResult:
    """f(a_t) = (1 / 2 pi i) int over Im z = y0 of 2 z F(z) b_z(a_t) dz, |Re z| <= R.

    For real-symmetric F the two halves of the line are conjugate-symmetric
    and the integral folds to (1/pi) int_0^R Im(2 z F(z) b_z(a_t)) dx.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t <= 0):
        raise DomainError("synthesis is evaluated at t > 0")
    y0 = p.height(g)
    if y0 <= g.rho:
        raise PreconditionError("synthesis contour must lie above Im z = rho")
    expr = p.expression
    if isinstance(expr, PWZero) or (isinstance(expr, PWSum) and not expr.terms):
        z = np.zeros(t.shape)
        return SynthesisResult(t, z.astype(complex), 0.0, z, z)
    _check_even(expr, y0)
    if p.halfwidth is not None:
        R = float(p.halfwidth)
        bound = _truncation_bound(p, t, R, g)
        if np.max(bound) > p.truncation_tol:
            raise TruncationError(f"truncation bound {np.max(bound):.3g} at R = {R:g} exceeds {p.truncation_tol:g}")
    else:
        R = 16.0
        while True:
            bound = _truncation_bound(p, t, R, g)
            if np.max(bound) <= p.truncation_tol:
                break
            if R >= p.max_halfwidth:
                raise TruncationError(
                    f"truncation bound {np.max(bound):.3g} still above {p.truncation_tol:g} at R = {R:g}"
                )
            R = min(R * 1.25, p.max_halfwidth)

    fold = expr.real_symmetric
    lo = 0.0 if fold else -R
    npan = int(math.ceil((R - lo) / p.panel))
    edges = np.linspace(lo, R, npan + 1)

    def F(x):
        z = x + 1j * y0
        w = 2.0 * z * expr(z)
        return w[None, :] * spherical.b_kernel(z[None, :], t[:, None], g)

    _, pv, err = adaptive_panels(F, edges, n=p.nodes, rtol=q.tol, atol=q.atol, max_depth=q.max_depth)
    total = pv.sum(axis=-1)
    if fold:
        value = np.imag(total) / math.pi + 0j
    else:
        value = total / (2j * math.pi)
    return SynthesisResult(t, value, R, bound, err / math.pi)


def round_trip(
    p: PWSpec,
    g: GroupDatum,
    w=(0.0, 0.5, 1.0),
    grid=None,
    q: QuadratureSpec = DEFAULT_Q,
):
    """Synthesize f from F on a grid, interpolate, transform back at ``w``.

    Returns (transform values, F(w), synthesis result).  The grid must cover
    the support of f (n a for a sinc power); beyond the grid f is taken as 0.
    """
    if grid is None:
        support = expr_support(p.expression)
        grid = np.linspace(0.01, support + 0.5, 300)
    syn = synthesize_from_pw(p, grid, g, q)
    f = Sampled(syn.t, np.real(syn.value))
    w = np.asarray(w, dtype=complex)
    return spherical_transform(f, w, g, q), p.expression(w), syn


def expr_support(expr: PWExpression) -> float:
    if isinstance(expr, SincPower):
        return expr.n * expr.a
    if isinstance(expr, PWSum):
        return max((expr_support(f) for _, f in expr.terms), default=0.0)
    return 0.0


# ---------------------------------------------------------------------------
# Resolvent transform
# ---------------------------------------------------------------------------


@dataclass
class ResolventValue:
    lam: complex
    branch: str
    value: complex
    fhat: complex | None = None


def pairing(u: RadialFunction, v: RadialFunction, g: GroupDatum, q: QuadratureSpec = DEFAULT_Q):
    """<u, v> = int_0^inf u(a_t) v(a_t) Delta(t) dt, bilinear (no conjugation)."""
    decay = u.weighted_decay(g).times(v.decay(g))
    bp = tuple(sorted(set(_support_breaks(u) + _support_breaks(v))))

    def F(t):
        return u.weighted(t, g) * v.values(t, g)

    return complex(integrate_radial(F, decay, q, breakpoints=bp).value)


def resolvent_branch(lam, g: GroupDatum) -> str:
    lam = complex(lam)
    if abs(lam.imag - g.rho) <= BOUNDARY_GUARD * max(1.0, g.rho):
        raise DomainError("Im lambda = rho is excluded from both resolvent branches")
    if lam.imag > g.rho:
        return "kernel"
    if lam.imag > 0:
        return "T"
    raise DomainError("resolvent branches need Im lambda > 0")


def resolvent_transform(
    gfun: RadialFunction,
    lam,
    g: GroupDatum,
    f: RadialFunction | None = None,
    q: QuadratureSpec = DEFAULT_Q,
    branch: str | None = None,
) -> ResolventValue:
    """R[g](lambda): <b_lambda, g> above the strip, <T_lambda f, g> / hat f(lambda) inside."""
    lam = complex(lam)
    natural = resolvent_branch(lam, g)
    branch = branch or natural
    if branch != natural:
        raise DomainError(f"branch {branch!r} does not apply at Im lambda = {lam.imag:.6g}")
    if branch == "kernel":
        return ResolventValue(lam, branch, pairing(BKernel(lam), gfun, g, q))
    if f is None:
        raise PreconditionError("the T branch needs an ideal representative f")
    fhat = complex(spherical_transform(f, lam, g, q))
    if abs(fhat) < ZERO_DIVISOR:
        raise ZeroDivisorError(f"|hat f(lambda)| = {abs(fhat):.3g} is numerically zero")
    Tf = TLambdaFunction(f, lam, g, q)
    return ResolventValue(lam, branch, pairing(Tf, gfun, g, q) / fhat, fhat)


def annihilating_combination(f1: RadialFunction, f2: RadialFunction, xi0, g: GroupDatum, q: QuadratureSpec = DEFAULT_Q):
    """f1 - (hat f1(xi0) / hat f2(xi0)) f2, whose transform vanishes at xi0."""
    h1 = complex(spherical_transform(f1, xi0, g, q))
    h2 = complex(spherical_transform(f2, xi0, g, q))
    if abs(h2) < ZERO_DIVISOR:
        raise ZeroDivisorError("second function's transform vanishes at xi0")
    return f1 + (-(h1 / h2)) * f2


def strip_check(lam, p: float, g: GroupDatum) -> bool:
    return bool(abs(complex(lam).imag) <= strip_halfwidth(p, g))
