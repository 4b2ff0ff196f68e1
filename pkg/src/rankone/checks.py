"""Verification suites shared by ``rankone verify`` and the acceptance tests.

Each suite takes a group and returns a list of :class:`SubCheck` records.
A suite passes when every sub-check's residual is within its tolerance.
Suite ids are opaque labels fixed by the command-line interface.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import certify, spherical, transform
from .errors import DivergenceError, RankOneError
from .geometry import GroupDatum
from .quadrature import QuadratureSpec
from .radial import BKernel, Bump, PhiSecondKind, Spherical

SEED = 20240601


@dataclass
class SubCheck:
    name: str
    residual: float
    tolerance: float
    info: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.residual <= self.tolerance)

    def as_dict(self):
        return {
            "name": self.name,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "status": "pass" if self.passed else "fail",
            **({"info": self.info} if self.info else {}),
        }


@dataclass
class VerificationReport:
    lemma_id: str
    group: GroupDatum
    grid: dict
    max_residual: float
    tolerance: float
    status: str
    runtime_ms: int
    checks: list = field(default_factory=list)
    error: str | None = None

    def as_dict(self):
        d = {
            "lemma_id": self.lemma_id,
            "group": self.group.as_dict(),
            "grid": self.grid,
            "max_residual": self.max_residual,
            "tolerance": self.tolerance,
            "status": self.status,
            "runtime_ms": self.runtime_ms,
            "checks": [c.as_dict() for c in self.checks],
        }
        if self.error is not None:
            d["error"] = self.error
        return d


def _rel(a, b):
    a, b = np.asarray(a), np.asarray(b)
    return float(np.max(np.abs(a - b) / np.abs(b)))


# ---------------------------------------------------------------------------
# Resolvent kernel
# ---------------------------------------------------------------------------

XI_GRID = np.linspace(-10.0, 10.0, 21)


def kernel_lambdas(g: GroupDatum):
    return [1j * g.rho * (1 + k / 4) for k in range(1, 5)] + [0.5 + 1.2j * g.rho]


def suite_kernel_transform(g, q, tol=1e-6):
    worst = 0.0
    for lam in kernel_lambdas(g):
        v = transform.spherical_transform(BKernel(lam), XI_GRID, g, q)
        worst = max(worst, _rel(v, 1.0 / (XI_GRID**2 - lam**2)))
    grid = {"lambda": [[l.real, l.imag] for l in map(complex, kernel_lambdas(g))], "xi": [-10.0, 10.0, 21]}
    return [SubCheck("kernel transform 1/(xi^2-lambda^2)", worst, tol, grid)]


def integral_one_lambdas(g: GroupDatum, n=10, seed=SEED):
    rng = np.random.default_rng(seed + 7 * g.m1 + g.m2)
    im = rng.uniform(1.1 * g.rho, 3.0 * g.rho, n)
    re = rng.uniform(-3.0, 3.0, n)
    return re + 1j * im


def suite_integral_one(g, q, tol=1e-8):
    worst = 0.0
    lams = integral_one_lambdas(g)
    for lam in lams:
        v = transform.spherical_transform(PhiSecondKind(lam), 1j * g.rho, g, q)
        exact = 2j * lam * spherical.c_function(-lam, g) / (g.rho**2 + lam**2)
        worst = max(worst, abs(v - exact) / abs(exact))
    return [SubCheck("integral of Phi against the density", worst, tol, {"n_lambda": len(lams)})]


def l1_etas(g):
    return [1.5 * g.rho, 2.0 * g.rho, 3.0 * g.rho]


RAY_FACTORS = (1.25, 1.5, 2.0, 2.5, 3.0, 4.0)
DIVERGENCE_FACTOR = 0.9


def divergence_probe(g, q):
    """Truncated norms of b_lambda at Im lambda = 0.9 rho; flagged when growth is exponential."""
    try:
        transform.l1_norm(BKernel(1j * DIVERGENCE_FACTOR * g.rho), g, q)
    except DivergenceError as exc:
        norms = np.array(list(exc.partial.values()))
        inc = np.diff(norms)
        flagged = bool(np.all(inc > 0) and inc[-1] > inc[0])
        return flagged, exc.partial
    return False, {}


def suite_l1(g, q, tol=1e-7):
    worst = 0.0
    for eta in l1_etas(g):
        n = transform.l1_norm(BKernel(1j * eta), g, q)
        worst = max(worst, abs(n - 1 / (eta**2 - g.rho**2)) * (eta**2 - g.rho**2))
    ray = [transform.l1_norm(BKernel(1j * f * g.rho), g, q) for f in RAY_FACTORS]
    rises = float(max(0.0, np.max(np.diff(ray))))
    flagged, partial = divergence_probe(g, q)
    fit = certify.fit_exponent(
        lambda lam: transform.l1_norm(BKernel(lam), g, q) * (lam.imag - g.rho),
        [x + 1j * y * g.rho for x in (0.0, 2.5, 5.0, 10.0) for y in (1.5, 2.5, 4.0)],
    )
    return [
        SubCheck("exact L1 norm of b_{i eta}", worst, tol, {"eta_over_rho": [1.5, 2.0, 3.0]}),
        SubCheck(
            "L1 norm decreasing along the imaginary ray",
            rises,
            0.0,
            {"eta_over_rho": list(RAY_FACTORS), "norms": ray, "last_over_first": ray[-1] / ray[0]},
        ),
        SubCheck(
            "divergence flagged at Im lambda = 0.9 rho",
            0.0 if flagged else 1.0,
            0.0,
            {"truncated_norms": {str(k): v for k, v in partial.items()}},
        ),
        SubCheck("fitted K (reported only)", 0.0, 0.0, fit.as_dict()),
    ]


# ---------------------------------------------------------------------------
# Envelopes of b_lambda
# ---------------------------------------------------------------------------

SMALL_T = (1e-2, 1e-3, 1e-4)
LOG_T = (1e-4, 1e-5, 1e-6, 1e-7, 1e-8)
ENVELOPE_LAMBDA_SMALL = 0.5j
ENVELOPE_LAMBDA_LARGE = 0.3 + 0.6j


def small_t_profile(g: GroupDatum, lam=ENVELOPE_LAMBDA_SMALL):
    """Power slope of log|b| against log(1/t), or the log-profile fit for m1 + m2 = 1."""
    if g.m1 + g.m2 > 1:
        t = np.array(SMALL_T)
        lb = spherical.log_abs_b_kernel(lam, t, g)
        slope = np.polyfit(np.log(1 / t), lb, 1)[0]
        return {"kind": "power", "slope": float(slope), "expected": g.m1 + g.m2 - 1.0}
    t = np.array(LOG_T)
    b = np.abs(spherical.b_kernel(lam, t, g))
    L = np.log(1 / t)
    A, B = np.polyfit(L, b, 1)
    rel = float(np.max(np.abs(A * L + B - b) / b))
    return {"kind": "logarithmic", "coefficient": float(A), "offset": float(B), "relative_misfit": rel}


def large_t_rate(g: GroupDatum, lam=ENVELOPE_LAMBDA_LARGE):
    t = np.linspace(10.0, 40.0, 31)
    lb = spherical.log_abs_b_kernel(lam, t, g)
    return float(np.polyfit(t, lb, 1)[0]), -(complex(lam).imag + g.rho)


def suite_b_envelopes(g, q, tol=0.05):
    prof = small_t_profile(g)
    if prof["kind"] == "power":
        first = SubCheck("small-t power slope", abs(prof["slope"] - prof["expected"]), tol, prof)
    else:
        first = SubCheck("small-t logarithmic profile", prof["relative_misfit"], 1e-3, prof)
    rate, expected = large_t_rate(g)
    out = [first, SubCheck("large-t decay rate", abs(rate - expected), 0.01, {"rate": rate, "expected": expected})]
    if g.m1 + g.m2 > 1:
        worst = 0.0
        for lam in (0.5j, 0.3 + 0.7j, 2.0 + 0.1j, 5.0 + 3.0j):
            a, b, c, k, R1, R2 = certify.small_t_parameters(lam, g)
            cert = certify.build_bound_polynomial(R1, R2, k)
            for x in (0.0, 0.5, 0.9, 0.999):
                r = certify.check_bound(cert, a, b, c, x)
                worst = max(worst, r.value / r.bound)
        out.append(SubCheck("certificate for the small-t hypergeometric factor (value/bound)", worst, 1.0))
    return out


# ---------------------------------------------------------------------------
# Connection formula
# ---------------------------------------------------------------------------


def connection_samples(g: GroupDatum, n=100, seed=SEED):
    rng = np.random.default_rng(seed + 31 * g.m1 + g.m2)
    out = []
    while len(out) < n:
        lam = complex(rng.uniform(-5, 5), rng.uniform(-1.5 * g.rho, 1.5 * g.rho))
        if abs(lam.real) < 0.05 and abs(lam.imag - round(lam.imag)) < 0.05:
            continue
        out.append((lam, float(rng.uniform(0.5, 10.0))))
    return out


def connection_residual(lam, t, g):
    """|phi - c Phi - c' Phi'| relative to the size of the terms (at least 1)."""
    p = spherical.phi(lam, t, g)
    t1 = spherical.c_function(lam, g) * spherical.phi_second_kind(lam, t, g)
    t2 = spherical.c_function(-lam, g) * spherical.phi_second_kind(-lam, t, g)
    return abs(p - t1 - t2) / max(1.0, abs(t1), abs(t2))


def suite_connection(g, q, tol=1e-8):
    samples = connection_samples(g)
    worst = max(connection_residual(lam, t, g) for lam, t in samples)
    return [SubCheck("phi = c Phi + c' Phi'", worst, tol, {"n_samples": len(samples), "t": [0.5, 10.0]})]


# ---------------------------------------------------------------------------
# T operator
# ---------------------------------------------------------------------------


def t_lambdas(g):
    return [0.2 + 0.5j * g.rho, 0.5 + 0.25j * g.rho, 1.0 + 0.75j * g.rho]


T_XI = (0.0, 0.7, 1.5, 3.0, 5.0)
T_FUNCTION = Bump(2.0)


def suite_t_identity(g, q, tol=1e-6):
    worst = 0.0
    for lam in t_lambdas(g):
        lhs, rhs = transform.T_transform_identity(T_FUNCTION, lam, T_XI, g, q)
        worst = max(worst, float(np.max(np.abs(lhs - rhs) / np.maximum(1.0, np.abs(rhs)))))
    return [SubCheck("transform of T_lambda f", worst, tol, {"xi": list(T_XI), "f": T_FUNCTION.describe()})]


def suite_t_forms(g, q, tol=1e-7):
    t = np.concatenate([np.linspace(0.05, 2.5, 25), [3.0, 5.0]])
    worst, outside = 0.0, 0.0
    for lam in t_lambdas(g):
        r = transform.T_operator(T_FUNCTION, lam, t, g, q, tol=math.inf)
        worst = max(worst, r.discrepancy)
        outside = max(outside, float(np.max(np.abs(r.value[t >= T_FUNCTION.T]))))
    conv = 0.0
    lam = 0.3 + 1.5j * g.rho
    h = transform.BConvolution(T_FUNCTION, lam, g, q)
    xi = np.array([0.0, 0.7, 2.0])
    lhs = transform.spherical_transform(h, xi, g, q)
    rhs = transform.spherical_transform(T_FUNCTION, xi, g, q) / (xi**2 - lam**2)
    conv = float(np.max(np.abs(lhs - rhs) / np.maximum(1.0, np.abs(rhs))))
    return [
        SubCheck("definition form vs tail-integral form", worst, tol, {"t": [0.05, 5.0, t.size]}),
        SubCheck("T_lambda f vanishes beyond the support", outside, 0.0),
        SubCheck("transform of f * b_lambda", conv, 1e-6),
    ]


# ---------------------------------------------------------------------------
# Resolvent transform
# ---------------------------------------------------------------------------

XI0 = 1.5


def resolvent_lambdas(g):
    inner = [0.3 + 0.2j * g.rho * k for k in range(1, 5)] + [0.7j * g.rho]
    outer = [0.5 + g.rho * (1 + 0.25 * k) * 1j for k in range(1, 6)]
    return inner + outer


def resolvent_table(g, q, lams, xi0=XI0):
    f = transform.annihilating_combination(Bump(1.0), Bump(2.0), xi0, g, q)
    gfun = Spherical(xi0)
    rows = []
    for lam in lams:
        r = transform.resolvent_transform(gfun, lam, g, f=f, q=q)
        exact = 1 / (xi0**2 - complex(lam) ** 2)
        rows.append({"lambda": complex(lam), "branch": r.branch, "value": r.value, "exact": exact,
                     "relative_error": abs(r.value - exact) / abs(exact)})
    return rows


def suite_resolvent(g, q, tol=1e-5):
    rows = resolvent_table(g, q, resolvent_lambdas(g))
    worst = max(r["relative_error"] for r in rows)
    branches = sorted({r["branch"] for r in rows})
    return [SubCheck("both branches equal 1/(xi0^2 - lambda^2)", worst, tol, {"xi0": XI0, "branches": branches})]


def suite_resolvent_even(g, q, tol=1e-5):
    out = suite_resolvent(g, q, tol)
    worst = 0.0
    for lam in (0.5 + 1.5j * g.rho, 2.0 + 2.5j * g.rho):
        v = transform.resolvent_transform(Spherical(XI0), lam, g, q=q).value
        worst = max(worst, abs(v - 1 / (XI0**2 - (-lam) ** 2)) * abs(XI0**2 - lam**2))
    out.append(SubCheck("kernel branch is even in lambda", worst, tol))
    return out


# ---------------------------------------------------------------------------
# Synthesis
# ---------------------------------------------------------------------------

ROUNDTRIP_W = (0.0, 0.5, 1.0)
ROUNDTRIP_EXPRESSION = transform.SincPower(8, 0.5)


def suite_roundtrip(g, q, tol=1e-4):
    p = transform.PWSpec(ROUNDTRIP_EXPRESSION)
    v, exact, syn = transform.round_trip(p, g, ROUNDTRIP_W, q=q)
    worst = float(np.max(np.abs(v - exact)))
    return [
        SubCheck(
            "synthesize then transform",
            worst,
            tol,
            {
                "expression": ROUNDTRIP_EXPRESSION.describe(),
                "halfwidth": syn.halfwidth,
                "truncation_bound": float(np.max(syn.truncation_bound)),
            },
        )
    ]


# ---------------------------------------------------------------------------
# Certificates and envelope fits
# ---------------------------------------------------------------------------

CERT_SAMPLES = 500
CERT_RADII = (0.5, 0.5)


def suite_certificate(g, q, tol=1.0, samples=CERT_SAMPLES):
    out = []
    for k in (0, 1, 2):
        cert = certify.build_bound_polynomial(*CERT_RADII, k)
        rng = np.random.default_rng(SEED + k)
        worst, viol = 0.0, 0
        for a, b, c, x in certify.sample_admissible(cert, samples, rng):
            r = certify.check_bound(cert, a, b, c, x)
            worst = max(worst, r.value / r.bound)
            viol += not r.ok
        out.append(SubCheck(f"domination k={k} (max value/bound)", worst, tol, {"samples": samples, "violations": viol}))
    return out


def suite_gamma_ratio(g, q, tol=0.05):
    out = []
    for a, b in ((1.5, 0.5), (2.5, 1.0), (2.0, 2.0)):
        try:
            fit = certify.fit_ratio_envelope(certify.gamma_ratio_sampler(a, b), a - b, tol=math.inf)
            err = max(abs(s - (a - b)) for s in fit.slopes.values())
            out.append(SubCheck(f"slope for a={a:g}, b={b:g}", err, tol, fit.as_dict()))
        except RankOneError as exc:
            out.append(SubCheck(f"slope for a={a:g}, b={b:g}", math.inf, tol, {"error": str(exc)}))
    return out


def c_pattern_parameters(g):
    return g.rho / 2, (g.m1 + 2) / 4, 1.0


def suite_c_pattern(g, q, tol=0.05):
    a, b, c = c_pattern_parameters(g)
    pred = a + b - c - 0.5
    fit = certify.fit_ratio_envelope(certify.c_pattern_sampler(a, b, c), pred, tol=math.inf)
    err = max(abs(s - pred) for s in fit.slopes.values())
    return [SubCheck(f"slope for a={a:g}, b={b:g}, c={c:g}", err, tol, fit.as_dict())]


SUITES = {
    "3.1": suite_b_envelopes,
    "3.4": suite_kernel_transform,
    "3.5": suite_l1,
    "4.1": suite_t_identity,
    "4.3": suite_t_forms,
    "5.1": suite_resolvent_even,
    "8.1": suite_certificate,
    "8.2": suite_gamma_ratio,
    "8.3": suite_c_pattern,
    "integral-1": suite_integral_one,
    "connection": suite_connection,
    "roundtrip": suite_roundtrip,
    "resolvent-consistency": suite_resolvent,
}


def run_suite(lemma_id: str, g: GroupDatum, q: QuadratureSpec | None = None, tol: float | None = None) -> VerificationReport:
    """Run a suite; ``tol`` replaces the tolerance of its first check."""
    if lemma_id not in SUITES:
        raise KeyError(lemma_id)
    q = q or QuadratureSpec()
    fn = SUITES[lemma_id]
    start = time.perf_counter()
    kwargs = {} if tol is None else {"tol": tol}
    error = None
    try:
        checks = fn(g, q, **kwargs)
    except RankOneError as exc:
        checks = [SubCheck("suite raised", math.inf, 0.0, {"error": f"{type(exc).__name__}: {exc}"})]
        error = f"{type(exc).__name__}: {exc}"
    ms = int(round(1000 * (time.perf_counter() - start)))
    if len(checks) == 1:
        max_res, tol_out = checks[0].residual, checks[0].tolerance
    else:
        # several tolerances: report the worst residual/tolerance ratio against 1
        max_res = max(_ratio(c) for c in checks)
        tol_out = 1.0
    status = "pass" if all(c.passed for c in checks) else "fail"
    grid = {c.name: c.info for c in checks if c.info}
    return VerificationReport(lemma_id, g, grid, float(max_res), float(tol_out), status, ms, checks, error)


def _ratio(c: SubCheck) -> float:
    if c.tolerance > 0:
        return c.residual / c.tolerance
    return 0.0 if c.residual <= 0 else math.inf


# ---------------------------------------------------------------------------
# Growth-exponent scans
# ---------------------------------------------------------------------------

SCAN_T_SMALL = np.array([1e-3, 1e-2, 0.1, 0.5])
SCAN_T_LARGE = np.linspace(0.5, 10.0, 20)


def _scan_grid(g):
    return [x + 1j * y for x in (0.0, 1.0, 2.0, 5.0, 10.0, 20.0) for y in (0.25, 1.0, 2.0)]


def scan_small_t(g, q):
    """sup_{t <= 1/2} |b_lambda(a_t)| t^(m1+m2-1) (divided by 1 + log(1/t) when m1 + m2 = 1)."""
    n = g.m1 + g.m2
    t = SCAN_T_SMALL
    w = t ** (n - 1) if n > 1 else 1 / (1 + np.log(1 / t))

    def q_(lam):
        return float(np.max(np.abs(spherical.b_kernel(lam, t, g)) * w))

    return certify.fit_exponent(q_, _scan_grid(g))


def scan_large_t(g, q):
    """sup_{t >= 1/2} |b_lambda(a_t)| e^((Im lambda + rho) t)."""

    def q_(lam):
        return float(np.max(np.abs(spherical.b_kernel_scaled(lam, SCAN_T_LARGE, g))))

    return certify.fit_exponent(q_, _scan_grid(g))


def scan_l1(g, q):
    """||b_lambda||_1 (Im lambda - rho) over rho < Im lambda <= 4 rho."""

    def q_(lam):
        return transform.l1_norm(BKernel(lam), g, q) * (lam.imag - g.rho)

    grid = [x + 1j * y * g.rho for x in (0.0, 2.5, 5.0, 10.0) for y in (1.25, 2.0, 3.0, 4.0)]
    return certify.fit_exponent(q_, grid)


def scan_t_norm(g, q):
    """||T_lambda f||_1 d(lambda, boundary of S_1) / ||f||_1 for the bump, 0 < Im lambda < rho, |lambda| >= rho."""
    from .geometry import strip_distance

    f = T_FUNCTION
    nf = transform.l1_norm(f, g, q)

    def q_(lam):
        Tf = transform.TLambdaFunction(f, lam, g, q)
        return transform.l1_norm(Tf, g, q) * strip_distance(lam, g) / nf

    grid = [x + 1j * y * g.rho for x in (1.0 * g.rho + 0.5, 2.0 * g.rho + 1, 5.0 + g.rho, 10.0 + g.rho) for y in (0.25, 0.5, 0.75)]
    return certify.fit_exponent(q_, grid)


SCANS = {
    "3.1": scan_small_t,
    "3.1-large": scan_large_t,
    "3.5": scan_l1,
    "4.4": scan_t_norm,
}
