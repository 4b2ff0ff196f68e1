"""Complex-parameter special functions.

Log-gamma (Lanczos kernel plus reflection), gamma quotients, Pochhammer
symbols and a vectorized Gauss hypergeometric engine that dispatches
between the power series, the Pfaff transformation and the connection
formula around z = 1.

Everything here accepts numpy arrays and broadcasts; scalars in give
scalars out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BranchCutError,
    DegenerateParameterError,
    NonConvergenceError,
    PoleError,
    PreconditionError,
)

Z_SWITCH = 0.5
SERIES_RTOL = 1e-16
MAX_TERMS = 100_000
# Slowest geometric ratio we are willing to sum directly.
MAX_RATIO = 0.95
# c - a - b this close to an integer triggers the symmetric c-perturbation.
DEGENERACY_TOL = 1e-6
# Half-width of the symmetric c-perturbation used in the degenerate case,
# before scaling by 1 / max(1, |log u|).
PERTURBATION_STEP = 2e-3

# Godfrey's g = 7, n = 9 Lanczos coefficients.
_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_LOG_PI = math.log(math.pi)
_TWO_PI = 2.0 * math.pi


def _as_complex(*args):
    arrs = np.broadcast_arrays(*(np.asarray(x, dtype=complex) for x in args))
    return [np.array(x) for x in arrs]


def _unwrap(out, scalar):
    return complex(out.reshape(())) if scalar else out


def _near_nonpositive_integer(z, tol=0.0):
    z = np.asarray(z, dtype=complex)
    r = np.round(z.real)
    return (np.abs(z.imag) <= tol) & (r <= 0) & (np.abs(z.real - r) <= tol)


def _lanczos_log_gamma(z):
    zm = z - 1.0
    acc = np.full(zm.shape, _LANCZOS[0], dtype=complex)
    for k, p in enumerate(_LANCZOS[1:], start=1):
        acc = acc + p / (zm + k)
    t = zm + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (zm + 0.5) * np.log(t) - t + np.log(acc)


def _log_sinpi(z):
    """log sin(pi z), correct modulo 2 pi i, without overflow for large |Im z|."""
    x = z.real - 2.0 * np.round(0.5 * z.real)
    y = z.imag
    zr = x + 1j * y
    out = np.empty(z.shape, dtype=complex)
    mid = np.abs(y) <= 1.0
    if mid.any():
        xm, ym = x[mid], y[mid]
        s = np.sin(np.pi * xm) * np.cosh(np.pi * ym) + 1j * np.cos(np.pi * xm) * np.sinh(np.pi * ym)
        out[mid] = np.log(s)
    up = y > 1.0
    if up.any():
        w = zr[up]
        out[up] = np.log(0.5j) - 1j * np.pi * w + np.log1p(-np.exp(2j * np.pi * w))
    down = y < -1.0
    if down.any():
        w = zr[down]
        out[down] = np.log(-0.5j) + 1j * np.pi * w + np.log1p(-np.exp(-2j * np.pi * w))
    return out


def log_gamma(z):
    """Principal branch of log Gamma(z).

    The branch is the one continuous off the negative real axis, so that
    ``log_gamma(z + 1) == log_gamma(z) + log(z)`` with the principal log.
    """
    scalar = np.ndim(z) == 0
    (z,) = _as_complex(z)
    if _near_nonpositive_integer(z).any():
        raise PoleError(f"log_gamma has a pole at {z[_near_nonpositive_integer(z)].ravel()[0]}")
    out = np.empty(z.shape, dtype=complex)
    right = z.real >= 0.5
    if right.any():
        out[right] = _lanczos_log_gamma(z[right])
    left = ~right
    if left.any():
        zl = z[left]
        val = _LOG_PI - _log_sinpi(zl) - _lanczos_log_gamma(1.0 - zl)
        # The reflection formula only fixes Im modulo 2 pi; pick the branch
        # from the upward recurrence, whose argument sum is exact.
        n = np.ceil(0.5 - zl.real).astype(int)
        im_ref = _lanczos_log_gamma(zl + n).imag
        for k in range(int(n.max())):
            active = k < n
            im_ref = im_ref - np.where(active, np.angle(zl + k), 0.0)
        val = val.real + 1j * (val.imag + _TWO_PI * np.round((im_ref - val.imag) / _TWO_PI))
        out[left] = val
    return _unwrap(out, scalar)


def gamma(z):
    """Gamma(z) through the exponential of :func:`log_gamma`."""
    scalar = np.ndim(z) == 0
    out = np.exp(np.asarray(log_gamma(z)))
    return _unwrap(np.asarray(out), scalar)


def rgamma(z):
    """Reciprocal gamma, entire: zero at the poles of Gamma."""
    scalar = np.ndim(z) == 0
    (z,) = _as_complex(z)
    out = np.zeros(z.shape, dtype=complex)
    ok = ~_near_nonpositive_integer(z)
    if ok.any():
        out[ok] = np.exp(-np.asarray(log_gamma(z[ok])))
    return _unwrap(out, scalar)


def gamma_quotient(num, den):
    """prod Gamma(num) / prod Gamma(den), evaluated in log space.

    ``num`` and ``den`` are sequences of broadcastable arrays.  A pole in a
    denominator argument makes the quotient zero; a pole in a numerator
    raises :class:`PoleError`.
    """
    scalar = all(np.ndim(x) == 0 for x in list(num) + list(den))
    arrs = _as_complex(*num, *den)
    shape = arrs[0].shape
    arrs = [x.reshape(-1) for x in arrs]
    num_a, den_a = arrs[: len(num)], arrs[len(num):]
    zero = np.zeros(arrs[0].shape, dtype=bool)
    for d in den_a:
        zero |= _near_nonpositive_integer(d)
    logv = np.zeros(arrs[0].shape, dtype=complex)
    for x in num_a:
        logv = logv + np.asarray(log_gamma(x))
    ok = ~zero
    for d in den_a:
        if ok.any():
            logv[ok] = logv[ok] - np.asarray(log_gamma(d[ok]))
    out = np.where(zero, 0.0, np.exp(np.where(zero, 0.0, logv)))
    return _unwrap(np.asarray(out, dtype=complex).reshape(shape), scalar)


def pochhammer(c, k: int):
    """Rising factorial (c)_k = c (c+1) ... (c+k-1); (c)_0 = 1."""
    if k < 0:
        raise PreconditionError("pochhammer needs k >= 0")
    scalar = np.ndim(c) == 0
    c = np.asarray(c, dtype=complex)
    out = np.ones(c.shape, dtype=complex)
    for j in range(k):
        out = out * (c + j)
    return _unwrap(out, scalar)


@dataclass(frozen=True)
class GammaRatioRequest:
    """Gamma(a+z)/Gamma(b+z) on the sector |arg z| <= pi - delta."""

    a: float
    b: float
    z: complex
    delta: float

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise PreconditionError("gamma ratio needs a, b > 0")
        if not (0 < self.delta < math.pi):
            raise PreconditionError("delta must lie in (0, pi)")
        if self.z == 0:
            raise PreconditionError("z must be nonzero")
        if abs(np.angle(self.z)) > math.pi - self.delta + 1e-15:
            raise PreconditionError(f"|arg z| = {abs(np.angle(self.z)):.6g} exceeds pi - delta")


def gamma_ratio(a, b, z):
    """Gamma(a + z) / Gamma(b + z) computed in log space."""
    scalar = all(np.ndim(x) == 0 for x in (a, b, z))
    a, b, z = _as_complex(a, b, z)
    if (_near_nonpositive_integer(a + z) | _near_nonpositive_integer(b + z)).any():
        raise PoleError("gamma_ratio argument hits a pole")
    same = a == b
    out = np.ones(z.shape, dtype=complex)
    diff = ~same
    if diff.any():
        out[diff] = np.exp(
            np.asarray(log_gamma(a[diff] + z[diff])) - np.asarray(log_gamma(b[diff] + z[diff]))
        )
    return _unwrap(out, scalar)


def gamma_ratio_request(req: GammaRatioRequest) -> complex:
    return gamma_ratio(req.a, req.b, req.z)


# ---------------------------------------------------------------------------
# Gauss hypergeometric function
# ---------------------------------------------------------------------------

REGIONS = ("series", "pfaff", "near-one", "pfaff+near-one", "gauss-point", "terminating")
_SERIES, _PFAFF, _NEAR_ONE, _PFAFF_NEAR_ONE, _GAUSS, _TERMINATING = range(6)


@dataclass(frozen=True)
class Hyp2F1Params:
    a: complex
    b: complex
    c: complex
    z: complex

    @property
    def region(self) -> str:
        return REGIONS[int(_classify(*_as_complex(self.a, self.b, self.c, self.z))[0].reshape(-1)[0])]

    def evaluate(self) -> complex:
        return hyp2f1(self.a, self.b, self.c, self.z)


@dataclass
class DispatchRecord:
    """What the engine did for one evaluation; used by the CLI verbose mode."""

    a: complex
    b: complex
    c: complex
    z: complex
    region: str
    series_argument: complex
    ratio: float
    perturbed: bool = False
    perturbation: float = 0.0
    notes: list = field(default_factory=list)

    def as_dict(self):
        def cx(v):
            return [float(np.real(v)), float(np.imag(v))]

        return {
            "a": cx(self.a),
            "b": cx(self.b),
            "c": cx(self.c),
            "z": cx(self.z),
            "region": self.region,
            "series_argument": cx(self.series_argument),
            "ratio": self.ratio,
            "perturbed": self.perturbed,
            "perturbation": self.perturbation,
            "notes": list(self.notes),
        }


def _terminates(x):
    return _near_nonpositive_integer(x, tol=1e-14)


def _classify(a, b, c, z):
    """Region code per element plus the modulus of the series argument used."""
    region = np.full(z.shape, -1, dtype=int)
    ratio = np.zeros(z.shape)
    with np.errstate(divide="ignore", invalid="ignore"):
        r0 = np.abs(z)
        r1 = np.abs(z / (z - 1.0))
        r2 = np.abs(1.0 - z)
        r3 = np.abs(1.0 / (1.0 - z))
    term = _terminates(a) | _terminates(b)
    gauss = (z == 1.0) & ~term
    region[term] = _TERMINATING
    region[gauss] = _GAUSS
    todo = region < 0
    for code, r in ((_SERIES, r0), (_PFAFF, r1), (_NEAR_ONE, r2), (_PFAFF_NEAR_ONE, r3)):
        pick = todo & (r <= Z_SWITCH)
        region[pick] = code
        ratio[pick] = r[pick]
        todo &= ~pick
    if todo.any():
        stack = np.stack([r0, r1, r2, r3])
        stack = np.where(np.isfinite(stack), stack, np.inf)
        best = np.argmin(stack, axis=0)
        region[todo] = best[todo]
        ratio[todo] = np.min(stack, axis=0)[todo]
    return region, ratio


def _series(a, b, c, z, with_scale=False):
    """Plain power series sum_{n} (a)_n (b)_n / ((c)_n n!) z^n, vectorized.

    With ``with_scale`` also returns the largest term modulus, so callers can
    bound the digits lost to cancellation (scale / |sum| times eps).
    """
    n_el = z.size
    out = np.empty(n_el, dtype=complex)
    scale = np.ones(n_el)
    if n_el == 0:
        return (out, scale) if with_scale else out
    aa, bb, cc, zz = (x.ravel().copy() for x in (a, b, c, z))
    idx = np.arange(n_el)
    term = np.ones(n_el, dtype=complex)
    total = np.ones(n_el, dtype=complex)
    big = np.ones(n_el)
    prev_small = np.zeros(n_el, dtype=bool)
    for k in range(MAX_TERMS):
        term = term * ((aa + k) * (bb + k)) / ((cc + k) * (k + 1.0)) * zz
        total = total + term
        mag = np.abs(term)
        big = np.maximum(big, mag)
        small = (mag <= SERIES_RTOL * np.maximum(np.abs(total), 1e-300)) | (mag == 0.0)
        done = (small & prev_small) | (mag == 0.0)
        if done.any():
            out[idx[done]] = total[done]
            scale[idx[done]] = big[done]
            keep = ~done
            aa, bb, cc, zz = aa[keep], bb[keep], cc[keep], zz[keep]
            idx, term, total, big = idx[keep], term[keep], total[keep], big[keep]
            prev_small = small[keep]
            if idx.size == 0:
                return (out, scale) if with_scale else out
        else:
            prev_small = small
    raise NonConvergenceError(
        "hypergeometric series did not converge",
        {"terms": MAX_TERMS, "remaining": int(idx.size), "a": aa[0], "b": bb[0], "c": cc[0], "z": zz[0]},
    )


def hyp2f1_series(a, b, c, z, with_scale=False):
    """2F1 by its power series alone, for |z| < 1 (no transformations)."""
    scalar = all(np.ndim(x) == 0 for x in (a, b, c, z))
    a, b, c, z = _as_complex(a, b, c, z)
    if np.any(np.abs(z) >= 1):
        raise PreconditionError("power series needs |z| < 1")
    _check_lower(a, b, c)
    out, scale = _series(*(x.ravel() for x in (a, b, c, z)), with_scale=True)
    if with_scale:
        return out.reshape(z.shape), scale.reshape(z.shape)
    return _unwrap(out.reshape(z.shape), scalar)


def _connection(a, b, c, u):
    """F(a, b; c; 1 - u) by the linear connection around z = 1, plus a term scale.

    Assumes s = c - a - b is not an integer.
    """
    s = c - a - b
    a1 = gamma_quotient([c, s], [c - a, c - b])
    a2 = gamma_quotient([c, -s], [a, b])
    a1 = np.asarray(a1, dtype=complex)
    a2 = np.asarray(a2, dtype=complex)
    val = np.zeros(u.shape, dtype=complex)
    scale = np.zeros(u.shape)
    nz1 = a1 != 0
    if nz1.any():
        v, sc = _series(a[nz1], b[nz1], 1.0 - s[nz1], u[nz1], with_scale=True)
        val[nz1] += a1[nz1] * v
        scale[nz1] += np.abs(a1[nz1]) * sc
    nz2 = a2 != 0
    if nz2.any():
        u2, s2 = u[nz2], s[nz2]
        with np.errstate(divide="ignore", invalid="ignore"):
            pw = a2[nz2] * np.exp(s2 * np.log(np.where(u2 == 0, 1.0, u2)))
        # at u = 0 the power vanishes (Gauss point) or blows up
        pw = np.where(u2 == 0, np.where(s2.real > 0, 0.0, np.inf), pw)
        v, sc = _series(c[nz2] - a[nz2], c[nz2] - b[nz2], 1.0 + s[nz2], u[nz2], with_scale=True)
        val[nz2] += pw * v
        scale[nz2] += np.abs(pw) * sc
    return val, scale


def _degeneracy(a, b, c):
    s = c - a - b
    dist = np.abs(s - np.round(s.real))
    return dist < DEGENERACY_TOL, dist


def hyp2f1_complement(a, b, c, u, with_scale=False):
    """F(a, b; c; 1 - u) for small |u|, taking u (not z) to avoid cancellation.

    Terminating parameter sets are summed as polynomials in 1 - u.  When
    c - a - b sits within ``DEGENERACY_TOL`` of an integer the connection
    formula is singular, so F is sampled at c +- h, c +- 2h and c +- 3h (all
    clear of the logarithmic case) and the symmetric averages are Richardson
    extrapolated.  F is analytic in c, so the error is O(h^6) plus a
    rounding term of order eps / h.  The step shrinks with |log u| because
    the c-derivatives of u**(c-a-b) grow like powers of log u.

    With ``with_scale`` the largest intermediate modulus is returned too.
    """
    scalar = all(np.ndim(x) == 0 for x in (a, b, c, u))
    a, b, c, u = _as_complex(a, b, c, u)
    shape = u.shape
    a, b, c, u = (x.ravel() for x in (a, b, c, u))
    out = np.empty(u.shape, dtype=complex)
    scale = np.ones(u.shape)
    term = _terminates(a) | _terminates(b)
    if term.any():
        out[term], scale[term] = _series(a[term], b[term], c[term], 1.0 - u[term], with_scale=True)
    rest = ~term
    if rest.any():
        ar, br, cr, ur = a[rest], b[rest], c[rest], u[rest]
        deg, dist = _degeneracy(ar, br, cr)
        val = np.empty(ur.shape, dtype=complex)
        sc = np.empty(ur.shape)
        ok = ~deg
        if ok.any():
            val[ok], sc[ok] = _connection(ar[ok], br[ok], cr[ok], ur[ok])
        if deg.any():
            ad, bd, cd, ud = ar[deg], br[deg], cr[deg], ur[deg]

            def sym(h):
                v1, s1 = _connection(ad, bd, cd + h, ud)
                v2, s2 = _connection(ad, bd, cd - h, ud)
                return 0.5 * (v1 + v2), np.maximum(s1, s2)

            h = PERTURBATION_STEP / np.maximum(1.0, np.abs(np.log(np.maximum(np.abs(ud), 1e-300))))
            (v1, s1), (v2, s2), (v3, s3) = sym(h), sym(2.0 * h), sym(3.0 * h)
            val[deg] = 1.5 * v1 - 0.6 * v2 + 0.1 * v3
            sc[deg] = 2.2 * np.maximum(np.maximum(s1, s2), s3)
        out[rest] = val
        scale[rest] = sc
    out = out.reshape(shape)
    if with_scale:
        return out, scale.reshape(shape)
    return _unwrap(out, scalar)


def _check_lower(a, b, c):
    bad = _near_nonpositive_integer(c)
    if not bad.any():
        return
    # A polynomial that stops before the pole of (c)_n is still well defined.
    na = np.where(_terminates(a), -np.round(a.real), np.inf)
    nb = np.where(_terminates(b), -np.round(b.real), np.inf)
    stop = np.minimum(na, nb)
    fatal = bad & ~(stop < -np.round(c.real))
    if fatal.any():
        raise DegenerateParameterError(f"c = {c[fatal].ravel()[0]} is a pole of the series")


def hyp2f1(a, b, c, z):
    """Gauss hypergeometric function 2F1(a, b; c; z), principal branch.

    Dispatch per element: the power series for |z| <= 0.5; the Pfaff map
    z -> z/(z-1) when that argument is small; the connection around 1 for z
    near 1 (directly, or after the Pfaff map for large negative z).
    Points where every candidate argument exceeds ``MAX_RATIO`` raise
    :class:`NonConvergenceError`.
    """
    scalar = all(np.ndim(x) == 0 for x in (a, b, c, z))
    a, b, c, z = _as_complex(a, b, c, z)
    shape = z.shape
    a, b, c, z = (x.ravel() for x in (a, b, c, z))
    _check_lower(a, b, c)
    cut = (z.imag == 0) & (z.real > 1.0) & ~(_terminates(a) | _terminates(b))
    if cut.any():
        raise BranchCutError(f"z = {z[cut][0].real} lies on the branch cut (1, inf)")
    region, ratio = _classify(a, b, c, z)
    out = np.empty(z.shape, dtype=complex)

    m = region == _TERMINATING
    if m.any():
        out[m] = _series(a[m], b[m], c[m], z[m])
    m = region == _GAUSS
    if m.any():
        s = c[m] - a[m] - b[m]
        if (s.real <= 0).any():
            raise BranchCutError("z = 1 needs Re(c - a - b) > 0")
        out[m] = gamma_quotient([c[m], s], [c[m] - a[m], c[m] - b[m]])

    slow = (region >= 0) & (region <= _PFAFF_NEAR_ONE) & (ratio > MAX_RATIO)
    if slow.any():
        i = np.flatnonzero(slow)[0]
        raise NonConvergenceError(
            "no transformation brings the argument inside the convergence disc",
            {"a": a[i], "b": b[i], "c": c[i], "z": z[i], "best_ratio": float(ratio[i])},
        )

    m = region == _SERIES
    if m.any():
        out[m] = _series(a[m], b[m], c[m], z[m])
    m = region == _NEAR_ONE
    if m.any():
        out[m] = hyp2f1_complement(a[m], b[m], c[m], 1.0 - z[m])
    for code in (_PFAFF, _PFAFF_NEAR_ONE):
        m = region == code
        if not m.any():
            continue
        am, bm, cm, zm = a[m], b[m], c[m], z[m]
        pref = np.exp(-bm * np.log(1.0 - zm))
        ap = cm - am
        if code == _PFAFF:
            val = _series(ap, bm, cm, zm / (zm - 1.0))
        else:
            u = 1.0 / (1.0 - zm)
            val = np.empty(zm.shape, dtype=complex)
            poly = _terminates(ap) | _terminates(bm)
            if poly.any():
                val[poly] = _series(ap[poly], bm[poly], cm[poly], zm[poly] / (zm[poly] - 1.0))
            if (~poly).any():
                val[~poly] = hyp2f1_complement(ap[~poly], bm[~poly], cm[~poly], u[~poly])
        out[m] = pref * val
    return _unwrap(out.reshape(shape), scalar)


def hyp2f1_record(a, b, c, z) -> tuple[complex, DispatchRecord]:
    """Scalar evaluation together with the dispatch decision."""
    a, b, c, z = (complex(x) for x in (a, b, c, z))
    region, ratio = _classify(*_as_complex(a, b, c, z))
    code = int(region.reshape(-1)[0])
    name = REGIONS[code]
    arg = {
        _SERIES: z,
        _TERMINATING: z,
        _GAUSS: 1.0,
        _PFAFF: z / (z - 1) if z != 1 else z,
        _NEAR_ONE: 1 - z,
        _PFAFF_NEAR_ONE: 1 / (1 - z) if z != 1 else z,
    }[code]
    rec = DispatchRecord(a, b, c, z, name, arg, float(ratio.reshape(-1)[0]))
    if code == _NEAR_ONE:
        deg, dist = _degeneracy(*_as_complex(a, b, c))
        if deg.reshape(-1)[0]:
            rec.perturbed = True
            rec.perturbation = PERTURBATION_STEP
            rec.notes.append("c - a - b near an integer; symmetric c perturbation")
    elif code == _PFAFF_NEAR_ONE:
        deg, dist = _degeneracy(*_as_complex(c - a, b, c))
        if deg.reshape(-1)[0] and not (_terminates(np.asarray(c - a)) or _terminates(np.asarray(b))):
            rec.perturbed = True
            rec.perturbation = PERTURBATION_STEP
            rec.notes.append("a - b near an integer after Pfaff; symmetric c perturbation")
    return hyp2f1(a, b, c, z), rec


def contiguous_step(a, b, c, z, rtol=1e-9):
    """The pair (F(a, b+1; c+2; z), F(a+1, b+1; c+2; z)).

    Checks the three-term relation
    c(c+1) F(a,b;c;z) = c(c-a+1) F(a,b+1;c+2;z) + a[c-(c-b)z] F(a+1,b+1;c+2;z)
    and raises if it fails to reconstruct F(a,b;c;z) to ``rtol``.
    """
    if complex(c) == 0 or complex(c) == -1:
        raise DegenerateParameterError("contiguous step needs c, c+1 != 0")
    f1 = hyp2f1(a, b + 1, c + 2, z)
    f2 = hyp2f1(a + 1, b + 1, c + 2, z)
    res = contiguous_residual(a, b, c, z, pair=(f1, f2))
    if res > rtol:
        raise NonConvergenceError("contiguous relation failed", {"residual": res})
    return f1, f2


def contiguous_residual(a, b, c, z, pair=None):
    """Relative residual of the three-term contiguous relation."""
    f0 = hyp2f1(a, b, c, z)
    f1, f2 = pair if pair is not None else (hyp2f1(a, b + 1, c + 2, z), hyp2f1(a + 1, b + 1, c + 2, z))
    lhs = c * (c + 1) * f0
    rhs = c * (c - a + 1) * f1 + a * (c - (c - b) * z) * f2
    return abs(lhs - rhs) / max(abs(lhs), abs(c * (c - a + 1) * f1), 1e-300)


def euler_beta_moment(a, b, c, d):
    """Closed form of int_0^1 x^(d-1) (1-x)^(b-d-1) 2F1(a, b; c; x) dx."""
    a, b, c, d = (complex(x) for x in (a, b, c, d))
    fails = []
    if not d.real > 0:
        fails.append("Re d > 0")
    if not (b - d).real > 0:
        fails.append("Re(b - d) > 0")
    if not (c - a - d).real > 0:
        fails.append("Re(c - a - d) > 0")
    if fails:
        raise PreconditionError("euler_beta_moment requires " + ", ".join(fails))
    return gamma_quotient([c, d, b - d, c - a - d], [b, c - a, c - d])


def euler_beta_moment_numeric(a, b, c, d, rtol=1e-11):
    """Companion check: the same moment by adaptive quadrature on (0, 1)."""
    from scipy.integrate import quad

    a, b, c, d = (complex(x) for x in (a, b, c, d))

    def integrand(x):
        return x ** (d - 1) * (1 - x) ** (b - d - 1) * hyp2f1(a, b, c, x)

    opts = dict(limit=400, epsabs=0.0, epsrel=rtol)
    re = quad(lambda x: integrand(x).real, 0, 0.5, **opts)[0] + quad(lambda x: integrand(x).real, 0.5, 1, **opts)[0]
    im = quad(lambda x: integrand(x).imag, 0, 0.5, **opts)[0] + quad(lambda x: integrand(x).imag, 0.5, 1, **opts)[0]
    return complex(re, im)
