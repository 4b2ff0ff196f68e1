"""Adaptive Gauss-Legendre quadrature on the half-line.

Integrands are vectorized: ``F(t)`` takes a 1-d array of nodes and returns
an array whose last axis runs over those nodes, so a whole family of
integrals (a grid of spectral parameters, say) shares one mesh.

The half-line is cut into a graded inner part (0, split], with panels
shrinking geometrically towards the origin where the density-weighted
integrands behave like powers of t, and unit outer panels beyond split.
The tail past the last panel is controlled by an analytic bound supplied by
the caller as a :class:`Decay` envelope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DivergenceError, NonConvergenceError, PreconditionError, TailBoundError


@dataclass(frozen=True)
class QuadratureSpec:
    split: float = 0.5
    inner_nodes: int = 20
    inner_levels: int = 48
    outer_panel: float = 1.0
    tail_T: float | None = None  # None: extend until the tail bound is met
    max_tail_T: float = 1000.0
    tol: float = 1e-9  # relative
    atol: float = 1e-15
    max_depth: int = 24

    def __post_init__(self):
        if self.split <= 0:
            raise PreconditionError("split must be positive")
        if self.tail_T is not None and self.tail_T <= self.split:
            raise PreconditionError("tail_T must exceed split")
        if self.tol <= 0 or self.atol < 0:
            raise PreconditionError("tolerances must be positive")
        if self.outer_panel <= 0 or self.inner_nodes < 2:
            raise PreconditionError("bad panel configuration")

    def with_(self, **kw) -> "QuadratureSpec":
        return replace(self, **kw)


@dataclass(frozen=True)
class Decay:
    """Envelope |F(t)| <~ t**power * exp(-rate * t) for large t.

    ``support`` finite means F vanishes beyond it.  ``gauss_width`` adds a
    factor exp(-t**2 / width**2) to the envelope.
    """

    rate: float = 0.0
    power: float = 0.0
    support: float = math.inf
    gauss_width: float | None = None

    @property
    def compact(self) -> bool:
        return math.isfinite(self.support)

    def effective_rate(self, t: float) -> float:
        r = self.rate
        if self.gauss_width is not None:
            r += 2.0 * t / self.gauss_width**2
        return r

    def times(self, other: "Decay") -> "Decay":
        """Envelope of a product."""
        widths = [w for w in (self.gauss_width, other.gauss_width) if w is not None]
        width = None
        if widths:
            width = 1.0 / math.sqrt(sum(1.0 / w**2 for w in widths))
        return Decay(
            self.rate + other.rate,
            self.power + other.power,
            min(self.support, other.support),
            width,
        )

    def shifted(self, rate=0.0, power=0.0) -> "Decay":
        return replace(self, rate=self.rate + rate, power=self.power + power)


@dataclass
class QuadResult:
    value: np.ndarray
    error: np.ndarray
    tail_bound: np.ndarray
    tail_T: float
    panels: int
    edges: np.ndarray = field(repr=False, default=None)
    panel_values: np.ndarray = field(repr=False, default=None)

    def scalar(self):
        return complex(np.asarray(self.value).reshape(-1)[0])


_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def gauss_legendre(n: int):
    if n not in _GL_CACHE:
        _GL_CACHE[n] = np.polynomial.legendre.leggauss(n)
    return _GL_CACHE[n]


def _panel_rule(F, a, b, n):
    """G_n on each [a_i, b_i] and the sum of G_n on both halves."""
    x, w = gauss_legendre(n)
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    quarter = 0.5 * half
    t_full = mid[:, None] + half[:, None] * x
    t_left = (a + quarter)[:, None] + quarter[:, None] * x
    t_right = (mid + quarter)[:, None] + quarter[:, None] * x
    nodes = np.concatenate([t_full.ravel(), t_left.ravel(), t_right.ravel()])
    vals = np.asarray(F(nodes))
    lead = vals.shape[:-1]
    m = a.size
    vals = vals.reshape(lead + (3, m, n))
    coarse = (vals[..., 0, :, :] @ w) * half
    fine = (vals[..., 1, :, :] @ w + vals[..., 2, :, :] @ w) * quarter
    return coarse, fine


def _check_finite(vals, a, b):
    bad = ~np.isfinite(vals)
    if bad.any():
        if bad.ndim > 1:
            bad = bad.reshape(-1, bad.shape[-1]).any(axis=0)
        i = int(np.flatnonzero(bad)[0])
        raise NonConvergenceError(
            "integrand is not finite on a panel", {"panel": [float(a[i]), float(b[i])]}
        )


def adaptive_panels(F, edges, n=20, rtol=1e-9, atol=1e-15, max_depth=24):
    """Integrate F over consecutive intervals given by ``edges``, bisecting as needed.

    Returns (edges, panel integrals with the panel axis last, error estimate).
    """
    edges = np.asarray(edges, dtype=float)
    a, b = edges[:-1], edges[1:]
    coarse, fine = _panel_rule(F, a, b, n)
    _check_finite(fine, a, b)
    for _ in range(max_depth):
        err = np.abs(fine - coarse)
        total = np.abs(fine.sum(axis=-1))
        scale = np.maximum(atol, rtol * total)
        score = err / scale[..., None]
        if score.ndim > 1:
            score = score.reshape(-1, score.shape[-1]).max(axis=0)
        if score.sum() <= 1.0:
            break
        bad = score > 1.0 / max(score.size, 1)
        if not bad.any():
            break
        mid = 0.5 * (a[bad] + b[bad])
        new_a = np.concatenate([a[bad], mid])
        new_b = np.concatenate([mid, b[bad]])
        c2, f2 = _panel_rule(F, new_a, new_b, n)
        _check_finite(f2, new_a, new_b)
        keep = ~bad
        a = np.concatenate([a[keep], new_a])
        b = np.concatenate([b[keep], new_b])
        coarse = np.concatenate([coarse[..., keep], c2], axis=-1)
        fine = np.concatenate([fine[..., keep], f2], axis=-1)
        order = np.argsort(a, kind="stable")
        a, b = a[order], b[order]
        coarse, fine = coarse[..., order], fine[..., order]
    err = np.abs(fine - coarse).sum(axis=-1)
    return np.append(a, b[-1]), fine, err


def inner_edges(split: float, levels: int):
    """Geometric edges 0 < split 2^-levels < ... < split/2 < split."""
    return np.concatenate([[0.0], split * 2.0 ** -np.arange(levels, -1, -1)])


def _edges(lo, hi, panel, extra=()):
    n = max(1, int(math.ceil((hi - lo) / panel - 1e-12)))
    e = np.linspace(lo, hi, n + 1)
    if extra:
        pts = [p for p in extra if lo < p < hi]
        e = np.unique(np.concatenate([e, pts]))
    return e


def tail_bound(F, U, decay: Decay, n=20):
    """Bound on |int_U^inf F| from the envelope, anchored on the last unit of data."""
    if decay.compact and U >= decay.support:
        return 0.0
    x, _ = gauss_legendre(n)
    lo = max(U - 1.0, 0.5 * U)
    t = 0.5 * (lo + U) + 0.5 * (U - lo) * x
    vals = np.abs(np.asarray(F(t)))
    r = decay.effective_rate(U)
    p = decay.power
    # Envelope constant at U: max_t |F(t)| e^{r (t - U)} (U / t)^p.
    factor = np.exp(r * (t - U)) * (U / t) ** p
    M = (vals * factor).max(axis=-1)
    rate = r - max(p, 0.0) / U
    if rate <= 0:
        return np.full(M.shape, np.inf)
    return M / rate


def integrate_radial(F, decay: Decay, q: QuadratureSpec = QuadratureSpec(), breakpoints=()):
    """Integral of F over (0, inf) with an error estimate and a tail bound.

    ``decay`` describes the integrand itself (density included).  A compact
    envelope stops the mesh at the support; otherwise the mesh grows in
    doubling blocks until the tail bound falls under a tenth of the
    tolerance, failing with :class:`TailBoundError` at ``q.max_tail_T`` or
    :class:`DivergenceError` when the envelope does not decay at all.
    """
    if not decay.compact and decay.rate <= 0 and decay.gauss_width is None:
        raise DivergenceError(f"integrand envelope does not decay (rate {decay.rate:.6g})")
    kw = dict(n=q.inner_nodes, rtol=q.tol, atol=q.atol, max_depth=q.max_depth)
    split = q.split
    if decay.compact and decay.support <= split:
        split = decay.support
    e_in = inner_edges(split, q.inner_levels)
    bps = [p for p in breakpoints if 0 < p < split]
    if bps:
        e_in = np.unique(np.concatenate([e_in, bps]))
    edges_all, pv_in, err_in = adaptive_panels(F, e_in, **kw)
    pieces = [pv_in]
    errs = err_in
    edge_list = [edges_all]

    def outer(lo, hi):
        e = _edges(lo, hi, q.outer_panel, breakpoints)
        return adaptive_panels(F, e, **kw)

    if decay.compact:
        U = decay.support if q.tail_T is None else min(q.tail_T, decay.support)
    elif q.tail_T is not None:
        U = q.tail_T
    else:
        U = max(split + q.outer_panel, 8.0 * q.outer_panel)
    lo = split
    tb = 0.0
    while True:
        if U > lo:
            e, pv, er = outer(lo, U)
            pieces.append(pv)
            edge_list.append(e[1:])
            errs = errs + er
            lo = U
        value = sum(p.sum(axis=-1) for p in pieces)
        tb = tail_bound(F, U, decay, q.inner_nodes)
        target = np.maximum(q.atol, q.tol * np.abs(value))
        if np.all(tb <= 0.1 * target):
            break
        if q.tail_T is not None or U >= q.max_tail_T:
            raise TailBoundError(
                f"tail bound {np.max(tb):.3g} beyond T = {U:.4g} exceeds tolerance {np.min(target):.3g}"
            )
        U = min(2.0 * U, q.max_tail_T)
    panel_values = np.concatenate(pieces, axis=-1)
    edges = np.concatenate(edge_list)
    return QuadResult(
        value=value,
        error=errs,
        tail_bound=np.asarray(tb),
        tail_T=float(U),
        panels=panel_values.shape[-1],
        edges=edges,
        panel_values=panel_values,
    )


def truncated_integrals(F, Ts, q: QuadratureSpec = QuadratureSpec()):
    """int_0^T F for each T in increasing ``Ts`` (no tail control)."""
    Ts = np.asarray(sorted(Ts), dtype=float)
    kw = dict(n=q.inner_nodes, rtol=q.tol, atol=q.atol, max_depth=q.max_depth)
    _, pv, _ = adaptive_panels(F, inner_edges(q.split, q.inner_levels), **kw)
    acc = pv.sum(axis=-1)
    out = []
    lo = q.split
    for T in Ts:
        if T > lo:
            _, pv, _ = adaptive_panels(F, _edges(lo, T, q.outer_panel), **kw)
            acc = acc + pv.sum(axis=-1)
            lo = T
        out.append(acc)
    return np.stack(out, axis=-1)


class PanelIntegrator:
    """Running integrals of F on a fixed mesh, queried at arbitrary points.

    ``head(t)`` is int_lo^t F and ``tail(t)`` is int_t^hi F.  Whole panels
    come from prefix and suffix sums; the panel containing t is integrated
    afresh with a Gauss rule on the relevant piece, so neither query is a
    difference of large numbers.
    """

    def __init__(self, F, edges, panel_values, n=20):
        self.F = F
        self.edges = np.asarray(edges, dtype=float)
        pv = np.asarray(panel_values)
        self.n = n
        zeros = np.zeros(pv.shape[:-1] + (1,), dtype=pv.dtype)
        # prefix[..., i] = panels 0 .. i-1;  suffix[..., i] = panels i .. end
        self.prefix = np.concatenate([zeros, np.cumsum(pv, axis=-1)], axis=-1)
        self.suffix = np.concatenate([np.cumsum(pv[..., ::-1], axis=-1)[..., ::-1], zeros], axis=-1)

    @classmethod
    def build(cls, F, decay: Decay, q: QuadratureSpec = QuadratureSpec(), breakpoints=()):
        res = integrate_radial(F, decay, q, breakpoints)
        return cls(F, np.concatenate([[0.0], res.edges]) if res.edges[0] > 0 else res.edges,
                   res.panel_values, q.inner_nodes), res

    @property
    def upper(self) -> float:
        return float(self.edges[-1])

    def _partial(self, lo, hi):
        x, w = gauss_legendre(self.n)
        half = 0.5 * (hi - lo)
        nodes = (0.5 * (hi + lo))[:, None] + half[:, None] * x
        vals = np.asarray(self.F(nodes.ravel()))
        vals = vals.reshape(vals.shape[:-1] + nodes.shape)
        return (vals @ w) * half

    def _locate(self, t):
        e = self.edges
        return np.clip(np.searchsorted(e, t, side="right") - 1, 0, e.size - 2)

    def tail(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        inside = t < self.edges[-1]
        out = np.zeros(self.suffix.shape[:-1] + t.shape, dtype=complex)
        if inside.any():
            ti = t[inside]
            idx = self._locate(ti)
            out[..., inside] = self._partial(ti, self.edges[idx + 1]) + self.suffix[..., idx + 1]
        return out

    def head(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.broadcast_to(self.prefix[..., -1:], self.prefix.shape[:-1] + t.shape).astype(complex)
        inside = t < self.edges[-1]
        if inside.any():
            ti = t[inside]
            idx = self._locate(ti)
            out[..., inside] = self._partial(self.edges[idx], ti) + self.prefix[..., idx]
        return out
