"""Radial (K-biinvariant) functions, identified with functions of t >= 0.

Each function knows how to evaluate itself times the density Delta(t)
without overflow (``weighted``) and carries a :class:`Decay` envelope for
that product, which the quadrature layer turns into a tail bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from . import spherical
from .errors import DomainError, PreconditionError
from .geometry import GroupDatum, delta_scaled, log_delta
from .quadrature import Decay


class RadialFunction:
    """Base class.  Subclasses implement ``values`` and ``decay``."""

    name = "radial"

    def values(self, t, g: GroupDatum):
        raise NotImplementedError

    def weighted(self, t, g: GroupDatum):
        """f(a_t) * Delta(t)."""
        t = np.asarray(t, dtype=float)
        return np.asarray(self.values(t, g)) * delta_scaled(t, g) * np.exp(2.0 * g.rho * t)

    def decay(self, g: GroupDatum) -> Decay:
        """Envelope of |f| alone (density not included)."""
        raise NotImplementedError

    def weighted_decay(self, g: GroupDatum) -> Decay:
        return self.decay(g).shifted(rate=-2.0 * g.rho)

    @property
    def support(self) -> float:
        return math.inf

    def describe(self) -> dict:
        return {"family": self.name}

    def __add__(self, other):
        return Combination([(1.0, self), (1.0, other)])

    def __rmul__(self, c):
        return Combination([(c, self)])


@dataclass
class Zero(RadialFunction):
    name = "zero"

    def values(self, t, g):
        return np.zeros(np.shape(t))

    def weighted(self, t, g):
        return np.zeros(np.shape(t))

    def decay(self, g):
        return Decay(support=0.0)

    @property
    def support(self):
        return 0.0


@dataclass
class Bump(RadialFunction):
    """exp(-1 / (1 - (t/T)^2)) on [0, T), zero beyond."""

    T: float = 1.0
    name = "bump"

    def __post_init__(self):
        if self.T <= 0:
            raise PreconditionError("bump radius must be positive")

    def values(self, t, g):
        t = np.asarray(t, dtype=float)
        s = t / self.T
        out = np.zeros(t.shape)
        m = s < 1.0
        out[m] = np.exp(-1.0 / (1.0 - s[m] ** 2))
        return out

    def weighted(self, t, g):
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape)
        m = (t < self.T) & (t > 0)
        if m.any():
            out[m] = self.values(t[m], g) * np.exp(log_delta(t[m], g))
        return out

    def decay(self, g):
        return Decay(support=self.T)

    @property
    def support(self):
        return self.T

    def describe(self):
        return {"family": self.name, "T": self.T}


@dataclass
class Gaussian(RadialFunction):
    """exp(-t^2 / sigma^2) * exp(-rho t)."""

    sigma: float = 1.0
    name = "gauss"

    def __post_init__(self):
        if self.sigma <= 0:
            raise PreconditionError("gaussian width must be positive")

    def values(self, t, g):
        t = np.asarray(t, dtype=float)
        return np.exp(-(t**2) / self.sigma**2 - g.rho * t)

    def weighted(self, t, g):
        t = np.asarray(t, dtype=float)
        return np.exp(-(t**2) / self.sigma**2 + g.rho * t) * delta_scaled(t, g)

    def decay(self, g):
        return Decay(rate=g.rho, gauss_width=self.sigma)

    def describe(self):
        return {"family": self.name, "sigma": self.sigma}


@dataclass
class BKernel(RadialFunction):
    """The resolvent kernel b_mu, Im mu > 0."""

    mu: complex = 1j
    name = "b"

    def __post_init__(self):
        self.mu = complex(self.mu)
        if self.mu.imag <= 0:
            raise DomainError("b-kernel needs Im mu > 0")

    def values(self, t, g):
        return spherical.b_kernel(self.mu, t, g)

    def weighted(self, t, g):
        t = np.asarray(t, dtype=float)
        s = spherical.b_kernel_scaled(self.mu, t, g)
        return s * delta_scaled(t, g) * np.exp((1j * self.mu + g.rho) * t)

    def decay(self, g):
        return Decay(rate=self.mu.imag + g.rho)

    def describe(self):
        return {"family": self.name, "mu": [self.mu.real, self.mu.imag]}


@dataclass
class PhiSecondKind(RadialFunction):
    """Phi_mu, the solution singular at the origin."""

    mu: complex = 1j
    name = "Phi"

    def __post_init__(self):
        self.mu = complex(self.mu)

    def values(self, t, g):
        return spherical.phi_second_kind(self.mu, t, g)

    def weighted(self, t, g):
        t = np.asarray(t, dtype=float)
        s = spherical.phi_second_kind_scaled(self.mu, t, g)
        return s * delta_scaled(t, g) * np.exp((1j * self.mu + g.rho) * t)

    def decay(self, g):
        return Decay(rate=self.mu.imag + g.rho)

    def describe(self):
        return {"family": self.name, "mu": [self.mu.real, self.mu.imag]}


@dataclass
class Spherical(RadialFunction):
    """phi_xi, bounded when xi lies in the strip; used as a test functional."""

    xi: complex = 0.0
    name = "phi"

    def __post_init__(self):
        self.xi = complex(self.xi)

    def values(self, t, g):
        return spherical.phi(self.xi, t, g)

    def weighted(self, t, g):
        t = np.asarray(t, dtype=float)
        return spherical.phi_scaled(self.xi, t, g) * delta_scaled(t, g) * np.exp(g.rho * t)

    def decay(self, g):
        return Decay(rate=g.rho - abs(self.xi.imag), power=1.0)

    def describe(self):
        return {"family": self.name, "xi": [self.xi.real, self.xi.imag]}


@dataclass
class Sampled(RadialFunction):
    """Cubic interpolation of samples (t_i, v_i), zero past the last node."""

    t: np.ndarray = field(default_factory=lambda: np.array([1.0]))
    v: np.ndarray = field(default_factory=lambda: np.array([0.0]))
    compact: bool = True
    name = "sampled"

    def __post_init__(self):
        self.t = np.asarray(self.t, dtype=float)
        self.v = np.asarray(self.v)
        if self.t.ndim != 1 or self.t.shape != self.v.shape or self.t.size < 2:
            raise PreconditionError("sampled function needs matching 1-d arrays of length >= 2")
        if self.t[0] <= 0 or np.any(np.diff(self.t) <= 0):
            raise PreconditionError("sample nodes must be strictly increasing and positive")
        if not self.compact:
            raise PreconditionError("non-compact sampled functions have no principled tail")
        self._spline = CubicSpline(self.t, self.v)

    def values(self, t, g=None):
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape, dtype=self._spline(self.t[:1]).dtype)
        m = t <= self.t[-1]
        out[m] = self._spline(t[m])
        return out

    def weighted(self, t, g):
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape, dtype=complex if np.iscomplexobj(self.v) else float)
        m = (t <= self.t[-1]) & (t > 0)
        if m.any():
            out[m] = self._spline(t[m]) * np.exp(log_delta(t[m], g))
        return out

    def decay(self, g):
        return Decay(support=float(self.t[-1]))

    @property
    def support(self):
        return float(self.t[-1])

    def describe(self):
        return {"family": self.name, "nodes": int(self.t.size), "support": self.support}


@dataclass
class Combination(RadialFunction):
    terms: list = field(default_factory=list)
    name = "combination"

    def values(self, t, g):
        return sum(c * np.asarray(f.values(t, g)) for c, f in self.terms)

    def weighted(self, t, g):
        return sum(c * np.asarray(f.weighted(t, g)) for c, f in self.terms)

    def decay(self, g):
        ds = [f.decay(g) for _, f in self.terms]
        if not ds:
            return Decay(support=0.0)
        noncompact = [d for d in ds if not d.compact]
        if not noncompact:
            return Decay(support=max(d.support for d in ds))
        widths = [d.gauss_width for d in noncompact]
        return Decay(
            rate=min(d.rate for d in noncompact),
            power=max(d.power for d in noncompact),
            gauss_width=None if any(w is None for w in widths) else max(widths),
        )

    @property
    def support(self):
        return max((f.support for _, f in self.terms), default=0.0)

    def describe(self):
        return {
            "family": self.name,
            "terms": [{"coef": [complex(c).real, complex(c).imag], **f.describe()} for c, f in self.terms],
        }


FAMILIES = {
    "bump": Bump,
    "gauss": Gaussian,
    "b": BKernel,
    "Phi": PhiSecondKind,
    "phi": Spherical,
    "zero": Zero,
}


def _parse_value(text: str):
    text = text.strip()
    if "," in text:
        re, im = (float(x) for x in text.split(","))
        return complex(re, im)
    return float(text)


def from_family(name: str, params: dict | None = None) -> RadialFunction:
    """Build a family member; ``params`` maps field names to numbers or 're,im' strings."""
    try:
        cls = FAMILIES[name]
    except KeyError:
        raise DomainError(f"unknown family {name!r}; choose from {', '.join(FAMILIES)}") from None
    kw = {}
    for k, v in (params or {}).items():
        kw[k] = _parse_value(v) if isinstance(v, str) else v
    try:
        return cls(**kw)
    except TypeError as exc:
        raise DomainError(f"bad parameters for family {name!r}: {exc}") from None
