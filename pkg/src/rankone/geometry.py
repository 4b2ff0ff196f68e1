"""Rank-one group data: multiplicities, rho, the radial density and the strips."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PreconditionError

# (m1, m2) -> short name.  (n-1, 0) is real hyperbolic n-space; the others
# are the lowest-dimensional complex, quaternionic and octonionic planes.
CATALOG = {
    (1, 0): "H2R",
    (2, 0): "H3R",
    (3, 0): "H4R",
    (2, 1): "H2C",
    (4, 3): "H2H",
    (8, 7): "H2O",
}
_BY_NAME = {v.lower(): k for k, v in CATALOG.items()}


@dataclass(frozen=True)
class GroupDatum:
    m1: int
    m2: int = 0

    def __post_init__(self):
        if int(self.m1) != self.m1 or int(self.m2) != self.m2:
            raise PreconditionError("multiplicities must be integers")
        if self.m1 < 1 or self.m2 < 0:
            raise PreconditionError(f"need m1 >= 1 and m2 >= 0, got ({self.m1}, {self.m2})")

    @property
    def rho(self) -> float:
        return (self.m1 + 2 * self.m2) / 2

    @property
    def name(self) -> str:
        return CATALOG.get((self.m1, self.m2), f"formal({self.m1},{self.m2})")

    @property
    def formal(self) -> bool:
        """True for multiplicity pairs outside the geometric catalog."""
        return (self.m1, self.m2) not in CATALOG

    @property
    def dim(self) -> int:
        return self.m1 + self.m2 + 1

    def label(self) -> str:
        return f"{self.m1},{self.m2}"

    def as_dict(self):
        return {"m1": self.m1, "m2": self.m2, "rho": self.rho, "name": self.name, "formal": self.formal}

    @classmethod
    def parse(cls, text: str) -> "GroupDatum":
        """Accept ``"m1,m2"`` or a catalog name such as ``"H2C"``."""
        text = text.strip()
        if text.lower() in _BY_NAME:
            return cls(*_BY_NAME[text.lower()])
        parts = text.replace(" ", "").split(",")
        try:
            m1, m2 = (int(p) for p in parts)
        except ValueError:
            names = ", ".join(CATALOG.values())
            raise DomainError(f"unknown group {text!r}; use 'm1,m2' or one of {names}") from None
        return cls(m1, m2)


def catalog():
    return [GroupDatum(m1, m2) for (m1, m2) in CATALOG]


def _check_t(t):
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise DomainError("radial density needs t > 0")
    return t


def log_2sinh(t):
    t = np.asarray(t, dtype=float)
    return t + np.log(-np.expm1(-2.0 * t))


def log_2cosh(t):
    t = np.asarray(t, dtype=float)
    return t + np.log1p(np.exp(-2.0 * t))


def log_delta(t, g: GroupDatum):
    """log of (2 sinh t)^(m1+m2) (2 cosh t)^m2."""
    t = _check_t(t)
    out = (g.m1 + g.m2) * log_2sinh(t)
    if g.m2:
        out = out + g.m2 * log_2cosh(t)
    return out


def delta_density(t, g: GroupDatum):
    """Radial part of the Haar measure in polar coordinates."""
    return np.exp(log_delta(t, g))


def delta_scaled(t, g: GroupDatum):
    """Delta(t) * exp(-2 rho t), bounded by 1 on (0, inf)."""
    t = _check_t(t)
    # written without the 2 rho t terms so nothing cancels at large t
    e = np.exp(-2.0 * t)
    out = (g.m1 + g.m2) * np.log(-np.expm1(-2.0 * t))
    if g.m2:
        out = out + g.m2 * np.log1p(e)
    return np.exp(out)


def strip_halfwidth(p: float, g: GroupDatum) -> float:
    if not (0 < p <= 2):
        raise PreconditionError("strip index p must lie in (0, 2]")
    return (2.0 / p - 1.0) * g.rho


def in_strip(lam, p: float, g: GroupDatum):
    """Membership in the tube |Im lambda| <= (2/p - 1) rho."""
    return np.abs(np.imag(lam)) <= strip_halfwidth(p, g)


def strip_distance(lam, g: GroupDatum):
    """Distance from lambda to the nearest of the lines Im z = +-rho."""
    return np.abs(g.rho - np.abs(np.imag(lam)))


@dataclass(frozen=True)
class StripQuery:
    p: float
    lam: complex

    def contains(self, g: GroupDatum) -> bool:
        return bool(in_strip(self.lam, self.p, g))
