"""Numerical harmonic analysis on rank-one symmetric spaces.

Special functions (specfun), group data (geometry), spherical functions and
resolvent kernels (spherical), half-line quadrature (quadrature), radial
function families (radial), transforms and synthesis (transform), certified
bounds and growth fits (certify), verification suites (checks) and the
``rankone`` command line (cli).
"""

from .errors import (
    DivergenceError,
    DomainError,
    NonConvergenceError,
    RankOneError,
)
from .geometry import GroupDatum, catalog
from .quadrature import Decay, QuadratureSpec
from .radial import BKernel, Bump, Gaussian, PhiSecondKind, Sampled, Spherical
from .spherical import b_kernel, c_function, phi, phi_second_kind
from .specfun import hyp2f1, log_gamma
from .transform import (
    PWSpec,
    SincPower,
    T_operator,
    convolve_with_b,
    l1_norm,
    resolvent_transform,
    spherical_transform,
    synthesize_from_pw,
)

__version__ = "0.1.0"

__all__ = [
    "BKernel",
    "Bump",
    "Decay",
    "DivergenceError",
    "DomainError",
    "Gaussian",
    "GroupDatum",
    "NonConvergenceError",
    "PWSpec",
    "PhiSecondKind",
    "QuadratureSpec",
    "RankOneError",
    "Sampled",
    "SincPower",
    "Spherical",
    "T_operator",
    "b_kernel",
    "c_function",
    "catalog",
    "convolve_with_b",
    "hyp2f1",
    "l1_norm",
    "log_gamma",
    "phi",
    "phi_second_kind",
    "resolvent_transform",
    "spherical_transform",
    "synthesize_from_pw",
]
