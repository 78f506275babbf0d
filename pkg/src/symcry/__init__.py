"""Exact computations with the twisted boson module V_theta(lambda): crystal, lattice and lower global basis."""

from .cartan import CartanDatum, builtin, validate
from .coeffs import LaurentPoly, RationalFunction, bar, ord, qbinom, qfact, qint
from .crystal import build_crystal
from .global_basis import compute_global_basis
from .theta_module import ThetaModule

__version__ = "0.1.0"

__all__ = [
    "CartanDatum",
    "LaurentPoly",
    "RationalFunction",
    "ThetaModule",
    "bar",
    "build_crystal",
    "builtin",
    "compute_global_basis",
    "ord",
    "qbinom",
    "qfact",
    "qint",
    "validate",
]
