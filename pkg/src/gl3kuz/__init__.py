"""Numerical and exact-arithmetic verification of the weight-one GL(3) Kuznetsov formula and its ingredients."""

from .errors import Gl3KuzError, PreconditionError, TailTooLarge
from .group import WEYL_GROUP, SpectralParameter, TorusPoint, WeylElement, weyl_act

__version__ = "0.1.0"

__all__ = ["Gl3KuzError", "PreconditionError", "TailTooLarge", "WEYL_GROUP", "SpectralParameter", "TorusPoint",
           "WeylElement", "weyl_act", "__version__"]
