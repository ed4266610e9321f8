"""Bound states of a nonrelativistic particle on a cone.

Three independent routes to the same spectrum: closed forms (:mod:`spectra`),
the self-adjoint-extension matching condition (:mod:`saep`) and an exactly
solvable finite-tip model (:mod:`oracle`).
"""

from .errors import (
    ConeError,
    ConfigurationError,
    DomainError,
    FitFailure,
    MultiplicityError,
    NoBoundStateError,
    NoRealClosedForm,
    NumericError,
    OutOfWindowError,
    PoleError,
    WrongBranchError,
)
from .geometry import ConeGeometry, EffectiveMomentum, OrderKind, Profile, Theory, mu_squared
from .levels import EnergyLevel, Method, NoRoot

__version__ = "0.1.0"

__all__ = [
    "ConeError",
    "ConfigurationError",
    "DomainError",
    "FitFailure",
    "MultiplicityError",
    "NoBoundStateError",
    "NoRealClosedForm",
    "NumericError",
    "OutOfWindowError",
    "PoleError",
    "WrongBranchError",
    "ConeGeometry",
    "EffectiveMomentum",
    "OrderKind",
    "Profile",
    "Theory",
    "mu_squared",
    "EnergyLevel",
    "Method",
    "NoRoot",
]
