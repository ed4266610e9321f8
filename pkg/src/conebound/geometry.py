"""Cone geometry, curvature fields and geometric potentials.

Natural units hbar = m = 1 are used throughout.  Lengths are measured in
units of the tip radius ``a`` wherever a scaled quantity is returned.

The line element of the cone is ``ds^2 = drho^2 + alpha^2 rho^2 dtheta^2``;
``alpha < 1`` is an ordinary (deficit) cone, ``alpha > 1`` a saddle-like
anti-cone, and ``alpha == 1`` the plane.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from scipy import integrate

from .errors import ConfigurationError, DomainError, NumericError

# Relative threshold below which a computed mu^2 is snapped to exactly zero,
# so that window endpoints such as alpha = sqrt(5) land on the zero order.
_MU2_SNAP = 64 * 2.220446049250313e-16


class Theory(enum.Enum):
    DACOSTA = "dacosta"
    KLEIN_GORDON = "kg"

    @classmethod
    def parse(cls, name: str) -> "Theory":
        key = name.strip().lower().replace("_", "-")
        aliases = {
            "dacosta": cls.DACOSTA,
            "da-costa": cls.DACOSTA,
            "schrodinger": cls.DACOSTA,
            "kg": cls.KLEIN_GORDON,
            "klein-gordon": cls.KLEIN_GORDON,
            "kleingordon": cls.KLEIN_GORDON,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ConfigurationError(f"unknown theory {name!r}") from None


@dataclass(frozen=True)
class ConeGeometry:
    """Cone parameter ``alpha`` and tip/regulator radius ``a``."""

    alpha: float
    a: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise DomainError(f"alpha must be positive and finite, got {self.alpha}")
        if not (math.isfinite(self.a) and self.a > 0):
            raise DomainError(f"a must be positive and finite, got {self.a}")

    @property
    def is_deficit(self) -> bool:
        return self.alpha < 1.0

    @property
    def is_plane(self) -> bool:
        return self.alpha == 1.0

    @property
    def is_proficit(self) -> bool:
        return self.alpha > 1.0

    @property
    def regime(self) -> str:
        if self.alpha < 1.0:
            return "deficit"
        if self.alpha > 1.0:
            return "proficit"
        return "plane"

    def opening_angle(self) -> float:
        """Half opening angle beta with alpha = sin(beta), or sinh(beta) if alpha > 1."""
        if self.alpha <= 1.0:
            return math.asin(self.alpha)
        return math.asinh(self.alpha)


class OrderKind(enum.Enum):
    REAL = "RealOrder"
    IMAGINARY = "ImaginaryOrder"
    ZERO = "ZeroOrder"


@dataclass(frozen=True)
class EffectiveMomentum:
    """Order of the radial Bessel problem for angular momentum ``l``.

    ``value`` is ``mu`` for a real order, ``|mu|`` for an imaginary order
    and 0 for the zero order.
    """

    l: int
    mu_squared: float

    @property
    def order_kind(self) -> OrderKind:
        if self.mu_squared > 0:
            return OrderKind.REAL
        if self.mu_squared < 0:
            return OrderKind.IMAGINARY
        return OrderKind.ZERO

    @property
    def value(self) -> float:
        return math.sqrt(abs(self.mu_squared))

    @property
    def mu(self) -> float:
        """Real order; raises for an imaginary order."""
        if self.mu_squared < 0:
            raise DomainError(f"mu^2 = {self.mu_squared} < 0 has no real order")
        return math.sqrt(self.mu_squared)

    @property
    def abs_mu(self) -> float:
        return self.value

    def as_dict(self) -> dict:
        return {
            "l": self.l,
            "mu2": self.mu_squared,
            "order_kind": self.order_kind.value,
            "order": self.value,
        }


def _check_rho(rho: float) -> None:
    if not rho > 0:
        raise DomainError(f"rho must be positive, got {rho}")


def mean_curvature(geom: ConeGeometry, rho: float) -> float:
    """Mean curvature sqrt|1 - alpha^2| / (2 alpha rho) of the cone."""
    _check_rho(rho)
    return math.sqrt(abs(1.0 - geom.alpha**2)) / (2.0 * geom.alpha * rho)


def delta_strength(geom: ConeGeometry) -> float:
    """Coefficient (1 - alpha)/alpha of delta(rho)/rho in the Gaussian curvature."""
    return (1.0 - geom.alpha) / geom.alpha


def geometric_potential(theory: Theory, geom: ConeGeometry, rho: float) -> float:
    """Regular (rho > 0) part of the geometric potential, in units hbar^2/m.

    The delta-function piece at the tip is reported by :func:`delta_strength`.
    """
    _check_rho(rho)
    if theory is Theory.KLEIN_GORDON:
        return 0.0
    alpha = geom.alpha
    return -0.5 * abs(1.0 - alpha**2) / (4.0 * alpha**2 * rho**2)


def mu_squared(theory: Theory, alpha: float, l: int) -> EffectiveMomentum:
    """Effective angular momentum of the radial problem.

    Klein-Gordon: ``l^2/alpha^2``.  da Costa: ``l^2/alpha^2 - |1-alpha^2|/(4 alpha^2)``,
    which covers both the deficit and the proficit cone.
    """
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    l = int(l)
    centrifugal = l * l / alpha**2
    if theory is Theory.KLEIN_GORDON:
        return EffectiveMomentum(l, centrifugal)
    shift = abs(1.0 - alpha**2) / (4.0 * alpha**2)
    value = centrifugal - shift
    if abs(value) <= _MU2_SNAP * max(centrifugal, shift):
        value = 0.0
    return EffectiveMomentum(l, value)


class Profile(enum.Enum):
    UNIFORM_DISK = "uniform_disk"

    @classmethod
    def parse(cls, name) -> "Profile":
        if isinstance(name, cls):
            return name
        try:
            return cls(str(name).strip().lower().replace("-", "_"))
        except ValueError:
            raise ConfigurationError(f"unsupported regulator profile {name!r}") from None


@dataclass(frozen=True)
class RegulatorModel:
    """Short-range potential U_short on [0, a] replacing the tip curvature.

    Normalised so that ``int_0^a U rho drho = (1 - alpha)/alpha``.
    """

    profile: Profile
    alpha: float
    a: float
    strength: float

    def potential(self, rho: float) -> float:
        if rho < 0:
            raise DomainError(f"rho must be non-negative, got {rho}")
        if rho >= self.a:
            return 0.0
        if self.profile is Profile.UNIFORM_DISK:
            return self.strength
        raise ConfigurationError(f"unsupported regulator profile {self.profile!r}")

    @property
    def interior_strength(self) -> float:
        """Dimensionless well depth c = -U0 a^2 = 2(alpha - 1)/alpha (uniform disk)."""
        if self.profile is not Profile.UNIFORM_DISK:
            raise ConfigurationError("interior strength is defined for the uniform disk only")
        return -self.strength * self.a**2


def build_regulator(geom: ConeGeometry, profile=Profile.UNIFORM_DISK) -> RegulatorModel:
    profile = Profile.parse(profile)
    if profile is Profile.UNIFORM_DISK:
        u0 = 2.0 * (1.0 - geom.alpha) / (geom.alpha * geom.a**2)
        return RegulatorModel(profile, geom.alpha, geom.a, u0)
    raise ConfigurationError(f"unsupported regulator profile {profile!r}")


def radial_moment(reg: RegulatorModel) -> float:
    """int_0^a U_short(rho) rho drho, evaluated analytically."""
    if reg.profile is Profile.UNIFORM_DISK:
        return 0.5 * reg.strength * reg.a**2
    raise ConfigurationError(f"unsupported regulator profile {reg.profile!r}")


def gauss_bonnet_analytic(reg: RegulatorModel) -> float:
    """Surface integral of U_short over the cone measure alpha rho drho dtheta."""
    return 2.0 * math.pi * reg.alpha * radial_moment(reg)


def gauss_bonnet_quadrature(reg: RegulatorModel, tol: float = 1e-12) -> float:
    value, err = integrate.quad(
        lambda rho: reg.potential(rho) * reg.alpha * rho,
        0.0,
        reg.a,
        epsabs=tol,
        epsrel=tol,
        limit=200,
    )
    total = 2.0 * math.pi * value
    target = 2.0 * math.pi * (1.0 - reg.alpha)
    if not math.isfinite(total) or err > 1e-8:
        raise NumericError(
            f"Gauss-Bonnet quadrature did not converge (error estimate {err:.3e})",
            residual=total - target,
        )
    return total


def gauss_bonnet_total(reg: RegulatorModel, method: str = "analytic") -> float:
    """Total curvature carried by the regulator; equals 2 pi (1 - alpha)."""
    if method == "analytic":
        return gauss_bonnet_analytic(reg)
    if method == "quadrature":
        return gauss_bonnet_quadrature(reg)
    raise ConfigurationError(f"unknown Gauss-Bonnet method {method!r}")
