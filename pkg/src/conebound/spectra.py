"""Closed-form bound-state energies and the allowed-angular-momentum tables.

Energies are returned in scaled units e = E m a^2 / hbar^2.  Three closed
forms are provided:

* imaginary order (mu^2 < 0, da Costa l = 0):
  e = -2 exp[(2/|mu|) arccot(lambda/|mu|) - 2 gamma_e],  arccot in (0, pi);
* real order 0 < mu < 1:  e = -2 B^(1/mu);
* zero order (mu = 0, alpha > 1):  e = -2 exp(2 alpha/(1 - alpha) - 2 gamma_e).

Here lambda = (1-alpha)/alpha + mu^2/2.  For the real order the bracket B
exists in two orientations.  ``"matching"`` (default) is the exact solution
of the small-argument matching condition solved by :mod:`conebound.saep`:

    B = Gamma(1+mu)/Gamma(1-mu) * (mu^2 + 2s + 2mu)/(mu^2 + 2s - 2mu),  s = (1-alpha)/alpha.

``"printed"`` is the reciprocal ratio, which solves the same condition with
lambda replaced by -lambda.  Both share the sign of B.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from . import saep
from .errors import (
    ConeError,
    DomainError,
    NoBoundStateError,
    NoRealClosedForm,
    NumericError,
    OutOfWindowError,
    WrongBranchError,
)
from .geometry import ConeGeometry, EffectiveMomentum, Theory, mu_squared
from .levels import EnergyLevel, Method, NoRoot
from .specfun import EULER_GAMMA

_EXP_MAX = 709.0
_EXP_MIN = -745.0

ORIENTATIONS = ("matching", "printed")


def _geom(alpha: float, geom: Optional[ConeGeometry]) -> ConeGeometry:
    return geom if geom is not None else ConeGeometry(alpha)


def _bounded_exp(exponent: float, what: str) -> float:
    if exponent > _EXP_MAX:
        raise NumericError(f"{what}: |e_scaled| = 2 exp({exponent:.6g}) overflows")
    if exponent < _EXP_MIN:
        raise NumericError(f"{what}: |e_scaled| = 2 exp({exponent:.6g}) underflows")
    return math.exp(exponent)


def energy_imaginary_order(alpha: float, l: int, geom: Optional[ConeGeometry] = None) -> EnergyLevel:
    """da Costa bound state for mu^2 < 0."""
    geom = _geom(alpha, geom)
    m = mu_squared(Theory.DACOSTA, alpha, l)
    if m.mu_squared >= 0:
        raise WrongBranchError(f"mu^2 = {m.mu_squared} >= 0: use energy_real_order / energy_mu_zero")
    nu = m.abs_mu
    if nu >= 1.0:
        raise OutOfWindowError(f"|mu| = {nu} >= 1")
    arg = (1.0 - alpha) / (alpha * nu) - 0.5 * nu
    arccot = 0.5 * math.pi - math.atan(arg)
    exponent = 2.0 / nu * arccot - 2.0 * EULER_GAMMA
    e = -2.0 * _bounded_exp(exponent, "imaginary-order energy")
    return EnergyLevel(Theory.DACOSTA, int(l), m, e, Method.CLOSED_FORM, geom.a)


def closed_form_bracket(mu: float, alpha: float, orientation: str = "matching") -> float:
    """The bracket B whose 1/mu power gives -e/2."""
    if orientation not in ORIENTATIONS:
        raise DomainError(f"unknown orientation {orientation!r}")
    s2 = 2.0 * (1.0 - alpha) / alpha
    minus = mu * mu + s2 - 2.0 * mu
    plus = mu * mu + s2 + 2.0 * mu
    num, den = (plus, minus) if orientation == "matching" else (minus, plus)
    gamma_ratio = math.exp(math.lgamma(1.0 + mu) - math.lgamma(1.0 - mu))
    if den == 0.0:
        return math.copysign(math.inf, num) * gamma_ratio
    return gamma_ratio * num / den


def energy_real_order(theory: Theory, alpha: float, l: int, geom: Optional[ConeGeometry] = None,
                      orientation: str = "matching") -> EnergyLevel:
    """Closed-form energy for 0 < mu < 1.

    Raises :class:`NoRealClosedForm` when B <= 0; the bracket is never raised
    to a fractional power as a complex number.
    """
    geom = _geom(alpha, geom)
    m = mu_squared(theory, alpha, l)
    if m.mu_squared <= 0:
        raise WrongBranchError(f"mu^2 = {m.mu_squared} <= 0: use energy_imaginary_order / energy_mu_zero")
    mu = m.mu
    if mu >= 1.0:
        raise OutOfWindowError(f"mu = {mu} >= 1")
    b = closed_form_bracket(mu, alpha, orientation)
    if not (b > 0 and math.isfinite(b)):
        raise NoRealClosedForm(f"bracket B = {b} is not positive and finite", b)
    e = -2.0 * _bounded_exp(math.log(b) / mu, "real-order energy")
    return EnergyLevel(theory, int(l), m, e, Method.CLOSED_FORM, geom.a)


def _mu_zero(alpha: float) -> float:
    if not alpha > 1.0:
        raise NoBoundStateError(f"alpha = {alpha} <= 1: the tip is not attractive at mu = 0")
    return -2.0 * _bounded_exp(2.0 * alpha / (1.0 - alpha) - 2.0 * EULER_GAMMA, "zero-order energy")


def energy_mu_zero(alpha: float, geom: Optional[ConeGeometry] = None) -> EnergyLevel:
    """Klein-Gordon l = 0 bound state from logarithmic matching of K_0."""
    geom = _geom(alpha, geom)
    m = mu_squared(Theory.KLEIN_GORDON, alpha, 0)
    return EnergyLevel(Theory.KLEIN_GORDON, 0, m, _mu_zero(alpha), Method.CLOSED_FORM, geom.a)


def closed_form_energy(theory: Theory, alpha: float, l: int, geom: Optional[ConeGeometry] = None,
                       orientation: str = "matching") -> EnergyLevel:
    """Pick the closed form matching the order of the (theory, alpha, l) state."""
    geom = _geom(alpha, geom)
    m = mu_squared(theory, alpha, l)
    if m.mu_squared < 0:
        return energy_imaginary_order(alpha, l, geom)
    if m.mu_squared == 0:
        if theory is Theory.KLEIN_GORDON:
            return energy_mu_zero(alpha, geom)
        # da Costa hits mu = 0 only at alpha = sqrt(4 l^2 + 1); same log matching.
        return EnergyLevel(theory, int(l), m, _mu_zero(alpha), Method.CLOSED_FORM, geom.a)
    return energy_real_order(theory, alpha, l, geom, orientation)


# --------------------------------------------------------------------------
# Classification


class Regime(enum.Enum):
    BOUND_NEGATIVE_MU2 = "BoundNegativeMu2"
    BOUND_REAL_MU = "BoundRealMu"
    ZERO_ORDER = "ZeroOrder"
    SCATTERING = "Scattering"
    OUT_OF_WINDOW = "OutOfWindow"


@dataclass(frozen=True)
class Window:
    lower: float
    upper: float
    lower_closed: bool = False
    upper_closed: bool = True

    def __contains__(self, alpha: float) -> bool:
        above = alpha >= self.lower if self.lower_closed else alpha > self.lower
        below = alpha <= self.upper if self.upper_closed else alpha < self.upper
        return above and below

    def as_dict(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper if math.isfinite(self.upper) else None,
            "lower_closed": self.lower_closed,
            "upper_closed": self.upper_closed,
        }


# Upper endpoints as listed for |l| = 1, 2, 3; larger |l| follow |l| = 1, 2.
_DACOSTA_UPPER_CLOSED = {1: True, 2: True, 3: False}


def l_window(theory: Theory, l: int) -> Window:
    """Range of alpha for which angular momentum ``l`` supports a bound state."""
    l = abs(int(l))
    if theory is Theory.KLEIN_GORDON:
        return Window(float(max(l, 1)), math.inf, False, False)
    if l == 0:
        raise DomainError("da Costa windows are defined for l != 0; l = 0 binds for every alpha != 1")
    n = 4 * l * l + 1
    return Window(math.sqrt(n / 5.0), math.sqrt(n), False, _DACOSTA_UPPER_CLOSED.get(l, True))


@dataclass(frozen=True)
class StateClass:
    l: int
    mu: EffectiveMomentum
    regime: Regime
    window: Optional[Window]
    bound: bool
    root_exists: Optional[bool]

    def as_dict(self) -> dict:
        d = self.mu.as_dict()
        d.update(
            regime=self.regime.value,
            window=self.window.as_dict() if self.window else None,
            bound=self.bound,
            root_exists=self.root_exists,
        )
        return d


@dataclass(frozen=True)
class BoundStateReport:
    theory: Theory
    alpha: float
    states: Tuple[StateClass, ...]
    allowed_l: Tuple[int, ...] = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "allowed_l", tuple(sorted(s.l for s in self.states if s.bound)))

    @property
    def regime(self) -> Dict[int, Regime]:
        return {s.l: s.regime for s in self.states}

    @property
    def windows(self) -> Dict[int, Optional[Window]]:
        return {s.l: s.window for s in self.states}

    def as_dict(self) -> dict:
        return {
            "theory": self.theory.value,
            "alpha": self.alpha,
            "allowed_l": list(self.allowed_l),
            "states": [s.as_dict() for s in self.states],
        }


def default_l_max(theory: Theory, alpha: float) -> int:
    if theory is Theory.KLEIN_GORDON:
        return int(math.floor(alpha)) + 1
    return int(math.ceil(math.sqrt(max(5.0 * alpha * alpha - 1.0, 0.0) / 4.0))) + 1


def _root_exists(theory: Theory, alpha: float, l: int) -> Optional[bool]:
    try:
        result = saep.solve_state(theory, alpha, l)
    except ConeError:
        return None
    return not isinstance(result, NoRoot)


def _classify_l(theory: Theory, alpha: float, l: int) -> Tuple[Regime, Optional[Window], bool]:
    m = mu_squared(theory, alpha, l)
    if alpha == 1.0:
        return Regime.SCATTERING, None, False
    if theory is Theory.DACOSTA:
        if l == 0:
            return Regime.BOUND_NEGATIVE_MU2, None, True
        if alpha < 1.0:
            return Regime.SCATTERING, l_window(theory, l), False
        window = l_window(theory, l)
        if alpha not in window:
            return Regime.OUT_OF_WINDOW, window, False
        regime = Regime.ZERO_ORDER if m.mu_squared == 0 else Regime.BOUND_REAL_MU
        return regime, window, True
    window = l_window(theory, l)
    if alpha < 1.0:
        return Regime.SCATTERING, window, False
    if l == 0:
        return Regime.ZERO_ORDER, window, True
    if alpha in window:
        return Regime.BOUND_REAL_MU, window, True
    return Regime.OUT_OF_WINDOW, window, False


def classify(theory: Theory, alpha: float, l_max: Optional[int] = None,
             with_roots: bool = True) -> BoundStateReport:
    """Allowed angular momenta and per-l regime labels.

    ``bound`` follows the analytic windows; ``root_exists`` is the verdict
    of the extension matching solver (None where it does not apply).
    """
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    if l_max is None:
        l_max = default_l_max(theory, alpha)
    states = []
    for l in range(-l_max, l_max + 1):
        regime, window, bound = _classify_l(theory, alpha, l)
        states.append(StateClass(
            l=l,
            mu=mu_squared(theory, alpha, l),
            regime=regime,
            window=window,
            bound=bound,
            root_exists=_root_exists(theory, alpha, l) if with_roots else None,
        ))
    return BoundStateReport(theory, alpha, tuple(states))
