"""Result records shared by the closed-form, extension and oracle solvers."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Tuple

from .errors import NumericError
from .geometry import EffectiveMomentum, Theory


class Method(enum.Enum):
    CLOSED_FORM = "closed_form"
    SAEP_ROOT = "saep_root"
    ORACLE = "oracle"


@dataclass(frozen=True)
class EnergyLevel:
    """A bound-state energy in units hbar^2/(m a^2).

    ``theory`` and ``l`` are ``None`` when a solver was called with a bare
    order rather than a (theory, l) pair.
    """

    theory: Optional[Theory]
    l: Optional[int]
    mu: EffectiveMomentum
    e_scaled: float
    method: Method
    a: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.e_scaled) and self.e_scaled < 0):
            raise NumericError(f"bound-state energy must be finite and negative, got {self.e_scaled}")

    def physical(self, hbar: float = 1.0, mass: float = 1.0) -> float:
        """Energy in physical units, e_scaled * hbar^2 / (m a^2)."""
        return self.e_scaled * hbar**2 / (mass * self.a**2)

    def as_dict(self) -> dict:
        return {
            "theory": self.theory.value if self.theory else None,
            "l": self.l,
            "mu2": self.mu.mu_squared,
            "order_kind": self.mu.order_kind.value,
            "e_scaled": self.e_scaled,
            "method": self.method.value,
            "a": self.a,
        }


@dataclass(frozen=True)
class NoRoot:
    """No bound state was found; ``residual_range`` brackets the residual's values."""

    reason: str
    residual_range: Optional[Tuple[float, float]] = None

    def as_dict(self) -> dict:
        return {"status": "no_root", "reason": self.reason,
                "residual_range": list(self.residual_range) if self.residual_range else None}
