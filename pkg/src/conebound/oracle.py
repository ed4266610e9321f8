"""Regularized finite-tip model solved exactly by Bessel matching.

The delta-function curvature at the tip is replaced by a uniform disk of
radius a carrying the same Gauss-Bonnet charge.  In scaled units the radial
equation inside the disk reads

    Phi'' + Phi'/rho - mu^2 Phi/rho^2 + (c - x^2) Phi = 0,   c = 2(alpha - 1)/alpha,

with x = kappa a and e_scaled = -x^2/2.  For c > 0 the regular interior
solution is J_mu(q rho), q a = sqrt(c - x^2); outside it is K_mu(x rho).
Only the tip curvature is regularized: the inverse-square term (including
the da Costa mean-curvature shift) is kept exact, so over-critical
mu^2 < 0 states are excluded.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass
from typing import Iterable, List, Optional, Sequence, Union

import numpy as np
from scipy import special

from . import saep, spectra
from .errors import DomainError, NoBoundStateError, NoRealClosedForm, OutOfWindowError, PoleError
from .geometry import ConeGeometry, EffectiveMomentum, Profile, RegulatorModel, Theory, build_regulator, mu_squared
from .levels import EnergyLevel, Method, NoRoot
from .roots import bisect, sign_changes
from .specfun import BesselOrder, log_deriv_k

SCAN_POINTS = 2048
SCAN_EPS = 1e-9
ROOT_XTOL = 1e-13
# Repulsive or flat tips: scan this multiple of max(1, sqrt|c|) for crossings.
_REPULSIVE_SPAN = 20.0


@dataclass(frozen=True)
class RegularizedEigenproblem:
    reg: RegulatorModel
    mu: float
    theory: Optional[Theory] = None
    l: Optional[int] = None

    def __post_init__(self):
        if not (math.isfinite(self.mu) and self.mu >= 0):
            raise DomainError(f"oracle needs a real order mu >= 0, got {self.mu}")

    @property
    def c(self) -> float:
        return self.reg.interior_strength

    @property
    def bracket(self):
        if self.c > 0:
            return (0.0, math.sqrt(self.c))
        return (0.0, _REPULSIVE_SPAN * max(1.0, math.sqrt(-self.c)))

    @classmethod
    def for_state(cls, theory: Theory, alpha: float, l: int, geom: Optional[ConeGeometry] = None,
                  profile=Profile.UNIFORM_DISK) -> "RegularizedEigenproblem":
        geom = geom or ConeGeometry(alpha)
        m = mu_squared(theory, alpha, l)
        if m.mu_squared < 0:
            raise DomainError(
                f"mu^2 = {m.mu_squared} < 0: over-critical inverse-square attraction is not regularized"
            )
        return cls(build_regulator(geom, profile), m.mu, theory, int(l))


def _check_profile(prob: RegularizedEigenproblem) -> None:
    if prob.reg.profile is not Profile.UNIFORM_DISK:
        raise DomainError(f"oracle interior is solved for the uniform disk only, not {prob.reg.profile}")


def interior_log_deriv(prob: RegularizedEigenproblem, x: float) -> float:
    """q a J_mu'(q a)/J_mu(q a) (or the I_mu analogue for a repulsive tip)."""
    _check_profile(prob)
    mu, c = prob.mu, prob.c
    if c > 0:
        if not 0 < x < math.sqrt(c):
            raise DomainError(f"x = {x} outside (0, sqrt(c) = {math.sqrt(c)})")
        z = math.sqrt(c - x * x)
        j = special.jv(mu, z)
        if j == 0.0 or abs(j) < 1e-15 * abs(special.jv(mu + 1.0, z)):
            raise PoleError(f"J_{mu} vanishes at q a = {z}: node on the disk boundary", x)
        return float(mu - z * special.jv(mu + 1.0, z) / j)
    if not x > 0:
        raise DomainError(f"x must be positive, got {x}")
    p = math.sqrt(x * x - c)
    return float(mu + p * special.ive(mu + 1.0, p) / special.ive(mu, p))


def exterior_log_deriv(mu: float, x: float) -> float:
    """x K_mu'(x)/K_mu(x)."""
    return log_deriv_k(BesselOrder.real(mu), x)


def _matching(prob: RegularizedEigenproblem, x):
    """Cross-multiplied mismatch: zero at a match, finite at nodes of J_mu.

    Each term is scaled by a positive factor, which leaves its sign alone.
    Points where the Bessel values overflow, or where both interior terms
    underflow to zero, carry no sign information and come back as NaN.
    """
    mu, c = prob.mu, prob.c
    x = np.asarray(x, dtype=float)
    with np.errstate(invalid="ignore", over="ignore"):
        k = special.kve(mu, x)
        xdk = mu * k - x * special.kve(mu + 1.0, x)
        if c > 0:
            z = np.sqrt(np.maximum(c - x * x, 0.0))
            j = special.jv(mu, z)
            zdj = mu * j - z * special.jv(mu + 1.0, z)
        else:
            z = np.sqrt(x * x - c)
            j = special.ive(mu, z)
            zdj = mu * j + z * special.ive(mu + 1.0, z)
        f = zdj * k - xdk * j
    blind = ~np.isfinite(f) | ((j == 0.0) & (zdj == 0.0))
    return np.where(blind, np.nan, f)


def matching_function(prob: RegularizedEigenproblem, x: float) -> float:
    _check_profile(prob)
    return float(_matching(prob, x))


def eigen_solve(prob: RegularizedEigenproblem):
    """All bound states of the regularized problem, deepest first, or NoRoot."""
    _check_profile(prob)
    lo, hi = prob.bracket
    xs = np.linspace(lo + SCAN_EPS, hi - SCAN_EPS, SCAN_POINTS)
    fs = _matching(prob, xs)
    brackets = sign_changes(xs.tolist(), fs.tolist())
    if not brackets:
        finite = fs[np.isfinite(fs)]
        rng = (float(finite.min()), float(finite.max())) if finite.size else None
        why = "no crossing" if prob.c > 0 else "tip is repulsive or flat (c <= 0)"
        return NoRoot(f"interior and exterior log-derivatives never cross: {why}", rng)
    f = lambda x: float(_matching(prob, x))
    roots = sorted({bisect(f, b0, b1, xtol=ROOT_XTOL) for b0, b1 in brackets}, reverse=True)
    if prob.theory is not None:
        mom = mu_squared(prob.theory, prob.reg.alpha, prob.l)
    else:
        mom = EffectiveMomentum(0, prob.mu * prob.mu)
    return [EnergyLevel(prob.theory, prob.l, mom, -0.5 * x * x, Method.ORACLE, prob.reg.a)
            for x in roots]


def solve_state(theory: Theory, alpha: float, l: int, geom: Optional[ConeGeometry] = None,
                profile=Profile.UNIFORM_DISK):
    return eigen_solve(RegularizedEigenproblem.for_state(theory, alpha, l, geom, profile))


# --------------------------------------------------------------------------
# Comparison harness


STATUS_OK = "ok"
STATUS_NO_ROOT = "no_root"
STATUS_NO_REAL = "no_real_closed_form"
STATUS_OUT = "out_of_window"
STATUS_EXCLUDED = "excluded"


@dataclass(frozen=True)
class ConvergenceRow:
    theory: str
    alpha: float
    l: int
    profile: str
    mu2: float
    order_kind: str
    e_closed_form: Optional[float]
    closed_form_status: str
    e_saep: Optional[float]
    saep_status: str
    e_oracle: Optional[float]
    oracle_status: str
    n_oracle_roots: int
    disc_saep_closed: Optional[float]
    disc_oracle_closed: Optional[float]
    disc_oracle_saep: Optional[float]


def relative_gap(x: Optional[float], y: Optional[float]) -> Optional[float]:
    if x is None or y is None:
        return None
    scale = max(abs(x), abs(y))
    return 0.0 if scale == 0 else abs(x - y) / scale


def closed_form_outcome(theory, alpha, l, geom):
    try:
        return spectra.closed_form_energy(theory, alpha, l, geom).e_scaled, STATUS_OK
    except NoRealClosedForm:
        return None, STATUS_NO_REAL
    except OutOfWindowError:
        return None, STATUS_OUT
    except NoBoundStateError:
        return None, STATUS_NO_ROOT


def saep_outcome(theory, alpha, l, geom):
    try:
        res = saep.solve_state(theory, alpha, l, geom)
    except OutOfWindowError:
        return None, STATUS_OUT
    if isinstance(res, NoRoot):
        return None, STATUS_NO_ROOT
    return res.e_scaled, STATUS_OK


def oracle_outcome(theory, alpha, l, geom, profile=Profile.UNIFORM_DISK):
    """(ground-state energy, status, number of roots)."""
    if mu_squared(theory, alpha, l).mu_squared < 0:
        return None, STATUS_EXCLUDED, 0
    res = solve_state(theory, alpha, l, geom, profile)
    if isinstance(res, NoRoot):
        return None, STATUS_NO_ROOT, 0
    return res[0].e_scaled, STATUS_OK, len(res)


def _as_list(v) -> list:
    if isinstance(v, (int, float)):
        return [v]
    return list(v)


def convergence_study(theory: Theory, alpha: Union[float, Iterable[float]], l: Union[int, Iterable[int]],
                      profiles: Sequence = (Profile.UNIFORM_DISK,), a: float = 1.0) -> List[ConvergenceRow]:
    """Closed form, extension root and oracle side by side for each (profile, alpha, l)."""
    rows = []
    for profile in profiles:
        profile = Profile.parse(profile)
        for al in sorted(float(x) for x in _as_list(alpha)):
            geom = ConeGeometry(al, a)
            for ll in sorted(int(x) for x in _as_list(l)):
                m = mu_squared(theory, al, ll)
                e_cf, s_cf = closed_form_outcome(theory, al, ll, geom)
                e_sa, s_sa = saep_outcome(theory, al, ll, geom)
                e_or, s_or, n_or = oracle_outcome(theory, al, ll, geom, profile)
                rows.append(ConvergenceRow(
                    theory=theory.value, alpha=al, l=ll, profile=profile.value,
                    mu2=m.mu_squared, order_kind=m.order_kind.value,
                    e_closed_form=e_cf, closed_form_status=s_cf,
                    e_saep=e_sa, saep_status=s_sa,
                    e_oracle=e_or, oracle_status=s_or, n_oracle_roots=n_or,
                    disc_saep_closed=relative_gap(e_sa, e_cf),
                    disc_oracle_closed=relative_gap(e_or, e_cf),
                    disc_oracle_saep=relative_gap(e_or, e_sa),
                ))
    return rows


def format_float(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool) or isinstance(v, int):
        return str(v)
    return format(v, ".17g")


def convergence_csv(rows: Sequence[ConvergenceRow]) -> str:
    buf = io.StringIO()
    fields = list(ConvergenceRow.__dataclass_fields__)
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(fields)
    for r in rows:
        d = asdict(r)
        w.writerow([format_float(d[f]) if not isinstance(d[f], str) else d[f] for f in fields])
    return buf.getvalue()


def write_convergence_csv(rows: Sequence[ConvergenceRow], path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(convergence_csv(rows))
