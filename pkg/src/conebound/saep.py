"""Self-adjoint extension of the radial operator and the energy matching.

The radial operator  -(1/2)[rho^-1 d/drho(rho d/drho) - mu^2/rho^2]  on
L^2(R+, rho drho) has deficiency indices (1, 1) for 0 <= mu < 1.  The
one-parameter family of extensions is labelled by eta (mod 2 pi), which is
fixed here by matching the logarithmic derivative of the static solution
inside the regulator,

    lambda = (1 - alpha)/alpha + mu^2/2,

to the logarithmic derivative of the boundary function Omega_eta at rho = a.
Energies then follow from matching the small-argument form of
K_mu(kappa rho) to the same value.

All energies are computed in scaled units (a = 1); ``k0`` defaults to
1/a^2 so that the scaled computation does not depend on ``a`` at all.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy import integrate, special

from .errors import DomainError, FitFailure, MultiplicityError, OutOfWindowError
from .geometry import ConeGeometry, EffectiveMomentum, Theory, mu_squared
from .levels import EnergyLevel, Method, NoRoot
from .roots import bisect_secant, sign_changes
from .specfun import EULER_GAMMA

LOG_E_MIN = -700.0
LOG_E_MAX = math.log(1e8)
ETA_SCAN = 64
ENERGY_SCAN = 256
ETA_CONSISTENCY = 1e-9


@dataclass(frozen=True)
class ExtensionParams:
    """Extension parameter eta (mod 2 pi) and deficiency scale k0 (hbar = m = 1)."""

    eta: float
    k0: float

    def __post_init__(self):
        if not self.k0 > 0:
            raise DomainError(f"k0 must be positive, got {self.k0}")
        object.__setattr__(self, "eta", math.fmod(self.eta, 2 * math.pi) % (2 * math.pi))

    @property
    def epsilon(self) -> complex:
        return 2j * self.k0


@dataclass(frozen=True)
class MatchingTarget:
    lam: float


def lambda_value(alpha: float, mu2: float) -> float:
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    return (1.0 - alpha) / alpha + 0.5 * mu2


def lambda_target(alpha: float, mu: EffectiveMomentum) -> MatchingTarget:
    """Log-derivative a Phi'(a)/Phi(a) of the static interior solution."""
    return MatchingTarget(lambda_value(alpha, mu.mu_squared))


# --------------------------------------------------------------------------
# Deficiency subspaces


@dataclass(frozen=True)
class DeficiencyReport:
    mu: float
    norm_plus: float
    norm_minus: float
    indices: Tuple[int, int]
    divergent: bool
    small_rho_exponent: float

    @property
    def finite(self) -> bool:
        return not self.divergent


def _log_panel(f, lo: float, hi: float) -> float:
    # int_lo^hi f(rho) rho drho with rho = e^u.
    val, _, *_ = integrate.quad(
        lambda u: f(math.exp(u)) * math.exp(2 * u),
        math.log(lo), math.log(hi), epsabs=0.0, epsrel=1e-11, limit=200, full_output=1,
    )
    return val


def _k_norm(mu: float, scale: complex, decades: int) -> Tuple[float, float, bool]:
    def density(rho):
        return abs(special.kv(mu, rho * scale)) ** 2

    r_far = 40.0 / scale.real
    bulk = _log_panel(density, 1.0, max(r_far, 2.0))
    panels = [_log_panel(density, 10.0 ** -(k + 1), 10.0**-k) for k in range(decades)]
    q1 = panels[-1] / panels[-2]
    q0 = panels[-2] / panels[-3]
    exponent = -math.log10(q1)
    divergent = not (q1 < 1.0 - 1e-6 and q0 < 1.0 - 1e-6)
    if divergent:
        return math.inf, exponent, True
    tail = panels[-1] * q1 / (1.0 - q1)
    return bulk + sum(panels) + tail, exponent, False


def deficiency_subspaces_check(mu: float, k0: float = 1.0, decades: int = 12) -> DeficiencyReport:
    """Square-integrability of K_mu(rho sqrt(-+eps)), eps = 2 i k0.

    The norm is integrated panel by panel over decades toward rho -> 0; the
    ratio of successive panels estimates the small-rho power 2 - 2 mu of the
    density |K|^2 rho and, when below one, extrapolates the remaining tail.
    """
    if not (math.isfinite(mu) and mu >= 0):
        raise DomainError(f"order must be a non-negative real, got {mu}")
    if not k0 > 0:
        raise DomainError(f"k0 must be positive, got {k0}")
    eps = 2j * k0
    n_plus, p_plus, div_plus = _k_norm(mu, cmath.sqrt(-eps), decades)
    n_minus, p_minus, div_minus = _k_norm(mu, cmath.sqrt(eps), decades)
    divergent = div_plus or div_minus
    return DeficiencyReport(
        mu=mu,
        norm_plus=n_plus,
        norm_minus=n_minus,
        indices=(0, 0) if divergent else (1, 1),
        divergent=divergent,
        small_rho_exponent=0.5 * (p_plus + p_minus),
    )


# --------------------------------------------------------------------------
# Boundary function Omega_eta


def _check_mu_open(mu: float) -> None:
    if not 0.0 < mu < 1.0:
        raise OutOfWindowError(f"mu = {mu} outside (0, 1); use the mu = 0 logarithmic path or none")


def _small_x_terms(mu: float, z: complex) -> Tuple[complex, complex]:
    lead = z ** (-mu) / (2.0 ** (-mu) * math.gamma(1.0 - mu))
    sub = z**mu / (2.0**mu * math.gamma(1.0 + mu))
    return lead, sub


def _omega_parts(params: ExtensionParams, mu: float, rho: float) -> Tuple[complex, complex]:
    """Omega_eta(rho) and rho dOmega_eta/drho."""
    _check_mu_open(mu)
    if not rho > 0:
        raise DomainError(f"rho must be positive, got {rho}")
    eps = params.epsilon
    phase = cmath.exp(1j * params.eta)
    lm, sm = _small_x_terms(mu, rho * cmath.sqrt(-eps))
    lp, sp = _small_x_terms(mu, rho * cmath.sqrt(eps))
    omega = (lm - sm) + phase * (lp - sp)
    rho_domega = -mu * (lm + sm) - phase * mu * (lp + sp)
    return omega, rho_domega


def omega_eta(params: ExtensionParams, mu: float, rho: float) -> complex:
    """Small-argument combination K(rho sqrt(-eps)) + e^{i eta} K(rho sqrt(eps)), bare brackets."""
    return _omega_parts(params, mu, rho)[0]


def omega_log_deriv(params: ExtensionParams, mu: float, rho: float) -> complex:
    """Dimensionless log-derivative rho Omega'(rho) / Omega(rho)."""
    omega, rho_domega = _omega_parts(params, mu, rho)
    return rho_domega / omega


def _default_k0(geom: ConeGeometry, k0: Optional[float]) -> float:
    return 1.0 / geom.a**2 if k0 is None else float(k0)


def fit_eta(alpha: float, mu: float, geom: ConeGeometry, k0: Optional[float] = None) -> ExtensionParams:
    """Extension parameter reproducing the interior log-derivative at rho = a.

    The root search runs on Re[e^{-i eta/2} (a Omega' - lambda Omega)], which
    is free of the poles of Omega'/Omega and changes sign exactly once on
    [0, 2 pi).  The imaginary part of a Omega'/Omega at the fitted eta is
    required to vanish to ``ETA_CONSISTENCY``.
    """
    _check_mu_open(mu)
    k0 = _default_k0(geom, k0)
    lam = lambda_value(alpha, mu * mu)
    a = geom.a

    def residual(eta: float) -> float:
        params = ExtensionParams(eta, k0)
        omega, rho_domega = _omega_parts(params, mu, a)
        return (cmath.exp(-0.5j * eta) * (rho_domega - lam * omega)).real

    etas = np.linspace(0.0, 2.0 * math.pi, ETA_SCAN + 1)
    values = [residual(float(e)) for e in etas]
    brackets = sign_changes(list(etas), values)
    roots = []
    for lo, hi in brackets:
        eta = bisect_secant(residual, lo, hi, xtol=1e-15) if lo != hi else lo
        eta = ExtensionParams(eta, k0).eta
        # eta = 0 and eta = 2 pi are the same extension.
        if not any(min(abs(eta - r), 2 * math.pi - abs(eta - r)) < 1e-12 for r in roots):
            roots.append(eta)
    curve = list(zip(etas.tolist(), values))
    if len(roots) != 1:
        raise FitFailure(f"expected one extension parameter, found {len(roots)}", residual_curve=curve)
    params = ExtensionParams(roots[0], k0)
    ld = omega_log_deriv(params, mu, a)
    if abs(ld.imag) > ETA_CONSISTENCY or abs(ld.real - lam) > ETA_CONSISTENCY * max(1.0, abs(lam)):
        raise FitFailure(
            f"fitted eta={params.eta} leaves residual {ld - lam}", residual_curve=curve
        )
    return params


# --------------------------------------------------------------------------
# Energy matching for 0 < mu < 1


def matching_lhs(e_scaled: float, mu: float) -> float:
    """a Phi'/Phi at rho = a for Phi = small-x form of K_mu(sqrt(-2E) rho).

    Equals mu (A + G)/(A - G) with A = Gamma(1-mu) (-e)^mu, G = 2^mu Gamma(1+mu).
    """
    _check_mu_open(mu)
    if not e_scaled < 0:
        raise DomainError(f"bound-state energy must be negative, got {e_scaled}")
    return _lhs_log(math.log(-e_scaled), mu)


def _pole_log_energy(mu: float) -> float:
    return math.log(2.0) + (math.lgamma(1.0 + mu) - math.lgamma(1.0 - mu)) / mu


def _lhs_log(t: float, mu: float) -> float:
    # A/G = exp(mu (t - t_pole)), evaluated without forming A or G.
    r = math.exp(min(mu * (t - _pole_log_energy(mu)), 700.0))
    if r == 1.0:
        return math.inf
    return mu * (r + 1.0) / (r - 1.0)


def pole_energy(mu: float) -> float:
    """Scaled energy at which A = G and the matching left side has its pole."""
    _check_mu_open(mu)
    return -math.exp(_pole_log_energy(mu))


def matching_residual(e_scaled: float, mu: float, alpha: float, geom: Optional[ConeGeometry] = None) -> float:
    """LHS(e) - lambda.  Returns +-inf at the pole A = G (sign from the left side)."""
    return matching_lhs(e_scaled, mu) - lambda_value(alpha, mu * mu)


def _solve_log_energy(residual, segments, xtol=1e-12):
    """Scan each (lo, hi) segment of log|e| for sign changes and refine them."""
    found = []
    lo_res, hi_res = math.inf, -math.inf
    for lo, hi in segments:
        if not hi > lo:
            continue
        ts = np.linspace(lo, hi, ENERGY_SCAN + 1).tolist()
        fs = [residual(t) for t in ts]
        finite = [f for f in fs if math.isfinite(f)]
        if finite:
            lo_res, hi_res = min(lo_res, min(finite)), max(hi_res, max(finite))
        for b0, b1 in sign_changes(ts, fs):
            found.append(b0 if b0 == b1 else bisect_secant(residual, b0, b1, xtol=xtol))
    return found, (lo_res, hi_res) if math.isfinite(lo_res) else None


def _level(theory, l, mu2, t, a) -> EnergyLevel:
    return EnergyLevel(theory, l, EffectiveMomentum(l if l is not None else 0, mu2),
                       -math.exp(t), Method.SAEP_ROOT, a)


def solve_energy(mu: float, alpha: float, geom: Optional[ConeGeometry] = None, *,
                 theory: Optional[Theory] = None, l: Optional[int] = None,
                 k0: Optional[float] = None, branch: str = "physical"):
    """Bound-state energy from the extension matching, or :class:`NoRoot`.

    The right-hand side is the log-derivative of Omega_eta at the fitted eta.
    The search runs in t = ln|e_scaled| on (ln 1e-304, ln 1e8), split at the
    pole A = G.  ``branch="physical"`` keeps only the segment below the pole,
    where the small-argument form of K_mu is positive; ``"all"`` searches
    both segments.
    """
    _check_mu_open(mu)
    geom = geom or ConeGeometry(alpha)
    if branch not in ("physical", "all"):
        raise DomainError(f"unknown branch {branch!r}")
    scaled = ConeGeometry(alpha, 1.0)
    params = fit_eta(alpha, mu, scaled, None if k0 is None else k0 * geom.a**2)
    target = omega_log_deriv(params, mu, 1.0).real

    t_pole = _pole_log_energy(mu)
    gap = 1e-9 * max(1.0, abs(t_pole))
    segments = [(LOG_E_MIN, min(t_pole - gap, LOG_E_MAX))]
    if branch == "all":
        segments.append((max(t_pole + gap, LOG_E_MIN), LOG_E_MAX))

    roots, res_range = _solve_log_energy(lambda t: _lhs_log(t, mu) - target, segments)
    if len(roots) > 1:
        raise MultiplicityError(f"{len(roots)} sign changes of the matching residual", roots)
    if not roots:
        return NoRoot(f"matching residual has no sign change (lambda={target:.6g}, mu={mu:.6g})", res_range)
    return _level(theory, l, mu * mu, roots[0], geom.a)


# --------------------------------------------------------------------------
# mu = 0: logarithmic matching


def matching_residual_mu_zero(e_scaled: float, alpha: float, kernel: str = "asymptotic") -> float:
    """x K0'(x)/K0(x) - lambda at x = sqrt(-2 e).

    ``asymptotic`` uses K0 ~ -(ln(x/2) + gamma_e), giving 1/(ln(x/2) + gamma_e);
    ``exact`` uses -x K1(x)/K0(x).
    """
    if not e_scaled < 0:
        raise DomainError(f"bound-state energy must be negative, got {e_scaled}")
    return _mu_zero_residual(math.log(-e_scaled), lambda_value(alpha, 0.0), kernel)


def _mu_zero_residual(t: float, lam: float, kernel: str) -> float:
    log_half_x = 0.5 * (t - math.log(2.0))
    if kernel == "asymptotic":
        d = log_half_x + EULER_GAMMA
        return (math.inf if d == 0 else 1.0 / d) - lam
    if kernel == "exact":
        x = 2.0 * math.exp(log_half_x)
        return float(-x * special.k1e(x) / special.k0e(x)) - lam
    raise DomainError(f"unknown kernel {kernel!r}")


def solve_energy_mu_zero(alpha: float, geom: Optional[ConeGeometry] = None, *,
                         theory: Optional[Theory] = Theory.KLEIN_GORDON, l: Optional[int] = 0,
                         kernel: str = "asymptotic"):
    """mu = 0 bound state from log-derivative matching.

    With the asymptotic kernel only x < 2 exp(-gamma_e), where the
    logarithmic form of K0 stays positive, is searched.
    """
    geom = geom or ConeGeometry(alpha)
    lam = lambda_value(alpha, 0.0)
    if kernel == "asymptotic":
        t_pole = math.log(2.0) - 2.0 * EULER_GAMMA
        segments = [(LOG_E_MIN, t_pole - 1e-9)]
    else:
        segments = [(LOG_E_MIN, LOG_E_MAX)]
    roots, res_range = _solve_log_energy(lambda t: _mu_zero_residual(t, lam, kernel), segments)
    if len(roots) > 1:
        raise MultiplicityError(f"{len(roots)} sign changes of the mu=0 residual", roots)
    if not roots:
        return NoRoot(f"mu=0 matching has no sign change (lambda={lam:.6g})", res_range)
    return _level(theory, l, 0.0, roots[0], geom.a)


# --------------------------------------------------------------------------
# mu^2 < 0: imaginary order, principal branch


def _imag_phase(nu: float, exact_phase: bool) -> float:
    if exact_phase:
        return float(special.loggamma(1.0 + 1j * nu).imag)
    return -EULER_GAMMA * nu


def matching_residual_imag(e_scaled: float, abs_mu: float, alpha: float, exact_phase: bool = False) -> float:
    """nu cot(nu ln(x/2) - phi) - lambda for K_{i nu}, x = sqrt(-2 e).

    phi = arg Gamma(1 + i nu); by default its small-nu form -gamma_e nu.
    """
    if not e_scaled < 0:
        raise DomainError(f"bound-state energy must be negative, got {e_scaled}")
    if not abs_mu > 0:
        raise DomainError(f"imaginary order needs |mu| > 0, got {abs_mu}")
    lam = lambda_value(alpha, -abs_mu * abs_mu)
    phi = _imag_phase(abs_mu, exact_phase)
    theta = abs_mu * 0.5 * (math.log(-e_scaled) - math.log(2.0)) - phi
    return abs_mu / math.tan(theta) - lam


def solve_energy_imag(abs_mu: float, alpha: float, geom: Optional[ConeGeometry] = None, *,
                      theory: Optional[Theory] = Theory.DACOSTA, l: Optional[int] = 0,
                      exact_phase: bool = False):
    """Imaginary-order bound state on the branch nu ln(x/2) - phi in (0, pi)."""
    if not 0.0 < abs_mu < 1.0:
        raise OutOfWindowError(f"|mu| = {abs_mu} outside (0, 1)")
    geom = geom or ConeGeometry(alpha)
    lam = lambda_value(alpha, -abs_mu * abs_mu)
    phi = _imag_phase(abs_mu, exact_phase)
    # theta = nu (t - ln 2)/2 - phi spans (0, pi).
    t0 = math.log(2.0) + 2.0 * phi / abs_mu
    t1 = math.log(2.0) + 2.0 * (math.pi + phi) / abs_mu
    pad = 1e-9 * (t1 - t0)

    def residual(t):
        theta = abs_mu * 0.5 * (t - math.log(2.0)) - phi
        return abs_mu / math.tan(theta) - lam

    lo, hi = t0 + pad, t1 - pad
    if hi > 700.0:
        return NoRoot(f"principal branch extends past representable energies (t up to {t1:.4g})")
    roots, res_range = _solve_log_energy(residual, [(lo, hi)])
    if len(roots) != 1:
        return NoRoot(f"imaginary-order matching: {len(roots)} roots on the principal branch", res_range)
    return _level(theory, l, -abs_mu * abs_mu, roots[0], geom.a)


# --------------------------------------------------------------------------


def solve_state(theory: Theory, alpha: float, l: int, geom: Optional[ConeGeometry] = None, **kwargs):
    """Dispatch a (theory, alpha, l) state to the matching solver for its order."""
    geom = geom or ConeGeometry(alpha)
    m = mu_squared(theory, alpha, l)
    if m.mu_squared < 0:
        return solve_energy_imag(m.abs_mu, alpha, geom, theory=theory, l=l, **kwargs)
    if m.mu_squared == 0:
        return solve_energy_mu_zero(alpha, geom, theory=theory, l=l, **kwargs)
    if m.mu >= 1.0:
        raise OutOfWindowError(f"mu = {m.mu} >= 1: operator is essentially self-adjoint, no extension")
    return solve_energy(m.mu, alpha, geom, theory=theory, l=l, **kwargs)
