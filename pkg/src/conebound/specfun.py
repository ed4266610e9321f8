"""Special functions used by the spectra, extension and oracle modules.

Real-order Bessel functions are delegated to :mod:`scipy.special` (AMOS).
The imaginary-order Macdonald function K_{i nu}(x), which scipy does not
provide, is evaluated from its integral representation

    K_{i nu}(x) = int_0^inf exp(-x cosh t) cos(nu t) dt,

truncated where the integrand falls below exp(-40) relative to exp(-x).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import integrate, special

from .errors import DomainError, NumericError, PoleError

EULER_GAMMA = 0.57721566490153286060651209008240243
NU_MAX = 5.0

_TAIL = 40.0


def gamma_fn(x: float) -> float:
    """Euler Gamma function for real ``x`` off the non-positive integers."""
    if not math.isfinite(x):
        raise DomainError(f"Gamma undefined for {x}")
    if x <= 0 and x == math.floor(x):
        raise DomainError(f"Gamma has a pole at {x}")
    return math.gamma(x)


# Below this the order is treated as 0: K_nu - K_0 = O(nu^2), and the
# underlying routines return inf/nan for subnormal orders.
_NU_TINY = 1e-300


def _check_real(nu: float, x: float) -> float:
    if not x > 0:
        raise DomainError(f"argument must be positive, got x={x}")
    if not (0.0 <= nu <= NU_MAX):
        raise DomainError(f"order {nu} outside implemented range [0, {NU_MAX}]")
    return 0.0 if nu < _NU_TINY else float(nu)


def bessel_k(nu: float, x: float) -> float:
    """Modified Bessel function of the second kind K_nu(x)."""
    nu = _check_real(nu, x)
    return float(special.kv(nu, x))


def bessel_i(nu: float, x: float) -> float:
    """Modified Bessel function of the first kind I_nu(x)."""
    nu = _check_real(nu, x)
    return float(special.iv(nu, x))


def bessel_j(nu: float, x: float) -> float:
    """Bessel function of the first kind J_nu(x)."""
    nu = _check_real(nu, x)
    return float(special.jv(nu, x))


def bessel_k_deriv(nu: float, x: float) -> float:
    """dK_nu/dx via K'_nu = -(K_{nu-1} + K_{nu+1})/2."""
    nu = _check_real(nu, x)
    return float(-0.5 * (special.kv(nu - 1.0, x) + special.kv(nu + 1.0, x)))


def bessel_i_deriv(nu: float, x: float) -> float:
    """dI_nu/dx via I'_nu = (I_{nu-1} + I_{nu+1})/2."""
    nu = _check_real(nu, x)
    return float(0.5 * (special.iv(nu - 1.0, x) + special.iv(nu + 1.0, x)))


def bessel_j_deriv(nu: float, x: float) -> float:
    nu = _check_real(nu, x)
    return float(0.5 * (special.jv(nu - 1.0, x) - special.jv(nu + 1.0, x)))


def _imag_order_integral(nu: float, x: float, power: int) -> float:
    # power 0 gives K_{i nu}(x); power 1 gives -dK_{i nu}/dx.
    t_max = math.acosh(1.0 + _TAIL / x)

    def integrand(t):
        ch = math.cosh(t)
        return ch**power * math.exp(-x * (ch - 1.0)) * math.cos(nu * t)

    # full_output silences roundoff warnings; the error estimate is checked below.
    value, err, *_ = integrate.quad(
        integrand, 0.0, t_max, epsabs=1e-15, epsrel=1e-13, limit=400, full_output=1
    )
    scale = integrate.quad(
        lambda t: math.cosh(t) ** power * math.exp(-x * (math.cosh(t) - 1.0)),
        0.0,
        t_max,
        limit=400,
    )[0]
    if err > 1e-11 * scale:
        raise NumericError(
            f"K_(i{nu})({x}) quadrature error estimate {err:.2e} too large", residual=err
        )
    return value * math.exp(-x)


def bessel_k_imag(nu: float, x: float) -> float:
    """Real-valued K_{i nu}(x) for real nu >= 0 and x > 0."""
    if not x > 0:
        raise DomainError(f"argument must be positive, got x={x}")
    if not (math.isfinite(nu) and nu >= 0):
        raise DomainError(f"imaginary order must be a finite non-negative real, got {nu}")
    return _imag_order_integral(nu, x, 0)


def bessel_k_imag_deriv(nu: float, x: float) -> float:
    if not x > 0:
        raise DomainError(f"argument must be positive, got x={x}")
    return -_imag_order_integral(nu, x, 1)


def k_small_x(nu: float, x: float) -> float:
    """Two-term small-argument form of K_nu(x) for 0 < nu < 1.

    (pi / (2 sin(pi nu))) [x^-nu / (2^-nu Gamma(1-nu)) - x^nu / (2^nu Gamma(1+nu))]
    """
    if not 0.0 < nu < 1.0:
        raise DomainError(f"small-argument form needs 0 < nu < 1, got {nu}")
    if not x > 0:
        raise DomainError(f"argument must be positive, got x={x}")
    lead = x**-nu / (2.0**-nu * math.gamma(1.0 - nu))
    sub = x**nu / (2.0**nu * math.gamma(1.0 + nu))
    return math.pi / (2.0 * math.sin(math.pi * nu)) * (lead - sub)


@dataclass(frozen=True)
class BesselOrder:
    """Order of K: ``nu`` itself (real) or ``i nu`` (imaginary)."""

    nu: float
    imaginary: bool = False

    @classmethod
    def real(cls, nu: float) -> "BesselOrder":
        return cls(float(nu), False)

    @classmethod
    def imag(cls, nu: float) -> "BesselOrder":
        return cls(float(nu), True)


def log_deriv_k(order: BesselOrder, x: float) -> float:
    """Dimensionless logarithmic derivative x K'(x) / K(x)."""
    if not x > 0:
        raise DomainError(f"argument must be positive, got x={x}")
    nu = order.nu
    if not order.imaginary:
        if not (math.isfinite(nu) and nu >= 0):
            raise DomainError(f"real order must be non-negative, got {nu}")
        if nu < _NU_TINY:
            nu = 0.0
        # Exponentially scaled values keep the ratio finite for large x.
        k = special.kve(nu, x)
        dk = -0.5 * (special.kve(nu - 1.0, x) + special.kve(nu + 1.0, x))
        return float(x * dk / k)
    k = bessel_k_imag(nu, x)
    dk = bessel_k_imag_deriv(nu, x)
    if abs(k) <= 1e-12 * abs(dk) * x:
        raise PoleError(f"K_(i{nu}) vanishes near x={x}; logarithmic derivative has a pole", x)
    return x * dk / k
