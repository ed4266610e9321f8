import cmath
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conebound import ConeGeometry, DomainError, FitFailure, OutOfWindowError, Theory, mu_squared
from conebound import saep, spectra
from conebound.levels import NoRoot

DC, KG = Theory.DACOSTA, Theory.KLEIN_GORDON


@pytest.mark.parametrize("alpha,mu2,expected", [(2.0, 1 / 16, -0.46875), (1.0, 4.0, 2.0), (0.5, -0.75, 0.625)])
def test_lambda_examples(alpha, mu2, expected):
    assert saep.lambda_value(alpha, mu2) == expected


def test_lambda_target_wraps_effective_momentum():
    assert saep.lambda_target(2.0, mu_squared(DC, 2.0, 1)).lam == -0.46875


# ---------------------------------------------------------------- deficiency


@pytest.mark.parametrize("mu", [0.0, 0.25, 0.5, 0.9])
def test_deficiency_indices_one_one(mu):
    rep = saep.deficiency_subspaces_check(mu)
    assert rep.indices == (1, 1) and rep.finite
    assert math.isfinite(rep.norm_plus) and math.isfinite(rep.norm_minus)
    assert rep.norm_plus == pytest.approx(rep.norm_minus, rel=1e-8)


@pytest.mark.parametrize("mu", [1.0, 1.2, 2.0])
def test_deficiency_divergence(mu):
    rep = saep.deficiency_subspaces_check(mu)
    assert rep.divergent and rep.indices == (0, 0)


@pytest.mark.parametrize("mu", [0.25, 0.5, 1.2])
def test_deficiency_power_counting(mu):
    rep = saep.deficiency_subspaces_check(mu)
    assert rep.small_rho_exponent == pytest.approx(oracles.small_rho_exponent(mu), abs=1e-3)


def test_deficiency_norm_against_quadrature_oracle():
    # mu = 1/2: |K(z rho)|^2 rho = (pi / (2|z|)) exp(-2 Re z rho), integral pi/(4 |z| Re z).
    z = cmath.sqrt(-2j)
    rep = saep.deficiency_subspaces_check(0.5)
    assert rep.norm_plus == pytest.approx(math.pi / (4 * abs(z) * z.real), rel=1e-9)


# ---------------------------------------------------------------- Omega, eta


def test_omega_symmetric_at_eta_zero():
    p = saep.ExtensionParams(0.0, 1.0)
    om = saep.omega_eta(p, 0.4, 0.3)
    assert abs(om.imag) < 1e-14 * abs(om)


def test_omega_branch_errors():
    p = saep.ExtensionParams(1.0, 1.0)
    for mu in (0.0, 1.0):
        with pytest.raises(OutOfWindowError):
            saep.omega_eta(p, mu, 0.5)
    with pytest.raises(DomainError):
        saep.omega_eta(p, 0.5, 0.0)


@given(st.floats(min_value=0.05, max_value=0.95), st.floats(min_value=0.0, max_value=6.28),
       st.floats(min_value=0.01, max_value=1.0), st.floats(min_value=0.2, max_value=5.0))
def test_omega_homogeneous(mu, eta, rho, c):
    # Omega(c rho; k0/c^2) = Omega(rho; k0) exactly in the small-argument form.
    om1 = saep.omega_eta(saep.ExtensionParams(eta, 1.0), mu, rho)
    om2 = saep.omega_eta(saep.ExtensionParams(eta, 1.0 / c**2), mu, c * rho)
    assert abs(om1 - om2) <= 1e-12 * abs(om1)


def test_fit_eta_fixture(reference):
    for row in reference["eta"]:
        params = saep.fit_eta(row["alpha"], row["mu"], ConeGeometry(row["alpha"]))
        assert params.eta == pytest.approx(row["eta"], abs=1e-11)


def test_fit_eta_dense_scan_oracle():
    brackets = oracles.eta_dense_scan(0.25, 2.0, n=4000)
    assert len(brackets) == 1
    eta = saep.fit_eta(2.0, 0.25, ConeGeometry(2.0)).eta
    lo, hi = brackets[0]
    assert lo <= eta <= hi


@settings(max_examples=40, deadline=None)
@given(st.floats(min_value=0.02, max_value=0.98), st.floats(min_value=0.2, max_value=15.0))
def test_fit_eta_defining_property(mu, alpha):
    geom = ConeGeometry(alpha)
    params = saep.fit_eta(alpha, mu, geom)
    ld = saep.omega_log_deriv(params, mu, geom.a)
    lam = saep.lambda_value(alpha, mu * mu)
    assert abs(ld.imag) < 1e-9
    assert ld.real == pytest.approx(lam, rel=1e-9, abs=1e-9)


def test_fit_eta_radius_invariance():
    a1 = saep.fit_eta(2.0, 0.25, ConeGeometry(2.0, 1.0), k0=1.0)
    a2 = saep.fit_eta(2.0, 0.25, ConeGeometry(2.0, 2.0), k0=0.25)
    assert a1.eta == pytest.approx(a2.eta, abs=1e-12)


def test_fit_failure_carries_curve(monkeypatch):
    monkeypatch.setattr(saep, "ETA_CONSISTENCY", -1.0)
    with pytest.raises(FitFailure) as info:
        saep.fit_eta(2.0, 0.25, ConeGeometry(2.0))
    assert len(info.value.residual_curve) == saep.ETA_SCAN + 1


# ---------------------------------------------------------------- energy matching


@pytest.mark.parametrize("mu,alpha", [(0.25, 2.0), (0.6, 5.0), (0.4, 1.2)])
def test_matching_residual_endpoint_limits(mu, alpha):
    lam = saep.lambda_value(alpha, mu * mu)
    assert saep.matching_residual(-1e-300, mu, alpha) == pytest.approx(-mu - lam, abs=1e-9)
    assert saep.matching_residual(-1e300, mu, alpha) == pytest.approx(mu - lam, abs=1e-9)


def test_matching_pole_marker():
    e = saep.pole_energy(0.5)
    assert math.isinf(saep.matching_residual(e, 0.5, 2.0))


def test_matching_lhs_against_oracle():
    for mu, e in [(0.25, -0.01), (0.7, -3.0), (0.5, -1e-6)]:
        assert saep.matching_lhs(e, mu) == pytest.approx(float(oracles.small_x_log_deriv(mu, e)), rel=1e-12)


def test_solve_energy_real_order_fixture(reference):
    for row in reference["real_order"]:
        lvl = saep.solve_energy(row["mu"], row["alpha"], theory=Theory.parse(row["theory"]), l=row["l"])
        assert lvl.e_scaled == pytest.approx(row["e_findroot"], rel=1e-10)


def test_solve_energy_no_root_when_lambda_below_mu():
    # alpha = 1.2, mu = 0.5: lambda = -0.0417, |lambda| < mu.
    res = saep.solve_energy(0.5, 1.2)
    assert isinstance(res, NoRoot)
    lo, hi = res.residual_range
    assert lo > 0 or hi < 0


def test_solve_energy_k0_independent():
    e1 = saep.solve_energy(0.25, 2.0).e_scaled
    for k0 in (0.1, 3.0, 50.0):
        assert saep.solve_energy(0.25, 2.0, k0=k0).e_scaled == pytest.approx(e1, rel=1e-10)


def test_solve_energy_deterministic():
    a = saep.solve_energy(0.37, 3.3)
    b = saep.solve_energy(0.37, 3.3)
    assert a.e_scaled == b.e_scaled


def test_mu_zero_paths():
    lvl = saep.solve_energy_mu_zero(1.5)
    assert lvl.e_scaled == pytest.approx(spectra.energy_mu_zero(1.5).e_scaled, rel=1e-10)
    assert saep.matching_residual_mu_zero(lvl.e_scaled, 1.5) == pytest.approx(0.0, abs=1e-9)
    assert isinstance(saep.solve_energy_mu_zero(0.8), NoRoot)


def test_imaginary_order_path():
    nu = math.sqrt(0.75)
    lvl = saep.solve_energy_imag(nu, 0.5)
    assert lvl.e_scaled == pytest.approx(spectra.energy_imaginary_order(0.5, 0).e_scaled, rel=1e-10)
    assert saep.matching_residual_imag(lvl.e_scaled, nu, 0.5) == pytest.approx(0.0, abs=1e-8)
    exact = saep.solve_energy_imag(nu, 0.5, exact_phase=True)
    assert exact.e_scaled < 0


def test_solve_state_dispatch():
    assert saep.solve_state(DC, 2.0, 1).e_scaled == pytest.approx(-0.0051364133323619, rel=1e-12)
    assert saep.solve_state(KG, 1.5, 0).e_scaled == pytest.approx(spectra.energy_mu_zero(1.5).e_scaled, rel=1e-10)
    with pytest.raises(OutOfWindowError):
        saep.solve_state(KG, 2.0, 2)
    assert isinstance(saep.solve_state(KG, 2.0, 1), NoRoot)


def test_radius_scaling_of_saep_root():
    l1 = saep.solve_state(DC, 2.0, 1, ConeGeometry(2.0, 1.0))
    l2 = saep.solve_state(DC, 2.0, 1, ConeGeometry(2.0, 2.0))
    assert l1.e_scaled == l2.e_scaled
    assert l2.physical() == l1.physical() / 4
