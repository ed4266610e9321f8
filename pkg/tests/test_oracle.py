import csv
import io
import math

import pytest

from conebound import ConeGeometry, DomainError, Theory
from conebound import oracle
from conebound.geometry import build_regulator
from conebound.levels import NoRoot

from conftest import FIXTURES

DC, KG = Theory.DACOSTA, Theory.KLEIN_GORDON


def test_interior_strength_and_bracket():
    prob = oracle.RegularizedEigenproblem.for_state(KG, 2.0, 0)
    assert prob.c == 1.0
    assert prob.bracket == (0.0, 1.0)


def test_excluded_for_over_critical_order():
    with pytest.raises(DomainError):
        oracle.RegularizedEigenproblem.for_state(DC, 0.5, 0)


def test_interior_flat_limit():
    # Tiny c: the interior solution tends to rho^mu, log-derivative to mu.
    reg = build_regulator(ConeGeometry(1.0 + 1e-10))
    prob = oracle.RegularizedEigenproblem(reg, 0.4)
    assert oracle.interior_log_deriv(prob, 1e-6) == pytest.approx(0.4, abs=1e-8)


def test_exterior_log_deriv():
    assert oracle.exterior_log_deriv(0.5, 1.0) == pytest.approx(-1.5, rel=1e-14)
    assert oracle.exterior_log_deriv(0.3, 1e-8) == pytest.approx(-0.3, abs=1e-3)
    assert oracle.exterior_log_deriv(0.3, 200.0) == pytest.approx(-200.0, rel=0.01)


def test_matching_function_zero_at_root():
    prob = oracle.RegularizedEigenproblem.for_state(KG, 2.0, 0)
    (lvl,) = oracle.eigen_solve(prob)
    x = math.sqrt(-2 * lvl.e_scaled)
    assert oracle.interior_log_deriv(prob, x) == pytest.approx(oracle.exterior_log_deriv(0.0, x), rel=1e-10)


@pytest.mark.parametrize("alpha", [0.3, 0.5, 0.8, 1.0])
@pytest.mark.parametrize("theory", [DC, KG])
def test_repulsive_or_flat_tip_never_binds(theory, alpha):
    for l in range(-3, 4):
        e, status, n = oracle.oracle_outcome(theory, alpha, l, ConeGeometry(alpha))
        assert status in (oracle.STATUS_NO_ROOT, oracle.STATUS_EXCLUDED)
        assert e is None and n == 0


def test_deep_well_has_excited_states():
    prob = oracle.RegularizedEigenproblem(build_regulator(ConeGeometry(1e3)), 0.1)
    levels = oracle.eigen_solve(prob)
    assert len(levels) >= 1
    energies = [lvl.e_scaled for lvl in levels]
    assert energies == sorted(energies)


def test_oracle_radius_invariance():
    r1 = oracle.solve_state(KG, 3.0, 0, ConeGeometry(3.0, 1.0))
    r2 = oracle.solve_state(KG, 3.0, 0, ConeGeometry(3.0, 2.0))
    assert r1[0].e_scaled == r2[0].e_scaled
    assert r2[0].physical() == r1[0].physical() / 4


def test_saep_and_oracle_same_order_of_magnitude_where_both_bind():
    rows = oracle.convergence_study(KG, [1.5, 2.0, 3.0, 5.0], 0)
    for r in rows:
        assert r.saep_status == r.oracle_status == "ok"
        assert 0.1 < r.e_oracle / r.e_saep < 10


def _parse(text):
    return list(csv.DictReader(io.StringIO(text)))


@pytest.mark.parametrize("theory", [DC, KG])
def test_convergence_fixture_alpha2(theory):
    committed = _parse((FIXTURES / f"convergence_{theory.value}_alpha2.csv").read_text(encoding="utf-8"))
    fresh = _parse(oracle.convergence_csv(oracle.convergence_study(theory, 2.0, range(-3, 4))))
    assert len(fresh) == len(committed)
    for a, b in zip(fresh, committed):
        for key in a:
            if key.startswith("e_") and b[key]:
                assert float(a[key]) == pytest.approx(float(b[key]), rel=1e-10)
            elif key.startswith("disc_") and b[key]:
                assert float(a[key]) == pytest.approx(float(b[key]), rel=1e-3, abs=1e-12)
            else:
                assert a[key] == b[key], key


def test_convergence_rows_examples():
    (row,) = oracle.convergence_study(DC, 2.0, 1)
    assert row.disc_saep_closed < 1e-10
    for r in oracle.convergence_study(KG, 0.8, range(-3, 4)):
        assert r.oracle_status == r.saep_status == "no_root" or r.saep_status == "out_of_window"
        assert r.e_oracle is None and r.e_saep is None and r.e_closed_form is None
    for r in oracle.convergence_study(DC, 1.0, [-2, -1, 1, 2]) + oracle.convergence_study(KG, 1.0, [-2, -1, 1, 2]):
        assert r.e_oracle is None and r.e_saep is None and r.e_closed_form is None


def test_write_convergence_csv(tmp_path):
    rows = oracle.convergence_study(KG, 2.0, 0)
    path = tmp_path / "c.csv"
    oracle.write_convergence_csv(rows, path)
    assert path.read_text(encoding="utf-8") == oracle.convergence_csv(rows)
