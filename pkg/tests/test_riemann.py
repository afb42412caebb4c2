import numpy as np
import pytest

from genofv.euler import AdmissibilityError, PrimitiveState
from genofv.riemann import VacuumError, _pressure_function, exact_riemann, star_region
from genofv.euler import DEFAULT_GAS

SOD_L = PrimitiveState(1.0, 0.0, 1.0)
SOD_R = PrimitiveState(0.125, 0.0, 0.1)


def test_sod_star_values():
    star = star_region(SOD_L, SOD_R)
    assert star.p == pytest.approx(0.30313, abs=5e-6)
    assert star.u == pytest.approx(0.92745, abs=5e-6)
    # frozen from the converged Newton solve
    assert star.p == pytest.approx(0.3031301780506468, rel=1e-12)
    assert star.u == pytest.approx(0.9274526200489499, rel=1e-12)


def test_sod_pressure_function_residual():
    star = star_region(SOD_L, SOD_R)
    g = DEFAULT_GAS
    cl, cr = np.sqrt(1.4), np.sqrt(1.4 * 0.1 / 0.125)
    fl, _ = _pressure_function(star.p, 1.0, 1.0, cl, g)
    fr, _ = _pressure_function(star.p, 0.125, 0.1, cr, g)
    assert abs(fl + fr) < 1e-12
    assert star.residual < 1e-12


def test_sod_fan_samples():
    rho, u, p = exact_riemann(SOD_L, SOD_R, x_over_t=np.array([-2.0, 0.0, 0.5, 1.5, 2.0]))
    np.testing.assert_allclose(rho[[0, -1]], [1.0, 0.125])
    # the rarefaction tail moves left, so x/t = 0 sees the left star state
    assert u[1] == pytest.approx(0.92745, abs=1e-5) and rho[1] == pytest.approx(0.42632, abs=1e-5)
    assert u[1] - np.sqrt(1.4 * p[1] / rho[1]) < 0
    assert u[2] == pytest.approx(0.92745, abs=1e-5) and p[2] == pytest.approx(0.30313, abs=1e-5)
    # post-shock density
    assert rho[3] == pytest.approx(0.26557, abs=1e-5)


def test_identical_states():
    s = PrimitiveState(0.7, 0.3, 2.0)
    for xi in (-3.0, -0.5, 0.0, 0.2, 4.0):
        np.testing.assert_allclose(exact_riemann(s, s, x_over_t=xi), s, rtol=1e-12)


def test_symmetric_collision():
    star = star_region(PrimitiveState(1.0, 2.0, 1.0), PrimitiveState(1.0, -2.0, 1.0))
    assert abs(star.u) < 1e-12
    assert star.p > 1.0


def test_symmetric_expansion_and_vacuum():
    star = star_region(PrimitiveState(1.0, -1.0, 1.0), PrimitiveState(1.0, 1.0, 1.0))
    assert abs(star.u) < 1e-12 and 0 < star.p < 1
    with pytest.raises(VacuumError):
        star_region(PrimitiveState(1.0, -20.0, 1.0), PrimitiveState(1.0, 20.0, 1.0))


def test_inadmissible_input():
    with pytest.raises(AdmissibilityError):
        exact_riemann(PrimitiveState(-1.0, 0.0, 1.0), SOD_R)


def test_blast_wave_pair_converges():
    star = star_region(PrimitiveState(1.0, 0.0, 1000.0), PrimitiveState(1.0, 0.0, 0.01))
    assert star.p == pytest.approx(460.894, rel=1e-5)
    assert star.u == pytest.approx(19.5975, rel=1e-5)
