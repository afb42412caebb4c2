import numpy as np
import pytest

from genofv.cases import REGISTRY, make_case
from genofv.euler import cons_to_prim, ConservedState


def test_registry_names():
    assert set(REGISTRY) == {"sine_advection", "entropy_gaussian", "shu_osher", "titarev_toro", "blast_wave", "sod"}
    with pytest.raises(ValueError, match="available"):
        make_case("lax")


def test_sine_advection():
    c = make_case("sine_advection")
    assert c.domain == (0.0, 2.0) and c.t_end == 2.0
    assert c.bc_left.kind == "periodic" and c.bc_right.kind == "periodic"


def test_blast_wave():
    c = make_case("blast_wave")
    x = np.array([0.05, 0.5, 0.95])
    rho, u, p = c.initial(x)
    np.testing.assert_array_equal(p, [1000.0, 0.01, 100.0])
    np.testing.assert_array_equal(rho, 1.0)
    assert c.t_end == 0.038 and c.bc_left.kind == "reflective"


def test_titarev_toro():
    c = make_case("titarev_toro")
    rho, u, p = c.initial(np.array([-4.5, -3.95]))
    np.testing.assert_array_equal([rho[0], u[0], p[0]], [1.515695, 0.523346, 1.805])
    assert u[1] == 0.0 and p[1] == 1.0
    assert c.domain == (-5.0, 5.0) and c.t_end == 5.0
    assert c.teno_ct_override == {"TENO6": 1e-3}


def test_shu_osher_and_sod():
    c = make_case("shu_osher")
    rho, u, p = c.initial(np.array([0.5, 3.0]))
    assert rho[0] == pytest.approx(3.857143, abs=1e-6) and u[0] == pytest.approx(2.629369, abs=1e-6)
    assert p[0] == pytest.approx(10.33333, abs=1e-5) and rho[1] == pytest.approx(1 + 0.2 * np.sin(15.0))
    s = make_case("sod")
    assert s.t_end == 0.2 and s.riemann_split == 0.5


def test_entropy_gaussian_width():
    c = make_case("entropy_gaussian")
    rho, _, _ = c.initial(np.array([0.0, 1.5]))
    np.testing.assert_allclose(rho, [1.5, 1.25], rtol=1e-14)


def test_initial_field_is_cell_averaged():
    # averages across the Sod split: the cell containing x = 0.5 as an edge stays pure
    f = make_case("sod").initial_field(10)
    prim = cons_to_prim(ConservedState(*f.interior))
    np.testing.assert_allclose(prim.rho, [1.0] * 5 + [0.125] * 5, rtol=1e-14)
    f = make_case("blast_wave").initial_field(5)  # split 0.1 falls inside cell 0
    np.testing.assert_allclose(f.interior[2, 0], 0.5 * (1000.0 + 0.01) / 0.4, rtol=1e-12)


def test_validation():
    c = make_case("sod")
    from dataclasses import replace

    with pytest.raises(ValueError):
        replace(c, t_end=0.0)
    with pytest.raises(ValueError):
        replace(c, meshes=())
    with pytest.raises(ValueError):
        replace(c, exact_kind="magic")
