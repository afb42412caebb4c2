import numpy as np
import pytest

from genofv.euler import PrimitiveState, prim_to_cons, roe_basis, cons_to_prim, ConservedState
from genofv.geno import GenoParams
from genofv.schemes import SCHEMES, Reconstructor, compact_geno_value, compact_linear_value
from genofv.stencils import cell_average_of

numba = pytest.importorskip("numba")


def _sine_windows(n, x0=0.3):
    h = 2.0 / n
    x = x0 + h * np.arange(-2, 4)
    return ((np.cos(np.pi * (x - h / 2)) - np.cos(np.pi * (x + h / 2))) / (np.pi * h))[None], x0 + 0.5 * h


def test_unknown_scheme_and_backend():
    with pytest.raises(ValueError):
        Reconstructor("WENO-Z6")
    with pytest.raises(ValueError):
        Reconstructor("GENO5", backend="cuda")


@pytest.mark.parametrize("scheme", ["LINEAR5", "LINEAR6"])
def test_linear_reproduces_polynomials(scheme):
    deg = 4 if scheme == "LINEAR5" else 5
    rng = np.random.default_rng(0)
    c = rng.normal(size=deg + 1)
    f = lambda x: np.polynomial.polynomial.polyval(x, c)
    v = np.array([[cell_average_of(f, o - 0.5, o + 0.5) for o in range(-2, 4)]])
    assert Reconstructor(scheme, backend="numpy")(v)[0] == pytest.approx(f(0.5), abs=1e-11)


@pytest.mark.parametrize("order", ["5", "6"])
def test_geno_equals_linear_on_resolved_sine(order):
    for n in (20, 40, 80):
        v, _ = _sine_windows(n)
        geno = Reconstructor("GENO" + order, backend="numpy")
        q = geno(v)
        assert geno.last_chi[0] == 1.0
        assert q[0] == pytest.approx(Reconstructor("LINEAR" + order, backend="numpy")(v)[0], abs=1e-12)


def test_sixth_order_linear_is_symmetric():
    # right limit from the mirrored window equals the left limit for symmetric data
    v = np.array([[1.0, 2.0, 5.0, 5.0, 2.0, 1.0]])
    rec = Reconstructor("LINEAR6", backend="numpy")
    ql, qr, _, _ = rec.both_sides(v)
    assert ql[0] == pytest.approx(qr[0], abs=1e-14)


def test_constant_data_all_schemes():
    v = np.full((1, 6), 3.25)
    for s in SCHEMES:
        assert Reconstructor(s, backend="numpy")(v)[0] == pytest.approx(3.25, abs=1e-14)


def _random_strip(n, rng):
    x = np.linspace(0, 1, n + 6)
    rho = 1.0 + 0.5 * (x > 0.5) + 0.1 * rng.normal(size=x.size) ** 2
    u = 0.3 * np.sin(7 * x) + 0.05 * rng.normal(size=x.size)
    p = 1.0 + 2.0 * (x < 0.3) + 0.1 * rng.uniform(size=x.size)
    return np.array(prim_to_cons(PrimitiveState(rho, u, p)))


@pytest.mark.parametrize("scheme", SCHEMES)
@pytest.mark.parametrize("projection", ["characteristic", "componentwise"])
def test_numba_matches_numpy_backend(scheme, projection):
    rng = np.random.default_rng(42)
    n = 40
    d = _random_strip(n, rng)
    basis = None
    if projection == "characteristic":
        cl = cons_to_prim(ConservedState(*d[:, 2 : n + 3]))
        cr = cons_to_prim(ConservedState(*d[:, 3 : n + 4]))
        basis = roe_basis(cl, cr)
    fast = Reconstructor(scheme, backend="numba").interfaces(d, basis)
    ref = Reconstructor(scheme, backend="numpy")
    windows = np.lib.stride_tricks.sliding_window_view(d, 6, axis=1)
    v = windows if basis is None else np.einsum("mab,bmk->amk", basis.left, windows)
    ql, qr, chi_l, chi_r = ref.both_sides(v.reshape(-1, 6))
    ql, qr = ql.reshape(3, n + 1), qr.reshape(3, n + 1)
    if basis is not None:
        ql = np.einsum("mab,bm->am", basis.right, ql)
        qr = np.einsum("mab,bm->am", basis.right, qr)
    scale = np.max(np.abs(d))
    np.testing.assert_allclose(fast[0], ql, atol=1e-13 * scale)
    np.testing.assert_allclose(fast[1], qr, atol=1e-13 * scale)
    if chi_l is not None:
        np.testing.assert_allclose(fast[2], chi_l.reshape(3, n + 1), atol=1e-12)


def test_numba_full_tau_span_matches_numpy():
    rng = np.random.default_rng(7)
    n = 30
    d = _random_strip(n, rng)
    params = GenoParams(tau_span="full")
    fast = Reconstructor("GENO6", geno=params, backend="numba").interfaces(d)
    ref = Reconstructor("GENO6", geno=params, backend="numpy")
    ql, qr, _, _ = ref.both_sides(np.lib.stride_tricks.sliding_window_view(d, 6, axis=1).reshape(-1, 6))
    np.testing.assert_allclose(fast[0], ql.reshape(3, n + 1), atol=1e-12)
    np.testing.assert_allclose(fast[1], qr.reshape(3, n + 1), atol=1e-12)


def test_full_tau_span_sees_far_cell():
    v = np.array([[1.0, 1.0, 1.0, 1.0, 1.0, 0.0]])
    three = Reconstructor("GENO6", backend="numpy")
    three(v)
    assert three.last_chi[0] == 1.0
    full = Reconstructor("GENO6", geno=GenoParams(tau_span="full"), backend="numpy")
    assert full(v)[0] == pytest.approx(1.0, abs=1e-12)
    assert full.last_chi[0] < 1e-10


def _compact_sine(n, x0=0.3):
    h = 1.0 / n
    e = lambda o: (x0 + (o - 0.5) * h, x0 + (o + 0.5) * h)
    avg = np.array([[cell_average_of(lambda x: np.sin(np.pi * x), *e(o)) for o in range(-1, 3)]])
    grad_h = np.array([[np.sin(np.pi * e(o)[1]) - np.sin(np.pi * e(o)[0]) for o in range(-1, 3)]])
    return avg, grad_h, np.sin(np.pi * (x0 + 0.5 * h))


def test_compact_geno_linear_on_smooth_data():
    avg, grad_h, _ = _compact_sine(32)
    q, bundle = compact_geno_value(avg, grad_h)
    assert bundle.chi[0] == pytest.approx(1.0, abs=1e-12)
    assert q[0] == pytest.approx(compact_linear_value(avg, grad_h)[0], abs=1e-12)


def test_compact_geno_at_step_is_bounded():
    avg = np.array([[0.0, 0.0, 1.0, 1.0]])
    grad_h = np.zeros((1, 4))
    q, bundle = compact_geno_value(avg, grad_h)
    assert bundle.chi[0] < 1e-10
    assert -1e-10 <= q[0] <= 1.0 + 1e-10


def test_compact_order():
    errs = []
    for n in (4, 8, 16, 32, 64):
        avg, g, exact = _compact_sine(n)
        errs.append(abs(compact_linear_value(avg, g)[0] - exact))
    slopes = np.log2(np.array(errs[:-1]) / errs[1:])
    assert slopes[-1] >= 7.5
