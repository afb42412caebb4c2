import numpy as np
import pytest
from numpy.polynomial import polynomial as P

from genofv.schemes import compact_linear_value
from genofv.stencils import (
    COMPACT_LARGE,
    COMPACT_SUBS,
    SIXTH_LARGE,
    SIXTH_SUBS,
    WENO5_LARGE,
    WENO5_SUBS,
    ConstructionError,
    DerivationError,
    ReconPolynomial,
    StencilSpec,
    build_hermite_poly,
    build_interp_poly,
    cell_average_of,
    cell_averages,
    derive_optimal_weights,
    eval_poly,
    indicator_form,
    smoothness_indicator,
    value_weights,
)


def test_cell_average_examples():
    assert cell_average_of(lambda x: np.ones_like(x), 3.0, 4.5) == pytest.approx(1.0, abs=1e-15)
    assert cell_average_of(lambda x: x, 0.0, 1.0) == pytest.approx(0.5, abs=1e-15)
    a, b = -0.3, 1.7
    assert cell_average_of(lambda x: x * x, a, b) == pytest.approx((b**3 - a**3) / (3 * (b - a)), rel=1e-14)


def test_cell_averages_vectorized_matches_scalar():
    edges = np.linspace(0, 1, 6)
    f = lambda x: np.sin(3 * x)
    vec = cell_averages(f, edges)
    ref = [cell_average_of(f, edges[i], edges[i + 1]) for i in range(5)]
    np.testing.assert_allclose(vec, ref, rtol=1e-14)


def test_interp_examples():
    p = build_interp_poly([1, 1, 1], StencilSpec((-1, 0, 1)))
    np.testing.assert_allclose(p.coeffs, [1, 0, 0], atol=1e-15)
    # averages of f(x) = x over cells -1, 0, 1 with h = 1 are -1, 0, 1
    p = build_interp_poly([-1, 0, 1], StencilSpec((-1, 0, 1)))
    np.testing.assert_allclose(p.coeffs, [0, 1, 0], atol=1e-15)
    assert p(0.5) == pytest.approx(0.5, abs=1e-15)


def test_quintic_reproduces_quartic_on_six_cells():
    h = 0.1
    xj = 0.37
    f = lambda x: x**4
    avgs = [cell_average_of(f, xj + (o - 0.5) * h, xj + (o + 0.5) * h) for o in SIXTH_LARGE.offsets]
    p = build_interp_poly(avgs, SIXTH_LARGE, h)
    assert p(0.5) == pytest.approx(f(xj + 0.5 * h), abs=1e-12)


def test_interp_rejects_wrong_data():
    with pytest.raises(ConstructionError):
        build_interp_poly([1, 2], WENO5_SUBS[0])
    with pytest.raises(ConstructionError):
        build_interp_poly([1, 2, 3, 4, 5, 6, 7, 8], COMPACT_LARGE)


def test_duplicate_offsets_are_singular():
    with pytest.raises(ConstructionError):
        build_interp_poly([1, 2, 3], StencilSpec((0, 0, 1)))


def test_gradient_offsets_must_be_subset():
    with pytest.raises(ValueError):
        StencilSpec((0, 1), (2,))


def test_hermite_constant():
    p = build_hermite_poly([2.0] * 4, [0.0] * 4, COMPACT_LARGE)
    assert p.degree == 7
    np.testing.assert_allclose(p.coeffs, [2, 0, 0, 0, 0, 0, 0, 0], atol=1e-13)


def test_hermite_reproduces_degree_seven():
    rng = np.random.default_rng(5)
    c = rng.normal(size=8)
    F = P.polyint(c)
    avgs = [P.polyval(o + 0.5, F) - P.polyval(o - 0.5, F) for o in COMPACT_LARGE.offsets]
    grads = [P.polyval(o + 0.5, c) - P.polyval(o - 0.5, c) for o in COMPACT_LARGE.offsets]
    p = build_hermite_poly(avgs, grads, COMPACT_LARGE)
    np.testing.assert_allclose(p.coeffs, c, atol=1e-11)
    xi = np.linspace(-1.5, 2.5, 9)
    np.testing.assert_allclose(p(xi), P.polyval(xi, c), atol=1e-11)


def test_compact_substencil_degrees():
    assert [s.degree for s in COMPACT_SUBS] == [2, 2, 2]
    assert COMPACT_LARGE.degree == 7


def _sin_data(n):
    h = 1.0 / n
    xj = 0.3
    edges = lambda o: (xj + (o - 0.5) * h, xj + (o + 0.5) * h)
    avg = np.array([cell_average_of(lambda x: np.sin(np.pi * x), *edges(o)) for o in range(-1, 3)])
    # cell-averaged derivative times h is the jump of the function
    grad_h = np.array([np.sin(np.pi * edges(o)[1]) - np.sin(np.pi * edges(o)[0]) for o in range(-1, 3)])
    exact = np.sin(np.pi * (xj + 0.5 * h))
    return avg, grad_h, exact


def test_hermite_eighth_order_convergence():
    errs = []
    for n in (4, 8, 16, 32, 64):
        avg, grad_h, exact = _sin_data(n)
        errs.append(abs(compact_linear_value(avg[None], grad_h[None])[0] - exact))
    slopes = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    assert slopes[-1] >= 7.5


def test_eval_poly_examples():
    assert eval_poly(ReconPolynomial(0, np.array([1.0])), 3.3) == 1.0
    assert eval_poly(ReconPolynomial(1, np.array([0.0, 1.0])), 0.5) == 0.5
    rng = np.random.default_rng(2)
    c = rng.normal(size=6)
    xi = rng.uniform(-2, 2, 10)
    naive = sum(c[m] * xi**m for m in range(6))
    np.testing.assert_allclose(eval_poly(ReconPolynomial(5, c), xi), naive, rtol=1e-12, atol=1e-13)


def test_smoothness_indicator_examples():
    assert smoothness_indicator(ReconPolynomial(0, np.array([4.0]))) == 0.0
    # slope s in x with width h is s*h in xi
    s, h = 3.0, 0.2
    poly = ReconPolynomial(1, np.array([0.0, s * h]), h)
    assert smoothness_indicator(poly, h) == pytest.approx(s * s * h * h, rel=1e-14)
    p = build_interp_poly([1, 2, 3], WENO5_SUBS[0])
    u1, u2, u3 = 1, 2, 3
    js = 13 / 12 * (u1 - 2 * u2 + u3) ** 2 + 0.25 * (u1 - 4 * u2 + 3 * u3) ** 2
    assert smoothness_indicator(p) == pytest.approx(js, rel=1e-13)
    assert js == 1.0


def test_jiang_shu_closed_form_on_random_data():
    rng = np.random.default_rng(9)
    for _ in range(20):
        u = rng.normal(size=3)
        p = build_interp_poly(u, WENO5_SUBS[0])
        js = 13 / 12 * (u[0] - 2 * u[1] + u[2]) ** 2 + 0.25 * (u[0] - 4 * u[1] + 3 * u[2]) ** 2
        assert smoothness_indicator(p) == pytest.approx(js, rel=1e-12, abs=1e-14)


def test_indicator_form_matches_direct_integration():
    rng = np.random.default_rng(4)
    for spec in WENO5_SUBS + SIXTH_SUBS:
        F = indicator_form(spec)
        for _ in range(5):
            u = rng.normal(size=len(spec.offsets))
            direct = smoothness_indicator(build_interp_poly(u, spec))
            factored = float(np.sum((F @ np.diff(u)) ** 2))
            assert factored == pytest.approx(direct, rel=1e-11, abs=1e-14)
        assert float(np.sum((F @ np.diff(np.full(len(spec.offsets), 7.3))) ** 2)) == 0.0


def test_indicator_capped_order():
    p = build_interp_poly([0, 1, 4, 9, 16, 25], SIXTH_LARGE)
    assert smoothness_indicator(p, max_order=3) <= smoothness_indicator(p)
    with pytest.raises(ValueError):
        smoothness_indicator(p, max_order=0)


def test_weno5_optimal_weights():
    np.testing.assert_allclose(derive_optimal_weights(WENO5_SUBS, WENO5_LARGE), [0.1, 0.6, 0.3], atol=1e-14)


def test_sixth_order_optimal_weights():
    d = derive_optimal_weights(SIXTH_SUBS, SIXTH_LARGE)
    np.testing.assert_allclose(d, [1 / 20, 3 / 20, 3 / 5, 1 / 5], atol=1e-13)
    assert d.sum() == pytest.approx(1.0, abs=1e-13)


@pytest.mark.parametrize("subs,large", [(WENO5_SUBS, WENO5_LARGE), (SIXTH_SUBS, SIXTH_LARGE)])
def test_optimal_weights_reproduce_large_value(subs, large):
    d = derive_optimal_weights(subs, large)
    rng = np.random.default_rng(1)
    for _ in range(100):
        data = dict(zip(large.offsets, rng.normal(size=len(large.offsets))))
        big = value_weights(large) @ np.array([data[o] for o in large.offsets])
        small = sum(dk * (value_weights(s) @ np.array([data[o] for o in s.offsets])) for dk, s in zip(d, subs))
        assert abs(big - small) < 1e-12


def test_inconsistent_weight_system():
    with pytest.raises(DerivationError):
        derive_optimal_weights((StencilSpec((-1, 0)), StencilSpec((0, 1))), WENO5_LARGE)
    with pytest.raises(DerivationError):
        derive_optimal_weights((StencilSpec((3, 4, 5)),), WENO5_LARGE)


def test_polynomial_reproduction_all_stencils():
    rng = np.random.default_rng(8)
    for spec in WENO5_SUBS + SIXTH_SUBS + (WENO5_LARGE, SIXTH_LARGE):
        c = rng.normal(size=spec.degree + 1)
        F = P.polyint(c)
        avgs = [P.polyval(o + 0.5, F) - P.polyval(o - 0.5, F) for o in spec.offsets]
        assert value_weights(spec) @ avgs == pytest.approx(P.polyval(0.5, c), abs=1e-11)
