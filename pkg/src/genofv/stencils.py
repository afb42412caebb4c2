"""Linear reconstruction on uniform 1-D stencils.

Polynomials live in the local coordinate ``xi = (x - x_j) / h`` so that
cell ``j`` is ``[-1/2, 1/2]`` and cell ``j + o`` is ``[o - 1/2, o + 1/2]``.
Constraints are cell averages and, for compact (Hermite) stencils, cell
averages of the first derivative.  Because the grid is uniform, every
reconstruction is a fixed linear map from the stencil data; those maps are
computed once per stencil and cached.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import polynomial as P


class ConstructionError(ValueError):
    pass


class DerivationError(ValueError):
    pass


@dataclass(frozen=True)
class StencilSpec:
    offsets: tuple[int, ...]
    gradient_offsets: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "offsets", tuple(int(o) for o in self.offsets))
        object.__setattr__(self, "gradient_offsets", tuple(int(o) for o in self.gradient_offsets))
        if not set(self.gradient_offsets) <= set(self.offsets):
            raise ValueError("gradient offsets must be a subset of the stencil offsets")

    @property
    def n_constraints(self) -> int:
        return len(self.offsets) + len(self.gradient_offsets)

    @property
    def degree(self) -> int:
        return self.n_constraints - 1


@dataclass(frozen=True)
class ReconPolynomial:
    degree: int
    coeffs: np.ndarray = field(repr=False)
    h: float = 1.0

    def __call__(self, xi):
        return eval_poly(self, xi)


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(8)


def cell_average_of(f: Callable, a: float, b: float, npts: int = 8) -> float:
    """``(1/(b-a)) * integral of f over [a, b]`` by Gauss-Legendre quadrature."""
    if npts == 8:
        x, w = _GL_NODES, _GL_WEIGHTS
    else:
        x, w = np.polynomial.legendre.leggauss(npts)
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    return 0.5 * float(np.dot(w, f(mid + half * x)))


def cell_averages(f: Callable, edges: np.ndarray, npts: int = 8) -> np.ndarray:
    """Vectorized cell averages of ``f`` over consecutive cells given by ``edges``."""
    x, w = np.polynomial.legendre.leggauss(npts)
    edges = np.asarray(edges, dtype=float)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    pts = mid[:, None] + half[:, None] * x[None, :]
    return 0.5 * (f(pts) @ w)


def _monomial_cell_average(o: int, m: int) -> float:
    return ((o + 0.5) ** (m + 1) - (o - 0.5) ** (m + 1)) / (m + 1)


def _monomial_gradient_average(o: int, m: int) -> float:
    # cell average of d(xi^m)/dxi over cell o
    if m == 0:
        return 0.0
    return (o + 0.5) ** m - (o - 0.5) ** m


@lru_cache(maxsize=None)
def constraint_matrix(spec: StencilSpec) -> np.ndarray:
    n = spec.n_constraints
    rows = [[_monomial_cell_average(o, m) for m in range(n)] for o in spec.offsets]
    rows += [[_monomial_gradient_average(o, m) for m in range(n)] for o in spec.gradient_offsets]
    return np.array(rows)


@lru_cache(maxsize=None)
def coefficient_map(spec: StencilSpec) -> np.ndarray:
    """Matrix taking stencil data (averages, then ``h``-scaled gradients) to
    monomial coefficients in ``xi``."""
    A = constraint_matrix(spec)
    try:
        inv = np.linalg.inv(A)
    except np.linalg.LinAlgError as exc:
        raise ConstructionError(f"singular constraint system for {spec}") from exc
    if not np.all(np.isfinite(inv)) or np.linalg.cond(A) > 1e12:
        raise ConstructionError(f"ill-posed constraint system for {spec}")
    inv.setflags(write=False)
    return inv


def build_interp_poly(averages: Sequence[float], spec: StencilSpec, h: float = 1.0) -> ReconPolynomial:
    if spec.gradient_offsets:
        raise ConstructionError("use build_hermite_poly for stencils with gradient constraints")
    averages = np.asarray(averages, dtype=float)
    if averages.shape != (len(spec.offsets),):
        raise ConstructionError(f"expected {len(spec.offsets)} averages, got {averages.shape}")
    return ReconPolynomial(spec.degree, coefficient_map(spec) @ averages, h)


def build_hermite_poly(
    averages: Sequence[float],
    gradient_averages: Sequence[float],
    spec: StencilSpec,
    h: float = 1.0,
) -> ReconPolynomial:
    averages = np.asarray(averages, dtype=float)
    grads = np.asarray(gradient_averages, dtype=float)
    if averages.shape != (len(spec.offsets),) or grads.shape != (len(spec.gradient_offsets),):
        raise ConstructionError(
            f"{spec} needs {len(spec.offsets)} averages and {len(spec.gradient_offsets)} gradients"
        )
    data = np.concatenate([averages, h * grads])
    return ReconPolynomial(spec.degree, coefficient_map(spec) @ data, h)


def eval_poly(poly: ReconPolynomial, xi):
    xi = np.asarray(xi, dtype=float)
    out = np.zeros_like(xi)
    for c in poly.coeffs[::-1]:
        out = out * xi + c
    return out if out.ndim else float(out)


def _indicator_gram(n: int, max_order: int) -> np.ndarray:
    # M[a, b] = sum_l int_{-1/2}^{1/2} (d^l xi^a)(d^l xi^b) dxi; the h powers cancel
    M = np.zeros((n, n))
    eye = np.eye(n)
    for l in range(1, max_order + 1):
        ders = [P.polyder(eye[a], l) if a >= l else np.zeros(1) for a in range(n)]
        for a in range(l, n):
            for b in range(l, n):
                prod = P.polyint(P.polymul(ders[a], ders[b]))
                M[a, b] += P.polyval(0.5, prod) - P.polyval(-0.5, prod)
    return M


def smoothness_indicator(poly: ReconPolynomial, h: float | None = None, max_order: int | None = None) -> float:
    """Jiang-Shu style indicator of ``poly`` over the central cell.

    Sums ``h^(2l-1) * int (d^l q / dx^l)^2 dx`` for ``l = 1..max_order``
    (default: the polynomial degree).  In local coordinates each term is
    ``int (d^l q / dxi^l)^2 dxi``, so ``h`` does not appear explicitly.
    """
    if max_order is None:
        max_order = max(poly.degree, 1)
    if max_order < 1:
        raise ValueError("max_order must be at least 1")
    total = 0.0
    c = np.asarray(poly.coeffs, dtype=float)
    for l in range(1, max_order + 1):
        if l > len(c) - 1:
            break
        d = P.polyder(c, l)
        sq = P.polyint(P.polymul(d, d))
        total += P.polyval(0.5, sq) - P.polyval(-0.5, sq)
    return max(float(total), 0.0)


@lru_cache(maxsize=None)
def value_weights(spec: StencilSpec, xi: float = 0.5) -> np.ndarray:
    """Row vector ``c`` with ``p(xi) = c @ data`` for the stencil polynomial."""
    n = spec.n_constraints
    powers = np.array([xi**m for m in range(n)])
    out = powers @ coefficient_map(spec)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def indicator_form(spec: StencilSpec, max_order: int | None = None) -> np.ndarray:
    """Factorised indicator: ``IS = sum((F @ diff(data))**2)``.

    Writing the quadratic form in terms of consecutive differences of the
    averages makes it vanish exactly on constant data.  Average-only stencils
    only.
    """
    if spec.gradient_offsets:
        raise ValueError("indicator_form supports average-only stencils")
    n = spec.n_constraints
    if max_order is None:
        max_order = max(n - 1, 1)
    C = coefficient_map(spec)
    Q = C.T @ _indicator_gram(n, max_order) @ C
    # data = data_0 * ones + S @ diffs
    S = np.tril(np.ones((n, n - 1)), -1)
    Qd = S.T @ Q @ S
    Qd = 0.5 * (Qd + Qd.T)
    lam, V = np.linalg.eigh(Qd)
    lam = np.clip(lam, 0.0, None)
    F = np.sqrt(lam)[:, None] * V.T
    F = F[lam > 1e-14 * lam.max()]
    F.setflags(write=False)
    return F


def derive_optimal_weights(
    sub_specs: Sequence[StencilSpec], large_spec: StencilSpec, xi: float = 0.5
) -> np.ndarray:
    """Linear weights ``d`` with ``sum d_k p_k(xi) = p_large(xi)`` for all data."""
    big = list(large_spec.offsets) + [("g", o) for o in large_spec.gradient_offsets]
    cols = []
    for s in sub_specs:
        keys = list(s.offsets) + [("g", o) for o in s.gradient_offsets]
        if not set(keys) <= set(big):
            raise DerivationError(f"{s} is not contained in {large_spec}")
        col = np.zeros(len(big))
        for key, c in zip(keys, value_weights(s, xi)):
            col[big.index(key)] = c
        cols.append(col)
    M = np.array(cols).T
    target = value_weights(large_spec, xi)
    d, *_ = np.linalg.lstsq(M, target, rcond=None)
    if np.max(np.abs(M @ d - target)) > 1e-12:
        raise DerivationError("sub-stencils cannot reproduce the large-stencil value")
    return d


# Stencil families.  Offsets are relative to the reconstruction cell j; the
# target point for the left limit at x_{j+1/2} is xi = 1/2.

WENO5_LARGE = StencilSpec((-2, -1, 0, 1, 2))
WENO5_SUBS = (
    StencilSpec((-2, -1, 0)),
    StencilSpec((-1, 0, 1)),
    StencilSpec((0, 1, 2)),
)

SIXTH_LARGE = StencilSpec((-2, -1, 0, 1, 2, 3))
SIXTH_SUBS = (
    StencilSpec((-2, -1, 0)),
    StencilSpec((-1, 0, 1)),
    StencilSpec((-1, 0, 1, 2)),
    StencilSpec((0, 1, 2, 3)),
)

COMPACT_LARGE = StencilSpec((-1, 0, 1, 2), (-1, 0, 1, 2))
COMPACT_SUBS = (
    StencilSpec((-1, 0), (-1,)),
    StencilSpec((-1, 0, 1)),
    StencilSpec((0, 1, 2)),
)
