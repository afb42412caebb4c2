"""State algebra for the one-dimensional Euler equations with a gamma-law gas.

Every function accepts scalars or numpy arrays for the state fields and
works elementwise, so the same code serves single states and whole grids.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np


class AdmissibilityError(ValueError):
    """Raised when a state has nonpositive density or pressure.

    ``index`` is the flat index of the first offending entry (``None`` for
    scalar input); ``stage`` is filled in by the time integrator.
    """

    def __init__(self, message: str, index: int | None = None, stage: int | None = None):
        super().__init__(message)
        self.index = index
        self.stage = stage


@dataclass(frozen=True)
class GasModel:
    gamma: float = 1.4

    def __post_init__(self):
        if not self.gamma > 1.0:
            raise ValueError(f"gamma must exceed 1, got {self.gamma}")


DEFAULT_GAS = GasModel()


class PrimitiveState(NamedTuple):
    rho: np.ndarray | float
    u: np.ndarray | float
    p: np.ndarray | float


class ConservedState(NamedTuple):
    rho: np.ndarray | float
    mom: np.ndarray | float
    E: np.ndarray | float


class CharBasis(NamedTuple):
    """Left/right eigenvector matrices, shape ``(..., 3, 3)``.

    Columns of ``right`` are the eigenvectors for the waves u-c, u, u+c;
    ``left`` is its inverse.
    """

    left: np.ndarray
    right: np.ndarray

    def project(self, w):
        return np.einsum("...ab,...b->...a", self.left, w)

    def lift(self, v):
        return np.einsum("...ab,...b->...a", self.right, v)


def _first_bad(mask) -> int | None:
    mask = np.asarray(mask)
    if mask.ndim == 0:
        return None
    return int(np.flatnonzero(mask.ravel())[0])


def check_admissible(s: PrimitiveState, what: str = "state") -> None:
    rho = np.asarray(s.rho)
    p = np.asarray(s.p)
    # NaN fails both comparisons, so it is caught here as well
    bad = ~((rho > 0.0) & (p > 0.0))
    if np.any(bad):
        idx = _first_bad(bad)
        where = "" if idx is None else f" at index {idx}"
        r = rho.ravel()[idx or 0]
        q = p.ravel()[idx or 0]
        raise AdmissibilityError(f"inadmissible {what}{where}: rho={r!r}, p={q!r}", index=idx)


def prim_to_cons(s: PrimitiveState, g: GasModel = DEFAULT_GAS) -> ConservedState:
    check_admissible(s, "primitive state")
    rho, u, p = (np.asarray(v, dtype=float) for v in s)
    mom = rho * u
    E = p / (g.gamma - 1.0) + 0.5 * rho * u * u
    return ConservedState(rho, mom, E)


def cons_to_prim(w: ConservedState, g: GasModel = DEFAULT_GAS) -> PrimitiveState:
    rho, mom, E = (np.asarray(v, dtype=float) for v in w)
    with np.errstate(divide="ignore", invalid="ignore"):
        u = mom / rho
        p = (g.gamma - 1.0) * (E - 0.5 * mom * u)
    s = PrimitiveState(rho, u, p)
    check_admissible(s, "conserved state")
    return s


def sound_speed(s: PrimitiveState, g: GasModel = DEFAULT_GAS):
    check_admissible(s)
    return np.sqrt(g.gamma * np.asarray(s.p, dtype=float) / np.asarray(s.rho, dtype=float))


def physical_flux(w: ConservedState, g: GasModel = DEFAULT_GAS) -> np.ndarray:
    """Euler flux ``(rho u, rho u^2 + p, u (E + p))`` stacked on axis 0."""
    rho, u, p = cons_to_prim(w, g)
    E = np.asarray(w.E, dtype=float)
    return np.stack([rho * u, rho * u * u + p, u * (E + p)])


def roe_average(left: PrimitiveState, right: PrimitiveState, g: GasModel = DEFAULT_GAS):
    """Roe-averaged velocity, total enthalpy and sound speed."""
    check_admissible(left, "left state")
    check_admissible(right, "right state")
    gm1 = g.gamma - 1.0
    rl, ul, pl = (np.asarray(v, dtype=float) for v in left)
    rr, ur, pr = (np.asarray(v, dtype=float) for v in right)
    hl = g.gamma / gm1 * pl / rl + 0.5 * ul * ul
    hr = g.gamma / gm1 * pr / rr + 0.5 * ur * ur
    sl = np.sqrt(rl)
    sr = np.sqrt(rr)
    u = (sl * ul + sr * ur) / (sl + sr)
    H = (sl * hl + sr * hr) / (sl + sr)
    c = np.sqrt(gm1 * (H - 0.5 * u * u))
    return u, H, c


def eigenvectors(u, H, c, g: GasModel = DEFAULT_GAS) -> CharBasis:
    u = np.asarray(u, dtype=float)
    H = np.asarray(H, dtype=float)
    c = np.asarray(c, dtype=float)
    one = np.ones_like(u)
    right = np.stack(
        [
            np.stack([one, one, one], axis=-1),
            np.stack([u - c, u, u + c], axis=-1),
            np.stack([H - u * c, 0.5 * u * u, H + u * c], axis=-1),
        ],
        axis=-2,
    )
    b1 = (g.gamma - 1.0) / (c * c)
    b2 = 0.5 * b1 * u * u
    left = np.stack(
        [
            np.stack([0.5 * (b2 + u / c), -0.5 * (b1 * u + 1.0 / c), 0.5 * b1], axis=-1),
            np.stack([1.0 - b2, b1 * u, -b1], axis=-1),
            np.stack([0.5 * (b2 - u / c), -0.5 * (b1 * u - 1.0 / c), 0.5 * b1], axis=-1),
        ],
        axis=-2,
    )
    return CharBasis(left, right)


def roe_basis(left: PrimitiveState, right: PrimitiveState, g: GasModel = DEFAULT_GAS) -> CharBasis:
    return eigenvectors(*roe_average(left, right, g), g)


def max_signal_speed(field, g: GasModel = DEFAULT_GAS) -> float:
    """Largest ``|u| + c`` over the interior cells of ``field``.

    ``field`` may be a ``CellField`` or a conserved array of shape ``(3, n)``.
    """
    data = field.interior if hasattr(field, "interior") else np.asarray(field, dtype=float)
    s = cons_to_prim(ConservedState(*data), g)
    return float(np.max(np.abs(s.u) + sound_speed(s, g)))
