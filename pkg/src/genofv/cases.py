"""Registry of 1-D benchmark problems."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .euler import DEFAULT_GAS, GasModel, PrimitiveState
from .solver import BoundaryCondition, CellField, Problem

EXACT_KINDS = ("analytic_advection", "exact_riemann", "fine_mesh_reference", "none")


@dataclass(frozen=True)
class CaseConfig:
    name: str
    domain: tuple[float, float]
    initial: Callable  # x -> (rho, u, p)
    bc_left: BoundaryCondition
    bc_right: BoundaryCondition
    t_end: float
    meshes: tuple[int, ...]
    gamma: float = 1.4
    exact_kind: str = "none"
    # per-scheme TENO threshold overrides, e.g. {"TENO6": 1e-3}
    teno_ct_override: dict = field(default_factory=dict)
    riemann_split: float | None = None

    def __post_init__(self):
        if not self.t_end > 0:
            raise ValueError("t_end must be positive")
        if not self.meshes:
            raise ValueError("mesh list must be nonempty")
        if self.exact_kind not in EXACT_KINDS:
            raise ValueError(f"unknown exact-solution kind {self.exact_kind!r}")

    @property
    def gas(self) -> GasModel:
        return GasModel(self.gamma)

    @property
    def problem(self) -> Problem:
        return Problem(self.bc_left, self.bc_right, self.gas)

    @property
    def length(self) -> float:
        return self.domain[1] - self.domain[0]

    def initial_field(self, n: int) -> CellField:
        return CellField.from_primitive(n, *self.domain, self.initial, self.gas)


def _const(x, value):
    return np.full_like(np.asarray(x, dtype=float), value)


def _piecewise(x, splits, states):
    """``states[k]`` applies on ``splits[k-1] <= x < splits[k]``."""
    x = np.asarray(x, dtype=float)
    idx = np.searchsorted(np.asarray(splits), x, side="right")
    out = []
    for comp in range(3):
        vals = np.array([s[comp] for s in states], dtype=float)
        out.append(vals[idx])
    return tuple(out)


def sine_density(x):
    return 1.0 + 0.2 * np.sin(np.pi * np.asarray(x, dtype=float))


def _sine_advection():
    def initial(x):
        return sine_density(x), _const(x, 1.0), _const(x, 1.0)

    periodic = BoundaryCondition("periodic")
    return CaseConfig(
        "sine_advection", (0.0, 2.0), initial, periodic, periodic, 2.0,
        (6, 10, 20, 40, 80, 160), exact_kind="analytic_advection",
    )


GAUSSIAN_WIDTH = 1.5


def gaussian_density(x):
    x = np.asarray(x, dtype=float)
    return 1.0 + 0.5 * np.exp(-np.log(2.0) * x * x / GAUSSIAN_WIDTH**2)


def _entropy_gaussian():
    def initial(x):
        return gaussian_density(x), _const(x, 1.0), _const(x, 1.0)

    periodic = BoundaryCondition("periodic")
    return CaseConfig(
        "entropy_gaussian", (-800.0, 1000.0), initial, periodic, periodic, 400.0,
        (1800,), exact_kind="analytic_advection",
    )


SHU_OSHER_LEFT = (27.0 / 7.0, 4.0 * np.sqrt(35.0) / 9.0, 31.0 / 3.0)


def _shu_osher():
    def initial(x):
        x = np.asarray(x, dtype=float)
        left = x <= 1.0
        rho = np.where(left, SHU_OSHER_LEFT[0], 1.0 + 0.2 * np.sin(5.0 * x))
        u = np.where(left, SHU_OSHER_LEFT[1], 0.0)
        p = np.where(left, SHU_OSHER_LEFT[2], 1.0)
        return rho, u, p

    free = BoundaryCondition("free")
    return CaseConfig(
        "shu_osher", (0.0, 10.0), initial, free, free, 1.8, (200,),
        exact_kind="fine_mesh_reference",
    )


TITAREV_TORO_LEFT = (1.515695, 0.523346, 1.805)


def _titarev_toro():
    def initial(x):
        x = np.asarray(x, dtype=float)
        left = x <= -4.0
        rho = np.where(left, TITAREV_TORO_LEFT[0], 1.0 + 0.1 * np.sin(20.0 * np.pi * x))
        u = np.where(left, TITAREV_TORO_LEFT[1], 0.0)
        p = np.where(left, TITAREV_TORO_LEFT[2], 1.0)
        return rho, u, p

    inflow = BoundaryCondition("fixed_profile", lambda x, t: tuple(_const(x, v) for v in TITAREV_TORO_LEFT))
    # the undisturbed sine profile is stationary ahead of the shock
    wave = BoundaryCondition(
        "fixed_profile",
        lambda x, t: (1.0 + 0.1 * np.sin(20.0 * np.pi * np.asarray(x, dtype=float)), _const(x, 0.0), _const(x, 1.0)),
    )
    return CaseConfig(
        "titarev_toro", (-5.0, 5.0), initial, inflow, wave, 5.0, (1000,),
        exact_kind="fine_mesh_reference", teno_ct_override={"TENO6": 1e-3},
    )


def _blast_wave():
    def initial(x):
        return _piecewise(x, [0.1, 0.9], [(1.0, 0.0, 1000.0), (1.0, 0.0, 0.01), (1.0, 0.0, 100.0)])

    wall = BoundaryCondition("reflective")
    return CaseConfig("blast_wave", (0.0, 1.0), initial, wall, wall, 0.038, (400,))


SOD_LEFT = PrimitiveState(1.0, 0.0, 1.0)
SOD_RIGHT = PrimitiveState(0.125, 0.0, 0.1)


def _sod():
    def initial(x):
        return _piecewise(x, [0.5], [tuple(SOD_LEFT), tuple(SOD_RIGHT)])

    free = BoundaryCondition("free")
    return CaseConfig(
        "sod", (0.0, 1.0), initial, free, free, 0.2, (100,),
        exact_kind="exact_riemann", riemann_split=0.5,
    )


REGISTRY: dict[str, Callable[[], CaseConfig]] = {
    "sine_advection": _sine_advection,
    "entropy_gaussian": _entropy_gaussian,
    "shu_osher": _shu_osher,
    "titarev_toro": _titarev_toro,
    "blast_wave": _blast_wave,
    "sod": _sod,
}


def make_case(name: str) -> CaseConfig:
    try:
        return REGISTRY[name]()
    except KeyError:
        raise ValueError(f"unknown case {name!r}; available: {', '.join(REGISTRY)}") from None
