"""Method-of-lines finite-volume driver for the 1-D Euler equations.

Cell data are stored as a ``(3, n + 2 * n_ghost)`` array of conserved
variables.  Interfaces are numbered ``0..n``; interface ``i`` separates
interior cells ``i - 1`` and ``i``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .euler import (
    DEFAULT_GAS,
    AdmissibilityError,
    ConservedState,
    GasModel,
    PrimitiveState,
    cons_to_prim,
    eigenvectors,
    max_signal_speed,
    physical_flux,
    prim_to_cons,
    roe_average,
    sound_speed,
)
from .geno import GenoParams, TenoParams
from .schemes import SCHEMES, Reconstructor
from .stencils import cell_averages

N_GHOST = 3


@dataclass
class CellField:
    n: int
    x_min: float
    x_max: float
    data: np.ndarray
    n_ghost: int = N_GHOST

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=float)
        if self.n_ghost < 3:
            raise ValueError("at least three ghost layers are required")
        if not self.x_max > self.x_min:
            raise ValueError("empty domain")
        if self.data.shape != (3, self.n + 2 * self.n_ghost):
            raise ValueError(f"data shape {self.data.shape} does not match n={self.n}")

    @property
    def h(self) -> float:
        return (self.x_max - self.x_min) / self.n

    @property
    def interior(self) -> np.ndarray:
        g = self.n_ghost
        return self.data[:, g : g + self.n]

    @property
    def edges(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n + 1)

    @property
    def centers(self) -> np.ndarray:
        return self.x_min + (np.arange(self.n) + 0.5) * self.h

    def ghost_edges(self, side: str) -> np.ndarray:
        g, h = self.n_ghost, self.h
        if side == "left":
            return self.x_min + h * np.arange(-g, 1)
        return self.x_max + h * np.arange(0, g + 1)

    def copy(self) -> "CellField":
        return replace(self, data=self.data.copy())

    def with_interior(self, interior: np.ndarray) -> "CellField":
        data = np.zeros_like(self.data)
        g = self.n_ghost
        data[:, g : g + self.n] = interior
        return replace(self, data=data)

    def primitive(self, g: GasModel = DEFAULT_GAS) -> PrimitiveState:
        return cons_to_prim(ConservedState(*self.interior), g)

    def totals(self) -> np.ndarray:
        """Integrals of mass, momentum and energy over the interior."""
        return self.h * np.sum(self.interior, axis=1)

    @classmethod
    def from_primitive(cls, n, x_min, x_max, profile: Callable, g: GasModel = DEFAULT_GAS, npts: int = 8):
        """Cell averages of the conserved variables of ``profile(x)``."""
        edges = np.linspace(x_min, x_max, n + 1)
        out = np.zeros((3, n + 2 * N_GHOST))
        for k in range(3):
            out[k, N_GHOST : N_GHOST + n] = cell_averages(
                lambda x: np.asarray(prim_to_cons(PrimitiveState(*profile(x)), g)[k]) * np.ones_like(x),
                edges,
                npts,
            )
        return cls(n, x_min, x_max, out)


BC_KINDS = ("periodic", "free", "reflective", "fixed_profile")


@dataclass(frozen=True)
class BoundaryCondition:
    kind: str
    profile: Callable | None = None  # (x, t) -> (rho, u, p), for fixed_profile

    def __post_init__(self):
        if self.kind not in BC_KINDS:
            raise ValueError(f"unsupported boundary kind {self.kind!r}; expected one of {BC_KINDS}")
        if self.kind == "fixed_profile" and self.profile is None:
            raise ValueError("fixed_profile boundary needs a profile function")


def fill_ghosts(
    field: CellField,
    bc_left: BoundaryCondition,
    bc_right: BoundaryCondition,
    t: float = 0.0,
    g: GasModel = DEFAULT_GAS,
) -> CellField:
    out = field.copy()
    _fill_in_place(out, bc_left, bc_right, t, g)
    return out


def _fill_in_place(field: CellField, bc_left, bc_right, t, g) -> None:
    d, n, ng = field.data, field.n, field.n_ghost
    for side, bc in (("left", bc_left), ("right", bc_right)):
        ghost = slice(0, ng) if side == "left" else slice(ng + n, 2 * ng + n)
        if bc.kind == "periodic":
            src = slice(n, n + ng) if side == "left" else slice(ng, 2 * ng)
            d[:, ghost] = d[:, src]
        elif bc.kind in ("free", "reflective"):
            if bc.kind == "free":
                edge = ng if side == "left" else ng + n - 1
                d[:, ghost] = d[:, edge : edge + 1]
            else:
                if side == "left":
                    mirror = d[:, 2 * ng - 1 : ng - 1 : -1]
                else:
                    mirror = d[:, ng + n - 1 : n - 1 : -1]
                d[:, ghost] = mirror
                d[1, ghost] *= -1.0
        elif bc.kind == "fixed_profile":
            edges = field.ghost_edges(side)
            prof = bc.profile
            for k in range(3):
                d[k, ghost] = cell_averages(
                    lambda x: np.asarray(prim_to_cons(PrimitiveState(*prof(x, t)), g)[k]) * np.ones_like(x),
                    edges,
                )
        else:
            raise ValueError(f"unsupported boundary kind {bc.kind!r}")


@dataclass
class SchemeConfig:
    reconstruction: str = "GENO5"
    projection: str = "characteristic"
    geno: GenoParams = field(default_factory=GenoParams)
    teno: TenoParams = field(default_factory=TenoParams)
    cfl: float = 0.5
    backend: str | None = None  # "numba" (default when available) or "numpy"

    def __post_init__(self):
        if self.reconstruction not in SCHEMES:
            raise ValueError(f"unknown reconstruction {self.reconstruction!r}; expected one of {SCHEMES}")
        if self.projection not in ("characteristic", "componentwise"):
            raise ValueError(f"unknown projection {self.projection!r}")
        if not 0.0 < self.cfl <= 1.0:
            raise ValueError(f"cfl must lie in (0, 1], got {self.cfl}")
        extra = {} if self.backend is None else {"backend": self.backend}
        self._kernel = Reconstructor(self.reconstruction, self.geno, self.teno, **extra)

    @property
    def kernel(self) -> Reconstructor:
        return self._kernel


@dataclass
class Diagnostics:
    """Counters shared by the stages of a run."""

    guard_activations: int = 0
    min_chi: float = 1.0
    interfaces_with_chi_below_one: int = 0


@dataclass
class InterfaceStates:
    left: np.ndarray  # (3, n+1) conserved
    right: np.ndarray
    chi_left: np.ndarray | None = None
    chi_right: np.ndarray | None = None


def reconstruct_interfaces(field: CellField, cfg: SchemeConfig, g: GasModel = DEFAULT_GAS) -> InterfaceStates:
    """Left and right conserved limits at every interface.

    Ghost cells must already be filled.  The GENO path values of each
    characteristic field are returned as ``(3, n+1)`` arrays when the
    scheme provides them.
    """
    ng, n = field.n_ghost, field.n
    d = field.data[:, ng - 3 : ng + n + 3]
    kernel = cfg.kernel
    basis = None
    if cfg.projection == "characteristic":
        cl = d[:, 2 : n + 3]
        cr = d[:, 3 : n + 4]
        basis = eigenvectors(*roe_average(cons_to_prim(ConservedState(*cl), g), cons_to_prim(ConservedState(*cr), g), g), g)
    if kernel.backend == "numba":
        ql, qr, chi_l, chi_r = kernel.interfaces(d, basis)
        if not kernel.scheme.startswith("GENO"):
            chi_l = chi_r = None
        return InterfaceStates(ql, qr, chi_l, chi_r)
    windows = sliding_window_view(d, 6, axis=1)  # (3, n+1, 6)
    if basis is not None:
        v = np.einsum("mab,bmk->amk", basis.left, windows)
    else:
        v = windows
    ql, qr, chi_l, chi_r = kernel.both_sides(v.reshape(-1, 6))
    ql = ql.reshape(3, n + 1)
    qr = qr.reshape(3, n + 1)
    if basis is not None:
        ql = np.einsum("mab,bm->am", basis.right, ql)
        qr = np.einsum("mab,bm->am", basis.right, qr)
    if chi_l is not None:
        chi_l = chi_l.reshape(3, n + 1)
        chi_r = chi_r.reshape(3, n + 1)
    return InterfaceStates(ql, qr, chi_l, chi_r)


def _admissible_mask(w: np.ndarray, g: GasModel) -> np.ndarray:
    rho, mom, E = w
    with np.errstate(divide="ignore", invalid="ignore"):
        p = (g.gamma - 1.0) * (E - 0.5 * mom * mom / rho)
    return (rho > 0.0) & (p > 0.0) & np.isfinite(p)


def positivity_guard(
    left: np.ndarray,
    right: np.ndarray,
    cell_left: np.ndarray,
    cell_right: np.ndarray,
    g: GasModel = DEFAULT_GAS,
):
    """Fall back to first-order states wherever either limit is inadmissible.

    Returns ``(left, right, activations)``.
    """
    bad = ~(_admissible_mask(left, g) & _admissible_mask(right, g))
    count = int(np.count_nonzero(bad))
    if count:
        left = np.where(bad, cell_left, left)
        right = np.where(bad, cell_right, right)
    return left, right, count


def hllc_flux(left: PrimitiveState, right: PrimitiveState, g: GasModel = DEFAULT_GAS) -> np.ndarray:
    """HLLC flux with Davis wave-speed bounds, stacked on axis 0."""
    rl, ul, pl = (np.asarray(v, dtype=float) for v in left)
    rr, ur, pr = (np.asarray(v, dtype=float) for v in right)
    cl = sound_speed(left, g)
    cr = sound_speed(right, g)
    gm1 = g.gamma - 1.0
    El = pl / gm1 + 0.5 * rl * ul * ul
    Er = pr / gm1 + 0.5 * rr * ur * ur

    sl = np.minimum(ul - cl, ur - cr)
    sr = np.maximum(ul + cl, ur + cr)
    ml = rl * (sl - ul)
    mr = rr * (sr - ur)
    s_star = (pr - pl + ul * ml - ur * mr) / (ml - mr)

    fl = np.stack([rl * ul, rl * ul * ul + pl, ul * (El + pl)])
    fr = np.stack([rr * ur, rr * ur * ur + pr, ur * (Er + pr)])
    wl = np.stack([rl, rl * ul, El])
    wr = np.stack([rr, rr * ur, Er])

    def star(rho, u, p, E, s):
        fac = rho * (s - u) / (s - s_star)
        return fac * np.stack(
            [np.ones_like(fac), s_star, E / rho + (s_star - u) * (s_star + p / (rho * (s - u)))]
        )

    with np.errstate(divide="ignore", invalid="ignore"):
        fl_star = fl + sl * (star(rl, ul, pl, El, sl) - wl)
        fr_star = fr + sr * (star(rr, ur, pr, Er, sr) - wr)
    return np.where(
        sl >= 0.0,
        fl,
        np.where(s_star >= 0.0, fl_star, np.where(sr > 0.0, fr_star, fr)),
    )


@dataclass
class Problem:
    """Boundary conditions and gas model for a run."""

    bc_left: BoundaryCondition
    bc_right: BoundaryCondition
    gas: GasModel = DEFAULT_GAS


def spatial_residual(
    field: CellField,
    cfg: SchemeConfig,
    t: float,
    problem: Problem,
    diag: Diagnostics | None = None,
) -> np.ndarray:
    """``-(F_{i+1/2} - F_{i-1/2}) / h`` for the interior cells, shape ``(3, n)``.

    Ghosts of ``field`` are refilled in place for time ``t``.
    """
    g = problem.gas
    _fill_in_place(field, problem.bc_left, problem.bc_right, t, g)
    states = reconstruct_interfaces(field, cfg, g)
    ng, n = field.n_ghost, field.n
    cell_l = field.data[:, ng - 1 : ng + n]
    cell_r = field.data[:, ng : ng + n + 1]
    wl, wr, count = positivity_guard(states.left, states.right, cell_l, cell_r, g)
    if diag is not None:
        diag.guard_activations += count
        if states.chi_left is not None:
            chi = np.minimum(states.chi_left, states.chi_right)
            diag.min_chi = min(diag.min_chi, float(np.min(chi)))
            diag.interfaces_with_chi_below_one += int(np.count_nonzero(np.any(chi < 1.0, axis=0)))
    flux = hllc_flux(cons_to_prim(ConservedState(*wl), g), cons_to_prim(ConservedState(*wr), g), g)
    return -(flux[:, 1:] - flux[:, :-1]) / field.h


def compute_dt(
    field: CellField,
    cfg: SchemeConfig,
    g: GasModel = DEFAULT_GAS,
    t: float | None = None,
    t_end: float | None = None,
) -> float:
    speed = max_signal_speed(field, g)
    if not speed > 0.0:
        raise ValueError("zero signal speed; time step undefined")
    dt = cfg.cfl * field.h / speed
    if t is not None and t_end is not None and t + dt > t_end:
        dt = t_end - t
    return dt


RK4_STAGES = ((0.0, 0.0), (0.5, 0.5), (0.5, 0.5), (1.0, 1.0))  # (time fraction, rate weight)


def rk4_integrate(u0, dt: float, rate: Callable, check: Callable | None = None):
    """One classical RK4 step of ``du/dt = rate(u, stage_time_fraction)``.

    ``check(u, stage)`` is called on every intermediate state and on the
    result (stage 4).
    """
    k = []
    for stage, (c, a) in enumerate(RK4_STAGES):
        u = u0
        if stage:
            u = u0 + a * dt * k[-1]
            if check is not None:
                check(u, stage)
        k.append(rate(u, c))
    u1 = u0 + dt / 6.0 * (k[0] + 2.0 * k[1] + 2.0 * k[2] + k[3])
    if check is not None:
        check(u1, 4)
    return u1


def rk4_step(
    field: CellField,
    dt: float,
    cfg: SchemeConfig,
    t: float,
    problem: Problem,
    diag: Diagnostics | None = None,
) -> CellField:
    if not dt > 0.0:
        raise ValueError("dt must be positive")
    g = problem.gas
    work = field.copy()

    def rate(u, c):
        work.interior[:] = u
        return spatial_residual(work, cfg, t + c * dt, problem, diag)

    u1 = rk4_integrate(field.interior.copy(), dt, rate, lambda u, stage: _check_stage(u, g, stage))
    out = field.copy()
    out.interior[:] = u1
    _fill_in_place(out, problem.bc_left, problem.bc_right, t + dt, g)
    return out


def _check_stage(w: np.ndarray, g: GasModel, stage: int) -> None:
    ok = _admissible_mask(w, g)
    if not np.all(ok):
        idx = int(np.flatnonzero(~ok)[0])
        raise AdmissibilityError(f"inadmissible state in cell {idx} at RK stage {stage}", index=idx, stage=stage)


@dataclass
class StepRecord:
    step: int
    t: float
    dt: float
    min_rho: float
    min_p: float
    guard_activations: int


@dataclass
class RunDiagnostics:
    steps: int = 0
    min_rho: float = np.inf
    max_rho: float = -np.inf
    min_p: float = np.inf
    max_p: float = -np.inf
    guard_activations: int = 0
    min_chi: float = 1.0
    wall_time: float = 0.0
    history: list[StepRecord] = field(default_factory=list)

    def observe(self, field: CellField, g: GasModel) -> tuple[float, float]:
        s = field.primitive(g)
        rmin, pmin = float(np.min(s.rho)), float(np.min(s.p))
        self.min_rho = min(self.min_rho, rmin)
        self.max_rho = max(self.max_rho, float(np.max(s.rho)))
        self.min_p = min(self.min_p, pmin)
        self.max_p = max(self.max_p, float(np.max(s.p)))
        return rmin, pmin


def advance_to_time(
    field: CellField,
    t_end: float,
    cfg: SchemeConfig,
    problem: Problem,
    t0: float = 0.0,
    callback: Callable[[CellField, float], None] | None = None,
):
    """March ``field`` from ``t0`` to ``t_end`` exactly.

    Returns ``(field, RunDiagnostics)``.
    """
    if t_end < t0:
        raise ValueError("t_end precedes the start time")
    g = problem.gas
    start = time.perf_counter()
    rd = RunDiagnostics()
    diag = Diagnostics()
    cur = fill_ghosts(field, problem.bc_left, problem.bc_right, t0, g)
    rd.observe(cur, g)
    t = t0

    def finish():
        rd.guard_activations = diag.guard_activations
        rd.min_chi = diag.min_chi
        rd.wall_time = time.perf_counter() - start

    while t < t_end:
        dt = compute_dt(cur, cfg, g, t, t_end)
        before = diag.guard_activations
        try:
            cur = rk4_step(cur, dt, cfg, t, problem, diag)
        except (AdmissibilityError, FloatingPointError) as exc:
            # partial diagnostics travel with the error for failure reports
            finish()
            exc.diagnostics = rd
            raise
        # land exactly on t_end despite round-off in the accumulated sum
        t = t_end if t_end - (t + dt) <= 1e-12 * max(1.0, abs(t_end)) else t + dt
        rd.steps += 1
        rmin, pmin = rd.observe(cur, g)
        rd.history.append(StepRecord(rd.steps, t, dt, rmin, pmin, diag.guard_activations - before))
        if callback is not None:
            callback(cur, t)
    finish()
    return cur, rd
