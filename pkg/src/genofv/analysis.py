"""Error norms, convergence tables, reference solutions and the chi sweep."""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .cases import CaseConfig, gaussian_density, make_case, sine_density
from .euler import AdmissibilityError, PrimitiveState, prim_to_cons
from .geno import GenoParams, TenoParams, chi_scenario_sweep
from .riemann import exact_riemann
from .solver import CellField, RunDiagnostics, SchemeConfig, advance_to_time

VARIABLES = {"rho": 0, "mom": 1, "E": 2}
REFERENCE_SCHEME = "GENO6"
DEFAULT_REFERENCE_CELLS = {"shu_osher": 4000, "titarev_toro": 8000, "sod": 800, "blast_wave": 3200}


def scheme_config(
    case: CaseConfig,
    scheme: str,
    cfl: float = 0.5,
    projection: str = "characteristic",
    teno_ct: float | None = None,
    geno_c: float = 20.0,
    tau_span: str = "three",
) -> SchemeConfig:
    if teno_ct is None:
        teno_ct = case.teno_ct_override.get(scheme, TenoParams().C_T)
    return SchemeConfig(
        scheme, projection, geno=GenoParams(C=geno_c, tau_span=tau_span), teno=TenoParams(C_T=teno_ct), cfl=cfl
    )


def simulate(
    case: CaseConfig | str,
    scheme: str,
    n: int,
    t_end: float | None = None,
    **cfg_kwargs,
) -> tuple[CellField, RunDiagnostics]:
    if isinstance(case, str):
        case = make_case(case)
    cfg = scheme_config(case, scheme, **cfg_kwargs)
    return advance_to_time(case.initial_field(n), case.t_end if t_end is None else t_end, cfg, case.problem)


@dataclass
class ErrorReport:
    n: int
    scheme: str
    l1: float
    l2: float
    linf: float
    variable: str = "rho"


def restrict(fine: CellField, n: int) -> np.ndarray:
    """Conservative average of the interior of ``fine`` onto ``n`` cells."""
    if fine.n % n:
        raise ValueError(f"fine mesh of {fine.n} cells is not an integer multiple of {n}")
    ratio = fine.n // n
    return fine.interior.reshape(3, n, ratio).mean(axis=2)


def exact_cell_averages(case: CaseConfig, n: int, t: float | None = None) -> np.ndarray:
    """Exact conserved cell averages for cases with a closed-form solution."""
    t = case.t_end if t is None else t
    x0, x1 = case.domain
    edges = np.linspace(x0, x1, n + 1)
    if case.exact_kind == "analytic_advection":
        rho0 = sine_density if case.name == "sine_advection" else gaussian_density
        length = x1 - x0

        def prim(x):
            shifted = np.mod(x - t - x0, length) + x0
            return rho0(shifted), np.ones_like(x), np.ones_like(x)

        return _conserved_averages(prim, edges, case)
    if case.exact_kind == "exact_riemann":
        left = PrimitiveState(*(float(v[0]) for v in case.initial(np.array([x0]))))
        right = PrimitiveState(*(float(v[0]) for v in case.initial(np.array([x1]))))

        def prim(x):
            s = exact_riemann(left, right, case.gas, (np.asarray(x) - case.riemann_split) / t)
            return s.rho, s.u, s.p

        # composite rule: the solution has jumps inside cells
        sub = np.linspace(x0, x1, 8 * n + 1)
        return _conserved_averages(prim, sub, case).reshape(3, n, 8).mean(axis=2)
    raise ValueError(f"case {case.name!r} has no closed-form solution")


def _conserved_averages(prim: Callable, edges, case: CaseConfig) -> np.ndarray:
    x, w = np.polynomial.legendre.leggauss(8)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    pts = mid[:, None] + half[:, None] * x[None, :]
    cons = prim_to_cons(PrimitiveState(*prim(pts)), case.gas)
    return np.stack([0.5 * (np.asarray(c) @ w) for c in cons])


def error_norms(
    numerical: CellField,
    exact,
    scheme: str = "",
    variable: str = "rho",
) -> ErrorReport:
    """L1/L2/Linf cell-average errors.

    ``exact`` is a conserved ``(3, n)`` array of cell averages, a finer
    ``CellField`` (restricted conservatively), or a callable giving the
    exact cell averages of ``variable`` from the cell edges.
    """
    k = VARIABLES[variable]
    n, h = numerical.n, numerical.h
    if isinstance(exact, CellField):
        ref = restrict(exact, n)[k]
    elif callable(exact):
        ref = np.asarray(exact(numerical.edges), dtype=float)
    else:
        ref = np.asarray(exact, dtype=float)
        ref = ref[k] if ref.ndim == 2 else ref
    if ref.shape != (n,):
        raise ValueError(f"reference has shape {ref.shape}, expected ({n},)")
    e = numerical.interior[k] - ref
    # fixed summation order keeps the norms reproducible
    l1 = h * math.fsum(np.abs(e))
    l2 = math.sqrt(h * math.fsum(e * e))
    linf = float(np.max(np.abs(e)))
    return ErrorReport(n, scheme, l1, l2, linf, variable)


@dataclass
class ConvergenceTable:
    scheme: str
    rows: list[tuple[int, float, float | None]] = field(default_factory=list)
    failures: dict[int, str] = field(default_factory=dict)  # mesh -> run error

    @classmethod
    def from_errors(
        cls, scheme: str, meshes: Sequence[int], errors: Sequence[float], failures: dict | None = None
    ) -> "ConvergenceTable":
        meshes = list(meshes)
        for a, b in zip(meshes, meshes[1:]):
            if b != 2 * a:
                raise ValueError(f"meshes must double: {a} -> {b}")
        rows = []
        for i, (n, e) in enumerate(zip(meshes, errors)):
            order = None
            if i and math.isfinite(e) and math.isfinite(errors[i - 1]):
                order = observed_order(errors[i - 1], e)
            rows.append((n, float(e), order))
        return cls(scheme, rows, dict(failures or {}))

    @property
    def orders(self) -> list[float]:
        return [o for _, _, o in self.rows if o is not None]

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("scheme,N,l1_error,order,note\n")
        for n, e, o in self.rows:
            note = self.failures.get(n, "").replace(",", ";")
            buf.write(f"{self.scheme},{n},{e:.17g},{'' if o is None else f'{o:.17g}'},{note}\n")
        return buf.getvalue()


def observed_order(coarse_error: float, fine_error: float) -> float:
    """``log2(e_2h / e_h)``; zero when the errors coincide."""
    if coarse_error == fine_error:
        return 0.0
    return math.log2(coarse_error / fine_error)


def convergence_study(
    case: CaseConfig | str,
    schemes: Sequence[str],
    meshes: Sequence[int],
    t_end: float | None = None,
    variable: str = "rho",
    **cfg_kwargs,
) -> dict[str, ConvergenceTable]:
    if isinstance(case, str):
        case = make_case(case)
    t = case.t_end if t_end is None else t_end
    tables = {}
    for scheme in schemes:
        errors, failures = [], {}
        for n in meshes:
            try:
                out, _ = simulate(case, scheme, n, t_end=t, **cfg_kwargs)
            except (AdmissibilityError, FloatingPointError) as exc:
                errors.append(math.nan)
                failures[n] = str(exc)
                continue
            errors.append(error_norms(out, exact_cell_averages(case, n, t), scheme, variable).l1)
        tables[scheme] = ConvergenceTable.from_errors(scheme, meshes, errors, failures)
    return tables


def fine_mesh_reference(
    case: CaseConfig | str, n_ref: int | None = None, compare_n: int | None = None, **cfg_kwargs
) -> CellField:
    """High-resolution run with the reference scheme.

    ``compare_n`` is the finest mesh the reference will be compared
    against; it must divide ``n_ref`` with a ratio of at least 8.
    """
    if isinstance(case, str):
        case = make_case(case)
    n_ref = n_ref or DEFAULT_REFERENCE_CELLS.get(case.name)
    if n_ref is None:
        raise ValueError(f"no default reference resolution for {case.name!r}")
    if compare_n is not None and (n_ref < 8 * compare_n or n_ref % compare_n):
        raise ValueError(f"reference mesh {n_ref} must be an integer multiple >= 8 of {compare_n}")
    out, _ = simulate(case, REFERENCE_SCHEME, n_ref, **cfg_kwargs)
    return out


def self_convergence(case: CaseConfig | str, n_ref: int, coarse: CellField | None = None, fine: CellField | None = None) -> float:
    """L1(rho) difference between references at ``n_ref`` and ``2 n_ref``."""
    coarse = coarse or fine_mesh_reference(case, n_ref)
    fine = fine or fine_mesh_reference(case, 2 * n_ref)
    return error_norms(coarse, fine).l1


def chi_report(
    scenario: str,
    methods: Sequence[str] = ("GENO", "WENO-Z", "TENO"),
    phi_min: float = 1.0,
    phi_max: float = 1e8,
    points: int = 81,
    multiplicity: str = "1pp",
    geno: GenoParams = GenoParams(),
    teno: TenoParams = TenoParams(),
) -> str:
    """CSV of (phi, chi per method) over log-spaced phi."""
    phi = np.logspace(math.log10(phi_min), math.log10(phi_max), points)
    cols = [chi_scenario_sweep(scenario, phi, m, multiplicity, geno, teno)[:, 1] for m in methods]
    buf = io.StringIO()
    buf.write(f"# scenario={scenario} multiplicity={multiplicity}\n")
    buf.write("phi," + ",".join(f"chi_{m}" for m in methods) + "\n")
    for i, p in enumerate(phi):
        buf.write(f"{p:.17g}," + ",".join(f"{c[i]:.17g}" for c in cols) + "\n")
    return buf.getvalue()
