"""Command-line benchmark harness.

Subcommands::

    run          one case, one scheme, one mesh
    convergence  error table over doubling meshes
    chi-sweep    linearity proportion versus indicator ratio
    compare      several schemes on one case, density overlay
"""

from __future__ import annotations

import argparse
import subprocess
import sys
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .analysis import (
    ErrorReport,
    chi_report,
    convergence_study,
    error_norms,
    exact_cell_averages,
    fine_mesh_reference,
    scheme_config,
)
from .cases import REGISTRY, CaseConfig, make_case
from .euler import AdmissibilityError, ConservedState, cons_to_prim
from .geno import GenoParams
from .schemes import SCHEMES
from .solver import CellField, RunDiagnostics, advance_to_time

EXIT_OK, EXIT_RUN_FAILURE, EXIT_USAGE = 0, 1, 2


def build_id() -> str:
    """git-describe-style identifier, falling back to the package version."""
    try:
        out = subprocess.run(
            ["git", "describe", "--always", "--dirty", "--tags"],
            cwd=Path(__file__).resolve().parent,
            capture_output=True,
            text=True,
            timeout=5,
        )
        if out.returncode == 0 and out.stdout.strip():
            return f"{__version__}+{out.stdout.strip()}"
    except (OSError, subprocess.SubprocessError):
        pass
    return __version__


def _fmt(x) -> str:
    return f"{float(x):.17g}"


def _header(meta: dict) -> str:
    return "".join(f"# {k}={v}\n" for k, v in meta.items())


def _write(path: Path, meta: dict, columns: list[str], rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(_header(meta))
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(r if isinstance(r, str) else _fmt(r) for r in row) + "\n")


def solution_rows(field: CellField, case: CaseConfig):
    s = cons_to_prim(ConservedState(*field.interior), case.gas)
    return zip(field.centers, s.rho, s.u, s.p)


def _raw_rows(field: CellField):
    # conserved data, safe for inadmissible states
    return zip(field.centers, *field.interior)


def write_solution(path: Path, field: CellField, case: CaseConfig, meta: dict) -> None:
    _write(path, meta, ["x", "rho", "u", "p"], solution_rows(field, case))


def write_diagnostics(path: Path, diag: RunDiagnostics, meta: dict) -> None:
    extra = dict(meta)
    extra.update(
        steps=diag.steps,
        guard_activations=diag.guard_activations,
        min_rho=_fmt(diag.min_rho),
        min_p=_fmt(diag.min_p),
        min_chi=_fmt(diag.min_chi),
    )
    rows = ((str(r.step), r.t, r.dt, r.min_rho, r.min_p, str(r.guard_activations)) for r in diag.history)
    _write(path, extra, ["step", "t", "dt", "min_rho", "min_p", "guard_activations"], rows)


@dataclass
class RunOutcome:
    field: CellField
    diagnostics: RunDiagnostics
    report: ErrorReport | None


def run_case(
    case: CaseConfig | str,
    scheme: str,
    n: int,
    out_dir: Path | str,
    cfl: float = 0.5,
    projection: str = "characteristic",
    teno_ct: float | None = None,
    geno_c: float = 20.0,
    t_end: float | None = None,
    reference_cells: int | None = None,
    tau_span: str = "three",
) -> RunOutcome:
    """Run one configuration and write its CSV artifacts into ``out_dir``.

    On an admissibility failure the last accepted state is written to
    ``*_failure.csv`` and the error is re-raised.
    """
    if isinstance(case, str):
        case = make_case(case)
    out_dir = Path(out_dir)
    cfg = scheme_config(case, scheme, cfl=cfl, projection=projection, teno_ct=teno_ct, geno_c=geno_c, tau_span=tau_span)
    t_end = case.t_end if t_end is None else t_end
    meta = {
        "case": case.name,
        "scheme": scheme,
        "N": n,
        "cfl": cfl,
        "projection": projection,
        "t_end": t_end,
        "gamma": case.gamma,
        "geno": f"C={cfg.geno.C} r={cfg.geno.r} r_L={cfg.geno.r_L} eps={cfg.geno.eps} C0={cfg.geno.C0} tau_span={cfg.geno.tau_span}",
        "teno": f"exponent={cfg.teno.exponent} C_T={cfg.teno.C_T}",
        "build": build_id(),
    }
    stem = f"{case.name}_{scheme}_N{n}"
    last = {"field": case.initial_field(n), "t": 0.0}

    def keep(field, t):
        last["field"], last["t"] = field, t

    try:
        field, diag = advance_to_time(case.initial_field(n), t_end, cfg, case.problem, callback=keep)
    except (AdmissibilityError, FloatingPointError) as exc:
        dump = dict(meta, failure=str(exc), t_last_valid=_fmt(last["t"]))
        _write(out_dir / f"{stem}_failure.csv", dump, ["x", "rho", "mom", "E"], _raw_rows(last["field"]))
        partial = getattr(exc, "diagnostics", None)
        if partial is not None:
            write_diagnostics(out_dir / f"{stem}_diagnostics.csv", partial, dict(meta, failure=str(exc)))
        raise
    write_solution(out_dir / f"{stem}_solution.csv", field, case, meta)
    write_diagnostics(out_dir / f"{stem}_diagnostics.csv", diag, meta)

    report = None
    if case.exact_kind in ("analytic_advection", "exact_riemann"):
        report = error_norms(field, exact_cell_averages(case, n, t_end), scheme)
    elif reference_cells:
        report = error_norms(field, fine_mesh_reference(case, reference_cells, cfl=cfl, projection=projection), scheme)
    if report is not None:
        _write(
            out_dir / f"{stem}_errors.csv",
            meta,
            ["variable", "l1", "l2", "linf"],
            [(report.variable, report.l1, report.l2, report.linf)],
        )
    return RunOutcome(field, diag, report)


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="genofv", description="1-D Euler reconstruction benchmarks")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, multi_scheme: bool):
        sp.add_argument("--case", required=True, choices=sorted(REGISTRY))
        if multi_scheme:
            sp.add_argument("--scheme", nargs="+", required=True, choices=SCHEMES)
        else:
            sp.add_argument("--scheme", required=True, choices=SCHEMES)
        sp.add_argument("--cfl", type=float, default=0.5)
        sp.add_argument("--projection", choices=("characteristic", "componentwise"), default="characteristic")
        sp.add_argument("--teno-ct", type=float, default=None, help="TENO cut-off threshold C_T")
        sp.add_argument("--geno-c", type=float, default=20.0, help="path function steepness C")
        sp.add_argument("--t-end", type=float, default=None)
        sp.add_argument("--out", type=Path, default=Path("out"))

    run = sub.add_parser("run", help="run one scheme on one case")
    common(run, False)
    run.add_argument("--cells", type=int, default=None, help="mesh size (default: the case's first mesh)")
    run.add_argument("--reference-cells", type=int, default=None, help="fine-mesh reference size for error report")
    run.add_argument("--tau-span", choices=("three", "full"), default="three")

    conv = sub.add_parser("convergence", help="observed orders over doubling meshes")
    common(conv, True)
    conv.add_argument("--cells", type=int, nargs="+", default=None)

    chi = sub.add_parser("chi-sweep", help="linearity proportion versus phi")
    chi.add_argument("--scenario", choices=("tau_min", "tau_max"), required=True)
    chi.add_argument("--multiplicity", choices=("1pp", "11p"), default="1pp")
    chi.add_argument("--points", type=int, default=81)
    chi.add_argument("--teno-ct", type=float, default=1e-6)
    chi.add_argument("--geno-c", type=float, default=20.0)
    chi.add_argument("--out", type=Path, default=None, help="CSV path (default: stdout)")

    cmp_ = sub.add_parser("compare", help="several schemes on one case")
    common(cmp_, True)
    cmp_.add_argument("--cells", type=int, default=None)
    return p


def _cmd_run(a) -> int:
    case = make_case(a.case)
    n = a.cells or case.meshes[0]
    try:
        out = run_case(
            case, a.scheme, n, a.out, a.cfl, a.projection, a.teno_ct, a.geno_c, a.t_end, a.reference_cells, a.tau_span
        )
        report, diag = out.report, out.diagnostics
    except (AdmissibilityError, FloatingPointError) as exc:
        print(f"run failed: {exc}", file=sys.stderr)
        return EXIT_RUN_FAILURE
    print(
        f"{case.name} {a.scheme} N={n}: steps={diag.steps} guard_activations={diag.guard_activations} "
        f"min_rho={diag.min_rho:.6g} min_p={diag.min_p:.6g} wall={diag.wall_time:.2f}s"
    )
    if report is not None:
        print(f"L1={report.l1:.6e} L2={report.l2:.6e} Linf={report.linf:.6e}")
    return EXIT_OK


def _cmd_convergence(a) -> int:
    case = make_case(a.case)
    if case.exact_kind not in ("analytic_advection", "exact_riemann"):
        print(f"case {case.name!r} has no closed-form solution for a convergence study", file=sys.stderr)
        return EXIT_USAGE
    meshes = a.cells or list(case.meshes)
    tables = convergence_study(
        case, a.scheme, meshes, t_end=a.t_end, cfl=a.cfl, projection=a.projection, teno_ct=a.teno_ct, geno_c=a.geno_c
    )
    meta = {"case": case.name, "cfl": a.cfl, "projection": a.projection, "build": build_id()}
    body = _header(meta) + "".join(
        t.to_csv() if i == 0 else t.to_csv().split("\n", 1)[1] for i, t in enumerate(tables.values())
    )
    a.out.mkdir(parents=True, exist_ok=True)
    path = a.out / f"{case.name}_convergence.csv"
    path.write_text(body, encoding="utf-8")
    print(body, end="")
    failed = any(t.failures for t in tables.values())
    return EXIT_RUN_FAILURE if failed else EXIT_OK


def _cmd_chi(a) -> int:
    from .geno import TenoParams

    text = chi_report(
        a.scenario,
        points=a.points,
        multiplicity=a.multiplicity,
        geno=GenoParams(C=a.geno_c),
        teno=TenoParams(C_T=a.teno_ct),
    )
    if a.out is None:
        print(text, end="")
    else:
        a.out.parent.mkdir(parents=True, exist_ok=True)
        a.out.write_text(text, encoding="utf-8")
    return EXIT_OK


def _cmd_compare(a) -> int:
    case = make_case(a.case)
    n = a.cells or case.meshes[0]
    columns, status = {}, EXIT_OK
    centers = None
    for scheme in a.scheme:
        try:
            out = run_case(case, scheme, n, a.out, a.cfl, a.projection, a.teno_ct, a.geno_c, a.t_end)
            report, diag = out.report, out.diagnostics
        except (AdmissibilityError, FloatingPointError) as exc:
            print(f"{scheme}: run failed: {exc}", file=sys.stderr)
            status = EXIT_RUN_FAILURE
            continue
        centers = out.field.centers
        columns[scheme] = out.field.interior[0]
        err = "" if report is None else f" L1={report.l1:.6e}"
        print(f"{scheme}: steps={diag.steps} guard_activations={diag.guard_activations}{err}")
    if columns:
        meta = {"case": case.name, "N": n, "cfl": a.cfl, "projection": a.projection, "build": build_id()}
        rows = zip(centers, *columns.values())
        _write(a.out / f"{case.name}_N{n}_compare.csv", meta, ["x"] + [f"rho_{s}" for s in columns], rows)
    return status


def main(argv: list[str] | None = None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    handlers = {"run": _cmd_run, "convergence": _cmd_convergence, "chi-sweep": _cmd_chi, "compare": _cmd_compare}
    try:
        return handlers[args.command](args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
