"""Experiment orchestration: single runs, convergence studies, comparisons,
and CSV / JSON / VTK output."""
from __future__ import annotations

import json
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .basis import gauss_rule, mean_std
from .config import RunConfig
from .euler import EulerModel
from .field import Mesh1D, Mesh2D, project_initial
from .galerkin import SgContext
from .problems import builtin_problem, exact_smooth
from .reference import CollocationPlan, collocation_solve, error_norm_l1
from .split2d import Solver2D
from .spatial import SpatialOperator
from .timestep import StepController, advance

__all__ = [
    "OutputBundle",
    "run_case",
    "convergence_study",
    "compare",
    "smooth_reference_stats",
    "restrict_1d",
    "diagonal_slice",
    "load_bundle",
]

_REF_ORDER = 24
_REF_XI_NODES = 64


@dataclass
class OutputBundle:
    """Fields and metadata produced by one run."""

    kind: str
    config: dict
    ndim: int
    mesh: object
    tables: dict
    wall_time: float
    n_steps: int
    limiter_log: list
    coeffs: np.ndarray | None = None
    snapshots: dict | None = None
    outdir: str | None = None


def _make_mesh(problem, cells):
    if problem.ndim == 1:
        lo, hi = problem.domain
        return Mesh1D(int(cells), lo, hi)
    (xlo, xhi), (ylo, yhi) = problem.domain
    nx, ny = cells
    return Mesh2D(x=Mesh1D(nx, xlo, xhi), y=Mesh1D(ny, ylo, yhi))


def _variable_names(ndim: int) -> list[str]:
    if ndim == 1:
        return ["rho", "mom_x", "energy", "vel_x", "pressure"]
    return ["rho", "mom_x", "mom_y", "energy", "vel_x", "vel_y", "pressure"]


def sg_field_stats(ctx, coeffs: np.ndarray) -> dict:
    """Mean/std tables from a coefficient field of shape (..., K).

    Conserved statistics come from the coefficients directly; primitive ones
    from xi-quadrature of the converted expansion."""
    modes = ctx.as_modes(coeffs)
    mean_c = modes[..., 0, :]
    std_c = np.sqrt(np.sum(modes[..., 1:, :] ** 2, axis=-2))
    xi = ctx.xi_rule.nodes
    states = ctx.eval_states(coeffs, ctx.basis.eval_table(xi))
    prim = ctx.model.conserved_to_primitive(states, xi)[..., 1:]  # drop rho (already have it)
    mean_p = np.tensordot(prim, ctx.xi_rule.weights, axes=(-2, 0))
    var_p = np.tensordot((prim - mean_p[..., None, :]) ** 2, ctx.xi_rule.weights, axes=(-2, 0))
    std_p = np.sqrt(var_p)
    names = _variable_names(ctx.model.ndim)
    tables = {}
    ncons = ctx.model.nvars
    for i, name in enumerate(names[:ncons]):
        tables[f"mean_{name}"] = mean_c[..., i]
        tables[f"std_{name}"] = std_c[..., i]
    for i, name in enumerate(names[ncons:]):
        tables[f"mean_{name}"] = mean_p[..., i]
        tables[f"std_{name}"] = std_p[..., i]
    return tables


def _collocation_stats(problem, result) -> dict:
    names = _variable_names(problem.ndim)
    ncons = 2 + problem.ndim
    tables = {}
    for i, name in enumerate(names[:ncons]):
        tables[f"mean_{name}"] = result.mean[..., i]
        tables[f"std_{name}"] = result.std[..., i]
    prims = []
    for q, xi in enumerate(result.nodes):
        model = EulerModel(ndim=problem.ndim, gamma=float(problem.model().gamma_of(xi)))
        prims.append(model.conserved_to_primitive(result.states[q], xi)[..., 1:])
    prims = np.stack(prims)
    mean_p = np.tensordot(result.weights, prims, axes=(0, 0))
    std_p = np.sqrt(np.tensordot(result.weights, (prims - mean_p) ** 2, axes=(0, 0)))
    for i, name in enumerate(names[ncons:]):
        tables[f"mean_{name}"] = mean_p[..., i]
        tables[f"std_{name}"] = std_p[..., i]
    return tables


def run_case(config: RunConfig) -> OutputBundle:
    """Run one configured case and (optionally) write its outputs."""
    problem = builtin_problem(config.problem)
    t_final = problem.t_final if config.t_final is None else config.t_final
    mesh = _make_mesh(problem, config.cells)
    start = time.perf_counter()

    if config.dry_run:
        bundle = OutputBundle(
            kind="dry-run", config=config.to_dict(), ndim=problem.ndim, mesh=mesh,
            tables={}, wall_time=0.0, n_steps=0, limiter_log=[],
        )
        if config.out:
            _write_bundle(bundle, config.out, vtk=False)
        return bundle

    if config.solver == "collocation":
        plan = CollocationPlan(n_nodes=config.colloc_nodes, cfl=config.cfl)
        problem_t = problem if config.t_final is None else _with_t_final(problem, t_final)
        result = collocation_solve(problem_t, plan, mesh)
        tables = _collocation_stats(problem, result)
        bundle = OutputBundle(
            kind="collocation", config=config.to_dict(), ndim=problem.ndim, mesh=mesh,
            tables=tables, wall_time=time.perf_counter() - start,
            n_steps=0, limiter_log=[],
        )
    else:
        model = problem.model()
        ctx = SgContext(model, config.order, n_xi=config.n_xi, alpha_safety=config.alpha_safety)
        coeffs = project_initial(problem, ctx, mesh)
        stops = sorted({float(t) for t in config.snapshots if 0.0 < t < t_final})
        stops.append(t_final)
        snapshots = {}
        steps = []
        if problem.ndim == 1:
            driver = None
            if problem.driver is not None:
                def driver(t):
                    prim = problem.driver(t, ctx.xi_rule.nodes)
                    cons = model.primitive_to_conserved(prim, ctx.xi_rule.nodes)
                    return ctx.project_samples(cons)
            op = SpatialOperator(
                ctx, mesh.dx, axis=0, boundary=problem.boundary,
                driver=driver, limiting=config.limiter,
            )
            dt_override = (lambda dx: dx ** (5.0 / 3.0)) if config.dt_policy == "dx53" else None
            t = 0.0
            for stop in stops:
                ctl = StepController(t_final=stop, cfl=config.cfl, dt_override=dt_override)
                coeffs, seg = advance(op, coeffs, ctl, t0=t)
                steps.extend(seg)
                t = stop
                if stop < t_final:
                    snapshots[stop] = sg_field_stats(ctx, coeffs[0])
            coeffs_out = coeffs[0]
        else:
            solver = Solver2D(
                ctx, mesh, boundary=problem.boundary, cfl=config.cfl,
                limiting=config.limiter, mode=config.mode,
                alternate_parity=config.alternate_parity,
            )
            t = 0.0
            for stop in stops:
                coeffs, seg = solver.advance(coeffs, stop, t0=t)
                steps.extend(seg)
                t = stop
                if stop < t_final:
                    snapshots[stop] = sg_field_stats(ctx, coeffs)
            coeffs_out = coeffs
        tables = sg_field_stats(ctx, coeffs_out)
        bundle = OutputBundle(
            kind="sg", config=config.to_dict(), ndim=problem.ndim, mesh=mesh,
            tables=tables, wall_time=time.perf_counter() - start,
            n_steps=len(steps), limiter_log=_limiter_summary(steps),
            coeffs=coeffs_out, snapshots=snapshots or None,
        )
    if config.out:
        _write_bundle(bundle, config.out, vtk=config.vtk)
    return bundle


def _with_t_final(problem, t_final):
    from dataclasses import replace

    return replace(problem, t_final=t_final)


_MAX_LOGGED_EVENTS = 200


def _limiter_summary(steps) -> list:
    """Per-step limiter record: counts by kind plus (kind, cell, theta) events.

    Event tuples are (kind, stage_time, ...cell indices..., theta); long event
    lists are truncated per step to keep meta.json readable."""
    log = []
    for i, rec in enumerate(steps):
        if rec["limited"]:
            kinds = {}
            for entry in rec["limited"]:
                kinds[entry[0]] = kinds.get(entry[0], 0) + 1
            events = [list(e) for e in rec["limited"][:_MAX_LOGGED_EVENTS]]
            entry = {"step": i, "t": rec["t"], "activations": kinds, "events": events}
            if len(rec["limited"]) > _MAX_LOGGED_EVENTS:
                entry["events_truncated"] = len(rec["limited"]) - _MAX_LOGGED_EVENTS
            log.append(entry)
    return log


# -- output -----------------------------------------------------------------


def _write_bundle(bundle: OutputBundle, outdir: str, vtk: bool = False) -> None:
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    meta = {
        "kind": bundle.kind,
        "config": bundle.config,
        "ndim": bundle.ndim,
        "wall_time": bundle.wall_time,
        "n_steps": bundle.n_steps,
        "limiter_log": bundle.limiter_log,
    }
    if bundle.ndim == 1:
        meta["mesh"] = {"n_cells": bundle.mesh.n_cells, "lo": bundle.mesh.lo, "hi": bundle.mesh.hi}
    else:
        meta["mesh"] = {
            "nx": bundle.mesh.x.n_cells, "ny": bundle.mesh.y.n_cells,
            "x": [bundle.mesh.x.lo, bundle.mesh.x.hi],
            "y": [bundle.mesh.y.lo, bundle.mesh.y.hi],
        }
    (out / "meta.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    if not bundle.tables:
        bundle.outdir = str(out)
        return
    _write_table_csv(out / "fields.csv", bundle.mesh, bundle.ndim, bundle.tables)
    for t, tables in (bundle.snapshots or {}).items():
        _write_table_csv(out / f"fields_t{t:.6g}.csv", bundle.mesh, bundle.ndim, tables)
    if vtk and bundle.ndim == 2:
        _write_vtk(out / "fields.vtk", bundle.mesh, bundle.tables)
    bundle.outdir = str(out)


def _write_table_csv(path: Path, mesh, ndim: int, tables: dict) -> None:
    keys = sorted(tables)
    if ndim == 1:
        cols = [mesh.centers()] + [tables[k] for k in keys]
        header = ",".join(["x"] + keys)
    else:
        xg, yg = np.meshgrid(mesh.x.centers(), mesh.y.centers())  # (ny, nx)
        cols = [xg.ravel(), yg.ravel()] + [tables[k].ravel() for k in keys]
        header = ",".join(["x", "y"] + keys)
    np.savetxt(path, np.column_stack(cols), delimiter=",", header=header, comments="", fmt="%.12e")


def _write_vtk(path: Path, mesh: Mesh2D, tables: dict) -> None:
    """Legacy ASCII structured-points file with one scalar field per table."""
    nx, ny = mesh.x.n_cells, mesh.y.n_cells
    lines = [
        "# vtk DataFile Version 3.0",
        "gpcsg fields",
        "ASCII",
        "DATASET STRUCTURED_POINTS",
        f"DIMENSIONS {nx} {ny} 1",
        f"ORIGIN {mesh.x.centers()[0]:.12e} {mesh.y.centers()[0]:.12e} 0.0",
        f"SPACING {mesh.x.dx:.12e} {mesh.y.dx:.12e} 1.0",
        f"POINT_DATA {nx * ny}",
    ]
    for key in sorted(tables):
        lines.append(f"SCALARS {key} double 1")
        lines.append("LOOKUP_TABLE default")
        lines.extend(f"{v:.12e}" for v in tables[key].ravel())
    path.write_text("\n".join(lines) + "\n")


def load_bundle(outdir: str) -> OutputBundle:
    """Reload a written bundle (meta + field tables) from disk."""
    out = Path(outdir)
    meta = json.loads((out / "meta.json").read_text())
    if meta["ndim"] == 1:
        m = meta["mesh"]
        mesh = Mesh1D(m["n_cells"], m["lo"], m["hi"])
    else:
        m = meta["mesh"]
        mesh = Mesh2D(x=Mesh1D(m["nx"], *m["x"]), y=Mesh1D(m["ny"], *m["y"]))
    tables = {}
    csv = out / "fields.csv"
    if csv.exists():
        raw = np.genfromtxt(csv, delimiter=",", names=True)
        skip = 1 if meta["ndim"] == 1 else 2
        for name in raw.dtype.names[skip:]:
            col = raw[name]
            if meta["ndim"] == 2:
                col = col.reshape(mesh.y.n_cells, mesh.x.n_cells)
            tables[name] = col
    return OutputBundle(
        kind=meta["kind"], config=meta["config"], ndim=meta["ndim"], mesh=mesh,
        tables=tables, wall_time=meta["wall_time"], n_steps=meta["n_steps"],
        limiter_log=meta["limiter_log"], outdir=str(out),
    )


# -- references and studies ----------------------------------------------------


def smooth_reference_stats(mesh: Mesh1D, t: float, gamma=1.4):
    """Cell-averaged density mean/std of the exact smooth solution.

    A high-order reference projection (order 24, 64 xi nodes) is cell
    averaged, and the statistics functional is applied to the averaged
    coefficients, matching what the solver reports for its own field."""
    model = EulerModel(ndim=1, gamma=gamma)
    ctx = SgContext(model, _REF_ORDER, n_xi=_REF_XI_NODES)
    from dataclasses import replace

    base = builtin_problem("smooth")
    frozen = replace(base, initial=lambda x, xi: exact_smooth(x, t, xi))
    coeffs = project_initial(frozen, ctx, mesh)[0]
    mean = np.empty(mesh.n_cells)
    std = np.empty(mesh.n_cells)
    for j in range(mesh.n_cells):
        m, s = mean_std(ctx.as_modes(coeffs[j]))
        mean[j], std[j] = m[0], s[0]
    return mean, std


def convergence_study(config: RunConfig, cells_list) -> dict:
    """l1 errors of density mean/std against the smooth exact reference.

    Returns {'cells', 'err_mean', 'order_mean', 'err_std', 'order_std'}."""
    problem = builtin_problem(config.problem)
    if problem.exact is None:
        raise ValueError(f"problem {config.problem!r} has no exact solution")
    t_final = problem.t_final if config.t_final is None else config.t_final
    err_mean, err_std = [], []
    for cells in cells_list:
        cfg = RunConfig.from_dict({**config.to_dict(), "cells": int(cells), "out": None})
        bundle = run_case(cfg)
        ref_mean, ref_std = smooth_reference_stats(bundle.mesh, t_final, gamma=problem.gamma)
        err_mean.append(float(error_norm_l1(bundle.tables["mean_rho"], ref_mean, bundle.mesh.dx)))
        err_std.append(float(error_norm_l1(bundle.tables["std_rho"], ref_std, bundle.mesh.dx)))
    orders = lambda e: [float("nan")] + [
        float(np.log2(e[i - 1] / e[i])) for i in range(1, len(e))
    ]
    return {
        "cells": [int(c) for c in cells_list],
        "err_mean": err_mean,
        "order_mean": orders(err_mean),
        "err_std": err_std,
        "order_std": orders(err_std),
    }


def restrict_1d(values: np.ndarray, mesh_from: Mesh1D, mesh_to: Mesh1D, axis: int = 0) -> np.ndarray:
    """Conservative cell-average restriction between (possibly non-nested)
    uniform 1D meshes along the given axis."""
    if not (np.isclose(mesh_from.lo, mesh_to.lo) and np.isclose(mesh_from.hi, mesh_to.hi)):
        raise ValueError("meshes must cover the same interval")
    ff, tf = mesh_from.faces(), mesh_to.faces()
    weights = np.zeros((mesh_to.n_cells, mesh_from.n_cells))
    for i in range(mesh_to.n_cells):
        lo = np.maximum(ff[:-1], tf[i])
        hi = np.minimum(ff[1:], tf[i + 1])
        weights[i] = np.clip(hi - lo, 0.0, None) / mesh_to.dx
    values = np.moveaxis(np.asarray(values, dtype=float), axis, 0)
    out = np.tensordot(weights, values, axes=(1, 0))
    return np.moveaxis(out, 0, axis)


def diagonal_slice(table: np.ndarray, mesh: Mesh2D):
    """Field values along y = x; returns (scaled arclength in [0,1], values)."""
    if mesh.x.n_cells != mesh.y.n_cells:
        raise ValueError("diagonal slice needs a square grid")
    n = mesh.x.n_cells
    idx = np.arange(n)
    return (idx + 0.5) / n, table[idx, idx]


def compare(bundle_a: OutputBundle, bundle_b: OutputBundle, slice_spec: str | None = None,
            outdir: str | None = None) -> dict:
    """l1/linf differences of mean/std density plus optional slice extraction.

    Fields on finer meshes are restricted (cell-average) to the coarser one."""
    if bundle_a.ndim != bundle_b.ndim:
        raise ValueError("bundles have different dimensionality")
    keys = [k for k in ("mean_rho", "std_rho") if k in bundle_a.tables and k in bundle_b.tables]
    report = {"keys": keys}
    if bundle_a.ndim == 1:
        coarse, fine = sorted((bundle_a, bundle_b), key=lambda b: b.mesh.n_cells)
        vol = coarse.mesh.dx
        for k in keys:
            fv = restrict_1d(fine.tables[k], fine.mesh, coarse.mesh)
            report[f"l1_{k}"] = float(error_norm_l1(coarse.tables[k], fv, vol))
            report[f"linf_{k}"] = float(np.max(np.abs(coarse.tables[k] - fv)))
    else:
        coarse, fine = sorted((bundle_a, bundle_b), key=lambda b: b.mesh.x.n_cells)
        vol = coarse.mesh.x.dx * coarse.mesh.y.dx
        slices = {}
        for k in keys:
            fv = restrict_1d(fine.tables[k], fine.mesh.x, coarse.mesh.x, axis=1)
            fv = restrict_1d(fv, fine.mesh.y, coarse.mesh.y, axis=0)
            report[f"l1_{k}"] = float(error_norm_l1(coarse.tables[k], fv, vol))
            report[f"linf_{k}"] = float(np.max(np.abs(coarse.tables[k] - fv)))
            if slice_spec == "diagonal":
                s, va = diagonal_slice(coarse.tables[k], coarse.mesh)
                _, vb = diagonal_slice(fv, coarse.mesh)
                slices[k] = (s, va, vb)
        if slice_spec == "diagonal" and outdir:
            out = Path(outdir)
            out.mkdir(parents=True, exist_ok=True)
            for k, (s, va, vb) in slices.items():
                np.savetxt(
                    out / f"slice_{k}.csv",
                    np.column_stack([s, va, vb]),
                    delimiter=",", header=f"s,{k}_a,{k}_b", comments="", fmt="%.12e",
                )
    if outdir:
        out = Path(outdir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "compare.json").write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    return report
