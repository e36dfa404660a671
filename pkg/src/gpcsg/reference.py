"""Non-intrusive reference solvers and error norms.

Stochastic collocation runs a deterministic fifth-order finite-difference
WENO solver (global Lax-Friedrichs flux splitting, componentwise) at Gauss
nodes of the random variable and forms statistics by quadrature.  The flux
reconstruction shares the WENO weight kernel with the Galerkin solver but
is a separate conservative flux-form discretization.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import gauss_rule
from .euler import EulerModel
from .field import GHOST, Mesh1D, extend_line
from .timestep import StepController, advance
from .weno import reconstruct_cells

__all__ = [
    "FdWenoSolver",
    "CollocationPlan",
    "CollocationResult",
    "collocation_solve",
    "error_norm_l1",
    "cell_average_profile",
]


class FdWenoSolver:
    """Deterministic 1D finite-difference WENO5 line solver.

    Operates on point values of shape (L, n, N).  Duck-type compatible with
    the Runge-Kutta driver (residual / max_wavespeed / dx / limiting).
    """

    limiting = False

    def __init__(self, model: EulerModel, dx: float, axis: int = 0,
                 boundary=("outflow", "outflow"), driver=None):
        self.model = model
        self.dx = float(dx)
        self.axis = axis
        self.boundary = tuple(boundary)
        self.driver = driver

    def extend(self, interior: np.ndarray, t: float) -> np.ndarray:
        ghost = None
        if "driver" in self.boundary:
            prim = self.driver(t)
            ghost = self.model.primitive_to_conserved(prim, 0.0)
        return extend_line(interior, self.boundary, ghost_left=ghost, ghost_right=ghost)

    def residual(self, interior: np.ndarray, t: float = 0.0):
        lines, n, nv = interior.shape
        ext = self.extend(interior, t)
        f = self.model.flux(ext, 0.0, axis=self.axis, validate=True)
        alpha = np.max(self.model.max_wavespeed(ext, 0.0, axis=self.axis))
        f_up = 0.5 * (f + alpha * ext)
        f_down = 0.5 * (f - alpha * ext)
        # upwind-biased right-face values and downwind-biased left-face values
        face_up = reconstruct_cells(f_up, nodes=(3,))[..., 0, :]
        face_down = reconstruct_cells(f_down, nodes=(0,))[..., 0, :]
        fhat = face_up[:, : n + 1] + face_down[:, 1 : n + 2]
        rate = -(fhat[:, 1:] - fhat[:, :-1]) / self.dx
        return rate, {"alpha_max": float(alpha), "node_limit": []}

    def max_wavespeed(self, interior: np.ndarray) -> float:
        return float(np.max(self.model.max_wavespeed(interior, 0.0, axis=self.axis)))


def _advance_fd_2d(model: EulerModel, u: np.ndarray, dx: float, dy: float,
                   boundary, t_final: float, cfl: float) -> np.ndarray:
    """RK3 march of the unsplit FD-WENO residual on a (ny, nx, N) grid."""
    op_x = FdWenoSolver(model, dx, axis=0, boundary=boundary[0])
    op_y = FdWenoSolver(model, dy, axis=1, boundary=boundary[1])

    def rate(v):
        rx, _ = op_x.residual(v, 0.0)
        ry, _ = op_y.residual(np.ascontiguousarray(np.swapaxes(v, 0, 1)), 0.0)
        return rx + np.swapaxes(ry, 0, 1)

    t = 0.0
    while t_final - t > 1e-12 * max(t_final, 1.0):
        ax = op_x.max_wavespeed(u)
        ay = op_y.max_wavespeed(np.swapaxes(u, 0, 1))
        dt = min(cfl / (ax / dx + ay / dy), t_final - t)
        u1 = u + dt * rate(u)
        u2 = 0.75 * u + 0.25 * (u1 + dt * rate(u1))
        u = u / 3.0 + (2.0 / 3.0) * (u2 + dt * rate(u2))
        t += dt
    return u


@dataclass(frozen=True)
class CollocationPlan:
    """Gauss collocation nodes/weights in xi and run settings."""

    n_nodes: int = 40
    cfl: float = 0.6

    def rule(self):
        return gauss_rule(self.n_nodes)


@dataclass(frozen=True)
class CollocationResult:
    nodes: np.ndarray
    weights: np.ndarray
    states: np.ndarray  # (q, ...grid..., N) conserved point values
    mean: np.ndarray
    std: np.ndarray


def collocation_solve(problem, plan: CollocationPlan, mesh) -> CollocationResult:
    """Deterministic runs at every collocation node plus quadrature statistics."""
    rule = plan.rule()
    runs = []
    for q, xi in enumerate(rule.nodes):
        gamma = float(problem.model().gamma_of(xi))
        model = EulerModel(ndim=problem.ndim, gamma=gamma)
        try:
            if problem.ndim == 1:
                u0 = model.primitive_to_conserved(problem.initial(mesh.centers(), xi), xi)
                driver = None
                if problem.driver is not None:
                    driver = lambda t, xi=xi: problem.driver(t, xi)
                op = FdWenoSolver(model, mesh.dx, boundary=problem.boundary, driver=driver)
                ctl = StepController(t_final=problem.t_final, cfl=plan.cfl)
                u, _ = advance(op, u0[None], ctl)
                runs.append(u[0])
            else:
                xc, yc = mesh.x.centers(), mesh.y.centers()
                prim = problem.initial(xc[None, :], yc[:, None], xi)
                u0 = model.primitive_to_conserved(prim, xi)
                u = _advance_fd_2d(
                    model, u0, mesh.x.dx, mesh.y.dx, problem.boundary, problem.t_final, plan.cfl
                )
                runs.append(u)
        except Exception as exc:
            raise RuntimeError(f"collocation node {q} (xi={xi:.6f}) failed: {exc}") from exc
    states = np.stack(runs)
    mean = np.tensordot(rule.weights, states, axes=(0, 0))
    var = np.tensordot(rule.weights, (states - mean) ** 2, axes=(0, 0))
    return CollocationResult(
        nodes=rule.nodes, weights=rule.weights, states=states, mean=mean, std=np.sqrt(var)
    )


def error_norm_l1(a: np.ndarray, b: np.ndarray, cell_volume: float, components: bool = False):
    """Discrete l1 distance cell_volume * sum |a - b| over the grid.

    For scalar fields (the default) every axis is a grid axis and a single
    value returns; with components=True the last axis holds state components
    and one value per component returns."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"field shapes differ: {a.shape} vs {b.shape}")
    diff = np.abs(a - b)
    if components:
        return cell_volume * diff.sum(axis=tuple(range(diff.ndim - 1)))
    return cell_volume * float(diff.sum())


def cell_average_profile(fn, mesh: Mesh1D, n_gauss: int = 5) -> np.ndarray:
    """Cell averages of a pointwise profile fn(x) by per-cell Gauss quadrature."""
    rule = gauss_rule(n_gauss)
    pts = mesh.centers()[:, None] + 0.5 * mesh.dx * rule.nodes[None, :]
    vals = np.asarray(fn(pts))
    return np.tensordot(vals, rule.weights, axes=(1, 0))
