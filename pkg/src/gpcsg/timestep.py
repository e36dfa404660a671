"""Third-order TVD Runge-Kutta stepping and CFL time-step selection."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

__all__ = ["StepController", "rk3_step", "compute_dt", "advance"]

_T_EPS = 1e-12


@dataclass
class StepController:
    """Time-step policy: CFL-bound steps, optionally overridden by a fixed
    dt = f(dx) law for accuracy studies; the final step lands on t_final."""

    t_final: float
    cfl: float = 0.6
    dt_override: Callable[[float], float] | None = None
    dt_max: float = np.inf

    def __post_init__(self):
        if not 0.0 < self.cfl <= 1.0:
            raise ValueError(f"cfl must be in (0, 1], got {self.cfl}")


def compute_dt(op, interior: np.ndarray, controller: StepController, t: float) -> float:
    """CFL step cfl * dx / alpha from the current field, clipped to t_final."""
    remaining = controller.t_final - t
    if controller.dt_override is not None:
        dt = controller.dt_override(op.dx)
    else:
        alpha = op.max_wavespeed(interior)
        if alpha <= _T_EPS:
            dt = controller.dt_max
        else:
            dt = controller.cfl * op.dx / alpha
    dt = min(dt, controller.dt_max)
    return min(dt, remaining)


def rk3_step(op, interior: np.ndarray, dt: float, t: float = 0.0, log: list | None = None) -> np.ndarray:
    """One step of the three-stage TVD Runge-Kutta scheme.

    Before each spatial-operator evaluation the cell averages are limited
    into the admissible set (when the operator carries limiters) and ghost
    cells are refilled at the stage time.  dt may be negative (reversed
    sweeps of the splitting schedule).
    """

    def stage(u, s):
        if op.limiting:
            u, acts = op.limit_cell_averages(u)
            if acts and log is not None:
                log.extend(("avg", s) + a for a in acts)
        rate, diag = op.residual(u, s)
        if log is not None:
            log.extend(("node", s) + a for a in diag["node_limit"])
        return u, rate

    u0, r0 = stage(interior, t)
    u1 = u0 + dt * r0
    u1, r1 = stage(u1, t + dt)
    u2 = 0.75 * u0 + 0.25 * (u1 + dt * r1)
    u2, r2 = stage(u2, t + 0.5 * dt)
    return u0 / 3.0 + (2.0 / 3.0) * (u2 + dt * r2)


def advance(op, interior: np.ndarray, controller: StepController, t0: float = 0.0):
    """March the field to controller.t_final; returns (field, step log).

    The log records, per step, the time, dt, and limiter activations."""
    t = t0
    u = interior
    steps = []
    scale = max(abs(controller.t_final), 1.0)
    while controller.t_final - t > _T_EPS * scale:
        acts: list = []
        if op.limiting:
            # the CFL bound needs admissible averages (the projected initial
            # data of a discontinuous problem may start outside the set)
            u, pre = op.limit_cell_averages(u)
            acts.extend(("avg", t) + a for a in pre)
        dt = compute_dt(op, u, controller, t)
        u = rk3_step(op, u, dt, t, log=acts)
        t += dt
        steps.append({"t": t, "dt": dt, "limited": acts})
    return u, steps
