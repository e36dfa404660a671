"""Built-in uncertain test problems for the 1D and 2D Euler equations.

Each setup bundles the initial condition (primitive variables as a function
of position and xi), the gamma closure, boundary policies, the final time,
and, where available, the exact solution.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .euler import EulerModel

__all__ = ["ProblemSetup", "builtin_problem", "exact_smooth", "PROBLEM_NAMES"]


@dataclass(frozen=True)
class ProblemSetup:
    """A complete uncertain initial/boundary-value problem."""

    name: str
    ndim: int
    domain: tuple  # 1D: (lo, hi); 2D: ((xlo, xhi), (ylo, yhi))
    gamma: object  # constant or callable xi -> Gamma(xi)
    t_final: float
    # primitive initial state; 1D signature (x, xi) -> (..., 3),
    # 2D signature (x, y, xi) -> (..., 4); broadcasts over arrays
    initial: Callable
    # boundary policy per side: 1D (left, right); 2D ((xlo, xhi), (ylo, yhi))
    boundary: tuple
    # time-dependent primitive driver state for 'driver' sides: (t, xi) -> (..., 3)
    driver: Callable | None = None
    # xi-dependent jump locations used to split the projection quadrature,
    # one callable per axis returning an array of interface positions
    jumps: tuple = field(default=())
    # exact primitive solution (x[, y], t, xi), if one exists
    exact: Callable | None = None

    def model(self) -> EulerModel:
        return EulerModel(ndim=self.ndim, gamma=self.gamma)


def exact_smooth(x, t, xi):
    """Sine density wave advected with the uncertain velocity 0.8 + 0.2 xi.

    Returns primitive (rho, u, p) with rho = 1 + 0.2 sin(2 pi (x - u t)),
    p = 1; an exact solution for any adiabatic index.
    """
    x, t, xi = np.broadcast_arrays(
        np.asarray(x, dtype=float), np.asarray(t, dtype=float), np.asarray(xi, dtype=float)
    )
    vel = 0.8 + 0.2 * xi
    rho = 1.0 + 0.2 * np.sin(2.0 * np.pi * (x - vel * t))
    return np.stack([rho, vel, np.ones_like(rho)], axis=-1)


def _smooth() -> ProblemSetup:
    return ProblemSetup(
        name="smooth",
        ndim=1,
        domain=(0.0, 1.0),
        gamma=1.4,
        t_final=0.2,
        initial=lambda x, xi: exact_smooth(x, 0.0, xi),
        boundary=("periodic", "periodic"),
        exact=exact_smooth,
    )


def _sod() -> ProblemSetup:
    def initial(x, xi):
        x, xi = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(xi, dtype=float))
        left = x < 0.5 + 0.05 * xi
        rho = np.where(left, 1.0, 0.125)
        p = np.where(left, 1.0, 0.1)
        return np.stack([rho, np.zeros_like(rho), p], axis=-1)

    return ProblemSetup(
        name="sod",
        ndim=1,
        domain=(0.0, 1.0),
        gamma=1.4,
        t_final=0.18,
        initial=initial,
        boundary=("outflow", "outflow"),
        jumps=(lambda xi: np.stack([0.5 + 0.05 * np.asarray(xi, dtype=float)], axis=-1),),
    )


def _driver() -> ProblemSetup:
    def initial(x, xi):
        x, xi = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(xi, dtype=float))
        one = np.ones_like(x)
        return np.stack([one, np.zeros_like(x), 0.6 * one], axis=-1)

    def driver(t, xi):
        t, xi = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(xi, dtype=float))
        w = 1.0 + 0.1 * xi
        one = np.ones_like(t)
        return np.stack([one, 0.02 * np.sin(2.0 * np.pi * w * t), 0.6 * one], axis=-1)

    return ProblemSetup(
        name="driver",
        ndim=1,
        domain=(0.0, 5.0),
        gamma=5.0 / 3.0,
        t_final=4.0,
        initial=initial,
        boundary=("driver", "outflow"),
        driver=driver,
    )


# quadrant states (rho, u, v, p), listed by quadrant:
#   q1: x > 0.5, y > 0.5   q2: x < 0.5, y > 0.5
#   q3: x < 0.5, y < 0.5   q4: x > 0.5, y < 0.5
_RP_RAREFACTIONS = (
    (1.0, 0.0, 0.0, 1.0),
    (0.5197, -0.7259, 0.0, 0.4),
    (1.0, -0.7259, -0.7259, 1.0),
    (0.5197, 0.0, -0.7259, 0.4),
)
_RP_CONTACTS = (
    (0.5197, 0.1, 0.1, 0.4),
    (1.0, -0.6259, 0.1, 1.0),
    (0.8, 0.1, 0.1, 1.0),
    (1.0, 0.1, -0.6259, 1.0),
)


def _quadrant_initial(states, perturb=None):
    states = np.asarray(states, dtype=float)

    def initial(x, y, xi):
        x, y, xi = np.broadcast_arrays(
            np.asarray(x, dtype=float), np.asarray(y, dtype=float), np.asarray(xi, dtype=float)
        )
        right = x > 0.5
        top = y > 0.5
        quad = np.where(top, np.where(right, 0, 1), np.where(right, 3, 2))
        prim = states[quad]
        if perturb is not None:
            prim = perturb(prim, xi)
        return prim

    return initial


def _perturb_velocity(prim, xi):
    # every -0.7259 entry in the quadrant table carries the same perturbation
    out = prim.copy()
    shift = 0.1 * xi[..., None]
    vel = out[..., 1:3]
    out[..., 1:3] = np.where(np.isclose(vel, -0.7259), vel + shift, vel)
    return out


def _perturb_density(prim, xi):
    out = prim.copy()
    out[..., 0] = (1.0 + 0.1 * xi) * out[..., 0]
    return out


def _riemann_2d(name, states, gamma, perturb=None) -> ProblemSetup:
    half = lambda xi: np.full(np.shape(np.asarray(xi))+ (1,), 0.5)
    return ProblemSetup(
        name=name,
        ndim=2,
        domain=((0.0, 1.0), (0.0, 1.0)),
        gamma=gamma,
        t_final=0.2,
        initial=_quadrant_initial(states, perturb),
        boundary=(("outflow", "outflow"), ("outflow", "outflow")),
        jumps=(half, half),
    )


def _gamma_uncertain(xi):
    return 1.4 + 0.1 * np.asarray(xi, dtype=float)


_BUILDERS = {
    "smooth": _smooth,
    "sod": _sod,
    "driver": _driver,
    "rp1_vel": lambda: _riemann_2d("rp1_vel", _RP_RAREFACTIONS, 1.4, _perturb_velocity),
    "rp1_gamma": lambda: _riemann_2d("rp1_gamma", _RP_RAREFACTIONS, _gamma_uncertain),
    "rp2_rho": lambda: _riemann_2d("rp2_rho", _RP_CONTACTS, 1.4, _perturb_density),
    "rp2_gamma": lambda: _riemann_2d("rp2_gamma", _RP_CONTACTS, _gamma_uncertain),
}

PROBLEM_NAMES = tuple(sorted(_BUILDERS))


def builtin_problem(name: str) -> ProblemSetup:
    """Look up a built-in problem by name; see PROBLEM_NAMES."""
    try:
        builder = _BUILDERS[name]
    except KeyError:
        raise KeyError(f"unknown problem {name!r}; available: {', '.join(PROBLEM_NAMES)}") from None
    return builder()
