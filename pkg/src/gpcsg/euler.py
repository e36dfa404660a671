"""Compressible Euler equations in 1D and 2D with an ideal-gas closure.

Provides the hyperbolic-system contract consumed by the Galerkin assembly:
flux, eigenvalues, left eigenvectors (closed form, unit-norm rows),
the symmetrizer pair built from them, and admissibility.  The adiabatic
index may depend on the random variable xi, so every operation takes xi.

All operations are vectorized: a state array of shape (..., N) with xi
broadcastable to the leading shape yields outputs with matching batch shape.
"""
from __future__ import annotations

from typing import Callable

import numpy as np

__all__ = ["AdmissibilityError", "EulerModel", "DENSITY_FLOOR", "PRESSURE_FLOOR"]

DENSITY_FLOOR = 1e-13
PRESSURE_FLOOR = 1e-13


class AdmissibilityError(ValueError):
    """Raised when a state leaves the admissible set (rho, p above floors)."""


def _as_gamma_fn(gamma) -> Callable[[np.ndarray], np.ndarray]:
    if callable(gamma):
        return gamma
    g = float(gamma)
    return lambda xi: np.broadcast_to(np.float64(g), np.shape(xi))


class EulerModel:
    """1D (rho, rho*u, E) or 2D (rho, rho*u, rho*v, E) Euler equations.

    gamma may be a constant or a callable xi -> Gamma(xi); the pressure is
    p = (Gamma - 1) * rho * e.
    """

    def __init__(self, ndim: int = 1, gamma=1.4):
        if ndim not in (1, 2):
            raise ValueError(f"ndim must be 1 or 2, got {ndim}")
        self.ndim = ndim
        self.nvars = 2 + ndim
        self.gamma_fn = _as_gamma_fn(gamma)

    # -- thermodynamics ----------------------------------------------------

    def gamma_of(self, xi) -> np.ndarray:
        return np.asarray(self.gamma_fn(np.asarray(xi, dtype=float)), dtype=float)

    def kinetic_energy(self, u: np.ndarray) -> np.ndarray:
        mom2 = np.sum(u[..., 1:-1] ** 2, axis=-1)
        return 0.5 * mom2 / u[..., 0]

    def pressure(self, u: np.ndarray, xi) -> np.ndarray:
        g = self.gamma_of(xi)
        return (g - 1.0) * (u[..., -1] - self.kinetic_energy(u))

    def sound_speed(self, u: np.ndarray, xi) -> np.ndarray:
        g = self.gamma_of(xi)
        with np.errstate(invalid="ignore"):
            # NaN for inadmissible states; callers validate or propagate
            return np.sqrt(g * self.pressure(u, xi) / u[..., 0])

    def is_admissible(self, u: np.ndarray, xi) -> np.ndarray:
        """True where rho and p sit strictly above the positivity floors."""
        u = np.asarray(u, dtype=float)
        rho_ok = u[..., 0] > DENSITY_FLOOR
        with np.errstate(invalid="ignore", divide="ignore"):
            p = self.pressure(u, xi)
        return rho_ok & (p > PRESSURE_FLOOR) & np.all(np.isfinite(u), axis=-1)

    def _require_admissible(self, u: np.ndarray, xi) -> None:
        ok = self.is_admissible(u, xi)
        if not np.all(ok):
            bad = np.argwhere(~np.atleast_1d(ok))
            raise AdmissibilityError(
                f"non-admissible state(s) at batch index {bad[0] if bad.size else '[]'}"
            )

    # -- conversions ---------------------------------------------------------

    def primitive_to_conserved(self, prim: np.ndarray, xi) -> np.ndarray:
        """(rho, u[, v], p) -> (rho, rho*u[, rho*v], E)."""
        prim = np.asarray(prim, dtype=float)
        g = self.gamma_of(xi)
        rho = prim[..., 0]
        vel = prim[..., 1:-1]
        p = prim[..., -1]
        out = np.empty_like(prim)
        out[..., 0] = rho
        out[..., 1:-1] = rho[..., None] * vel
        out[..., -1] = p / (g - 1.0) + 0.5 * rho * np.sum(vel**2, axis=-1)
        return out

    def conserved_to_primitive(self, u: np.ndarray, xi) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        out = np.empty_like(u)
        out[..., 0] = u[..., 0]
        out[..., 1:-1] = u[..., 1:-1] / u[..., 0:1]
        out[..., -1] = self.pressure(u, xi)
        return out

    # -- flux and eigenstructure ---------------------------------------------

    def flux(self, u: np.ndarray, xi, axis: int = 0, validate: bool = True) -> np.ndarray:
        """Physical flux along the given axis (0 = x, 1 = y)."""
        u = np.asarray(u, dtype=float)
        self._check_axis(axis)
        if validate:
            self._require_admissible(u, xi)
        p = self.pressure(u, xi)
        vel = u[..., 1 + axis] / u[..., 0]
        out = u * vel[..., None]
        out[..., 1 + axis] += p
        out[..., -1] += p * vel
        return out

    def eigen(self, u: np.ndarray, xi, axis: int = 0, validate: bool = True):
        """Eigenvalues and unit-row left eigenvectors of the flux Jacobian.

        Returns (lam, L) with lam of shape (..., N) sorted as
        (vel - c, vel[, vel], vel + c) and L of shape (..., N, N) satisfying
        L @ A = diag(lam) @ L.  Rows are scaled to unit Euclidean norm.
        """
        u = np.asarray(u, dtype=float)
        self._check_axis(axis)
        if validate:
            self._require_admissible(u, xi)
        if self.ndim == 1:
            lam, L = self._eigen_1d(u, xi)
        elif axis == 0:
            lam, L = self._eigen_2d_x(u, xi)
        else:
            # y-direction from the x-direction by the u <-> v swap symmetry
            swap = [0, 2, 1, 3]
            lam, L = self._eigen_2d_x(u[..., swap], xi)
            L = L[..., :, swap]
        L = L / np.linalg.norm(L, axis=-1, keepdims=True)
        return lam, L

    def _eigen_1d(self, u, xi):
        rho = u[..., 0]
        vel = u[..., 1] / rho
        c = self.sound_speed(u, xi)
        g = self.gamma_of(xi)
        inv_c = 1.0 / c
        b1 = (g - 1.0) * inv_c * inv_c
        b2 = 0.5 * b1 * vel * vel
        shape = np.broadcast_shapes(np.shape(vel), np.shape(g))
        lam = np.empty(shape + (3,))
        lam[..., 0] = vel - c
        lam[..., 1] = vel
        lam[..., 2] = vel + c
        L = np.empty(shape + (3, 3))
        L[..., 0, 0] = 0.5 * (b2 + vel * inv_c)
        L[..., 0, 1] = -0.5 * (b1 * vel + inv_c)
        L[..., 0, 2] = 0.5 * b1
        L[..., 1, 0] = 1.0 - b2
        L[..., 1, 1] = b1 * vel
        L[..., 1, 2] = -b1
        L[..., 2, 0] = 0.5 * (b2 - vel * inv_c)
        L[..., 2, 1] = -0.5 * (b1 * vel - inv_c)
        L[..., 2, 2] = 0.5 * b1
        return lam, L

    def _eigen_2d_x(self, u, xi):
        rho = u[..., 0]
        vx = u[..., 1] / rho
        vy = u[..., 2] / rho
        c = self.sound_speed(u, xi)
        g = self.gamma_of(xi)
        inv_c = 1.0 / c
        b1 = (g - 1.0) * inv_c * inv_c
        b2 = 0.5 * b1 * (vx * vx + vy * vy)
        shape = np.broadcast_shapes(np.shape(vx), np.shape(g))
        lam = np.empty(shape + (4,))
        lam[..., 0] = vx - c
        lam[..., 1] = vx
        lam[..., 2] = vx
        lam[..., 3] = vx + c
        L = np.empty(shape + (4, 4))
        L[..., 0, 0] = 0.5 * (b2 + vx * inv_c)
        L[..., 0, 1] = -0.5 * (b1 * vx + inv_c)
        L[..., 0, 2] = -0.5 * b1 * vy
        L[..., 0, 3] = 0.5 * b1
        L[..., 1, 0] = 1.0 - b2
        L[..., 1, 1] = b1 * vx
        L[..., 1, 2] = b1 * vy
        L[..., 1, 3] = -b1
        L[..., 2, 0] = -vy
        L[..., 2, 1] = 0.0
        L[..., 2, 2] = 1.0
        L[..., 2, 3] = 0.0
        L[..., 3, 0] = 0.5 * (b2 - vx * inv_c)
        L[..., 3, 1] = -0.5 * (b1 * vx - inv_c)
        L[..., 3, 2] = -0.5 * b1 * vy
        L[..., 3, 3] = 0.5 * b1
        return lam, L

    def symmetrizers(self, u: np.ndarray, xi, axis: int = 0, validate: bool = True):
        """Symmetrizer pair (a0, a1) = (L^T L, L^T diag(lam) L).

        a0 is symmetric positive definite by construction (L invertible),
        a1 symmetric, and a0^{-1} a1 is similar to the flux Jacobian.
        """
        lam, L = self.eigen(u, xi, axis=axis, validate=validate)
        Lt = np.swapaxes(L, -1, -2)
        a0 = Lt @ L
        a1 = Lt @ (lam[..., :, None] * L)
        return a0, a1

    def max_wavespeed(self, u: np.ndarray, xi, axis: int = 0) -> np.ndarray:
        """max_l |lambda_l| = |vel_axis| + c."""
        self._check_axis(axis)
        vel = u[..., 1 + axis] / u[..., 0]
        return np.abs(vel) + self.sound_speed(u, xi)

    def _check_axis(self, axis: int) -> None:
        if not 0 <= axis < self.ndim:
            raise ValueError(f"axis {axis} invalid for a {self.ndim}D model")
