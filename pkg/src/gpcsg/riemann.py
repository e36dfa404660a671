"""Exact Riemann solver for the 1D Euler equations and Sod statistics.

Star-region pressure is found by Newton iteration on the pressure function
with a bisection safeguard, starting from the two-rarefaction approximation.
The self-similar solution is sampled at speeds s = x / t.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import gauss_rule
from .euler import EulerModel

__all__ = ["RiemannSolution", "solve_riemann", "exact_riemann", "exact_sod_stats"]

_PTOL = 1e-12
_MAXIT = 100


def _pressure_fn(p, rho_k, p_k, c_k, g):
    """f_K(p) and its derivative for one side of the star region."""
    if p > p_k:  # shock branch
        a_k = 2.0 / ((g + 1.0) * rho_k)
        b_k = (g - 1.0) / (g + 1.0) * p_k
        root = np.sqrt(a_k / (p + b_k))
        f = (p - p_k) * root
        df = root * (1.0 - 0.5 * (p - p_k) / (p + b_k))
    else:  # rarefaction branch
        f = 2.0 * c_k / (g - 1.0) * ((p / p_k) ** ((g - 1.0) / (2.0 * g)) - 1.0)
        df = (p / p_k) ** (-(g + 1.0) / (2.0 * g)) / (rho_k * c_k)
    return f, df


@dataclass(frozen=True)
class RiemannSolution:
    """Star state and sampler for one Riemann problem."""

    left: tuple
    right: tuple
    gamma: float
    p_star: float
    u_star: float
    rho_star_left: float
    rho_star_right: float
    pattern: str  # two chars, one per side: 'R' rarefaction / 'S' shock

    def sample(self, s) -> np.ndarray:
        """Primitive state (rho, u, p) at similarity speeds s = x / t."""
        s = np.asarray(s, dtype=float)
        g = self.gamma
        rho_l, u_l, p_l = self.left
        rho_r, u_r, p_r = self.right
        c_l = np.sqrt(g * p_l / rho_l)
        c_r = np.sqrt(g * p_r / rho_r)
        rho = np.empty_like(s)
        u = np.empty_like(s)
        p = np.empty_like(s)

        left_of_contact = s <= self.u_star
        # left wave
        if self.pattern[0] == "S":
            sp = u_l - c_l * np.sqrt((g + 1.0) / (2 * g) * self.p_star / p_l + (g - 1.0) / (2 * g))
            pre = s < sp
            fan = np.zeros_like(s, dtype=bool)
        else:
            head = u_l - c_l
            c_star = c_l * (self.p_star / p_l) ** ((g - 1.0) / (2.0 * g))
            tail = self.u_star - c_star
            pre = s < head
            fan = (~pre) & (s < tail)
        region = left_of_contact & pre
        rho[region], u[region], p[region] = rho_l, u_l, p_l
        region = left_of_contact & fan
        if np.any(region):
            sf = s[region]
            uf = 2.0 / (g + 1.0) * (c_l + 0.5 * (g - 1.0) * u_l + sf)
            cf = 2.0 / (g + 1.0) * (c_l + 0.5 * (g - 1.0) * (u_l - sf))
            rho[region] = rho_l * (cf / c_l) ** (2.0 / (g - 1.0))
            u[region] = uf
            p[region] = p_l * (cf / c_l) ** (2.0 * g / (g - 1.0))
        region = left_of_contact & ~pre & ~fan
        rho[region], u[region], p[region] = self.rho_star_left, self.u_star, self.p_star

        right_of_contact = ~left_of_contact
        if self.pattern[1] == "S":
            sp = u_r + c_r * np.sqrt((g + 1.0) / (2 * g) * self.p_star / p_r + (g - 1.0) / (2 * g))
            post = s > sp
            fan = np.zeros_like(s, dtype=bool)
        else:
            head = u_r + c_r
            c_star = c_r * (self.p_star / p_r) ** ((g - 1.0) / (2.0 * g))
            tail = self.u_star + c_star
            post = s > head
            fan = (~post) & (s > tail)
        region = right_of_contact & post
        rho[region], u[region], p[region] = rho_r, u_r, p_r
        region = right_of_contact & fan
        if np.any(region):
            sf = s[region]
            uf = 2.0 / (g + 1.0) * (-c_r + 0.5 * (g - 1.0) * u_r + sf)
            cf = 2.0 / (g + 1.0) * (c_r - 0.5 * (g - 1.0) * (u_r - sf))
            rho[region] = rho_r * (cf / c_r) ** (2.0 / (g - 1.0))
            u[region] = uf
            p[region] = p_r * (cf / c_r) ** (2.0 * g / (g - 1.0))
        region = right_of_contact & ~post & ~fan
        rho[region], u[region], p[region] = self.rho_star_right, self.u_star, self.p_star
        return np.stack([rho, u, p], axis=-1)


def solve_riemann(left, right, gamma: float) -> RiemannSolution:
    """Star-region solution for primitive states left/right = (rho, u, p)."""
    rho_l, u_l, p_l = (float(v) for v in left)
    rho_r, u_r, p_r = (float(v) for v in right)
    g = float(gamma)
    if min(rho_l, rho_r, p_l, p_r) <= 0.0:
        raise ValueError("Riemann data must have positive density and pressure")
    c_l = np.sqrt(g * p_l / rho_l)
    c_r = np.sqrt(g * p_r / rho_r)
    if 2.0 * (c_l + c_r) / (g - 1.0) <= u_r - u_l:
        raise ValueError("initial states generate vacuum; no positive star pressure")

    # two-rarefaction initial guess
    z = (g - 1.0) / (2.0 * g)
    p = ((c_l + c_r - 0.5 * (g - 1.0) * (u_r - u_l)) / (c_l / p_l**z + c_r / p_r**z)) ** (1.0 / z)
    p = max(p, _PTOL)
    p_lo, p_hi = _PTOL, max(p_l, p_r, p) * 10.0

    def total(p):
        f_l, df_l = _pressure_fn(p, rho_l, p_l, c_l, g)
        f_r, df_r = _pressure_fn(p, rho_r, p_r, c_r, g)
        return f_l + f_r + (u_r - u_l), df_l + df_r

    # make sure the bisection bracket is valid: total is increasing in p
    while total(p_hi)[0] < 0.0:
        p_hi *= 10.0
    for _ in range(_MAXIT):
        f, df = total(p)
        if f > 0.0:
            p_hi = min(p_hi, p)
        else:
            p_lo = max(p_lo, p)
        step = f / df
        p_new = p - step
        if not p_lo < p_new < p_hi:
            p_new = 0.5 * (p_lo + p_hi)
        if abs(p_new - p) <= _PTOL * max(p_new, 1e-300):
            p = p_new
            break
        p = p_new

    f_l, _ = _pressure_fn(p, rho_l, p_l, c_l, g)
    f_r, _ = _pressure_fn(p, rho_r, p_r, c_r, g)
    u_star = 0.5 * (u_l + u_r) + 0.5 * (f_r - f_l)
    beta = (g - 1.0) / (g + 1.0)

    def star_density(rho_k, p_k):
        r = p / p_k
        if r > 1.0:
            return rho_k * (r + beta) / (beta * r + 1.0)
        return rho_k * r ** (1.0 / g)

    return RiemannSolution(
        left=(rho_l, u_l, p_l),
        right=(rho_r, u_r, p_r),
        gamma=g,
        p_star=p,
        u_star=u_star,
        rho_star_left=star_density(rho_l, p_l),
        rho_star_right=star_density(rho_r, p_r),
        pattern=("S" if p > p_l else "R") + ("S" if p > p_r else "R"),
    )


def exact_riemann(left, right, gamma: float, s) -> np.ndarray:
    """Conserved state of the self-similar solution at speeds s = x / t."""
    sol = solve_riemann(left, right, gamma)
    model = EulerModel(ndim=1, gamma=gamma)
    return model.primitive_to_conserved(sol.sample(s), 0.0)


def exact_sod_stats(mesh, t: float, gamma: float = 1.4, n_xi: int = 64, n_xgauss: int = 5):
    """Cell-averaged mean and standard deviation of the exact Sod density.

    The initial interface sits at 0.5 + 0.05 xi; each xi quadrature node
    shifts the self-similar profile, and statistics follow by quadrature.
    Returns (mean, std) arrays over the mesh cells.
    """
    if t <= 0.0:
        raise ValueError("statistics need t > 0")
    rule = gauss_rule(n_xi)
    sol = solve_riemann((1.0, 0.0, 1.0), (0.125, 0.0, 0.1), gamma)
    xg = gauss_rule(n_xgauss)
    centers = mesh.centers()
    pts = centers[:, None] + 0.5 * mesh.dx * xg.nodes[None, :]
    rho = np.empty((n_xi, mesh.n_cells))
    for q, xi in enumerate(rule.nodes):
        prim = sol.sample((pts - (0.5 + 0.05 * xi)) / t)
        rho[q] = prim[..., 0] @ xg.weights
    mean = rule.weights @ rho
    var = rule.weights @ (rho - mean) ** 2
    return mean, np.sqrt(var)
