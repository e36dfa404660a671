"""Semi-discrete spatial operator for the Galerkin coefficient system.

Combines WENO reconstruction to the Lobatto points, interface fluctuations
with the Lax-Friedrichs splitting of the path-average matrix, the in-cell
quadrature of the nonconservative product, and the two admissibility
limiters (node-value scaling toward the cell average, and scaling of the
higher modes of an inadmissible cell average toward its mean mode).
"""
from __future__ import annotations

import numpy as np

from .euler import AdmissibilityError
from .field import GHOST, extend_line
from .weno import lobatto_rule, node_derivative_matrix, reconstruct_cells

__all__ = ["SpatialOperator", "limit_node_values", "limit_cell_average"]

BISECT_TOL = 1e-12
BISECT_MAXIT = 60


def _bisect_theta(ctx, base: np.ndarray, target: np.ndarray) -> np.ndarray:
    """Largest s in [0, 1] with base + s (target - base) admissible.

    base rows must be admissible; the admissible set is convex, so bisection
    on the segment parameter converges to the boundary crossing.
    """
    lo = np.zeros(base.shape[0])
    hi = np.ones(base.shape[0])
    delta = target - base
    for _ in range(BISECT_MAXIT):
        mid = 0.5 * (lo + hi)
        ok = ctx.admissible_mask(base + mid[:, None] * delta)
        lo = np.where(ok, mid, lo)
        hi = np.where(ok, hi, mid)
        if np.max(hi - lo) < BISECT_TOL:
            break
    return lo


def limit_node_values(ctx, avg: np.ndarray, nodes: np.ndarray):
    """Scale reconstructed node values toward admissible cell averages.

    avg: (..., K) cell averages (must lie in the admissible coefficient set);
    nodes: (..., Q, K) reconstructed values.  Returns the limited nodes and
    a list of (flat_cell_index, theta) activations.  The cell average itself
    is never modified.
    """
    k = avg.shape[-1]
    nq = nodes.shape[-2]
    flat_nodes = nodes.reshape(-1, k)
    ok = ctx.admissible_mask(flat_nodes)
    if np.all(ok):
        return nodes, []
    cell_ok = ok.reshape(-1, nq)
    bad_cells = np.nonzero(~cell_ok.all(axis=1))[0]
    avg_flat = avg.reshape(-1, k)
    out = nodes.copy().reshape(-1, nq, k)
    activations = []
    pairs = np.argwhere(~cell_ok)
    theta_pairs = _bisect_theta(
        ctx,
        avg_flat[pairs[:, 0]],
        out[pairs[:, 0], pairs[:, 1]],
    )
    for cell in bad_cells:
        theta = float(np.min(theta_pairs[pairs[:, 0] == cell]))
        out[cell] = avg_flat[cell] + theta * (out[cell] - avg_flat[cell])
        activations.append((int(cell), theta))
    return out.reshape(nodes.shape), activations


def limit_cell_average(ctx, state: np.ndarray) -> tuple[np.ndarray, float]:
    """Scale modes >= 1 of one coefficient vector into the admissible set.

    Returns (limited_state, theta).  Raises when even the mean mode alone is
    inadmissible for some xi, which no scaling can repair.
    """
    flat = np.asarray(state, dtype=float).reshape(-1)
    if ctx.admissible_mask(flat[None])[0]:
        return flat, 1.0
    base = np.zeros_like(flat)
    base[: ctx.nvars] = flat[: ctx.nvars]
    if not ctx.admissible_mask(base[None])[0]:
        raise AdmissibilityError("mean mode of a cell average is inadmissible; cannot limit")
    theta = float(_bisect_theta(ctx, base[None], flat[None])[0])
    return base + theta * (flat - base), theta


class SpatialOperator:
    """Path-conservative WENO operator on a batch of 1D grid lines.

    Parameters
    ----------
    ctx : SgContext
    dx : cell width
    axis : flux direction fed to the model (0 = x, 1 = y)
    boundary : (left, right) policies: periodic | outflow | driver
    driver : callable t -> flat ghost coefficient vector for driver sides
    limiting : apply the admissibility limiters (on by default)
    """

    def __init__(self, ctx, dx: float, axis: int = 0, boundary=("outflow", "outflow"),
                 driver=None, limiting: bool = True):
        self.ctx = ctx
        self.dx = float(dx)
        self.axis = axis
        self.boundary = tuple(boundary)
        self.driver = driver
        self.limiting = limiting
        rule = lobatto_rule()
        self._node_weights = rule.weights
        self._deriv = node_derivative_matrix()

    # -- boundary -----------------------------------------------------------

    def extend(self, interior: np.ndarray, t: float) -> np.ndarray:
        ghost = None
        if "driver" in self.boundary:
            if self.driver is None:
                raise ValueError("boundary uses a driver but none was supplied")
            ghost = self.driver(t)
        return extend_line(interior, self.boundary, ghost_left=ghost, ghost_right=ghost)

    # -- limiters -------------------------------------------------------------

    def limit_cell_averages(self, interior: np.ndarray):
        """Apply the higher-mode limiter to every inadmissible cell average."""
        lines, n, k = interior.shape
        flat = interior.reshape(-1, k)
        ok = self.ctx.admissible_mask(flat)
        if np.all(ok):
            return interior, []
        out = flat.copy()
        activations = []
        for idx in np.nonzero(~ok)[0]:
            out[idx], theta = limit_cell_average(self.ctx, flat[idx])
            activations.append((int(idx // n), int(idx % n), theta))
        return out.reshape(interior.shape), activations

    # -- residual -------------------------------------------------------------

    def residual(self, interior: np.ndarray, t: float = 0.0):
        """Semi-discrete rate for the interior cells.

        interior: (L, n, K) admissible cell averages (pre-limited).
        Returns (rate, diagnostics) with rate of the same shape; diagnostics
        carries limiter activations and the largest interface wave speed.
        """
        ctx = self.ctx
        lines, n, k = interior.shape
        ext = self.extend(interior, t)

        # reconstruct on interior cells plus one ghost cell per side
        recon = reconstruct_cells(ext)  # (L, n+2, 4, K)
        avg_rec = ext[:, GHOST - 1 : n + GHOST + 1]
        diag = {"node_limit": []}
        if self.limiting:
            # ghost-cell averages from drivers may themselves need limiting
            ghosts = np.concatenate([avg_rec[:, :1], avg_rec[:, -1:]], axis=1)
            if not np.all(ctx.admissible_mask(ghosts.reshape(-1, k))):
                raise AdmissibilityError("boundary ghost average is inadmissible")
            recon, acts = limit_node_values(ctx, avg_rec, recon)
            diag["node_limit"] = acts

        # interface fluctuations
        left_if = recon[:, :-1, 3, :].reshape(-1, k)
        right_if = recon[:, 1:, 0, :].reshape(-1, k)
        b_psi = ctx.path_matrix_batch(left_if, right_if, axis=self.axis)
        alpha = ctx.alpha_bound_batch(left_if, right_if, axis=self.axis)
        jump = right_if - left_if
        bj = (b_psi @ jump[..., None])[..., 0]
        up = (0.5 * (bj + alpha[:, None] * jump)).reshape(lines, n + 1, k)
        down = (0.5 * (bj - alpha[:, None] * jump)).reshape(lines, n + 1, k)
        fluct = up[:, :-1] + down[:, 1:]

        # in-cell quadrature of the nonconservative product; differencing
        # against the first node keeps constant fields at an exact zero
        nodes = recon[:, 1:-1]  # (L, n, 4, K)
        delta = nodes - nodes[:, :, :1, :]
        dudx = np.einsum("mq,blqn->blmn", self._deriv, delta) / self.dx
        a0, a1 = ctx.assemble_batch(nodes.reshape(-1, k), axis=self.axis)
        try:
            np.linalg.cholesky(a0)
        except np.linalg.LinAlgError as exc:
            raise AdmissibilityError("node mass matrix not SPD") from exc
        rhs = a1 @ dudx.reshape(-1, k)[..., None]
        bdu = np.linalg.solve(a0, rhs)[..., 0].reshape(lines, n, 4, k)
        cell_term = np.einsum("m,blmn->bln", self._node_weights, bdu)

        rate = -fluct / self.dx - cell_term
        diag["alpha_max"] = float(np.max(alpha))
        return rate, diag

    # -- CFL ------------------------------------------------------------------

    def max_wavespeed(self, interior: np.ndarray) -> float:
        """Largest sampled wave-speed bound over the cell averages."""
        flat = interior.reshape(-1, interior.shape[-1])
        return float(np.max(self.ctx.wavespeed_bound(flat, axis=self.axis)))
