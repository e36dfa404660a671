"""Structured meshes, ghost-cell boundary policies, and gPC projection of
initial data onto cell averages.

Cell-average coefficient fields are plain arrays: 1D solvers work on
(L, n, K) with L independent grid lines (L = 1 for a true 1D run) and
K = (M+1)*N flattened mode-major coefficients; 2D fields are (ny, nx, K).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import gauss_rule

__all__ = ["GHOST", "Mesh1D", "Mesh2D", "extend_line", "project_initial"]

GHOST = 3
_XGAUSS = 5  # spatial Gauss points per cell (per piece) in projections


@dataclass(frozen=True)
class Mesh1D:
    """Uniform 1D mesh of n_cells cells on [lo, hi]."""

    n_cells: int
    lo: float
    hi: float

    @property
    def dx(self) -> float:
        return (self.hi - self.lo) / self.n_cells

    def faces(self) -> np.ndarray:
        return self.lo + self.dx * np.arange(self.n_cells + 1)

    def centers(self) -> np.ndarray:
        return self.lo + self.dx * (0.5 + np.arange(self.n_cells))


@dataclass(frozen=True)
class Mesh2D:
    """Uniform rectangular mesh as a pair of 1D axes."""

    x: Mesh1D
    y: Mesh1D

    @classmethod
    def unit_square(cls, nx: int, ny: int) -> "Mesh2D":
        return cls(x=Mesh1D(nx, 0.0, 1.0), y=Mesh1D(ny, 0.0, 1.0))


def extend_line(
    interior: np.ndarray,
    boundary: tuple[str, str],
    ghost_left: np.ndarray | None = None,
    ghost_right: np.ndarray | None = None,
) -> np.ndarray:
    """Attach GHOST cells per side of a (L, n, K) line batch.

    Policies: 'periodic' wraps, 'outflow' copies the adjacent interior cell,
    'driver' fills all ghost cells with the supplied coefficient vector.
    """
    left, right = boundary
    lines, n, k = interior.shape
    out = np.empty((lines, n + 2 * GHOST, k))
    out[:, GHOST : n + GHOST] = interior
    if left == "periodic" or right == "periodic":
        if left != right:
            raise ValueError("periodic boundaries must be paired")
    if left == "periodic":
        out[:, :GHOST] = interior[:, n - GHOST :]
        out[:, n + GHOST :] = interior[:, :GHOST]
        return out
    for side, policy, ghost in ((0, left, ghost_left), (1, right, ghost_right)):
        sl = slice(0, GHOST) if side == 0 else slice(n + GHOST, None)
        if policy == "outflow":
            edge = interior[:, :1] if side == 0 else interior[:, -1:]
            out[:, sl] = edge
        elif policy == "driver":
            if ghost is None:
                raise ValueError("driver boundary needs ghost coefficients")
            out[:, sl] = np.asarray(ghost, dtype=float)
        else:
            raise ValueError(f"unknown boundary policy {policy!r}")
    return out


def _piece_rule(lo: np.ndarray, hi: np.ndarray):
    """Gauss points/weights for length-weighted averages on [lo, hi] pieces."""
    rule = gauss_rule(_XGAUSS)
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    pts = mid[..., None] + half[..., None] * rule.nodes
    # the rule's weights are measure-normalized (sum to 1): scale by length
    wts = np.broadcast_to(rule.weights, pts.shape) * (hi - lo)[..., None]
    return pts, wts


def _cell_averages_1d(values_at, faces: np.ndarray, xi: float, cuts: np.ndarray) -> np.ndarray:
    """Averages of values_at(x) over cells given faces, splitting the spatial
    quadrature at any cut location falling inside a cell."""
    lo, hi = faces[:-1], faces[1:]
    dx = hi - lo
    pts, wts = _piece_rule(lo, hi)
    vals = values_at(pts)
    total = np.einsum("cg,cg...->c...", wts, vals)
    for cut in np.atleast_1d(cuts):
        inside = np.nonzero((cut > lo) & (cut < hi))[0]
        for j in inside:
            acc = 0.0
            for a, b in ((lo[j], cut), (cut, hi[j])):
                p, w = _piece_rule(np.array([a]), np.array([b]))
                acc = acc + np.einsum("g,g...->...", w[0], values_at(p[0]))
            total[j] = acc
    return total / dx[..., None]


def project_initial(problem, ctx, mesh) -> np.ndarray:
    """gPC projection of the initial condition onto cell averages.

    Per cell the spatial average uses 5-point Gauss quadrature (split at
    xi-dependent discontinuity locations so the projection error stays at
    quadrature accuracy), tensored with the context's xi rule.

    Returns (1, n, K) for 1D problems, (ny, nx, K) for 2D.
    """
    model = ctx.model
    rule = ctx.xi_rule
    if problem.ndim == 1:
        faces = mesh.faces()
        samples = np.empty((mesh.n_cells, len(rule.nodes), model.nvars))
        for q, xq in enumerate(rule.nodes):
            cuts = problem.jumps[0](xq).reshape(-1) if problem.jumps else np.empty(0)

            def cons_at(x, xq=xq):
                # average conserved variables, not primitives
                return model.primitive_to_conserved(problem.initial(x, xq), xq)

            samples[:, q] = _cell_averages_1d(cons_at, faces, xq, cuts)
        return ctx.project_samples(samples)[None, :, :]

    xfaces, yfaces = mesh.x.faces(), mesh.y.faces()
    ny, nx = mesh.y.n_cells, mesh.x.n_cells
    out = np.zeros((ny, nx, ctx.ncoeffs))
    wphi = rule.weights[:, None] * ctx.basis.eval_table(rule.nodes)
    for q, xq in enumerate(rule.nodes):
        xcuts = problem.jumps[0](xq).reshape(-1) if problem.jumps else np.empty(0)
        ycuts = problem.jumps[1](xq).reshape(-1) if len(problem.jumps) > 1 else np.empty(0)
        xp, xw = _split_axis(xfaces, xcuts)
        yp, yw = _split_axis(yfaces, ycuts)
        cons = model.primitive_to_conserved(
            problem.initial(xp[None, None, :, :], yp[:, :, None, None], xq), xq
        )  # (ny, gy, nx, gx, N)
        avg = np.einsum("ab,cd,abcdn->acn", yw, xw, cons)
        avg /= mesh.x.dx * mesh.y.dx
        out = out.reshape(ny, nx, ctx.order + 1, model.nvars)
        out += wphi[q][None, None, :, None] * avg[:, :, None, :]
        out = out.reshape(ny, nx, ctx.ncoeffs)
    return out


def _split_axis(faces: np.ndarray, cuts: np.ndarray):
    """Per-cell quadrature points/weights along one axis, split at cuts.

    Returns (n_cells, 2 * _XGAUSS) arrays; weights integrate over the cell
    (not averaged).  Cells not containing a cut carry zero-weight padding.
    """
    lo, hi = faces[:-1], faces[1:]
    n = len(lo)
    base_p, base_w = _piece_rule(lo, hi)
    pts = np.concatenate([base_p, np.repeat(base_p[:, :1], _XGAUSS, axis=1)], axis=1)
    wts = np.concatenate([base_w, np.zeros((n, _XGAUSS))], axis=1)
    for cut in np.atleast_1d(cuts):
        for j in np.nonzero((cut > lo) & (cut < hi))[0]:
            p1, w1 = _piece_rule(np.array([lo[j]]), np.array([cut]))
            p2, w2 = _piece_rule(np.array([cut]), np.array([hi[j]]))
            pts[j] = np.concatenate([p1[0], p2[0]])
            wts[j] = np.concatenate([w1[0], w2[0]])
    return pts, wts
