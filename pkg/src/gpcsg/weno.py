"""Fifth-order WENO reconstruction to the four Gauss-Lobatto points of a cell.

The reconstruction is componentwise.  For each evaluation point the three
quadratic substencil polynomials are combined with point-specific linear
weights that reproduce the full five-cell quartic; at the four Lobatto
points all linear weights are positive, so the classical smoothness-indicator
weighting applies unchanged.  Coefficients are derived at import time from
polynomial reproduction on the unit cell, not tabulated.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "LobattoRule",
    "lobatto_rule",
    "weno5_reconstruct",
    "reconstruct_cells",
    "node_derivative_matrix",
    "WENO_EPS",
]

WENO_EPS = 1e-6
_NSUB = 3  # quadratic substencils in a five-cell reconstruction


@dataclass(frozen=True)
class LobattoRule:
    """Four-point Gauss-Lobatto rule on the reference cell [-1/2, 1/2].

    Includes both endpoints; weights are normalized to sum to 1 so that
    sum_m w_m g(x_m) approximates the cell average of g.  Exact for
    polynomials of degree <= 5.
    """

    nodes: np.ndarray
    weights: np.ndarray


def lobatto_rule() -> LobattoRule:
    b = 0.5 / np.sqrt(5.0)
    nodes = np.array([-0.5, -b, b, 0.5])
    weights = np.array([1.0, 5.0, 5.0, 1.0]) / 12.0
    return LobattoRule(nodes=nodes, weights=weights)


def _point_coeffs(centers, x: float) -> np.ndarray:
    """Coefficients a_k with p(x) = sum_k a_k vbar_k for the polynomial
    whose averages over unit-width cells at `centers` match vbar."""
    centers = np.asarray(centers, dtype=float)
    n = len(centers)
    faces = np.concatenate([centers - 0.5, [centers[-1] + 0.5]])
    coeffs = np.zeros(n)
    # p = d/dx of the Lagrange interpolant of the primitive function at faces
    dbasis = np.zeros(n + 1)
    for i in range(n + 1):
        s = 0.0
        for j in range(n + 1):
            if j == i:
                continue
            prod = 1.0
            for k in range(n + 1):
                if k in (i, j):
                    continue
                prod *= (x - faces[k]) / (faces[i] - faces[k])
            s += prod / (faces[i] - faces[j])
        dbasis[i] = s
    for k in range(n):
        # primitive of the k-th unit average jumps from 0 to 1 at face k+1
        coeffs[k] = np.sum(dbasis[k + 1:])
    return coeffs


def _derive_tables():
    """Substencil coefficients and linear weights at the Lobatto points."""
    nodes = lobatto_rule().nodes
    sub = np.zeros((len(nodes), _NSUB, 3))
    lin = np.zeros((len(nodes), _NSUB))
    for m, x in enumerate(nodes):
        full = _point_coeffs([-2, -1, 0, 1, 2], float(x))
        mat = np.zeros((5, _NSUB))
        for r in range(_NSUB):
            sub[m, r] = _point_coeffs([r - 2, r - 1, r], float(x))
            mat[r : r + 3, r] = sub[m, r]
        d, *_ = np.linalg.lstsq(mat, full, rcond=None)
        if np.max(np.abs(mat @ d - full)) > 1e-12 or np.any(d <= 0.0):
            raise RuntimeError("WENO linear-weight derivation failed")
        lin[m] = d
    return sub, lin


_SUB_COEFFS, _LIN_WEIGHTS = _derive_tables()


def node_derivative_matrix() -> np.ndarray:
    """D with (dp/dx)(x_m) = sum_k D[m, k] p(x_k) for the cubic through the
    Lobatto nodes of the reference cell; scale by 1/dx for a physical cell."""
    x = lobatto_rule().nodes
    D = np.zeros((4, 4))
    for m in range(4):
        for i in range(4):
            s = 0.0
            for j in range(4):
                if j == i:
                    continue
                prod = 1.0
                for k in range(4):
                    if k in (i, j):
                        continue
                    prod *= (x[m] - x[k]) / (x[i] - x[k])
                s += prod / (x[i] - x[j])
            D[m, i] = s
    # differentiation annihilates constants exactly: pin the row sums to zero
    # so constant fields produce an exactly zero rate
    for m in range(4):
        D[m, m] -= D[m].sum()
    return D


def reconstruct_cells(avg: np.ndarray, eps: float = WENO_EPS, nodes=(0, 1, 2, 3)) -> np.ndarray:
    """WENO5 Lobatto-point values for every cell with a full stencil.

    avg has shape (..., C, K) of cell averages (componentwise in K);
    returns shape (..., C - 4, len(nodes), K): for each of the C - 4 center
    cells, the reconstruction at the requested Lobatto points (all four by
    default; flux-form callers only need one face).
    """
    avg = np.asarray(avg, dtype=float)
    c = avg.shape[-2]
    if c < 5:
        raise ValueError(f"need at least 5 cells, got {c}")
    v = [avg[..., i : c - 4 + i, :] for i in range(5)]
    # differences against the center cell: constants reproduce bit-exactly
    dv = [vi - v[2] for vi in v]

    beta = np.empty((_NSUB,) + v[0].shape)
    beta[0] = (13.0 / 12.0) * (v[0] - 2 * v[1] + v[2]) ** 2 + 0.25 * (v[0] - 4 * v[1] + 3 * v[2]) ** 2
    beta[1] = (13.0 / 12.0) * (v[1] - 2 * v[2] + v[3]) ** 2 + 0.25 * (v[1] - v[3]) ** 2
    beta[2] = (13.0 / 12.0) * (v[2] - 2 * v[3] + v[4]) ** 2 + 0.25 * (3 * v[2] - 4 * v[3] + v[4]) ** 2
    inv = 1.0 / (eps + beta) ** 2

    out = np.empty(v[0].shape[:-1] + (len(nodes),) + v[0].shape[-1:])
    for col, m in enumerate(nodes):
        wsum = None
        val = None
        for r in range(_NSUB):
            pr = (
                _SUB_COEFFS[m, r, 0] * dv[r]
                + _SUB_COEFFS[m, r, 1] * dv[r + 1]
                + _SUB_COEFFS[m, r, 2] * dv[r + 2]
            )
            w = _LIN_WEIGHTS[m, r] * inv[r]
            wsum = w if wsum is None else wsum + w
            val = w * pr if val is None else val + w * pr
        out[..., col, :] = v[2] + val / wsum
    return out


def weno5_reconstruct(stencil: np.ndarray, eps: float = WENO_EPS) -> np.ndarray:
    """Lobatto-point values of the center cell from 5 consecutive averages.

    stencil has shape (5,) for a scalar or (5, K) componentwise; returns
    (4,) or (4, K) values ordered left face, interior pair, right face.
    """
    stencil = np.asarray(stencil, dtype=float)
    scalar = stencil.ndim == 1
    if scalar:
        stencil = stencil[:, None]
    if stencil.shape[0] != 5:
        raise ValueError("stencil must hold exactly 5 cell averages")
    vals = reconstruct_cells(stencil[None, :, :], eps=eps)[0, 0]
    return vals[:, 0] if scalar else vals
