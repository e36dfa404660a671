"""Orthonormal Legendre basis and Gauss quadrature on the uniform random domain.

The random variable lives on [-1, 1] with the measure-normalized uniform
weight d(mu) = dxi / 2.  The basis polynomials are the Legendre polynomials
scaled by sqrt(2i + 1) so that  int phi_i phi_j dmu = delta_ij.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "QuadratureRule",
    "LegendreBasis",
    "basis_eval",
    "gauss_rule",
    "gpc_eval",
    "mean_std",
]

_NEWTON_TOL = 1e-15
_NEWTON_MAXIT = 100


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights on [-1, 1]; weights sum to 1 (measure-normalized)."""

    nodes: np.ndarray
    weights: np.ndarray

    def integrate(self, values: np.ndarray) -> np.ndarray:
        """Weighted sum over the leading axis of per-node values."""
        values = np.asarray(values)
        return np.tensordot(self.weights, values, axes=(0, 0))


def _legendre_and_derivative(n: int, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """P_n(x) and P_n'(x) by the three-term recurrence."""
    x = np.asarray(x, dtype=float)
    p_prev = np.ones_like(x)
    if n == 0:
        return p_prev, np.zeros_like(x)
    p = x.copy()
    for k in range(2, n + 1):
        p_prev, p = p, ((2 * k - 1) * x * p - (k - 1) * p_prev) / k
    with np.errstate(invalid="ignore", divide="ignore"):
        dp = n * (x * p - p_prev) / (x * x - 1.0)
    at_end = np.abs(x) == 1.0
    if np.any(at_end):
        end_val = np.sign(x) ** (n + 1) * n * (n + 1) / 2.0
        dp = np.where(at_end, end_val, dp)
    return p, dp


def gauss_rule(n: int) -> QuadratureRule:
    """n-point Gauss-Legendre rule on [-1, 1], weights normalized to sum 1.

    Exact for polynomials of degree <= 2n - 1 under the uniform measure.
    Nodes are found by Newton iteration on the Legendre recurrence from
    Chebyshev initial guesses; no tabulated values.
    """
    if n < 1:
        raise ValueError(f"quadrature rule needs n >= 1, got {n}")
    k = np.arange(1, n + 1)
    x = np.cos(np.pi * (k - 0.25) / (n + 0.5))
    for _ in range(_NEWTON_MAXIT):
        p, dp = _legendre_and_derivative(n, x)
        dx = p / dp
        x -= dx
        if np.max(np.abs(dx)) < _NEWTON_TOL:
            break
    _, dp = _legendre_and_derivative(n, x)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    order = np.argsort(x)
    # normalize: raw Gauss-Legendre weights sum to 2 = measure of [-1,1]
    return QuadratureRule(nodes=x[order], weights=w[order] / 2.0)


class LegendreBasis:
    """Orthonormal polynomial basis of maximal degree `order` on [-1, 1].

    Kept as a class so that other measures or tensorized multi-variable
    bases can slot in behind the same evaluation interface.
    """

    def __init__(self, order: int):
        if order < 0:
            raise ValueError(f"basis order must be >= 0, got {order}")
        self.order = order

    @property
    def size(self) -> int:
        return self.order + 1

    def contains(self, xi) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        return (xi >= -1.0) & (xi <= 1.0)

    def eval_one(self, i: int, xi) -> np.ndarray:
        """phi_i(xi) for a single basis index."""
        if not 0 <= i <= self.order:
            raise IndexError(f"basis index {i} out of range [0, {self.order}]")
        xi = np.asarray(xi, dtype=float)
        if np.any(~self.contains(xi)):
            raise ValueError("xi outside the random domain [-1, 1]")
        p, _ = _legendre_and_derivative(i, xi)
        return np.sqrt(2.0 * i + 1.0) * p

    def eval_table(self, xi) -> np.ndarray:
        """Table of all phi_i(xi), shape xi.shape + (order + 1,)."""
        xi = np.asarray(xi, dtype=float)
        if np.any(~self.contains(xi)):
            raise ValueError("xi outside the random domain [-1, 1]")
        out = np.empty(xi.shape + (self.order + 1,))
        p_prev = np.ones_like(xi)
        out[..., 0] = p_prev
        if self.order >= 1:
            p = xi.copy()
            out[..., 1] = np.sqrt(3.0) * p
            for k in range(2, self.order + 1):
                p_prev, p = p, ((2 * k - 1) * xi * p - (k - 1) * p_prev) / k
                out[..., k] = np.sqrt(2.0 * k + 1.0) * p
        return out

    def default_rule(self) -> QuadratureRule:
        """Rule integrating products phi_i phi_j exactly (degree 2*order)."""
        return gauss_rule(self.order + 1)


def basis_eval(basis: LegendreBasis, i: int, xi) -> np.ndarray:
    """Orthonormalized Legendre polynomial of degree i at xi."""
    return basis.eval_one(i, xi)


def gpc_eval(coeffs: np.ndarray, xi, basis: LegendreBasis | None = None) -> np.ndarray:
    """Evaluate the gPC expansion sum_i coeffs[i] * phi_i(xi).

    coeffs has shape (M + 1, N); returns shape xi.shape + (N,).
    """
    coeffs = np.asarray(coeffs, dtype=float)
    if basis is None:
        basis = LegendreBasis(coeffs.shape[0] - 1)
    table = basis.eval_table(xi)
    return np.tensordot(table, coeffs, axes=(-1, 0))


def mean_std(coeffs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Componentwise mean and standard deviation of a gPC expansion.

    mean is the degree-zero coefficient; the variance is the sum of squares
    of the remaining coefficients (Parseval under orthonormality).
    """
    coeffs = np.asarray(coeffs, dtype=float)
    mean = coeffs[0].copy()
    var = np.sum(coeffs[1:] ** 2, axis=0)
    return mean, np.sqrt(var)
