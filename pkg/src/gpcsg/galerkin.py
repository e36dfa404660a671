"""Galerkin projection of the symmetrized system onto the gPC basis.

Assembles the coupled deterministic coefficient system: the block matrices
a0_hat/a1_hat integrating phi_i phi_j times the physical symmetrizers over
the random domain, the segment-path average matrix used at cell interfaces,
the Lax-Friedrichs fluctuation splitting, and the wave-speed bound that
dominates the spectral radius of the path-average matrix.

Coefficient vectors are stored mode-major: the flattened vector stacks all
N physical components of mode 0, then mode 1, etc.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import LegendreBasis, QuadratureRule, gauss_rule
from .euler import AdmissibilityError

__all__ = [
    "GalerkinMatrices",
    "FluctuationSplit",
    "PathRule",
    "SgContext",
    "path_rule",
    "lf_split",
]

DEFAULT_PATH_POINTS = 3
DEFAULT_ALPHA_SAFETY = 1.05
CHECK_GRID_POINTS = 33


@dataclass(frozen=True)
class GalerkinMatrices:
    """Assembled system blocks; a0_hat SPD, a1_hat symmetric."""

    a0_hat: np.ndarray
    a1_hat: np.ndarray


@dataclass(frozen=True)
class FluctuationSplit:
    """Lax-Friedrichs splitting b_pm = (b_psi +- alpha I) / 2."""

    b_minus: np.ndarray
    b_plus: np.ndarray
    alpha: float


@dataclass(frozen=True)
class PathRule:
    """Gauss nodes/weights on [0, 1] for segment-path averaging."""

    s_nodes: np.ndarray
    s_weights: np.ndarray


def path_rule(n: int = DEFAULT_PATH_POINTS) -> PathRule:
    rule = gauss_rule(n)
    return PathRule(s_nodes=0.5 * (rule.nodes + 1.0), s_weights=rule.weights)


def lf_split(b_psi: np.ndarray, alpha) -> FluctuationSplit:
    """Split the path-average matrix into up/down-wind parts."""
    alpha = float(alpha)
    if alpha < 0.0:
        raise ValueError(f"alpha must be nonnegative, got {alpha}")
    eye = np.eye(b_psi.shape[-1])
    return FluctuationSplit(
        b_minus=0.5 * (b_psi - alpha * eye),
        b_plus=0.5 * (b_psi + alpha * eye),
        alpha=alpha,
    )


class SgContext:
    """Couples a hyperbolic model with a gPC basis and its quadrature rules.

    Parameters
    ----------
    model : EulerModel (or any object with the same contract)
    order : gPC order M
    n_xi : nodes for the random-domain quadrature; the assembly integrands
        are non-polynomial in xi, so the default max(2(M+1), 8) is a
        convergence-tested heuristic rather than an exactness degree.
    n_path : Gauss points on the interface segment path.
    alpha_safety : factor applied to the sampled wave-speed supremum.
    """

    def __init__(
        self,
        model,
        order: int,
        n_xi: int | None = None,
        n_path: int = DEFAULT_PATH_POINTS,
        alpha_safety: float = DEFAULT_ALPHA_SAFETY,
    ):
        self.model = model
        self.basis = LegendreBasis(order)
        self.order = order
        self.nvars = model.nvars
        self.ncoeffs = (order + 1) * model.nvars
        if n_xi is None:
            n_xi = max(2 * (order + 1), 8)
        self.xi_rule: QuadratureRule = gauss_rule(n_xi)
        self.path: PathRule = path_rule(n_path)
        self.alpha_safety = float(alpha_safety)

        self._phi_q = self.basis.eval_table(self.xi_rule.nodes)  # (q, M+1)
        pair = self.xi_rule.weights[:, None, None] * (
            self._phi_q[:, :, None] * self._phi_q[:, None, :]
        )
        self._pair_flat = pair.reshape(len(self.xi_rule.nodes), -1)  # (q, (M+1)^2)

        # wave-speed sampling set: quadrature nodes plus the endpoints
        self._xi_alpha = np.concatenate([[-1.0], self.xi_rule.nodes, [1.0]])
        self._phi_alpha = self.basis.eval_table(self._xi_alpha)

        # admissibility check set: quadrature nodes, endpoints, coarse grid
        grid = np.linspace(-1.0, 1.0, CHECK_GRID_POINTS)
        self.xi_check = np.unique(np.concatenate([self.xi_rule.nodes, [-1.0, 1.0], grid]))
        self._phi_check = self.basis.eval_table(self.xi_check)

    # -- shapes ------------------------------------------------------------

    def as_modes(self, flat: np.ndarray) -> np.ndarray:
        """View (..., K) flattened coefficients as (..., M+1, N)."""
        flat = np.asarray(flat, dtype=float)
        return flat.reshape(flat.shape[:-1] + (self.order + 1, self.nvars))

    def as_flat(self, modes: np.ndarray) -> np.ndarray:
        modes = np.asarray(modes, dtype=float)
        return modes.reshape(modes.shape[:-2] + (self.ncoeffs,))

    # -- evaluation ---------------------------------------------------------

    def eval_states(self, flat: np.ndarray, phi_table: np.ndarray) -> np.ndarray:
        """Physical states at tabulated xi points, shape (..., n_pts, N)."""
        modes = self.as_modes(flat)
        out = np.swapaxes(modes, -1, -2) @ phi_table.T  # (..., N, n_pts)
        return np.swapaxes(out, -1, -2)

    def project_samples(self, states: np.ndarray) -> np.ndarray:
        """Quadrature projection of per-node states (..., q, N) onto modes."""
        wphi = self.xi_rule.weights[:, None] * self._phi_q
        modes = np.einsum("...qn,qm->...mn", np.asarray(states, dtype=float), wphi)
        return self.as_flat(modes)

    # -- admissibility -------------------------------------------------------

    def admissible_mask(self, flat: np.ndarray) -> np.ndarray:
        """True per batch entry when every xi in the check set is admissible."""
        states = self.eval_states(flat, self._phi_check)
        ok = self.model.is_admissible(states, self.xi_check)
        return np.all(ok, axis=-1)

    def check_admissible(self, state: np.ndarray):
        """Check one gPC state over the xi check set; returns (ok, witness)."""
        flat = state.reshape(-1) if state.ndim > 1 else np.asarray(state, dtype=float)
        states = self.eval_states(flat, self._phi_check)
        ok = self.model.is_admissible(states, self.xi_check)
        if np.all(ok):
            return True, None
        return False, float(self.xi_check[int(np.argmin(ok))])

    # -- assembly -------------------------------------------------------------

    def assemble_batch(self, flat: np.ndarray, axis: int = 0):
        """Galerkin block matrices for a batch of coefficient vectors.

        flat has shape (B, K); returns (a0_hat, a1_hat), each (B, K, K).
        Raises AdmissibilityError naming the first offending (batch, xi)
        pair when an expansion leaves the admissible set at a quadrature node.
        """
        flat = np.atleast_2d(np.asarray(flat, dtype=float))
        states = self.eval_states(flat, self._phi_q)  # (B, q, N)
        xi = self.xi_rule.nodes
        ok = self.model.is_admissible(states, xi)
        if not np.all(ok):
            b, q = np.argwhere(~ok)[0]
            raise AdmissibilityError(
                f"expansion {b} inadmissible at quadrature node xi={xi[q]:.6f}"
            )
        a0q, a1q = self.model.symmetrizers(states, xi, axis=axis, validate=False)
        return self._contract(a0q), self._contract(a1q)

    def _contract(self, akq: np.ndarray, pair_flat: np.ndarray | None = None) -> np.ndarray:
        """Weighted sum of phi_i phi_j A_k over nodes -> (B, K, K) blocks."""
        if pair_flat is None:
            pair_flat = self._pair_flat
        bsz, q, n, _ = akq.shape
        m1 = self.order + 1
        prod = akq.transpose(0, 2, 3, 1).reshape(bsz, n * n, q) @ pair_flat
        prod = prod.reshape(bsz, n, n, m1, m1).transpose(0, 3, 1, 4, 2)
        return prod.reshape(bsz, self.ncoeffs, self.ncoeffs)

    def assemble(self, state: np.ndarray, axis: int = 0) -> GalerkinMatrices:
        """Single-state variant of assemble_batch."""
        flat = self.as_flat(np.asarray(state, dtype=float)) if np.asarray(state).ndim == 2 else state
        a0, a1 = self.assemble_batch(np.atleast_2d(flat), axis=axis)
        return GalerkinMatrices(a0_hat=a0[0], a1_hat=a1[0])

    # -- interface path machinery ---------------------------------------------

    def path_states(self, left: np.ndarray, right: np.ndarray) -> np.ndarray:
        """Segment states left + s (right - left); shape (B, n_path, K)."""
        left = np.atleast_2d(np.asarray(left, dtype=float))
        right = np.atleast_2d(np.asarray(right, dtype=float))
        s = self.path.s_nodes[None, :, None]
        return left[:, None, :] + s * (right - left)[:, None, :]

    def path_average(self, left: np.ndarray, right: np.ndarray, axis: int = 0):
        """Path-averaged Galerkin matrices (A0_psi, A1_psi), each (B, K, K).

        The path and xi quadratures commute with the assembly contraction,
        so both sums are fused into one weighted contraction over all
        (path node, xi node) pairs instead of forming per-node matrices.
        """
        psi = self.path_states(left, right)
        bsz, npath, k = psi.shape
        states = self.eval_states(psi.reshape(bsz * npath, k), self._phi_q)
        nq = len(self.xi_rule.nodes)
        xi = self.xi_rule.nodes
        ok = self.model.is_admissible(states, xi)
        if not np.all(ok):
            b, q = np.argwhere(~ok)[0]
            raise AdmissibilityError(
                f"interface {b // npath}: path state s={self.path.s_nodes[b % npath]:.4f} "
                f"inadmissible at xi={xi[q]:.6f}"
            )
        a0q, a1q = self.model.symmetrizers(states, xi, axis=axis, validate=False)
        pair = (self.path.s_weights[:, None, None] * self._pair_flat[None, :, :]).reshape(
            npath * nq, -1
        )
        a0 = self._contract(a0q.reshape(bsz, npath * nq, self.nvars, self.nvars), pair)
        a1 = self._contract(a1q.reshape(bsz, npath * nq, self.nvars, self.nvars), pair)
        return a0, a1

    def path_matrix_batch(self, left: np.ndarray, right: np.ndarray, axis: int = 0) -> np.ndarray:
        """Path-average interface matrix A0_psi^{-1} A1_psi, shape (B, K, K).

        The inverse is applied by solving against the SPD path average;
        a Cholesky factorization failure is reported as loss of symmetric
        hyperbolicity rather than silently regularized.
        """
        a0, a1 = self.path_average(left, right, axis=axis)
        try:
            np.linalg.cholesky(a0)
        except np.linalg.LinAlgError as exc:
            raise AdmissibilityError(
                "path-averaged mass matrix not SPD (symmetric hyperbolicity lost)"
            ) from exc
        return np.linalg.solve(a0, a1)

    def path_matrix(self, left, right, axis: int = 0) -> np.ndarray:
        left = self.as_flat(left) if np.asarray(left).ndim == 2 else left
        right = self.as_flat(right) if np.asarray(right).ndim == 2 else right
        return self.path_matrix_batch(np.atleast_2d(left), np.atleast_2d(right), axis=axis)[0]

    def alpha_bound_batch(
        self, left: np.ndarray, right: np.ndarray, axis: int = 0, safety: float | None = None
    ) -> np.ndarray:
        """Wave-speed bound per interface, shape (B,).

        Maximizes |lambda_l| of the physical Jacobian over the segment-path
        states and a xi sample set (quadrature nodes plus endpoints), then
        applies the safety factor standing in for the supremum over xi.
        """
        if safety is None:
            safety = self.alpha_safety
        psi = self.path_states(left, right)
        states = self.eval_states(psi, self._phi_alpha)  # (B, n_path, n_a, N)
        ok = self.model.is_admissible(states, self._xi_alpha)
        if not np.all(ok):
            b, m, _ = np.argwhere(~ok)[0]
            raise AdmissibilityError(
                f"interface {b}: path state at s={self.path.s_nodes[m]:.4f} leaves the admissible set"
            )
        speeds = self.model.max_wavespeed(states, self._xi_alpha, axis=axis)
        return safety * np.max(speeds, axis=(1, 2))

    def alpha_bound(self, left, right, axis: int = 0, safety: float | None = None) -> float:
        left = self.as_flat(left) if np.asarray(left).ndim == 2 else left
        right = self.as_flat(right) if np.asarray(right).ndim == 2 else right
        return float(
            self.alpha_bound_batch(np.atleast_2d(left), np.atleast_2d(right), axis=axis, safety=safety)[0]
        )

    def wavespeed_bound(self, flat: np.ndarray, axis: int = 0, safety: float | None = None) -> np.ndarray:
        """Per-state wave-speed bound used by the CFL condition, shape (B,)."""
        if safety is None:
            safety = self.alpha_safety
        flat = np.atleast_2d(np.asarray(flat, dtype=float))
        states = self.eval_states(flat, self._phi_alpha)
        with np.errstate(invalid="ignore"):
            speeds = self.model.max_wavespeed(states, self._xi_alpha, axis=axis)
        if not np.all(np.isfinite(speeds)):
            raise AdmissibilityError(
                "wave-speed bound evaluated on a non-admissible expansion; limit cell averages first"
            )
        return safety * np.max(speeds, axis=-1)
