"""Stochastic Galerkin solver for quasilinear hyperbolic conservation laws
with uncertainty: symmetrized Galerkin assembly, path-conservative finite
volume WENO in space, TVD Runge-Kutta in time, operator splitting in 2D,
and collocation / exact-Riemann reference solvers."""

from .basis import LegendreBasis, QuadratureRule, basis_eval, gauss_rule, gpc_eval, mean_std
from .config import RunConfig, load_config
from .euler import AdmissibilityError, EulerModel
from .field import Mesh1D, Mesh2D, project_initial
from .galerkin import FluctuationSplit, GalerkinMatrices, PathRule, SgContext, lf_split, path_rule
from .problems import ProblemSetup, builtin_problem, exact_smooth
from .reference import (
    CollocationPlan,
    CollocationResult,
    FdWenoSolver,
    cell_average_profile,
    collocation_solve,
    error_norm_l1,
)
from .riemann import RiemannSolution, exact_riemann, exact_sod_stats, solve_riemann
from .spatial import SpatialOperator, limit_cell_average, limit_node_values
from .split2d import Solver2D, SplitSchedule, advance_2d, split_coefficients, strang_schedule, sweep
from .timestep import StepController, advance, compute_dt, rk3_step
from .weno import LobattoRule, lobatto_rule, node_derivative_matrix, weno5_reconstruct

__all__ = [
    "AdmissibilityError",
    "CollocationPlan",
    "CollocationResult",
    "EulerModel",
    "FdWenoSolver",
    "FluctuationSplit",
    "GalerkinMatrices",
    "LegendreBasis",
    "LobattoRule",
    "Mesh1D",
    "Mesh2D",
    "PathRule",
    "ProblemSetup",
    "QuadratureRule",
    "RiemannSolution",
    "RunConfig",
    "SgContext",
    "Solver2D",
    "SpatialOperator",
    "SplitSchedule",
    "StepController",
    "advance",
    "advance_2d",
    "basis_eval",
    "builtin_problem",
    "cell_average_profile",
    "collocation_solve",
    "compute_dt",
    "error_norm_l1",
    "exact_riemann",
    "exact_smooth",
    "exact_sod_stats",
    "gauss_rule",
    "gpc_eval",
    "lf_split",
    "limit_cell_average",
    "limit_node_values",
    "load_config",
    "lobatto_rule",
    "mean_std",
    "node_derivative_matrix",
    "path_rule",
    "project_initial",
    "rk3_step",
    "solve_riemann",
    "split_coefficients",
    "strang_schedule",
    "sweep",
    "weno5_reconstruct",
]

__version__ = "0.1.0"
