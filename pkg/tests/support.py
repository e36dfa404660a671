"""Shared helpers for the test suite."""
import numpy as np

from gpcsg.problems import ProblemSetup

PERIODIC2 = (("periodic", "periodic"), ("periodic", "periodic"))


def smooth_2d_problem():
    """Diagonal advection of a sine density wave: exact for any gamma."""

    def initial(x, y, xi):
        x, y, xi = np.broadcast_arrays(
            np.asarray(x, dtype=float), np.asarray(y, dtype=float), np.asarray(xi, dtype=float)
        )
        vel = 0.8 + 0.2 * xi
        rho = 1.0 + 0.2 * np.sin(2.0 * np.pi * (x + y))
        return np.stack([rho, vel, vel, np.ones_like(rho)], axis=-1)

    return ProblemSetup(
        name="smooth2d", ndim=2, domain=((0.0, 1.0), (0.0, 1.0)), gamma=1.4,
        t_final=0.1, initial=initial, boundary=PERIODIC2,
    )
