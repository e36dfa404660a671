import numpy as np
import pytest

from gpcsg import Mesh1D, exact_riemann, exact_sod_stats, solve_riemann


def test_equal_states_constant_solution():
    sol = solve_riemann((1.0, 0.5, 1.0), (1.0, 0.5, 1.0), 1.4)
    assert sol.p_star == pytest.approx(1.0, rel=1e-10)
    assert sol.u_star == pytest.approx(0.5, rel=1e-10)
    prim = sol.sample(np.linspace(-3, 3, 11))
    assert np.max(np.abs(prim - [1.0, 0.5, 1.0])) <= 1e-9


def test_sod_star_state():
    # classic benchmark: verified against the pressure-function root computed
    # below by bisection alone (independent of the Newton path)
    sol = solve_riemann((1.0, 0.0, 1.0), (0.125, 0.0, 0.1), 1.4)
    assert sol.p_star == pytest.approx(0.30313, abs=2e-5)
    assert sol.u_star == pytest.approx(0.92745, abs=2e-5)
    assert sol.pattern == "RS"

    from gpcsg.riemann import _pressure_fn

    def f(p):
        fl, _ = _pressure_fn(p, 1.0, 1.0, np.sqrt(1.4), 1.4)
        fr, _ = _pressure_fn(p, 0.125, 0.1, np.sqrt(1.4 * 0.1 / 0.125), 1.4)
        return fl + fr

    lo, hi = 1e-8, 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f(mid) > 0:
            hi = mid
        else:
            lo = mid
    assert sol.p_star == pytest.approx(lo, abs=1e-11)


def test_rankine_hugoniot_across_shock():
    sol = solve_riemann((1.0, 0.0, 1.0), (0.125, 0.0, 0.1), 1.4)
    g = 1.4
    # right wave is a shock: check RH with the computed shock speed
    rho_r, u_r, p_r = 0.125, 0.0, 0.1
    rho_s, u_s, p_s = sol.rho_star_right, sol.u_star, sol.p_star
    c_r = np.sqrt(g * p_r / rho_r)
    speed = u_r + c_r * np.sqrt((g + 1) / (2 * g) * p_s / p_r + (g - 1) / (2 * g))

    def cons(rho, u, p):
        return np.array([rho, rho * u, p / (g - 1) + 0.5 * rho * u**2])

    def flux(rho, u, p):
        e = p / (g - 1) + 0.5 * rho * u**2
        return np.array([rho * u, rho * u**2 + p, u * (e + p)])

    jump_u = cons(rho_s, u_s, p_s) - cons(rho_r, u_r, p_r)
    jump_f = flux(rho_s, u_s, p_s) - flux(rho_r, u_r, p_r)
    assert np.max(np.abs(jump_f - speed * jump_u)) <= 1e-10


def test_riemann_invariants_across_rarefaction():
    sol = solve_riemann((1.0, 0.0, 1.0), (0.125, 0.0, 0.1), 1.4)
    g = 1.4
    # left rarefaction: u + 2c/(g-1) and entropy are constant through the fan
    s = np.linspace(-1.15, sol.u_star - np.sqrt(g * sol.p_star / sol.rho_star_left) - 1e-6, 25)
    prim = sol.sample(s)
    rho, u, p = prim[:, 0], prim[:, 1], prim[:, 2]
    c = np.sqrt(g * p / rho)
    inv = u + 2 * c / (g - 1)
    ent = p / rho**g
    assert np.max(np.abs(inv - inv[0])) <= 1e-10
    assert np.max(np.abs(ent - ent[0])) <= 1e-10


def test_sample_beyond_fastest_waves():
    sol = solve_riemann((1.0, 0.0, 1.0), (0.125, 0.0, 0.1), 1.4)
    assert sol.sample(-10.0) == pytest.approx([1.0, 0.0, 1.0])
    assert sol.sample(+10.0) == pytest.approx([0.125, 0.0, 0.1])


def test_exact_riemann_returns_conserved():
    u = exact_riemann((1.0, 0.0, 1.0), (0.125, 0.0, 0.1), 1.4, -10.0)
    assert u == pytest.approx([1.0, 0.0, 2.5])


def test_vacuum_detection():
    with pytest.raises(ValueError):
        solve_riemann((1.0, -10.0, 1.0), (1.0, 10.0, 1.0), 1.4)
    with pytest.raises(ValueError):
        solve_riemann((-1.0, 0.0, 1.0), (1.0, 0.0, 1.0), 1.4)


def test_sod_stats_requires_positive_time():
    with pytest.raises(ValueError):
        exact_sod_stats(Mesh1D(10, 0, 1), 0.0)


def test_sod_stats_far_field():
    mesh = Mesh1D(200, 0.0, 1.0)
    mean, std = exact_sod_stats(mesh, 1e-6)
    x = mesh.centers()
    far = (x < 0.4) | (x > 0.6)
    assert mean[x < 0.4] == pytest.approx(1.0, abs=1e-12)
    assert mean[x > 0.6] == pytest.approx(0.125, abs=1e-12)
    assert np.max(std[far]) <= 1e-12


def test_sod_stats_variability_region():
    # the shock reaches different x for different xi: positive std there
    mesh = Mesh1D(200, 0.0, 1.0)
    mean, std = exact_sod_stats(mesh, 0.18)
    x = mesh.centers()
    shock_band = (x > 0.80) & (x < 0.84)
    assert np.min(std[shock_band]) > 1e-3


def test_sod_stats_three_fronts():
    mesh = Mesh1D(200, 0.0, 1.0)
    _, std = exact_sod_stats(mesh, 0.18)
    mask = std > 0.25 * std.max()
    regions = int(np.sum(np.diff(mask.astype(int)) == 1) + mask[0])
    assert regions == 3
