import numpy as np
import pytest

from gpcsg import (
    AdmissibilityError,
    EulerModel,
    LegendreBasis,
    SgContext,
    gauss_rule,
    lf_split,
    path_rule,
)


def make_ctx(order=3, gamma=None, **kw):
    model = EulerModel(1, gamma=gamma if gamma is not None else 1.4)
    return SgContext(model, order, **kw)


def random_state(ctx, rng, amp=0.03):
    """gPC state around a random admissible mean, higher modes small."""
    model = ctx.model
    while True:
        prim = np.array([rng.uniform(0.4, 2.0), rng.uniform(-1, 1), rng.uniform(0.4, 2.0)])
        modes = np.zeros((ctx.order + 1, ctx.nvars))
        modes[0] = model.primitive_to_conserved(prim, 0.0)
        modes[1:] = amp * rng.standard_normal((ctx.order, ctx.nvars))
        flat = ctx.as_flat(modes)
        if ctx.admissible_mask(flat[None])[0]:
            return flat


def test_path_rule_exactness():
    pr = path_rule(3)
    assert pr.s_weights.sum() == pytest.approx(1.0, abs=1e-14)
    for k in range(6):  # degree 2 * 3 - 1 = 5
        assert np.dot(pr.s_weights, pr.s_nodes**k) == pytest.approx(1 / (k + 1), abs=1e-14)


def test_assemble_constant_state_block_diagonal():
    ctx = make_ctx(order=2)
    modes = np.zeros((3, 3))
    modes[0] = ctx.model.primitive_to_conserved(np.array([1.0, 0.3, 1.2]), 0.0)
    gm = ctx.assemble(modes)
    a0_ref, a1_ref = ctx.model.symmetrizers(modes[0], 0.0)
    for blk, ref in ((gm.a0_hat, a0_ref), (gm.a1_hat, a1_ref)):
        for i in range(3):
            for j in range(3):
                sub = blk[3 * i : 3 * i + 3, 3 * j : 3 * j + 3]
                expect = ref if i == j else np.zeros((3, 3))
                assert np.max(np.abs(sub - expect)) <= 1e-13


def test_assemble_symmetry():
    rng = np.random.default_rng(0)
    ctx = make_ctx(order=4, gamma=lambda xi: 1.4 + 0.1 * np.asarray(xi))
    for _ in range(20):
        flat = random_state(ctx, rng)
        gm = ctx.assemble(ctx.as_modes(flat))
        assert np.max(np.abs(gm.a0_hat - gm.a0_hat.T)) <= 1e-12
        assert np.max(np.abs(gm.a1_hat - gm.a1_hat.T)) <= 1e-12


def test_assemble_against_dense_quadrature_oracle():
    # M = 1, N = 3 blocks vs direct summation at 64 Gauss nodes
    ctx = make_ctx(order=1, gamma=lambda xi: 1.4 + 0.1 * np.asarray(xi))
    rng = np.random.default_rng(1)
    flat = random_state(ctx, rng, amp=0.02)
    a0, a1 = ctx.assemble_batch(flat[None])

    rule = gauss_rule(64)
    basis = LegendreBasis(1)
    tab = basis.eval_table(rule.nodes)
    states = ctx.eval_states(flat, tab)
    s0, s1 = ctx.model.symmetrizers(states, rule.nodes)
    ref0 = np.einsum("q,qi,qj,qmn->imjn", rule.weights, tab, tab, s0).reshape(6, 6)
    ref1 = np.einsum("q,qi,qj,qmn->imjn", rule.weights, tab, tab, s1).reshape(6, 6)
    assert np.max(np.abs(a0[0] - ref0)) <= 1e-10
    assert np.max(np.abs(a1[0] - ref1)) <= 1e-10


def test_assemble_reports_offending_node():
    ctx = make_ctx(order=1)
    modes = np.zeros((2, 3))
    modes[0] = ctx.model.primitive_to_conserved(np.array([1.0, 0.0, 1.0]), 0.0)
    modes[1, 0] = 2.0  # density goes negative near xi = -1
    with pytest.raises(AdmissibilityError, match="xi="):
        ctx.assemble(modes)


def test_path_matrix_at_identical_states():
    ctx = make_ctx(order=3)
    modes = np.zeros((4, 3))
    modes[0] = ctx.model.primitive_to_conserved(np.array([1.0, 0.4, 1.0]), 0.0)
    flat = ctx.as_flat(modes)
    b_psi = ctx.path_matrix(flat, flat)
    lam, _ = ctx.model.eigen(modes[0], 0.0)
    got = np.sort(np.linalg.eigvals(b_psi).real)
    expect = np.sort(np.repeat(lam, ctx.order + 1))
    assert got == pytest.approx(expect, abs=1e-8)


def test_path_matrix_real_diagonalizable():
    rng = np.random.default_rng(2)
    ctx = make_ctx(order=3, gamma=lambda xi: 1.4 + 0.1 * np.asarray(xi))
    for _ in range(25):
        left = random_state(ctx, rng)
        right = random_state(ctx, rng)
        b_psi = ctx.path_matrix_batch(left[None], right[None])[0]
        ev = np.linalg.eigvals(b_psi)
        rho = np.max(np.abs(ev))
        assert np.max(np.abs(ev.imag)) <= 1e-8 * rho


def test_alpha_bound_constant_state():
    ctx = make_ctx(order=2)
    modes = np.zeros((3, 3))
    modes[0] = ctx.model.primitive_to_conserved(np.array([1.0, 0.0, 1.0]), 0.0)
    flat = ctx.as_flat(modes)
    assert ctx.alpha_bound(flat, flat, safety=1.0) == pytest.approx(np.sqrt(1.4), abs=1e-13)
    # the default applies the supremum safety factor
    assert ctx.alpha_bound(flat, flat) == pytest.approx(1.05 * np.sqrt(1.4), abs=1e-13)


def test_alpha_bound_velocity_dominated():
    # u = 10, c = 1: Gamma p / rho = 1 with rho = 1, p = 1/1.4
    ctx = make_ctx(order=1)
    modes = np.zeros((2, 3))
    modes[0] = ctx.model.primitive_to_conserved(np.array([1.0, 10.0, 1.0 / 1.4]), 0.0)
    flat = ctx.as_flat(modes)
    assert ctx.alpha_bound(flat, flat, safety=1.0) == pytest.approx(11.0, abs=1e-12)


def test_alpha_dominates_spectral_radius():
    rng = np.random.default_rng(3)
    ctx = make_ctx(order=2, gamma=lambda xi: 1.4 + 0.1 * np.asarray(xi))
    for _ in range(100):
        left = random_state(ctx, rng)
        right = random_state(ctx, rng)
        alpha = ctx.alpha_bound_batch(left[None], right[None])[0]
        b_psi = ctx.path_matrix_batch(left[None], right[None])[0]
        rho = np.max(np.abs(np.linalg.eigvals(b_psi)))
        assert alpha >= rho - 1e-10 * rho


def test_lf_split_identities():
    split = lf_split(np.zeros((4, 4)), 1.0)
    assert np.allclose(split.b_plus, 0.5 * np.eye(4))
    assert np.allclose(split.b_minus, -0.5 * np.eye(4))
    rng = np.random.default_rng(4)
    b = rng.standard_normal((6, 6))
    split = lf_split(b, 2.5)
    # algebraic identities, up to one rounding on the shifted diagonal
    assert np.max(np.abs(split.b_plus + split.b_minus - b)) <= 1e-15
    assert np.max(np.abs(split.b_plus - split.b_minus - 2.5 * np.eye(6))) <= 1e-15
    with pytest.raises(ValueError):
        lf_split(b, -1.0)


def test_lf_split_semidefinite_weighting():
    # with alpha from the wave-speed bound, alpha A0_psi +- A1_psi is PSD
    rng = np.random.default_rng(5)
    ctx = make_ctx(order=2)
    for _ in range(20):
        left = random_state(ctx, rng)
        right = random_state(ctx, rng)
        alpha = ctx.alpha_bound_batch(left[None], right[None])[0]
        a0, a1 = ctx.path_average(left[None], right[None])
        scale = np.max(np.abs(a1[0])) + alpha * np.max(np.abs(a0[0]))
        for sign in (+1.0, -1.0):
            ev = np.linalg.eigvalsh(alpha * a0[0] + sign * a1[0])
            assert np.min(ev) >= -1e-9 * scale


def test_check_admissible_constant():
    ctx = make_ctx(order=3)
    modes = np.zeros((4, 3))
    modes[0] = ctx.model.primitive_to_conserved(np.array([1.0, 0.0, 1.0]), 0.0)
    ok, witness = ctx.check_admissible(ctx.as_flat(modes))
    assert ok and witness is None


def test_check_admissible_witness_near_minus_one():
    # density 1 + 2 phi_1(xi) changes sign at xi = -1/(2 sqrt 3)
    ctx = make_ctx(order=1)
    modes = np.zeros((2, 3))
    modes[0] = ctx.model.primitive_to_conserved(np.array([1.0, 0.0, 1.0]), 0.0)
    modes[1, 0] = 2.0
    ok, witness = ctx.check_admissible(ctx.as_flat(modes))
    assert not ok
    assert witness <= -1.0 / (2.0 * np.sqrt(3.0))


def test_theorem_symmetric_hyperbolicity_suite():
    # randomized expansions, orders 1..5, uncertain adiabatic index
    rng = np.random.default_rng(6)
    gamma = lambda xi: 1.4 + 0.1 * np.asarray(xi)
    for trial in range(100):
        ctx = make_ctx(order=1 + trial % 5, gamma=gamma)
        flat = random_state(ctx, rng)
        a0, a1 = ctx.assemble_batch(flat[None])
        assert np.max(np.abs(a0[0] - a0[0].T)) <= 1e-12
        assert np.max(np.abs(a1[0] - a1[0].T)) <= 1e-12
        np.linalg.cholesky(a0[0])  # SPD or raises
        ev = np.linalg.eigvals(np.linalg.solve(a0[0], a1[0]))
        assert np.max(np.abs(ev.imag)) <= 1e-8 * max(np.max(np.abs(ev)), 1e-30)


def test_lemma_psd_iff_dominates_spectral_radius():
    rng = np.random.default_rng(7)
    ctx = make_ctx(order=3, gamma=lambda xi: 1.4 + 0.1 * np.asarray(xi))
    for _ in range(30):
        flat = random_state(ctx, rng)
        a0, a1 = ctx.assemble_batch(flat[None])
        a0, a1 = a0[0], a1[0]
        rho = np.max(np.abs(np.linalg.eigvals(np.linalg.solve(a0, a1))))
        scale = np.max(np.abs(a1)) + rho * np.max(np.abs(a0))
        for sign in (+1.0, -1.0):
            above = np.min(np.linalg.eigvalsh((rho + 1e-3) * a0 + sign * a1))
            assert above >= -1e-9 * scale
        below = min(
            np.min(np.linalg.eigvalsh((rho - 1e-3) * a0 + sign * a1)) for sign in (1.0, -1.0)
        )
        assert below < 0.0


def test_quadrature_rule_convergence():
    # doubling the xi rule changes the assembled blocks below 1e-10
    rng = np.random.default_rng(8)
    gamma = lambda xi: 1.4 + 0.1 * np.asarray(xi)
    model = EulerModel(1, gamma=gamma)
    ctx16 = SgContext(model, 3, n_xi=16)
    ctx32 = SgContext(model, 3, n_xi=32)
    flat = random_state(ctx16, rng)
    a0a, a1a = ctx16.assemble_batch(flat[None])
    a0b, a1b = ctx32.assemble_batch(flat[None])
    assert np.max(np.abs(a0a - a0b)) <= 1e-10
    assert np.max(np.abs(a1a - a1b)) <= 1e-10


def test_path_matrix_spd_solve_never_forms_inverse():
    # indirect contract: the solve matches a dense reference inverse apply
    rng = np.random.default_rng(9)
    ctx = make_ctx(order=2)
    left = random_state(ctx, rng)
    right = random_state(ctx, rng)
    a0, a1 = ctx.path_average(left[None], right[None])
    ref = np.linalg.inv(a0[0]) @ a1[0]
    got = ctx.path_matrix_batch(left[None], right[None])[0]
    assert np.max(np.abs(got - ref)) <= 1e-9 * np.max(np.abs(ref))
