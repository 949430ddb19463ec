import numpy as np
import pytest

import pu6


def _cos3_state():
    # q(t) = cos(3 t) at t = 0
    return np.array([1.0, 0.0, -9.0, 0.0, 81.0, 0.0])


# ---------------------------------------------------------------------------
# exact solutions
# ---------------------------------------------------------------------------

def test_solve_exact_single_mode(std_freqs):
    sol = pu6.solve_exact(std_freqs, _cos3_state())
    expected = np.zeros(6)
    expected[1] = 1.0  # cos(w1 t) is the second basis function
    np.testing.assert_allclose(sol.coefficients, expected, atol=1e-12)


def test_solve_exact_fully_degenerate_tcos():
    f = pu6.frequency_triple(1, 1, 1)
    # q(t) = t cos t: state (0, 1, 0, -3, 0, 5) at t = 0
    sol = pu6.solve_exact(f, [0.0, 1.0, 0.0, -3.0, 0.0, 5.0])
    expected = np.zeros(6)
    expected[3] = 1.0  # t cos is the fourth basis function
    np.testing.assert_allclose(sol.coefficients, expected, atol=1e-12)


def test_solve_exact_zero_state(std_freqs):
    sol = pu6.solve_exact(std_freqs, np.zeros(6))
    np.testing.assert_array_equal(sol.coefficients, np.zeros(6))
    assert not np.abs(sol.states(np.linspace(0, 5, 11))).any()


def test_exact_reproduces_initial(std_freqs, rng):
    for _ in range(10):
        s0 = rng.uniform(-2, 2, size=6)
        sol = pu6.solve_exact(std_freqs, s0)
        np.testing.assert_allclose(sol.state(0.0), s0, atol=1e-9)


def test_exact_flow_residual_all_classes(rng):
    times = np.linspace(0.0, 12.0, 1000)
    for ws in ((3, 2, 1), (2, 2, 1), (1, 1, 1), (1.7, 0.9, 0.4)):
        f = pu6.frequency_triple(*ws)
        sol = pu6.solve_exact(f, rng.uniform(-1, 1, size=6))
        assert sol.flow_residual(times) < 1e-8


def test_divergent_mode_detection():
    f = pu6.frequency_triple(2, 2, 1)
    pure_osc = pu6.solve_exact(f, np.array([1.0, 0.0, -4.0, 0.0, 16.0, 0.0]))  # cos(2t)
    assert not pu6.divergent_mode_present(pure_osc)
    rng = np.random.default_rng(3)
    generic = pu6.solve_exact(f, rng.uniform(-1, 1, size=6))
    assert pu6.divergent_mode_present(generic)


# ---------------------------------------------------------------------------
# RK4
# ---------------------------------------------------------------------------

def test_rk4_matches_exact(std_params, std_freqs):
    sol = pu6.solve_exact(std_freqs, _cos3_state())
    traj = pu6.integrate_rk4(std_params, _cos3_state(), t_end=20.0, dt=1e-3)
    err = np.abs(traj.states - sol.states(traj.times)).max()
    assert err < 1e-6


def test_rk4_fourth_order_convergence(std_params, std_freqs):
    s0 = np.array([1.0, -0.5, 2.0, 0.3, -4.0, 1.1])
    sol = pu6.solve_exact(std_freqs, s0)
    errs = []
    for dt in (2e-3, 1e-3):
        traj = pu6.integrate_rk4(std_params, s0, t_end=20.0, dt=dt)
        errs.append(np.abs(traj.states - sol.states(traj.times)).max())
    ratio = errs[0] / errs[1]
    assert 12.0 <= ratio <= 20.0, ratio


def test_rk4_partially_degenerate_envelope():
    # t sin(2t) mode: linear envelope growth, exact oracle at t = 10
    f = pu6.frequency_triple(2, 2, 1)
    p = pu6.params_from_frequencies(f)
    # q = t sin(2t): derivatives at 0: (0, 0, 4, 0, -32, 0) -> check: d/dt(t sin 2t) = sin2t + 2t cos2t -> 0
    s0 = np.array([0.0, 0.0, 4.0, 0.0, -32.0, 0.0])
    sol = pu6.solve_exact(f, s0)
    assert pu6.divergent_mode_present(sol)
    traj = pu6.integrate_rk4(p, s0, t_end=10.0, dt=1e-3)
    exact_end = sol.state(10.0)
    rel = np.abs(traj.states[-1] - exact_end).max() / np.abs(exact_end).max()
    assert rel < 1e-5


def test_rk4_rejects_bad_steps(std_params):
    with pytest.raises(ValueError):
        pu6.integrate_rk4(std_params, np.zeros(6), t_end=1.0, dt=0.0)


def test_rk4_overflow_reported():
    p = pu6.PUParams(0.0, 0.0, -1.0)  # q'''''' = q: exponential growth
    with pytest.raises(pu6.NonFinite):
        pu6.integrate_rk4(p, np.ones(6) * 1e305, t_end=25.0, dt=0.1)


def test_trajectory_validation():
    with pytest.raises(ValueError):
        pu6.Trajectory(times=np.array([0.0, 0.0]), states=np.zeros((2, 6)), method="rk4")


# ---------------------------------------------------------------------------
# conservation drift
# ---------------------------------------------------------------------------

def test_drift_exact_trajectory(std_params, std_freqs, rng):
    sol = pu6.solve_exact(std_freqs, rng.uniform(-1, 1, size=6))
    traj = pu6.exact_trajectory(sol, 20.0, 0.01)
    forms = [pu6.hamiltonian_n_recursive(n, std_params) for n in range(1, 6)]
    drift = pu6.conservation_drift(traj, forms)
    assert drift.max() < 1e-9


def test_drift_rk4_long_run(std_params, std_freqs):
    traj = pu6.integrate_rk4(std_params, _cos3_state(), t_end=50.0, dt=1e-3)
    forms = [pu6.hamiltonian_form(k, std_params) for k in (1, 2, 3)]
    drift = pu6.conservation_drift(traj, forms)
    assert drift.max() < 1e-8


def test_drift_non_conserved_form(std_params, std_freqs):
    sol = pu6.solve_exact(std_freqs, _cos3_state())
    traj = pu6.exact_trajectory(sol, 10.0, 0.01)
    half_q_squared = pu6.QuadraticForm(np.diag([1.0, 0, 0, 0, 0, 0]))
    drift = pu6.conservation_drift(traj, [half_q_squared])
    assert drift[0] > 0.5  # position oscillates, order-one drift


# ---------------------------------------------------------------------------
# interactions
# ---------------------------------------------------------------------------

def test_interaction_spec_rejects_low_degree():
    with pytest.raises(ValueError):
        pu6.InteractionSpec(coefficients=(0.0, 0.0, 1.0))


def test_interaction_jacobian_quartic_position(std_params):
    w = pu6.InteractionSpec.quartic(lam=1.0, variable=0)
    s = np.array([1.0, 0, 0, 0, 0, 0])
    jac = pu6.interaction_field_jacobian(std_params, w, s)
    F = pu6.flow_operator(std_params)
    assert jac[5, 0] == pytest.approx(-36.0 - 3.0)  # -gamma - W''(1)
    diff = jac - F
    diff[5, 0] = 0.0
    assert not diff.any()


def test_interaction_jacobian_velocity_slot(std_params):
    w = pu6.InteractionSpec.quartic(lam=1.0, variable=1)
    s = np.array([0.0, 2.0, 0, 0, 0, 0])
    jac = pu6.interaction_field_jacobian(std_params, w, s)
    F = pu6.flow_operator(std_params)
    assert jac[5, 1] - F[5, 1] == pytest.approx(-12.0)  # -W''(2) = -3*4


def test_lie_residual_j1_zero_for_position_potential(std_params, rng):
    w = pu6.InteractionSpec.quartic(lam=1.0, variable=0)
    j1 = pu6.poisson_tensor(1, std_params)
    for _ in range(100):
        s = rng.uniform(-1, 1, size=6)
        jac = pu6.interaction_field_jacobian(std_params, w, s)
        res = pu6.lie_derivative_residual(jac, j1)
        assert np.abs(res).max() < 1e-12


def test_lie_residual_j2_pattern(std_params):
    # perturbation -3 at Jacobian slot (6,1) propagates to +/- 3/gamma = 1/12
    # at bracket slots (6,4) and (4,6)
    w = pu6.InteractionSpec.quartic(lam=1.0, variable=0)
    s = np.array([1.0, 0, 0, 0, 0, 0])
    jac = pu6.interaction_field_jacobian(std_params, w, s)
    res = pu6.lie_derivative_residual(jac, pu6.poisson_tensor(2, std_params))
    assert res[5, 3] == pytest.approx(1.0 / 12.0)
    assert res[3, 5] == pytest.approx(-1.0 / 12.0)
    mask = np.ones((6, 6), bool)
    mask[5, 3] = mask[3, 5] = False
    assert np.abs(res[mask]).max() < 1e-12


def test_lie_residual_j3_nonzero(std_params):
    w = pu6.InteractionSpec.quartic(lam=1.0, variable=0)
    s = np.array([1.0, 0, 0, 0, 0, 0])
    jac = pu6.interaction_field_jacobian(std_params, w, s)
    res = pu6.lie_derivative_residual(jac, pu6.poisson_tensor(3, std_params))
    assert np.abs(res).max() > 1e-6


def test_lie_residual_j2_j3_nonzero_random(std_params, rng):
    w = pu6.InteractionSpec.quartic(lam=1.0, variable=0)
    j2 = pu6.poisson_tensor(2, std_params)
    j3 = pu6.poisson_tensor(3, std_params)
    tested = 0
    while tested < 100:
        s = rng.uniform(-1, 1, size=6)
        if abs(w.w2(s[0])) < 1e-6:
            continue
        tested += 1
        jac = pu6.interaction_field_jacobian(std_params, w, s)
        floor = 1e-6 * abs(w.w2(s[0])) / abs(std_params.gamma)
        assert np.abs(pu6.lie_derivative_residual(jac, j2)).max() > floor
        assert np.abs(pu6.lie_derivative_residual(jac, j3)).max() > floor


def test_lie_residual_higher_slots_nonzero_everywhere(std_params, rng):
    tensors = [pu6.poisson_tensor(k, std_params) for k in (1, 2, 3)]
    for slot in range(1, 6):
        w = pu6.InteractionSpec.quartic(lam=1.0, variable=slot)
        tested = 0
        while tested < 20:
            s = rng.uniform(-1, 1, size=6)
            if abs(w.w2(s[slot])) < 1e-6:
                continue
            tested += 1
            jac = pu6.interaction_field_jacobian(std_params, w, s)
            for j in tensors:
                res = pu6.lie_derivative_residual(jac, j)
                floor = 1e-6 * abs(w.w2(s[slot])) / abs(std_params.gamma)
                assert np.abs(res).max() > floor, (slot, j.tag)


def test_rk4_with_interaction_deterministic(std_params):
    w = pu6.InteractionSpec.quartic(lam=0.3, variable=0)
    t1 = pu6.integrate_rk4(std_params, _cos3_state(), 2.0, 1e-3, w)
    t2 = pu6.integrate_rk4(std_params, _cos3_state(), 2.0, 1e-3, w)
    np.testing.assert_array_equal(t1.states, t2.states)
    # the interacting flow differs from the linear one
    lin = pu6.integrate_rk4(std_params, _cos3_state(), 2.0, 1e-3)
    assert np.abs(t1.states[-1] - lin.states[-1]).max() > 1e-6


def test_trajectory_csv_format(std_params, std_freqs, tmp_path):
    sol = pu6.solve_exact(std_freqs, _cos3_state())
    traj = pu6.exact_trajectory(sol, 1.0, 0.5)
    path = tmp_path / "t.csv"
    with open(path, "w") as fh:
        pu6.trajectory_csv(traj, std_params, fh)
    lines = path.read_text().strip().split("\n")
    assert lines[0] == "t,q,qdot,qddot,q3t,q4t,q5t,H1,H2,H3"
    assert len(lines) == 4  # header + 3 samples
    first = lines[1].split(",")
    assert float(first[1]) == pytest.approx(1.0, rel=1e-12)
    assert float(first[7]) == pytest.approx(180.0, rel=1e-12)  # H1 of the cos3 state
