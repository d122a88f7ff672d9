"""Evolution tests: right-hand sides on analytic eigenmodes, RK4 period
return with the expected 4th-order convergence, the uniform strong-field
system against a matrix-exponential oracle, constraint projection, abort
on non-finite values, and united-field freeness.
"""

import numpy as np
import pytest
import scipy.linalg

from bqfield import (
    Grid,
    Medium,
    Nabla,
    NumericalAbort,
    SimState,
    StepperConfig,
    field_totals,
    free_theta_rhs,
    maxwell_rhs,
    step_rk4,
    united_field,
)


def cube(n, dtau):
    return Grid(n=(n,) * 3, L=(2 * np.pi,) * 3, dtau=dtau)


def circular_afield(grid, k=1.0, tau=0.0):
    """A = (1, i, 0) exp(i k (z - tau)): exact transport eigenmode."""
    _, _, Z = grid.meshgrid()
    phase = np.exp(1j * k * (Z - tau))
    A = np.zeros((3,) + grid.shape, dtype=complex)
    A[0] = phase
    A[1] = 1j * phase
    return A


def charge_wave(grid, tau=0.0):
    """(rho, J) = (1, z-hat) exp(i (z - tau)): exact source-free current wave."""
    _, _, Z = grid.meshgrid()
    phase = np.exp(1j * (Z - tau))
    J = np.zeros((3,) + grid.shape, dtype=complex)
    J[2] = phase
    return phase.copy(), J


def pack_state(grid, medium, mode, A=None, rho=None, J=None, background=None, m=1):
    U = np.zeros((m, 7) + grid.shape, dtype=complex)
    if A is not None:
        U[0, 0:3] = A
    if rho is not None:
        U[0, 3] = rho
    if J is not None:
        U[0, 4:7] = J
    return SimState(0.0, U, grid, medium, mode, background)


def test_maxwell_rhs_eigenmode():
    g = cube(16, 0.05)
    nab = Nabla(g)
    A = circular_afield(g, k=1.0)
    rhs = maxwell_rhs(nab, A, np.zeros_like(A))
    np.testing.assert_allclose(rhs, -1j * A, atol=1e-12)


def test_maxwell_rhs_static_source():
    # zero A, static J: dA/dtau = -J exactly
    g = cube(8, 0.05)
    nab = Nabla(g)
    rng = np.random.default_rng(1)
    J = rng.standard_normal((3,) + g.shape) + 0j
    rhs = maxwell_rhs(nab, np.zeros_like(J), J)
    np.testing.assert_array_equal(rhs, -J)


def test_free_rhs_charge_wave_is_eigenmode():
    g = cube(16, 0.05)
    nab = Nabla(g)
    rho, J = charge_wave(g)
    drho, dJ = free_theta_rhs(nab, rho, J)
    np.testing.assert_allclose(drho, -1j * rho, atol=1e-12)
    np.testing.assert_allclose(dJ, -1j * J, atol=1e-12)


def test_free_rhs_transverse_rotation():
    # divergence-free circular J with rho = 0: dJ = i curl J = i k J here
    g = cube(16, 0.05)
    nab = Nabla(g)
    J = circular_afield(g, k=2.0)
    drho, dJ = free_theta_rhs(nab, np.zeros(g.shape, complex), J)
    assert np.abs(drho).max() <= 1e-12
    np.testing.assert_allclose(dJ, 2j * J, atol=1e-11)


def run_period(n, cfl, k=1.0):
    steps = int(round(2 * np.pi / (cfl * 2 * np.pi / n)))
    g = cube(n, 2 * np.pi / steps)
    nab = Nabla(g)
    cfg = StepperConfig(cfl=cfl + 1e-9)
    st = pack_state(g, Medium(), "maxwell", A=circular_afield(g, k))
    ref = st.U[0, 0:3].copy()
    for i in range(steps):
        st, _ = step_rk4(st, nab, cfg, i)
    return float(np.abs(st.U[0, 0:3] - ref).max())


def test_period_return_fourth_order():
    """One full period of the circular eigenmode returns to the start.

    At n=16, cfl=0.25 the RK4 phase truncation is 2*pi*(k*dtau)^4/120,
    about 4.9e-6; halving dtau must shrink it about 16x.
    """
    e1 = run_period(16, 0.25)
    e2 = run_period(16, 0.125)
    assert e1 <= 6.0e-6
    assert e1 >= 1.0e-6  # the error is real, not rounding noise
    assert 14.0 < e1 / e2 < 18.0


def strong_field_generator(a, kappa):
    """Column-built 4x4 complex matrix for d(rho, J)/dtau in a uniform A' = a.

    Independent statement of the force law: d rho = -i (J . a) / kappa,
    d J = (-i rho a - J x a) / kappa.
    """
    G = np.zeros((4, 4), dtype=complex)
    for col in range(4):
        y = np.zeros(4, dtype=complex)
        y[col] = 1.0
        rho, J = y[0], y[1:]
        drho = -1j * (J @ a) / kappa
        dJ = (-1j * rho * a - np.cross(J, a)) / kappa
        G[0, col] = drho
        G[1:, col] = dJ
    return G


def test_uniform_strong_field_matches_expm():
    g = cube(4, 0.02)
    med = Medium(kappa=2.0)
    nab = Nabla(g)
    a = np.array([0.4, -0.3, 0.8])
    background = np.zeros((3,) + g.shape, dtype=complex)
    background += a.reshape(3, 1, 1, 1)
    rho0, J0 = 0.7 - 0.2j, np.array([0.1j, 1.0, -0.5 + 0.3j])
    st = pack_state(
        g,
        med,
        "strong_field",
        rho=np.full(g.shape, rho0),
        J=J0.reshape(3, 1, 1, 1) * np.ones(g.shape),
        background=background,
    )
    cfg = StepperConfig()
    G = strong_field_generator(a, med.kappa)
    y0 = np.array([rho0, *J0])
    for i in range(50):
        st, _ = step_rk4(st, nab, cfg, i)
        if (i + 1) % 10 == 0:
            y = scipy.linalg.expm(st.tau * G) @ y0
            got_rho = st.U[0, 3, 0, 0, 0]
            got_J = st.U[0, 4:7, 0, 0, 0]
            assert abs(got_rho - y[0]) <= 1e-10
            assert np.abs(got_J - y[1:]).max() <= 1e-10
    # fields stay spatially uniform
    assert np.abs(st.U[0, 3] - st.U[0, 3, 0, 0, 0]).max() <= 1e-13


def test_cfl_guard_rejects_large_dtau():
    g = cube(8, 1.0)  # dtau far above 0.25 * h
    nab = Nabla(g)
    st = pack_state(g, Medium(), "maxwell", A=circular_afield(g))
    with pytest.raises(AssertionError):
        step_rk4(st, nab, StepperConfig(cfl=0.25))


def test_numerical_abort_carries_last_good_state():
    # an overflow-scale amplitude blows up the quadratic force immediately
    g = cube(8, 0.05)
    nab = Nabla(g)
    rho, J = charge_wave(g)
    U = np.zeros((2, 7) + g.shape, dtype=complex)
    for k in range(2):
        U[k, 0:3] = 1e200 * circular_afield(g)
        U[k, 3] = 1e200 * rho
        U[k, 4:7] = 1e200 * J
    st = SimState(0.0, U, g, Medium(), "interaction")
    with pytest.raises(NumericalAbort) as exc, np.errstate(over="ignore", invalid="ignore"):
        cur = st
        for i in range(4):
            cur, _ = step_rk4(cur, nab, StepperConfig(), i)
    err = exc.value
    assert err.steps >= 1
    assert np.isfinite(err.state.U).all()


def test_constraint_projection_reports_drift():
    """With a static source whose div J is nonzero, div A drifts linearly and
    projection resets rho to div A each step, reporting the pre-projection gap.
    """
    g = cube(16, 0.02)
    nab = Nabla(g)
    X, _, _ = g.meshgrid()
    J = np.zeros((3,) + g.shape, dtype=complex)
    J[0] = np.sin(X)  # div J = cos x, max 1
    rho0 = np.zeros(g.shape, dtype=complex)  # div A(0) = 0 too
    st = pack_state(g, Medium(), "maxwell", A=np.zeros_like(J), rho=rho0, J=J)
    cfg = StepperConfig(constraint_projection=True)
    st1, drift = step_rk4(st, nab, cfg, 0)
    # d(div A)/dtau = -div J, so after one step the gap is about dtau * max|div J|
    assert drift == pytest.approx(g.dtau, rel=1e-6)
    np.testing.assert_allclose(st1.U[0, 3], nab.div(st1.U[0, 0:3]), atol=1e-15)
    # without projection the drift is not reported
    _, none_drift = step_rk4(st, nab, StepperConfig(), 0)
    assert none_drift is None


def test_united_field_freeness_residual_measures_truncation():
    g = cube(16, 0.01)
    nab = Nabla(g)
    med = Medium()

    def snap(tau):
        rho, J = charge_wave(g, tau)
        U = np.zeros((2, 7) + g.shape, dtype=complex)
        U[0, 3], U[0, 4:7] = rho, J
        rho2, J2 = charge_wave(g, tau)
        U[1, 3], U[1, 4:7] = 0.5 * rho2, 0.5 * J2
        return SimState(tau, U, g, med, "united")

    d = 0.01
    _, th_tot, resid = united_field(snap(0.1 - d), snap(0.1), snap(0.1 + d), nab)
    # exact solution: residual is the centred-difference truncation d^2/6 * amp
    amp = 1.5
    expect = d**2 / 6 * amp
    assert resid == pytest.approx(expect, rel=5e-3)
    assert np.abs(th_tot.rho).max() == pytest.approx(amp, rel=1e-12)
    # equal and opposite pair: the total vanishes and so does the residual
    def snap_cancel(tau):
        rho, J = charge_wave(g, tau)
        U = np.zeros((2, 7) + g.shape, dtype=complex)
        U[0, 3], U[0, 4:7] = rho, J
        U[1, 3], U[1, 4:7] = -rho, -J
        return SimState(tau, U, g, med, "united")

    _, th0, r0 = united_field(snap_cancel(0.0), snap_cancel(d), snap_cancel(2 * d), nab)
    assert np.abs(th0.rho).max() == 0.0
    assert r0 == 0.0


def test_field_totals_sums_components():
    g = cube(8, 0.05)
    rng = np.random.default_rng(4)
    U = rng.standard_normal((3, 7) + g.shape) + 1j * rng.standard_normal((3, 7) + g.shape)
    st = SimState(0.0, U, g, Medium(), "interaction")
    a_tot, th_tot = field_totals(st)
    np.testing.assert_allclose(a_tot.A, U[:, 0:3].sum(axis=0))
    np.testing.assert_allclose(th_tot.rho, U[:, 3].sum(axis=0))
    np.testing.assert_allclose(th_tot.J, U[:, 4:7].sum(axis=0))
