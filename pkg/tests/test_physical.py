"""Tests for the dimensional drag model and nondimensionalization."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spherefall import ide
from spherefall.physical import (
    DimensionlessGroup,
    PhysicalParams,
    buoyancy_force,
    dimensional_trajectory,
    nondimensionalize,
    oscillatory_drag,
    stokes_terminal_velocity,
    unsteady_drag,
    viscous_penetration_depth,
)

# Teflon-like sphere in a viscous liquid; hand-evaluated references
# (30-digit arithmetic): U0 = 2*190*9.8*1e-6/0.9.
P_REF = PhysicalParams(rho_s=1190.0, rho=1000.0, mu=0.1, R=0.001, g=9.8)
U0_REF = 4.1377777777777778e-3
F_OSC_REF = 8.3510372300356519e-6  # oscillatory drag at U=U0, dU/dt=0, omega=1
F_BUOY_REF = 7.7995273613122600e-6

densities = st.floats(min_value=1.0, max_value=5e4, allow_nan=False)
positives = st.floats(min_value=1e-6, max_value=1e4, allow_nan=False)


def test_params_validation():
    with pytest.raises(ValueError):
        PhysicalParams(rho_s=1.0, rho=0.0, mu=0.1, R=0.01, g=9.8)
    with pytest.raises(ValueError):
        PhysicalParams(rho_s=-1.0, rho=1000.0, mu=0.1, R=0.01, g=9.8)
    with pytest.raises(ValueError):
        PhysicalParams(rho_s=1.0, rho=1000.0, mu=0.1, R=-0.01, g=9.8)


def test_stokes_velocity_zero_for_neutral_buoyancy():
    p = PhysicalParams(rho_s=1000.0, rho=1000.0, mu=0.1, R=0.001, g=9.8)
    assert stokes_terminal_velocity(p) == 0.0


def test_stokes_velocity_hand_value():
    assert abs(stokes_terminal_velocity(P_REF) - U0_REF) <= 1e-15


def test_stokes_velocity_quadratic_in_radius():
    p2 = PhysicalParams(rho_s=1190.0, rho=1000.0, mu=0.1, R=0.002, g=9.8)
    assert abs(stokes_terminal_velocity(p2) - 4.0 * stokes_terminal_velocity(P_REF)) <= 1e-15


def test_nondimensionalize_neutral_sphere():
    p = PhysicalParams(rho_s=1000.0, rho=1000.0, mu=0.1, R=0.001, g=9.8)
    group = nondimensionalize(p)
    assert abs(group.kappa - 3.0) <= 1e-14
    assert group.U0 == 0.0


def test_nondimensionalize_density_limits():
    heavy = nondimensionalize(
        PhysicalParams(rho_s=1e12, rho=1000.0, mu=0.1, R=0.001, g=9.8)
    )
    assert heavy.kappa < 1e-5
    massless = nondimensionalize(
        PhysicalParams(rho_s=0.0, rho=1000.0, mu=0.1, R=0.001, g=9.8)
    )
    assert massless.kappa == 9.0


@given(densities, densities, positives, positives)
@settings(max_examples=100, deadline=None)
def test_nondimensional_group_invariants(rho_s, rho, mu, R):
    p = PhysicalParams(rho_s=rho_s, rho=rho, mu=mu, R=R, g=9.81)
    g = nondimensionalize(p)
    assert 0.0 < g.kappa <= 9.0
    assert abs(g.kappa - math.pi * g.Q**2 / g.B) <= 1e-14 * g.kappa
    assert abs(g.U0 - g.M / g.B) <= 1e-12 * max(abs(g.U0), 1e-300)
    # falling spheres are exactly the kappa < 3 range (away from the
    # neutrally buoyant boundary, where rounding can flip the comparison)
    if abs(rho_s - rho) > 1e-9 * rho:
        assert (g.kappa < 3.0) == (rho_s > rho)


def test_group_validation_rejects_inconsistent_fields():
    with pytest.raises(ValueError):
        DimensionlessGroup(B=1.0, Q=1.0, M=1.0, kappa=1.0, U0=1.0)  # kappa != pi Q^2/B


def test_penetration_depth_scaling():
    d1 = viscous_penetration_depth(P_REF, 1.0)
    d4 = viscous_penetration_depth(P_REF, 4.0)
    assert abs(d1 - 2.0 * d4) <= 1e-15
    assert abs(d1 - math.sqrt(2.0 * P_REF.nu)) <= 1e-15


def test_oscillatory_drag_zero_state():
    assert oscillatory_drag(P_REF, 0.0, 0.0, 5.0) == 0.0


def test_oscillatory_drag_hand_value():
    F = oscillatory_drag(P_REF, U0_REF, 0.0, 1.0)
    assert abs(F - F_OSC_REF) <= 1e-12 * F_OSC_REF


def test_oscillatory_drag_rejects_bad_frequency():
    with pytest.raises(ValueError):
        oscillatory_drag(P_REF, 1.0, 0.0, 0.0)


@given(
    st.floats(min_value=-10, max_value=10),
    st.floats(min_value=-10, max_value=10),
    st.floats(min_value=-10, max_value=10),
    st.floats(min_value=-10, max_value=10),
    st.floats(min_value=-3, max_value=3),
    st.floats(min_value=-3, max_value=3),
)
@settings(max_examples=60, deadline=None)
def test_oscillatory_drag_linearity(u1, du1, u2, du2, a, b):
    lhs = oscillatory_drag(P_REF, a * u1 + b * u2, a * du1 + b * du2, 2.0)
    rhs = a * oscillatory_drag(P_REF, u1, du1, 2.0) + b * oscillatory_drag(
        P_REF, u2, du2, 2.0
    )
    assert abs(lhs - rhs) <= 1e-12 * (1.0 + abs(lhs) + abs(rhs))


def _constant_history(value: float, n: int = 200, h: float = 1e-3) -> ide.Trajectory:
    times = np.arange(n + 1) * h
    return ide.Trajectory(
        times=times,
        values=np.full(n + 1, value),
        derivatives=np.zeros(n + 1),
    )


def test_unsteady_drag_constant_history_is_stokes_drag():
    traj = _constant_history(U0_REF)
    F = unsteady_drag(P_REF, traj, traj.times[-1])
    stokes = 6.0 * math.pi * P_REF.mu * P_REF.R * U0_REF
    assert abs(F - stokes) <= 1e-14 * stokes
    # ... which balances buoyancy at terminal velocity.
    assert abs(F - buoyancy_force(P_REF)) <= 1e-10 * buoyancy_force(P_REF)
    assert abs(buoyancy_force(P_REF) - F_BUOY_REF) <= 1e-12 * F_BUOY_REF


def test_unsteady_drag_linear_ramp_history():
    n, h = 400, 1e-3
    times = np.arange(n + 1) * h
    traj = ide.Trajectory(times=times, values=times.copy(), derivatives=np.ones(n + 1))
    t = times[-1]
    F = unsteady_drag(P_REF, traj, t)
    stokes = 6.0 * math.pi * P_REF.mu * P_REF.R * t
    added = 0.5 * P_REF.rho * P_REF.volume
    basset = (
        6.0 * math.pi * P_REF.rho * P_REF.R**2 * math.sqrt(P_REF.nu / math.pi)
    ) * 2.0 * math.sqrt(t)
    assert abs(F - (stokes + added + basset)) <= 1e-12 * abs(F)


def test_unsteady_drag_range_errors():
    traj = _constant_history(1.0)
    with pytest.raises(ValueError):
        unsteady_drag(P_REF, traj, traj.times[-1] + 1.0)
    with pytest.raises(ValueError):
        unsteady_drag(P_REF, traj, 0.5 * traj.step())


def test_force_balance_closes_on_solver_output():
    group = nondimensionalize(P_REF)
    traj = ide.solve_ide(group.kappa, 0.0, 1e-3, 5.0)
    dim = dimensional_trajectory(group, traj)
    f_buoy = buoyancy_force(P_REF)
    inertia = P_REF.rho_s * P_REF.volume
    for i in (1, 100, 1000, len(dim) - 1):
        t = dim.times[i]
        resid = inertia * dim.derivatives[i] - (f_buoy - unsteady_drag(P_REF, dim, t))
        assert abs(resid) <= 1e-10 * f_buoy


def test_dimensional_trajectory_identity_group():
    group = DimensionlessGroup(
        B=1.0, Q=math.sqrt(2.0 / math.pi), M=1.0, kappa=2.0, U0=1.0
    )
    traj = ide.solve_ide(2.0, 0.0, 1e-2, 1.0)
    out = dimensional_trajectory(group, traj)
    assert np.array_equal(out.times, traj.times)
    assert np.array_equal(out.values, traj.values)
    assert np.array_equal(out.derivatives, traj.derivatives)


def test_dimensional_trajectory_round_trip():
    group = nondimensionalize(P_REF)
    traj = ide.solve_ide(group.kappa, 0.0, 1e-2, 1.0)
    dim = dimensional_trajectory(group, traj)
    back_times = dim.times * group.B
    back_values = dim.values / group.U0
    back_derivs = dim.derivatives / (group.U0 * group.B)
    assert np.max(np.abs(back_times - traj.times)) <= 1e-12
    assert np.max(np.abs(back_values - traj.values)) <= 1e-12
    assert np.max(np.abs(back_derivs - traj.derivatives)) <= 1e-12


def test_dimensional_trajectory_approaches_terminal_velocity():
    group = nondimensionalize(P_REF)
    traj = ide.solve_ide(group.kappa, 0.0, 1e-2, 50.0)
    dim = dimensional_trajectory(group, traj)
    assert abs(dim.values[-1] - group.U0) <= 0.2 * abs(group.U0)


def test_dimensional_trajectory_rejects_neutral_buoyancy():
    p = PhysicalParams(rho_s=1000.0, rho=1000.0, mu=0.1, R=0.001, g=9.8)
    group = nondimensionalize(p)
    traj = ide.solve_ide(3.0, 0.0, 1e-2, 1.0)
    with pytest.raises(ValueError):
        dimensional_trajectory(group, traj)
