"""Dimensional drag model, force balance, and the bridge to the rescaled problem.

SI units throughout.  A sphere of radius R and density rho_s falls
through an unbounded Newtonian fluid (density rho, viscosity mu) at
zero Reynolds number.  The drag on the sphere splits into the steady
Stokes term, the added-mass term, and the Basset history integral; the
balance against buoyancy reduces to the memory equation solved by
:mod:`spherefall.ide` once velocities are scaled by the Stokes terminal
velocity U0 and times by the viscous time 1/B.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import ide
from .ide import Trajectory

__all__ = [
    "PhysicalParams",
    "DimensionlessGroup",
    "stokes_terminal_velocity",
    "nondimensionalize",
    "viscous_penetration_depth",
    "oscillatory_drag",
    "unsteady_drag",
    "buoyancy_force",
    "dimensional_trajectory",
]


@dataclass(frozen=True)
class PhysicalParams:
    """Sphere/fluid description: densities (kg/m^3), viscosity (Pa s), radius (m), gravity (m/s^2)."""

    rho_s: float
    rho: float
    mu: float
    R: float
    g: float

    def __post_init__(self) -> None:
        if self.rho <= 0.0 or self.mu <= 0.0 or self.R <= 0.0 or self.g <= 0.0:
            raise ValueError("PhysicalParams: rho, mu, R, g must all be > 0")
        if self.rho_s < 0.0:
            raise ValueError("PhysicalParams: rho_s must be >= 0")

    @property
    def nu(self) -> float:
        """Kinematic viscosity mu/rho (m^2/s)."""
        return self.mu / self.rho

    @property
    def volume(self) -> float:
        """Sphere volume 4 pi R^3 / 3 (m^3)."""
        return 4.0 * math.pi * self.R**3 / 3.0


@dataclass(frozen=True)
class DimensionlessGroup:
    """Derived constants tying the laboratory and rescaled descriptions.

    B is the inverse viscous time (1/s), Q the memory coefficient
    (1/sqrt(s)), M the reduced buoyancy (m/s^2), kappa = pi Q^2 / B the
    density-ratio parameter, and U0 = M/B the Stokes terminal velocity.
    """

    B: float
    Q: float
    M: float
    kappa: float
    U0: float

    def __post_init__(self) -> None:
        if self.B <= 0.0 or self.Q <= 0.0:
            raise ValueError("DimensionlessGroup: B and Q must be > 0")
        # kappa = 9 is the massless-sphere boundary (rho_s = 0).
        if not 0.0 < self.kappa <= 9.0:
            raise ValueError(f"DimensionlessGroup: kappa must lie in (0, 9], got {self.kappa}")
        if abs(self.kappa - math.pi * self.Q**2 / self.B) > 1e-12 * self.kappa:
            raise ValueError("DimensionlessGroup: kappa must equal pi Q^2 / B")
        if abs(self.U0 - self.M / self.B) > 1e-12 * max(abs(self.U0), 1e-300):
            raise ValueError("DimensionlessGroup: U0 must equal M / B")


def stokes_terminal_velocity(p: PhysicalParams) -> float:
    """Terminal velocity 2 (rho_s - rho) g R^2 / (9 mu); negative for a rising sphere."""
    return 2.0 * (p.rho_s - p.rho) * p.g * p.R**2 / (9.0 * p.mu)


def nondimensionalize(p: PhysicalParams) -> DimensionlessGroup:
    """Constants of the rescaled equation of motion for the given sphere/fluid pair."""
    denom = 2.0 * p.rho_s + p.rho
    B = 9.0 * p.mu / (p.R**2 * denom)
    Q = 9.0 * p.rho / (p.R * denom) * math.sqrt(p.mu / (p.rho * math.pi))
    M = 2.0 * p.g * (p.rho_s - p.rho) / denom
    # kappa = pi Q^2 / B reduces to the pure density ratio; the reduced
    # form is exact at the rho_s = 0 boundary where kappa = 9.
    kappa = 9.0 * p.rho / denom
    return DimensionlessGroup(B=B, Q=Q, M=M, kappa=kappa, U0=M / B)


def viscous_penetration_depth(p: PhysicalParams, omega: float) -> float:
    """Oscillatory boundary-layer thickness delta = sqrt(2 nu / omega)."""
    if omega <= 0.0:
        raise ValueError(f"omega must be > 0, got {omega}")
    return math.sqrt(2.0 * p.nu / omega)


def oscillatory_drag(p: PhysicalParams, U: float, dUdt: float, omega: float) -> float:
    """Drag on a sphere oscillating at frequency omega with instantaneous state (U, dU/dt).

    F = 6 pi mu R (1 + R/delta) U + 3 pi R^2 rho delta (1 + 2R/(9 delta)) dU/dt,
    delta = sqrt(2 nu / omega).  Linear in (U, dU/dt).
    """
    delta = viscous_penetration_depth(p, omega)
    in_phase = 6.0 * math.pi * p.mu * p.R * (1.0 + p.R / delta) * U
    out_of_phase = (
        3.0 * math.pi * p.R**2 * p.rho * delta * (1.0 + 2.0 * p.R / (9.0 * delta)) * dUdt
    )
    return in_phase + out_of_phase


def _grid_index(traj: Trajectory, t: float) -> int:
    h = traj.step()
    if t < -1e-12 or t > traj.times[-1] + 1e-9 * h:
        raise ValueError(
            f"t={t} outside the trajectory domain [0, {traj.times[-1]}]"
        )
    i = int(round(t / h))
    i = min(max(i, 0), len(traj) - 1)
    if abs(traj.times[i] - t) > 1e-9 * max(h, 1.0):
        raise ValueError(f"t={t} does not lie on the trajectory grid (step {h})")
    return i


def unsteady_drag(p: PhysicalParams, traj: Trajectory, t: float) -> float:
    """Total drag at time t on a sphere with the given velocity history (from rest).

    F = 6 pi mu R U(t) + (1/2) rho V U'(t)
        + 6 pi rho R^2 sqrt(nu/pi) * integral_0^t U'(s)/sqrt(t-s) ds,

    the history integral evaluated with the product-integration Abel
    quadrature on the trajectory grid.  t must be a grid point.
    """
    i = _grid_index(traj, t)
    stokes = 6.0 * math.pi * p.mu * p.R * traj.values[i]
    added_mass = 0.5 * p.rho * p.volume * traj.derivatives[i]
    basset = (
        6.0
        * math.pi
        * p.rho
        * p.R**2
        * math.sqrt(p.nu / math.pi)
        * ide.basset_integral(traj, i)
    )
    return stokes + added_mass + basset


def buoyancy_force(p: PhysicalParams) -> float:
    """Net driving force (rho_s - rho) V g; the drag balances this at terminal velocity."""
    return (p.rho_s - p.rho) * p.volume * p.g


def dimensional_trajectory(g: DimensionlessGroup, traj: Trajectory) -> Trajectory:
    """Map a rescaled trajectory (tau, u, u') to laboratory units (t, U, U').

    t = tau / B, U = u * U0, U' = u' * U0 * B.  Rejected for the neutrally
    buoyant sphere (U0 = 0), whose rescaling is undefined.
    """
    if g.U0 == 0.0:
        raise ValueError("dimensional_trajectory: U0 = 0 (neutrally buoyant sphere)")
    meta = dict(traj.meta)
    meta.update({"units": "SI", "B": g.B, "U0": g.U0})
    return Trajectory(
        times=traj.times / g.B,
        values=traj.values * g.U0,
        derivatives=traj.derivatives * (g.U0 * g.B),
        meta=meta,
    )
