"""Fixed-step integrator and stability classifier for the forced oscillator family.

The initial value problem is

    v'' + b v' + v = -A / sqrt(pi (t + t0)),    t >= 0,

integrated as the first-order system x' = y, y' = -x - b y - G(t) with
classical fourth-order Runge-Kutta at a fixed step.  For t0 = 0 the
forcing is singular at the start, so the first few grid states are
taken from the closed-form solution (the library owns it) before the
integrator takes over; see ``solve_oscillator``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import analytic
from .ide import Trajectory

__all__ = [
    "OscillatorProblem",
    "StabilityClass",
    "FixedPoint",
    "classify_homogeneous",
    "solve_oscillator",
    "phase_portrait_fixed_point",
]

_OVERFLOW_GUARD = 1e280


@dataclass(frozen=True)
class OscillatorProblem:
    """Damping b, forcing amplitude A, forcing offset t0 >= 0, and initial state."""

    b: float
    A: float
    t0: float
    v0: float
    v0_prime: float

    def __post_init__(self) -> None:
        if self.t0 < 0.0:
            raise ValueError(f"t0 must be >= 0, got {self.t0}")


@dataclass(frozen=True)
class StabilityClass:
    """Root kind and real-part sign of the homogeneous problem m^2 + b m + 1 = 0."""

    root_kind: str  # "complex-conjugate" | "real-distinct" | "real-double"
    re_sign: str  # "negative" | "zero" | "positive"


class FixedPoint(NamedTuple):
    x: float
    y: float
    eigenvalues: tuple[complex, complex]


def classify_homogeneous(b: float) -> StabilityClass:
    """Classify the homogeneous roots: complex pair iff |b| < 2, sign of Re = sign(-b/2)."""
    if abs(b) < 2.0:
        kind = "complex-conjugate"
    elif abs(b) == 2.0:
        kind = "real-double"
    else:
        kind = "real-distinct"
    if b > 0.0:
        sign = "negative"
    elif b < 0.0:
        sign = "positive"
    else:
        sign = "zero"
    return StabilityClass(root_kind=kind, re_sign=sign)


def _rhs(t: float, x: float, y: float, b: float, A: float, t0: float) -> tuple[float, float]:
    return y, -x - b * y - A / math.sqrt(math.pi * (t + t0))


def solve_oscillator(
    prob: OscillatorProblem, h: float, T: float, bootstrap_steps: int = 32
) -> Trajectory:
    """Integrate the forced oscillator to the horizon T with fixed step h.

    With t0 = 0 the forcing derivatives are unbounded at the start and a
    one-step method cannot hold its order there, so the first
    ``bootstrap_steps`` grid states come from the closed form
    (:func:`spherefall.analytic.general_state`); requesting a singular
    start with bootstrap_steps < 1 is a configuration error.  A
    diverging trajectory is truncated and flagged in ``meta['diverged']``
    rather than raised: the divergence is the object under study.
    """
    if h <= 0.0:
        raise ValueError(f"h must be > 0, got {h}")
    if T < h:
        raise ValueError(f"horizon T={T} must be at least one step h={h}")
    n = max(1, int(round(T / h)))
    b, A, t0 = prob.b, prob.A, prob.t0

    v = np.empty(n + 1)
    dv = np.empty(n + 1)
    v[0], dv[0] = prob.v0, prob.v0_prime
    start = 0
    if t0 == 0.0:
        if bootstrap_steps < 1:
            raise ValueError(
                "solve_oscillator: t0 = 0 is a singular start and requires the "
                "closed-form bootstrap (bootstrap_steps >= 1)"
            )
        start = min(bootstrap_steps, n)
        for i in range(1, start + 1):
            v[i], dv[i] = analytic.general_state(i * h, b, A, 0.0, prob.v0, prob.v0_prime)

    diverged = False
    last = n
    for k in range(start, n):
        t = k * h
        x, y = v[k], dv[k]
        k1x, k1y = _rhs(t, x, y, b, A, t0)
        k2x, k2y = _rhs(t + 0.5 * h, x + 0.5 * h * k1x, y + 0.5 * h * k1y, b, A, t0)
        k3x, k3y = _rhs(t + 0.5 * h, x + 0.5 * h * k2x, y + 0.5 * h * k2y, b, A, t0)
        k4x, k4y = _rhs(t + h, x + h * k3x, y + h * k3y, b, A, t0)
        xn = x + (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        yn = y + (h / 6.0) * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        if not (math.isfinite(xn) and math.isfinite(yn)) or max(abs(xn), abs(yn)) > _OVERFLOW_GUARD:
            diverged = True
            last = k
            break
        v[k + 1], dv[k + 1] = xn, yn

    meta = {
        "solver": "rk4",
        "b": b,
        "A": A,
        "t0": t0,
        "h": h,
        "T": last * h,
        "bootstrap_steps": start,
        "diverged": diverged,
    }
    times = np.arange(last + 1) * h
    return Trajectory(times=times, values=v[: last + 1], derivatives=dv[: last + 1], meta=meta)


def phase_portrait_fixed_point(kappa: float) -> FixedPoint:
    """Equilibrium (x, y) = (1, 0) of the first-order system, with its eigenvalues.

    The eigenvalues are the characteristic roots for the given kappa;
    their real part turns positive for 2 < kappa < 4, where the
    equilibrium is unstable even though the transient stays monotone.
    """
    disc = cmath.sqrt(complex((kappa - 2.0) ** 2 - 4.0))
    alpha = ((kappa - 2.0) + disc) / 2.0
    beta = ((kappa - 2.0) - disc) / 2.0
    if alpha.imag < 0.0:
        alpha, beta = beta, alpha
    return FixedPoint(x=1.0, y=0.0, eigenvalues=(alpha, beta))
