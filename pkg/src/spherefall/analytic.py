"""Closed-form transient solutions built on the Villat function.

Covers the characteristic roots of m^2 + (2-kappa)m + 1, the exact
solution u(tau) for a sphere released from rest and its derivative, the
rescaling to general initial velocity, the monotone kernel M(t) of the
damped oscillator with 1/sqrt(pi(t+t0)) forcing, variation of
parameters, and the unique initial conditions whose trajectory stays
monotone despite an unstable homogeneous problem.

Complex-valued formulas here are conjugate-symmetric, so their values
are real; each such function checks that the imaginary residue is at
ulp scale before discarding it, which catches branch-convention
mistakes immediately instead of silently returning garbage.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .special import villat

__all__ = [
    "CharRoots",
    "MonotoneIC",
    "char_roots",
    "u_rest",
    "u_rest_derivative",
    "u_general",
    "monotone_kernel_M",
    "monotone_kernel_M_derivative",
    "particular_solution_vp",
    "general_solution",
    "general_state",
    "monotone_initial_conditions",
    "coefficients_from_ic",
]


@dataclass(frozen=True)
class CharRoots:
    """Roots of m^2 + (2-kappa)m + 1 = 0 with alpha the Im >= 0 (or larger) root."""

    alpha: complex
    beta: complex
    b: float  # damping coefficient, b = 2 - kappa
    kappa_equiv: float  # 2 - b

    def __post_init__(self) -> None:
        if abs(self.alpha * self.beta - 1.0) > 1e-12:
            raise ValueError("CharRoots: root product must be 1")
        if abs(self.alpha + self.beta + self.b) > 1e-12:
            raise ValueError("CharRoots: root sum must be -b")


@dataclass(frozen=True)
class MonotoneIC:
    """Initial state (v0, v0') and homogeneous coefficients of the monotone trajectory."""

    v0: float
    v0_prime: float
    c1: complex
    c2: complex


def _real_part_checked(value: complex) -> float:
    """Return Re(value), insisting the imaginary residue is ulp-sized."""
    if abs(value.imag) > 1e-13 * (1.0 + abs(value)):
        raise ArithmeticError(
            f"conjugate-symmetry violated: imaginary residue {value.imag:.3e} "
            f"on value {value!r}"
        )
    return value.real


def _roots_from_damping(b: float) -> tuple[complex, complex]:
    """Conjugate roots of m^2 + b m + 1 for b in (-2, 2), alpha in the upper half plane."""
    if not -2.0 < b < 2.0:
        raise ValueError(f"damping coefficient must lie in (-2, 2), got {b}")
    alpha = complex(-b / 2.0, math.sqrt(4.0 - b * b) / 2.0)
    return alpha, alpha.conjugate()


def char_roots(kappa: float) -> CharRoots:
    """Characteristic roots for density parameter kappa in (0, 9), kappa != 4.

    Complex conjugate pair for kappa < 4 (alpha with Im > 0, |alpha| = 1),
    real distinct roots for kappa > 4 (alpha the larger).  The double
    root at kappa = 4 is rejected.
    """
    if not 0.0 < kappa < 9.0:
        raise ValueError(f"kappa must lie in (0, 9), got {kappa}")
    if kappa == 4.0:
        raise ValueError("kappa = 4 is the degenerate double-root case")
    b = 2.0 - kappa
    if kappa < 4.0:
        alpha, beta = _roots_from_damping(b)
    else:
        disc = math.sqrt((kappa - 2.0) ** 2 - 4.0)
        alpha = complex((kappa - 2.0 + disc) / 2.0)
        beta = complex((kappa - 2.0 - disc) / 2.0)
    return CharRoots(alpha=alpha, beta=beta, b=b, kappa_equiv=2.0 - b)


def _require_complex_regime(kappa: float) -> CharRoots:
    if not 0.0 < kappa < 4.0:
        raise ValueError(f"kappa must lie in (0, 4) for the transient solution, got {kappa}")
    return char_roots(kappa)


def u_rest(tau: float, kappa: float) -> float:
    """Velocity of a sphere released from rest, in units of terminal velocity.

    u(tau) = 1 + (sqrt(kappa)/(alpha-beta)) [Vi(alpha tau)/sqrt(alpha)
                                             - Vi(beta tau)/sqrt(beta)]

    with u(0) = 0 and u -> 1; evaluated through the Villat function only.
    """
    if tau < 0.0:
        raise ValueError(f"tau must be >= 0, got {tau}")
    roots = _require_complex_regime(kappa)
    a, b = roots.alpha, roots.beta
    bracket = villat(a * tau) / cmath.sqrt(a) - villat(b * tau) / cmath.sqrt(b)
    return _real_part_checked(1.0 + math.sqrt(kappa) / (a - b) * bracket)


def u_rest_derivative(tau: float, kappa: float) -> float:
    """du/dtau for the rest-start solution, via the guaranteed-real form.

    u'(tau) = sqrt(kappa) * Im{sqrt(alpha) Vi(alpha tau)} / Im{alpha},
    so the sign is carried entirely by Im{sqrt(alpha) Vi(alpha tau)}.
    Continuous at tau = 0 with u'(0) = 1.
    """
    if tau < 0.0:
        raise ValueError(f"tau must be >= 0, got {tau}")
    roots = _require_complex_regime(kappa)
    a = roots.alpha
    return math.sqrt(kappa) * (cmath.sqrt(a) * villat(a * tau)).imag / a.imag


def u_general(tau: float, kappa: float, eps: float) -> float:
    """Solution with initial velocity u(0) = eps: the rescaling (1-eps) u0 + eps."""
    return (1.0 - eps) * u_rest(tau, kappa) + eps


def monotone_kernel_M(t: float, b: float) -> float:
    """Monotone kernel M(t) = (1/(alpha-beta)) [sqrt(beta) Vi(alpha t) - sqrt(alpha) Vi(beta t)].

    For b in (-2, 2) this is negative and increases monotonically to 0.
    """
    if t < 0.0:
        raise ValueError(f"t must be >= 0, got {t}")
    alpha, beta = _roots_from_damping(b)
    val = (
        cmath.sqrt(beta) * villat(alpha * t) - cmath.sqrt(alpha) * villat(beta * t)
    ) / (alpha - beta)
    return _real_part_checked(val)


def monotone_kernel_M_derivative(t: float, b: float) -> float:
    """dM/dt via d/dz Vi(z) = Vi(z) - 1/sqrt(pi z).

    The 1/sqrt(pi t) forcing pieces of the two terms cancel exactly
    (alpha*sqrt(beta) = sqrt(alpha) because alpha*beta = 1), leaving

        M'(t) = (1/(alpha-beta)) [alpha sqrt(beta) Vi(alpha t)
                                  - beta sqrt(alpha) Vi(beta t)],

    which is finite down to t = 0 with M'(0) = 1/(sqrt(alpha)+sqrt(beta)).
    """
    if t < 0.0:
        raise ValueError(f"t must be >= 0, got {t}")
    alpha, beta = _roots_from_damping(b)
    val = (
        alpha * cmath.sqrt(beta) * villat(alpha * t)
        - beta * cmath.sqrt(alpha) * villat(beta * t)
    ) / (alpha - beta)
    return _real_part_checked(val)


def particular_solution_vp(t: float, b: float, A: float, t0: float) -> float:
    """Variation-of-parameters particular solution of v'' + b v' + v = -A/sqrt(pi(t+t0)).

    v_p(t) = (A/(beta-alpha)) { sqrt(beta) Vi(alpha t0) e^{alpha t}
                                - sqrt(alpha) Vi(beta t0) e^{beta t} }
             + A M(t+t0),

    with v_p(0) = v_p'(0) = 0.  The exponential factors grow like
    e^{-b t / 2}; that growth is genuine and overflow propagates as
    OverflowError rather than being clamped.
    """
    if t < 0.0 or t0 < 0.0:
        raise ValueError("particular_solution_vp: t and t0 must be >= 0")
    if t + t0 <= 0.0:
        raise ValueError("particular_solution_vp: t + t0 must be > 0")
    alpha, beta = _roots_from_damping(b)
    homog = (
        cmath.sqrt(beta) * villat(alpha * t0) * cmath.exp(alpha * t)
        - cmath.sqrt(alpha) * villat(beta * t0) * cmath.exp(beta * t)
    )
    val = A / (beta - alpha) * homog + A * monotone_kernel_M(t + t0, b)
    return _real_part_checked(val)


def coefficients_from_ic(b: float, w0: float, w0_prime: float) -> tuple[complex, complex]:
    """Homogeneous-mode coefficients (C1, C2) matching w(0) = w0, w'(0) = w0'.

    C1 = (beta w0 - w0') / (beta - alpha),
    C2 = (w0' - alpha w0) / (beta - alpha);
    C2 = conj(C1) for real data.
    """
    alpha, beta = _roots_from_damping(b)
    c1 = (beta * w0 - w0_prime) / (beta - alpha)
    c2 = (w0_prime - alpha * w0) / (beta - alpha)
    return c1, c2


def general_state(
    t: float, b: float, A: float, t0: float, v0: float, v0_prime: float
) -> tuple[float, float]:
    """Value and derivative at time t of the solution with v(0)=v0, v'(0)=v0'.

    Decomposed against the bounded particular solution A*M(t+t0): the
    homogeneous coefficients come from the initial-condition mismatch
    (v0 - A M(t0), v0' - A M'(t0)), so the monotone initial conditions
    yield exactly v(t) = A M(t+t0) with no cancellation of exponentially
    large terms.
    """
    if t < 0.0:
        raise ValueError(f"t must be >= 0, got {t}")
    if t0 < 0.0:
        raise ValueError(f"t0 must be >= 0, got {t0}")
    alpha, beta = _roots_from_damping(b)
    m0 = A * monotone_kernel_M(t0, b)
    m0p = A * monotone_kernel_M_derivative(t0, b)
    c1, c2 = coefficients_from_ic(b, v0 - m0, v0_prime - m0p)
    ea = cmath.exp(alpha * t)
    eb = cmath.exp(beta * t)
    value = c1 * ea + c2 * eb + A * monotone_kernel_M(t + t0, b)
    deriv = c1 * alpha * ea + c2 * beta * eb + A * monotone_kernel_M_derivative(t + t0, b)
    return _real_part_checked(value), _real_part_checked(deriv)


def general_solution(
    t: float, b: float, A: float, t0: float, v0: float, v0_prime: float
) -> float:
    """Solution of v'' + b v' + v = -A/sqrt(pi(t+t0)) with the given initial state."""
    return general_state(t, b, A, t0, v0, v0_prime)[0]


def monotone_initial_conditions(b: float, A: float, t0: float) -> MonotoneIC:
    """The unique initial state whose trajectory is the monotone one, v(t) = A M(t+t0).

    Returns (A M(t0), A M'(t0)) together with the homogeneous coefficients
    C1 = -A sqrt(beta) Vi(alpha t0) / (beta - alpha),
    C2 =  A sqrt(alpha) Vi(beta t0) / (beta - alpha)
    that zero out the growing modes.  In the sphere configuration
    (b = 2-kappa, A = sqrt(kappa), t0 = 0) the value v0 is -1 for every
    kappa, and v0' = 1.
    """
    if t0 < 0.0:
        raise ValueError(f"t0 must be >= 0, got {t0}")
    alpha, beta = _roots_from_damping(b)
    v0 = A * monotone_kernel_M(t0, b)
    v0_prime = A * monotone_kernel_M_derivative(t0, b)
    c1 = -A * cmath.sqrt(beta) * villat(alpha * t0) / (beta - alpha)
    c2 = A * cmath.sqrt(alpha) * villat(beta * t0) / (beta - alpha)
    return MonotoneIC(v0=v0, v0_prime=v0_prime, c1=c1, c2=c2)
