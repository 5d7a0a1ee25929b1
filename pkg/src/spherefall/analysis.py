"""Verification engine: the model's guarantees as executable checks.

Everything here produces floating-point evidence, not proofs: the
monotone approach to terminal velocity, the negativity of the proof
integral that drives it, the equivalence of the memory-integral,
second-order-ODE and closed-form formulations, and the residuals of
discrete trajectories against the equations they claim to solve.
Results are reported as :class:`VerificationReport` values that the CLI
serializes to JSON.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np
from scipy.integrate import quad

from . import analytic, ide, ode
from .ide import Trajectory
from .special import (
    AccuracyError,
    faddeeva,
    faddeeva_im_quadrature,
    faddeeva_re_quadrature,
    naive_villat,
    villat,
    villat_asymptotic,
)

__all__ = [
    "VerificationReport",
    "check_monotone",
    "proof_integrand_F",
    "proof_integral",
    "imag_sqrt_alpha_villat",
    "abel_identity_residual",
    "ode_residual",
    "run_default_suite",
]

# Finite differences cannot resolve the inverse-square-root forcing near
# the start; residual checks skip this many steps.
STARTUP_STEPS = 10

_QUAD_CUTOFF = 9.0  # exp(-81) tail bound, far below every tolerance in use


@dataclass(frozen=True)
class VerificationReport:
    """Pass/fail record of one check: passed iff worst_violation <= tolerance."""

    check_id: str
    passed: bool
    worst_violation: float
    location: str
    tolerance: float

    @staticmethod
    def from_violation(
        check_id: str, worst: float, tolerance: float, location: str
    ) -> "VerificationReport":
        return VerificationReport(
            check_id=check_id,
            passed=bool(worst <= tolerance),
            worst_violation=float(worst),
            location=location,
            tolerance=float(tolerance),
        )


def check_monotone(traj: Trajectory, tol: float = 1e-12) -> VerificationReport:
    """Pass iff no consecutive value of the trajectory decreases by more than tol."""
    values = traj.values
    if len(values) < 2:
        return VerificationReport.from_violation("monotone", 0.0, tol, "t=--")
    drops = values[:-1] - values[1:]
    i = int(np.argmax(drops))
    worst = float(max(drops[i], 0.0))
    return VerificationReport.from_violation(
        "monotone", worst, tol, f"t={traj.times[i + 1]:.6g}"
    )


# ----------------------------------------------------------------------
# The sign integral behind the monotonicity result
# ----------------------------------------------------------------------

def _proof_P(s, t: float, theta: float):
    return (s + math.sqrt(t) * math.sin(theta / 2.0)) ** 2 + t * math.cos(
        theta / 2.0
    ) ** 2


def proof_integrand_F(s: float, t: float, theta: float) -> float:
    """F(s) = s exp(-s^2) / P(s) with P(s) = (s + sqrt(t) sin(theta/2))^2 + t cos^2(theta/2).

    P(s) > 0 for all real s, so F is smooth; it is merely sharply peaked
    as theta -> pi, where P(-s) approaches (s - sqrt(t))^2.
    """
    if t <= 0.0:
        raise ValueError(f"t must be > 0, got {t}")
    if not 0.0 < theta < math.pi:
        raise ValueError(f"theta must lie in (0, pi), got {theta}")
    return s * math.exp(-s * s) / _proof_P(s, t, theta)


_GAUSS_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gauss_composite(
    f: Callable[[np.ndarray], np.ndarray], edges: np.ndarray, order: int
) -> float:
    if order not in _GAUSS_CACHE:
        _GAUSS_CACHE[order] = np.polynomial.legendre.leggauss(order)
    nodes, weights = _GAUSS_CACHE[order]
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        mid = 0.5 * (a + b)
        half = 0.5 * (b - a)
        total += half * float(weights @ f(mid + half * nodes))
    return total


def proof_integral(t: float, theta: float) -> float:
    """Integral of F over the real line (truncated at |s| <= 9); strictly negative.

    Adaptive quadrature refereed by a composite Gauss rule with doubled
    panels; disagreement raises AccuracyError instead of returning an
    unverified number.
    """
    if t <= 0.0:
        raise ValueError(f"t must be > 0, got {t}")
    if not 0.0 < theta < math.pi:
        raise ValueError(f"theta must lie in (0, pi), got {theta}")

    s_peak = -math.sqrt(t) * math.sin(theta / 2.0)
    width = max(math.sqrt(t) * math.cos(theta / 2.0), 1e-3)

    def f_scalar(s: float) -> float:
        return s * math.exp(-s * s) / _proof_P(s, t, theta)

    def f_array(s: np.ndarray) -> np.ndarray:
        return s * np.exp(-s * s) / _proof_P(s, t, theta)

    points = [s_peak] if -_QUAD_CUTOFF < s_peak < _QUAD_CUTOFF else None
    primary, est = quad(
        f_scalar,
        -_QUAD_CUTOFF,
        _QUAD_CUTOFF,
        points=points,
        epsabs=1e-13,
        epsrel=1e-12,
        limit=400,
    )
    if est > max(1e-9, 1e-7 * abs(primary)):
        raise AccuracyError(f"proof_integral: adaptive rule did not converge (est={est:.2e})")

    # Doubled-node referee: panels concentrated around the Lorentzian peak.
    edges = {-_QUAD_CUTOFF, _QUAD_CUTOFF, 0.0}
    for k in (0.0, 1.0, 3.0, 10.0, 30.0, 100.0, 300.0):
        for sgn in (-1.0, 1.0):
            e = s_peak + sgn * k * width
            if -_QUAD_CUTOFF < e < _QUAD_CUTOFF:
                edges.add(e)
    edges = np.array(sorted(edges))
    doubled = np.sort(np.concatenate([edges, 0.5 * (edges[:-1] + edges[1:])]))
    ref_a = _gauss_composite(f_array, edges, 32)
    ref_b = _gauss_composite(f_array, doubled, 32)
    tol = max(1e-9, 1e-7 * abs(primary))
    if abs(ref_a - ref_b) > tol or abs(primary - ref_b) > tol:
        raise AccuracyError(
            "proof_integral: quadrature rules disagree "
            f"(adaptive={primary!r}, gauss={ref_a!r}, gauss2={ref_b!r})"
        )
    return primary


def imag_sqrt_alpha_villat(t: float, kappa: float) -> float:
    """Im{sqrt(alpha) Vi(alpha t)}, the quantity whose positivity makes u' > 0.

    Computed directly through the Villat function and cross-checked
    against the decomposition cos(theta/2) Im w + sin(theta/2) Re w at
    w(x + iy) with x = -sqrt(t) sin(theta/2), y = sqrt(t) cos(theta/2);
    disagreement beyond 1e-10 is an internal-consistency error.
    """
    if t <= 0.0:
        raise ValueError(f"t must be > 0, got {t}")
    roots = analytic.char_roots(kappa)
    if not 0.0 < kappa < 4.0:
        raise ValueError(f"kappa must lie in (0, 4), got {kappa}")
    alpha = roots.alpha
    direct = (cmath.sqrt(alpha) * villat(alpha * t)).imag

    theta = cmath.phase(alpha)
    x = -math.sqrt(t) * math.sin(theta / 2.0)
    y = math.sqrt(t) * math.cos(theta / 2.0)
    w = faddeeva(complex(x, y))
    decomposed = math.cos(theta / 2.0) * w.imag + math.sin(theta / 2.0) * w.real
    if abs(direct - decomposed) > 1e-10:
        raise ArithmeticError(
            "imag_sqrt_alpha_villat: computation paths disagree "
            f"({direct!r} vs {decomposed!r} at t={t}, kappa={kappa})"
        )
    return direct


# ----------------------------------------------------------------------
# Cross-formulation residuals
# ----------------------------------------------------------------------

def _abel_transform_all(samples: np.ndarray, h: float) -> np.ndarray:
    """Abel quadrature of the sampled function at every grid point."""
    n = len(samples) - 1
    left, right = ide._cell_weights(n, h)
    out = np.zeros(n + 1)
    for k in range(1, n + 1):
        out[k] = right[0:k] @ samples[k:0:-1] + left[0:k] @ samples[k - 1 :: -1]
    return out


def abel_identity_residual(traj: Trajectory) -> VerificationReport:
    """Check the inversion identity: the Abel transform of F(t) = I[u'](t) is pi (u - u(0)).

    Both layers use the product-integration weights, so the first few
    cells of the double quadrature cannot resolve the sqrt-type growth;
    grid points inside the startup window (t < STARTUP_STEPS * h) are
    excluded, and the pass tolerance of 1e-2 relative reflects the
    accuracy loss of nesting two quadratures.
    """
    h = traj.step()
    inner = _abel_transform_all(traj.derivatives, h)
    outer = _abel_transform_all(inner, h)
    rhs = math.pi * (traj.values - traj.values[0])
    dev = np.abs(outer - rhs) / np.maximum(np.abs(rhs), 1e-30)
    mask = traj.times >= STARTUP_STEPS * h - 1e-12 * h
    if not np.any(mask):
        raise ValueError("abel_identity_residual: trajectory shorter than the startup window")
    idx = np.flatnonzero(mask)
    worst_local = int(idx[np.argmax(dev[idx])])
    return VerificationReport.from_violation(
        "abel_identity",
        float(dev[worst_local]),
        1e-2,
        f"t={traj.times[worst_local]:.6g}",
    )


def ode_residual(traj: Trajectory, kappa: float, u0: float) -> VerificationReport:
    """Residual of u'' + (2-kappa) u' + u = 1 + sqrt(kappa/(pi t)) (u0 - 1) on the grid.

    u'' comes from central differences of the stored derivatives, so the
    startup window is excluded (the forcing is singular at t = 0, not
    the solution's fault).  Pass tolerance is 100 h.
    """
    h = traj.step()
    t = traj.times[1:-1]
    u = traj.values[1:-1]
    du = traj.derivatives[1:-1]
    d2u = (traj.derivatives[2:] - traj.derivatives[:-2]) / (2.0 * h)
    forcing = 1.0 + np.sqrt(kappa / (math.pi * t)) * (u0 - 1.0)
    resid = np.abs(d2u + (2.0 - kappa) * du + u - forcing)
    mask = t >= STARTUP_STEPS * h - 1e-12 * h
    if not np.any(mask):
        raise ValueError("ode_residual: trajectory shorter than the startup window")
    idx = np.flatnonzero(mask)
    worst_local = int(idx[np.argmax(resid[idx])])
    return VerificationReport.from_violation(
        "ode_residual",
        float(resid[worst_local]),
        100.0 * h,
        f"t={t[worst_local]:.6g}",
    )


# ----------------------------------------------------------------------
# Default suite (used by the CLI `verify` command)
# ----------------------------------------------------------------------

_KAPPA_SET = (0.5, 1.0, 2.0, 2.5, 2.9, 3.5, 3.9)


def _sample_u_rest(kappa: float, taus: np.ndarray) -> Trajectory:
    times = np.concatenate(([0.0], taus))
    values = np.array([analytic.u_rest(t, kappa) for t in times])
    derivs = np.array([analytic.u_rest_derivative(t, kappa) for t in times])
    return Trajectory(times=times, values=values, derivatives=derivs,
                      meta={"solver": "closed-form", "kappa": kappa})


def run_default_suite(h: float = 1e-3, points: int = 400) -> list[VerificationReport]:
    """Run every identity/monotonicity/residual check at desk scale.

    Returns one report per check; the CLI turns a failing report into
    exit status 2.  ``h`` controls the discrete-solver checks and
    ``points`` the sampling density of the closed-form grids.
    """
    reports: list[VerificationReport] = []
    taus = np.logspace(-3, 3, points)

    # Monotone approach of the closed form, and positivity of u'.
    worst_drop, drop_loc = 0.0, "--"
    worst_neg, neg_loc = 0.0, "--"
    for kappa in _KAPPA_SET:
        traj = _sample_u_rest(kappa, taus)
        rep = check_monotone(traj, tol=1e-12)
        if rep.worst_violation > worst_drop:
            worst_drop, drop_loc = rep.worst_violation, f"kappa={kappa}, {rep.location}"
        dmin_i = int(np.argmin(traj.derivatives))
        neg = max(0.0, -float(traj.derivatives[dmin_i]))
        if neg > worst_neg:
            worst_neg, neg_loc = neg, f"kappa={kappa}, t={traj.times[dmin_i]:.6g}"
    reports.append(VerificationReport.from_violation(
        "closed_form_monotone", worst_drop, 1e-12, drop_loc))
    reports.append(VerificationReport.from_violation(
        "closed_form_derivative_positive", worst_neg, 0.0, neg_loc))

    # Leading-order terminal approach: u(100) - 1 ~ -sqrt(kappa/(100 pi)).
    worst, loc = 0.0, "--"
    for kappa in _KAPPA_SET:
        lead = math.sqrt(kappa / (100.0 * math.pi))
        rel = abs(analytic.u_rest(100.0, kappa) - 1.0 + lead) / lead
        if rel > worst:
            worst, loc = rel, f"kappa={kappa}"
    reports.append(VerificationReport.from_violation(
        "terminal_approach", worst, 0.05, loc))

    # Characteristic-root identities.
    worst, loc = 0.0, "--"
    for kappa in np.linspace(0.05, 3.95, 20):
        r = analytic.char_roots(float(kappa))
        sa, sb = cmath.sqrt(r.alpha), cmath.sqrt(r.beta)
        err = max(
            abs(r.alpha * r.beta - 1.0),
            abs(r.alpha + r.beta - (kappa - 2.0)),
            abs((sa + sb) ** 2 - kappa),
            abs(abs(r.alpha) - 1.0),
        )
        if err > worst:
            worst, loc = err, f"kappa={kappa:.4g}"
    reports.append(VerificationReport.from_violation(
        "root_identities", worst, 1e-13, loc))

    # Decoupling: sqrt(kappa) M(0) = -1 for every kappa.
    worst, loc = 0.0, "--"
    for kappa in np.linspace(0.05, 3.95, 20):
        val = abs(math.sqrt(kappa) * analytic.monotone_kernel_M(0.0, 2.0 - float(kappa)) + 1.0)
        if val > worst:
            worst, loc = val, f"kappa={kappa:.4g}"
    reports.append(VerificationReport.from_violation(
        "decoupling_v0", worst, 1e-12, loc))

    # Sign integral of the monotonicity argument: strictly negative everywhere.
    worst, loc = -math.inf, "--"
    for t in np.logspace(-2, 3, 6):
        for theta in np.linspace(math.pi / 12.0, math.pi * 11.0 / 12.0, 6):
            val = proof_integral(float(t), float(theta))
            if val > worst:
                worst, loc = val, f"t={t:.4g}, theta={theta:.4g}"
    reports.append(VerificationReport.from_violation(
        "proof_integral_negative", worst, 0.0, loc))

    # Positivity of Im{sqrt(alpha) Vi(alpha t)} (two agreeing paths).
    worst, loc = 0.0, "--"
    for t in np.logspace(-2, 3, 6):
        for kappa in np.linspace(0.3, 3.7, 6):
            val = imag_sqrt_alpha_villat(float(t), float(kappa))
            neg = max(0.0, -val)
            if neg > worst:
                worst, loc = neg, f"t={t:.4g}, kappa={kappa:.4g}"
    reports.append(VerificationReport.from_violation(
        "imag_sqrt_alpha_positive", worst, 0.0, loc))

    # Discrete solver vs closed form, and the residual checks on it.  The
    # 1e-4 budget is stated for h = 1e-3; larger steps scale it by the
    # observed order ~1.5 of the product-integration scheme.
    ide_tol = max(1e-4, 1e-4 * (h / 1e-3) ** 1.5)
    traj2 = ide.solve_ide(2.0, 0.0, h, 10.0)
    closed = np.array([analytic.u_rest(t, 2.0) for t in traj2.times])
    sup = float(np.max(np.abs(traj2.values - closed)))
    reports.append(VerificationReport.from_violation(
        "ide_vs_closed_form", sup, ide_tol, "kappa=2, [0,10]"))
    reports.append(replace(check_monotone(traj2, tol=10.0 * h), check_id="ide_monotone"))

    traj25 = ide.solve_ide(2.5, 0.0, h, 10.0)
    reports.append(ode_residual(traj25, 2.5, 0.0))
    reports.append(abel_identity_residual(traj25))

    # Unique monotone oscillator trajectory.
    ic = analytic.monotone_initial_conditions(-1.0, 1.0, 1.0)
    prob = ode.OscillatorProblem(b=-1.0, A=1.0, t0=1.0, v0=ic.v0, v0_prime=ic.v0_prime)
    osc = ode.solve_oscillator(prob, h, 20.0)
    target = np.array([analytic.monotone_kernel_M(t + 1.0, -1.0) for t in osc.times])
    sup = float(np.max(np.abs(osc.values - target)))
    reports.append(VerificationReport.from_violation(
        "oscillator_monotone_ic", sup, 1e-6, "b=-1, A=1, t0=1"))
    reports.append(replace(check_monotone(osc, tol=10.0 * h), check_id="oscillator_monotone"))

    # Fast special-function path against the integral-representation oracles.
    worst, loc = 0.0, "--"
    for x in np.linspace(-2.0, 2.0, 5):
        for y in np.linspace(0.4, 2.0, 5):
            w = faddeeva(complex(x, y))
            err = max(
                abs(w.real - faddeeva_re_quadrature(float(x), float(y))),
                abs(w.imag - faddeeva_im_quadrature(float(x), float(y))),
            )
            if err > worst:
                worst, loc = err, f"x={x:.3g}, y={y:.3g}"
    reports.append(VerificationReport.from_violation(
        "faddeeva_vs_quadrature", worst, 1e-10, loc))

    # Derivative identity d/dz Vi = Vi - 1/sqrt(pi z), central differences
    # (step at the cube root of machine epsilon, the central-difference optimum).
    worst, loc = 0.0, "--"
    for z in (0.7, 4.0 + 1.5j, 25.0 + 40.0j, 2.0 - 3.0j, 100.0):
        z = complex(z)
        step = 2.2e-16 ** (1.0 / 3.0) * max(1.0, abs(z))
        fd = (villat(z + step) - villat(z - step)) / (2.0 * step)
        exact = villat(z) - 1.0 / cmath.sqrt(math.pi * z)
        rel = abs(fd - exact) / abs(exact)
        if rel > worst:
            worst, loc = rel, f"z={z}"
    reports.append(VerificationReport.from_violation(
        "villat_derivative_identity", worst, 1e-6, loc))

    # Divergent-series tail against the stable evaluation at large |z|.
    worst, loc = 0.0, "--"
    for r in (1e3, 1e4, 1e5):
        for phase in (0.0, 0.5, 1.5, 2.0):
            z = r * cmath.exp(1j * phase)
            approx = villat_asymptotic(z, 5).value
            rel = abs(approx - villat(z)) / abs(villat(z))
            if rel > worst:
                worst, loc = rel, f"|z|={r:.2g}, arg={phase}"
    reports.append(VerificationReport.from_violation(
        "villat_asymptotic_match", worst, 1e-6, loc))

    # The unstable textbook evaluation must visibly fail where the stable one holds.
    z_blow = 400.0 * cmath.exp(1j * math.pi / 3.0)
    try:
        rel = abs(naive_villat(z_blow) - villat(z_blow)) / abs(villat(z_blow))
    except OverflowError:
        rel = math.inf
    reports.append(VerificationReport.from_violation(
        "naive_villat_blowup", max(0.0, 1e-3 - min(rel, 1.0)), 0.0,
        f"rel_disagreement={rel:.3g}"))

    return reports
