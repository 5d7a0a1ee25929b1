"""Transient motion of a sphere sedimenting in a Newtonian fluid at zero Reynolds number.

The package provides the dimensional drag/force-balance model
(:mod:`spherefall.physical`), cancellation-safe evaluation of the Villat
and Faddeeva functions (:mod:`spherefall.special`), the closed-form
transient solution and oscillator machinery (:mod:`spherefall.analytic`),
a product-integration solver for the memory equation
(:mod:`spherefall.ide`), a fixed-step integrator for the forced
oscillator (:mod:`spherefall.ode`), a verification engine
(:mod:`spherefall.analysis`), and a CLI (:mod:`spherefall.cli`).
"""

from .analytic import (
    CharRoots,
    MonotoneIC,
    char_roots,
    coefficients_from_ic,
    general_solution,
    monotone_initial_conditions,
    monotone_kernel_M,
    monotone_kernel_M_derivative,
    particular_solution_vp,
    u_general,
    u_rest,
    u_rest_derivative,
)
from .analysis import (
    VerificationReport,
    abel_identity_residual,
    check_monotone,
    imag_sqrt_alpha_villat,
    ode_residual,
    proof_integral,
    run_default_suite,
)
from .ide import Trajectory, abel_weights, basset_integral, solve_ide
from .ode import (
    OscillatorProblem,
    StabilityClass,
    classify_homogeneous,
    phase_portrait_fixed_point,
    solve_oscillator,
)
from .physical import (
    DimensionlessGroup,
    PhysicalParams,
    dimensional_trajectory,
    nondimensionalize,
    oscillatory_drag,
    stokes_terminal_velocity,
    unsteady_drag,
)
from .special import (
    AccuracyError,
    faddeeva,
    naive_villat,
    villat,
    villat_asymptotic,
)

__version__ = "0.1.0"
