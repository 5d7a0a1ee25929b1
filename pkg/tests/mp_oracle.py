"""Multiprecision reference oracles for the test suite (mpmath, 50+ digits).

Only the tests import this module; the library itself never touches
mpmath.  ``erfc_taylor`` is an independent Taylor-series route used to
cross-check mpmath's own erfc, so the double-precision code is compared
against two unrelated high-precision evaluations.
"""

from __future__ import annotations

import mpmath

mpmath.mp.dps = 50


def erfc_taylor(z, extra_digits: int = 15) -> mpmath.mpc:
    """erfc via the Maclaurin series of erf, summed in high precision.

    Working precision is raised by ~0.44*|z|^2 digits to absorb the
    cancellation hump of the alternating series; practical for |z| <~ 25.
    """
    z = mpmath.mpc(z)
    hump_digits = int(0.44 * abs(z) ** 2) + extra_digits
    with mpmath.workdps(mpmath.mp.dps + hump_digits):
        zz = z * z
        coef = mpmath.mpc(1)
        total = mpmath.mpc(1)
        n = 0
        while True:
            n += 1
            coef *= -zz / n
            term = coef / (2 * n + 1)
            total += term
            if abs(term) < mpmath.mpf(10) ** (-(mpmath.mp.dps + 10)) * (1 + abs(total)):
                break
            if n > 200000:
                raise RuntimeError("erfc_taylor: series did not converge")
        result = 1 - 2 / mpmath.sqrt(mpmath.pi) * z * total
    return mpmath.mpc(result)


def faddeeva_mp(z) -> complex:
    z = mpmath.mpc(z)
    return complex(mpmath.e ** (-z * z) * mpmath.erfc(-1j * z))


def villat_mp(z) -> complex:
    z = mpmath.mpc(z)
    return complex(mpmath.e**z * mpmath.erfc(mpmath.sqrt(z)))


def villat_abs_mp(z) -> float:
    z = mpmath.mpc(z)
    return float(abs(mpmath.e**z * mpmath.erfc(mpmath.sqrt(z))))


def _roots_mp(kappa):
    kappa = mpmath.mpf(kappa)
    alpha = ((kappa - 2) + mpmath.sqrt(mpmath.mpc((kappa - 2) ** 2 - 4))) / 2
    if mpmath.im(alpha) < 0:
        alpha = mpmath.conj(alpha)
    return alpha, mpmath.conj(alpha)


def u_rest_mp(tau, kappa) -> float:
    a, b = _roots_mp(kappa)
    sa, sb = mpmath.sqrt(a), mpmath.sqrt(b)
    vi = lambda w: mpmath.e**w * mpmath.erfc(mpmath.sqrt(w))
    val = 1 + mpmath.sqrt(kappa) / (a - b) * (vi(a * tau) / sa - vi(b * tau) / sb)
    assert abs(mpmath.im(val)) < mpmath.mpf(10) ** -40
    return float(mpmath.re(val))


def kernel_M_mp(t, b) -> float:
    alpha = (-mpmath.mpf(b) + mpmath.sqrt(mpmath.mpc(b * b - 4))) / 2
    if mpmath.im(alpha) < 0:
        alpha = mpmath.conj(alpha)
    beta = mpmath.conj(alpha)
    vi = lambda w: mpmath.e**w * mpmath.erfc(mpmath.sqrt(w))
    val = (mpmath.sqrt(beta) * vi(alpha * t) - mpmath.sqrt(alpha) * vi(beta * t)) / (
        alpha - beta
    )
    return float(mpmath.re(val))


def vp_mp(t, b, A, t0) -> float:
    """Variation-of-parameters particular solution in its original
    Erfc-difference form (independent of the Villat-function rewrite)."""
    alpha = (-mpmath.mpf(b) + mpmath.sqrt(mpmath.mpc(b * b - 4))) / 2
    if mpmath.im(alpha) < 0:
        alpha = mpmath.conj(alpha)
    beta = mpmath.conj(alpha)
    sa, sb = mpmath.sqrt(alpha), mpmath.sqrt(beta)
    val = A / (beta - alpha) * (
        sb
        * mpmath.e ** (alpha * (t + t0))
        * (mpmath.erfc(mpmath.sqrt(alpha * t0)) - mpmath.erfc(mpmath.sqrt(alpha * (t + t0))))
        - sa
        * mpmath.e ** (beta * (t + t0))
        * (mpmath.erfc(mpmath.sqrt(beta * t0)) - mpmath.erfc(mpmath.sqrt(beta * (t + t0))))
    )
    assert abs(mpmath.im(val)) < mpmath.mpf(10) ** -35
    return float(mpmath.re(val))
