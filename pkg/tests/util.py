"""Shared test oracles."""

import math

from scipy import integrate

from heavytail import LambertWDist, h_tau


def normalization_by_substitution(dist: LambertWDist, p_tail: float = 1e-10) -> float:
    """Quadrature oracle for the pdf normalization.

    Substituting y = h_tau(x) turns the integral of the pdf over the whole
    output range into an integral over input values x, with the analytic
    forward-map derivative as Jacobian.  The x range is cut where the
    input's own tail mass (from scipy's cdf, independent of the code under
    test) drops below ``p_tail``, and clipped so the forward map stays
    finite; the clipped tail mass is added back.
    """
    tau = dist.tau
    x_lo = float(dist.input.quantile(p_tail))
    x_hi = float(dist.input.quantile(1.0 - p_tail))
    # keep 0.5 * delta * u^2 < 700 so h never overflows
    d_max = max(tau.delta_left, tau.delta_right, 1e-12)
    u_cap = math.sqrt(1400.0 / d_max)
    x_lo = max(x_lo, tau.mu_x - u_cap * tau.sigma_x)
    x_hi = min(x_hi, tau.mu_x + u_cap * tau.sigma_x)
    mass_outside = float(dist.input.cdf(x_lo) + (1.0 - dist.input.cdf(x_hi)))

    def integrand(x):
        u = (x - tau.mu_x) / tau.sigma_x
        d = tau.delta_left if u <= 0 else tau.delta_right
        jac = (1.0 + d * u * u) * math.exp(0.5 * d * u * u)
        return float(dist.pdf(h_tau(x, tau))) * jac

    val, err = integrate.quad(integrand, x_lo, x_hi, limit=300)
    assert err < 1e-8
    return val + mass_outside
