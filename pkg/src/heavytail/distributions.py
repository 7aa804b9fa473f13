"""Heavy-tail Lambert W x F_X distribution objects.

An input family F_X (Gaussian, uniform, gamma, chi-squared, exponential or
Student t) is paired with tail parameters to give a heavy-tailed output
distribution with closed-form cdf, pdf and quantile function:

    cdf(y)      = F_X( w_tau(y) )
    pdf(y)      = f_X( w_tau(y) ) * dw/dz            (dw/dz = w_delta_dz)
    quantile(p) = h_tau( F_X^{-1}(p) )

With Gaussian input this is Tukey's h distribution (hh for separate left
and right tail parameters).  Closed-form Gaussian-input moments, the
kurtosis curve, the scale inflation factor sigma_y / sigma_x, and the
Student-t-input density used for joint fitting of (mu, sigma, delta, nu)
live here as well.

Input families are standard distributions and are backed by scipy.stats;
the Lambert W machinery on top of them is family-generic.  Nonexistent
moments are reported as ``None``, never as NaN.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import ClassVar

import numpy as np
from scipy import special as sp
from scipy import stats as st

from .exceptions import DomainError
from .transform import (
    TailParams,
    _dispatch_sides,
    h_tau,
    w_delta,
    w_delta_dz,
    w_of_delta_z_sq,
    w_tau,
)

__all__ = [
    "Gaussian",
    "Uniform",
    "Gamma",
    "ChiSquared",
    "Exponential",
    "StudentT",
    "LambertWDist",
    "family_from_name",
    "pdf_student_t_input",
    "moment_gaussian",
    "kurtosis_gaussian",
    "variance_factor",
    "kurtosis_student_t",
    "tail_index",
]

# Probabilities are clipped into this open interval before quantile
# evaluation so that inverse-cdf sampling never produces infinities.
_P_LO = 1e-300
_P_HI = 1.0 - 1e-16


_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


@dataclass(frozen=True)
class _Family:
    """Shared behaviour of input families.

    Subclasses either override the density/cdf/quantile methods with
    explicit formulas (the likelihood hot path must not rebuild scipy
    frozen distributions per call) or supply ``_dist`` and inherit the
    scipy-backed defaults, which are frozen once per instance.
    """

    kind: ClassVar[str] = "location-scale"
    name: ClassVar[str] = ""

    def _dist(self):  # pragma: no cover - overridden
        raise NotImplementedError

    @cached_property
    def _frozen(self):
        return self._dist()

    @property
    def mean_x(self) -> float:
        return float(self._frozen.mean())

    @property
    def sd_x(self) -> float:
        return float(self._frozen.std())

    def pdf(self, x):
        return self._frozen.pdf(x)

    def logpdf(self, x):
        return self._frozen.logpdf(x)

    def cdf(self, x):
        return self._frozen.cdf(x)

    def quantile(self, p):
        return self._frozen.ppf(np.clip(p, _P_LO, _P_HI))

    def sample(self, n: int, rng: np.random.Generator):
        # Inverse-cdf sampling keeps streams reproducible across platforms
        # and makes the delta = 0 pass-through in rlambertw exact.
        return self.quantile(rng.random(n))


@dataclass(frozen=True)
class Gaussian(_Family):
    mu: float = 0.0
    sigma: float = 1.0
    kind: ClassVar[str] = "location-scale"
    name: ClassVar[str] = "gaussian"

    def __post_init__(self):
        if not (np.isfinite(self.sigma) and self.sigma > 0):
            raise DomainError("Gaussian sigma must be positive")

    @property
    def mean_x(self) -> float:
        return self.mu

    @property
    def sd_x(self) -> float:
        return self.sigma

    def logpdf(self, x):
        u = (np.asarray(x, dtype=float) - self.mu) / self.sigma
        return -0.5 * u * u - math.log(self.sigma) - _LOG_SQRT_2PI

    def pdf(self, x):
        return np.exp(self.logpdf(x))

    def cdf(self, x):
        return sp.ndtr((np.asarray(x, dtype=float) - self.mu) / self.sigma)

    def quantile(self, p):
        return self.mu + self.sigma * sp.ndtri(np.clip(p, _P_LO, _P_HI))


@dataclass(frozen=True)
class Uniform(_Family):
    a: float = 0.0
    b: float = 1.0
    kind: ClassVar[str] = "location-scale"
    name: ClassVar[str] = "uniform"

    def __post_init__(self):
        if not (np.isfinite(self.a) and np.isfinite(self.b) and self.a < self.b):
            raise DomainError("Uniform requires a < b")

    @property
    def mean_x(self) -> float:
        return 0.5 * (self.a + self.b)

    @property
    def sd_x(self) -> float:
        return (self.b - self.a) / math.sqrt(12.0)

    def _dist(self):
        return st.uniform(loc=self.a, scale=self.b - self.a)


@dataclass(frozen=True)
class Gamma(_Family):
    shape: float = 1.0
    rate: float = 1.0
    kind: ClassVar[str] = "scale"
    name: ClassVar[str] = "gamma"

    def __post_init__(self):
        if not (self.shape > 0 and self.rate > 0):
            raise DomainError("Gamma shape and rate must be positive")

    @property
    def mean_x(self) -> float:
        return self.shape / self.rate

    @property
    def sd_x(self) -> float:
        return math.sqrt(self.shape) / self.rate

    def _dist(self):
        return st.gamma(a=self.shape, scale=1.0 / self.rate)


@dataclass(frozen=True)
class ChiSquared(_Family):
    k: float = 1.0
    kind: ClassVar[str] = "scale"
    name: ClassVar[str] = "chisq"

    def __post_init__(self):
        if not self.k > 0:
            raise DomainError("ChiSquared degrees of freedom must be positive")

    @property
    def mean_x(self) -> float:
        return self.k

    @property
    def sd_x(self) -> float:
        return math.sqrt(2.0 * self.k)

    def _dist(self):
        return st.chi2(df=self.k)


@dataclass(frozen=True)
class Exponential(_Family):
    rate: float = 1.0
    kind: ClassVar[str] = "scale"
    name: ClassVar[str] = "exponential"

    def __post_init__(self):
        if not self.rate > 0:
            raise DomainError("Exponential rate must be positive")

    @property
    def mean_x(self) -> float:
        return 1.0 / self.rate

    @property
    def sd_x(self) -> float:
        return 1.0 / self.rate

    def _dist(self):
        return st.expon(scale=1.0 / self.rate)


@dataclass(frozen=True)
class StudentT(_Family):
    """Location-scale Student t input.

    ``scale`` multiplies the raw t variate, so the standard deviation is
    ``scale * sqrt(nu / (nu - 2))``; ``nu > 2`` is required so that the
    standardization is finite.
    """

    nu: float = 5.0
    mu: float = 0.0
    scale: float = 1.0
    kind: ClassVar[str] = "location-scale"
    name: ClassVar[str] = "student-t"

    def __post_init__(self):
        if not self.nu > 2:
            raise DomainError("StudentT requires nu > 2 for a finite variance")
        if not (np.isfinite(self.scale) and self.scale > 0):
            raise DomainError("StudentT scale must be positive")

    @property
    def sd_x(self) -> float:
        return self.scale * math.sqrt(self.nu / (self.nu - 2.0))

    @property
    def mean_x(self) -> float:
        return self.mu

    def logpdf(self, x):
        t = (np.asarray(x, dtype=float) - self.mu) / self.scale
        nu = self.nu
        log_norm = (
            math.lgamma(0.5 * (nu + 1.0))
            - math.lgamma(0.5 * nu)
            - 0.5 * math.log(nu * math.pi)
            - math.log(self.scale)
        )
        return log_norm - 0.5 * (nu + 1.0) * np.log1p(t * t / nu)

    def pdf(self, x):
        return np.exp(self.logpdf(x))

    def _dist(self):
        return st.t(df=self.nu, loc=self.mu, scale=self.scale)


_FAMILIES = {
    "gaussian": Gaussian,
    "normal": Gaussian,
    "uniform": Uniform,
    "gamma": Gamma,
    "chisq": ChiSquared,
    "exponential": Exponential,
    "student-t": StudentT,
    "t": StudentT,
}


def family_from_name(name: str, params=()):
    """Build an input family from its CLI name and positional parameters."""
    try:
        cls = _FAMILIES[name.lower()]
    except KeyError:
        raise DomainError(
            f"unknown input family {name!r}; choose from "
            f"{sorted(set(_FAMILIES))}"
        ) from None
    return cls(*params)


@dataclass(frozen=True)
class LambertWDist:
    """Heavy-tailed version of an input distribution.

    ``delta`` follows the :class:`~heavytail.transform.TailParams`
    convention: a float for a symmetric tail or a pair for separate left
    and right tails.  The transformation vector is derived from the input
    family: location-scale inputs use (mean, sd, delta), scale-family
    inputs (0, sd, delta), anything else (0, 1, delta).  At ``delta = 0``
    every method reduces pointwise to the input distribution.
    """

    input: _Family
    delta: float | tuple[float, float] = 0.0

    @cached_property
    def tau(self) -> TailParams:
        if self.input.kind == "location-scale":
            return TailParams(self.input.mean_x, self.input.sd_x, self.delta)
        if self.input.kind == "scale":
            return TailParams(0.0, self.input.sd_x, self.delta)
        return TailParams(0.0, 1.0, self.delta)

    def cdf(self, y):
        return self.input.cdf(w_tau(y, self.tau))

    def pdf(self, y):
        tau = self.tau
        y_arr = np.asarray(y, dtype=float)
        z = (y_arr - tau.mu_x) / tau.sigma_x
        jac = _dispatch_sides(w_delta_dz, z, tau)
        return self.input.pdf(w_tau(y, tau)) * jac

    def logpdf(self, y):
        tau = self.tau
        y_arr = np.asarray(y, dtype=float)
        z = (y_arr - tau.mu_x) / tau.sigma_x
        wv = _dispatch_sides(w_of_delta_z_sq, z, tau)
        return self.input.logpdf(w_tau(y, tau)) - 0.5 * wv - np.log1p(wv)

    def quantile(self, p):
        p_arr = np.asarray(p, dtype=float)
        if np.any(p_arr <= 0.0) or np.any(p_arr >= 1.0):
            raise DomainError("quantile probabilities must lie strictly in (0, 1)")
        return h_tau(self.input.quantile(p), self.tau)

    def sample(self, n: int, rng: np.random.Generator | int | None = None):
        """Draw ``n`` values: sample the input, then push through h_tau.

        With all tail parameters zero the raw input stream is returned
        unchanged (bit-exact pass-through).
        """
        if n < 1:
            raise DomainError("sample size must be at least 1")
        if not isinstance(rng, np.random.Generator):
            rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(rng)))
        x = self.input.sample(int(n), rng)
        tau = self.tau
        if tau.delta_left == 0.0 and tau.delta_right == 0.0:
            return x
        return h_tau(x, tau)


def pdf_student_t_input(nu: float, tau: TailParams, z):
    """Density of the heavy-tailed Student-t-input model at ``z``.

    The model treats ``tau.sigma_x`` as the raw t scale: the latent
    variable is ``mu_x + sigma_x * T`` with ``T ~ t_nu``, and the tail
    transform acts on its unit-variance standardization.  On the raw t
    coordinate that is a tail parameter ``delta * (nu - 2) / nu``, giving

        g(z) = f_t( w_de(v) | nu ) * w_de'(v) / sigma_x,
        v = (z - mu_x) / sigma_x,   de = delta * (nu - 2) / nu.

    Integrates to one; at ``delta = 0`` it is the location-scale t density
    with variance ``sigma_x^2 * nu / (nu - 2)``, and for large ``nu`` it
    approaches the Gaussian-input density with the same (mu, sigma, delta).
    """
    nu = float(nu)
    if not nu > 2:
        raise DomainError("Student-t input requires nu > 2")
    if tau.is_double:
        raise DomainError("Student-t input supports symmetric tails only")
    delta_eff = tau.delta * (nu - 2.0) / nu
    v = (np.asarray(z, dtype=float) - tau.mu_x) / tau.sigma_x
    wv = w_of_delta_z_sq(v, delta_eff)
    u = w_delta(v, delta_eff)
    return st.t.pdf(u, df=nu) * np.exp(-0.5 * wv) / (1.0 + wv) / tau.sigma_x


def logpdf_student_t_input(nu: float, tau: TailParams, z):
    """Log of :func:`pdf_student_t_input`, stable far out in the tails."""
    nu = float(nu)
    if not nu > 2:
        raise DomainError("Student-t input requires nu > 2")
    if tau.is_double:
        raise DomainError("Student-t input supports symmetric tails only")
    delta_eff = tau.delta * (nu - 2.0) / nu
    v = (np.asarray(z, dtype=float) - tau.mu_x) / tau.sigma_x
    wv = w_of_delta_z_sq(v, delta_eff)
    u = w_delta(v, delta_eff)
    return st.t.logpdf(u, df=nu) - 0.5 * wv - np.log1p(wv) - math.log(tau.sigma_x)


def moment_gaussian(n: int, delta: float):
    """n-th raw moment of the standard Gaussian-input output variable.

    Returns ``None`` when the moment does not exist, which happens for
    ``n * delta >= 1`` (the boundary case ``n = 1/delta`` is reported as
    nonexistent).  Odd existing moments are 0; even ones equal
    ``n! (1 - n delta)^(-(n+1)/2) / (2^(n/2) (n/2)!)``.
    """
    n = int(n)
    if n < 1:
        raise DomainError("moment order must be a positive integer")
    delta = float(delta)
    if delta < 0:
        raise DomainError("delta must be >= 0")
    if delta > 0 and n * delta >= 1.0:
        return None
    if n % 2 == 1:
        return 0.0
    half = n // 2
    return (
        math.factorial(n)
        * (1.0 - n * delta) ** (-(n + 1) / 2.0)
        / (2.0**half * math.factorial(half))
    )


def variance_factor(delta: float):
    """Scale inflation sigma_y / sigma_x = (1 - 2 delta)^(-3/4).

    ``None`` for delta >= 1/2 (infinite variance).
    """
    delta = float(delta)
    if delta < 0:
        raise DomainError("delta must be >= 0")
    if delta >= 0.5:
        return None
    return (1.0 - 2.0 * delta) ** -0.75


def kurtosis_gaussian(delta: float):
    """Kurtosis 3 (1 - 2 delta)^3 / (1 - 4 delta)^(5/2) of the Gaussian-input output.

    Equals 3 at delta = 0 and increases strictly; ``None`` for
    delta >= 1/4 where the fourth moment does not exist.
    """
    delta = float(delta)
    if delta < 0:
        raise DomainError("delta must be >= 0")
    if delta >= 0.25:
        return None
    return 3.0 * (1.0 - 2.0 * delta) ** 3 / (1.0 - 4.0 * delta) ** 2.5


def kurtosis_student_t(nu: float):
    """Student t kurtosis 3 (nu - 2) / (nu - 4); ``None`` for nu <= 4."""
    nu = float(nu)
    if nu <= 4:
        return None
    return 3.0 * (nu - 2.0) / (nu - 4.0)


def tail_index(delta: float) -> float:
    """Tail index 1 / delta of the output; infinite for delta = 0."""
    delta = float(delta)
    if delta < 0:
        raise DomainError("delta must be >= 0")
    return math.inf if delta == 0.0 else 1.0 / delta
