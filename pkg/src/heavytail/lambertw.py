"""Principal branch of Lambert's W function.

W0(x) is the inverse of ``w * exp(w)`` on ``w >= -1``, defined for
``x >= -1/e``.  The whole package stands on this single special function,
so it is evaluated here from scratch with Halley's method and verified
against the defining identity ``W(x) * exp(W(x)) = x`` rather than
delegated to a third-party implementation.  Piecewise initial guesses
(branch-point series, small-argument rational, log-log asymptotic) keep the
iteration overflow-free up to the largest representable arguments.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import ConvergenceError, DomainError

__all__ = ["SolverConfig", "BRANCH_POINT", "lambert_w0", "lambert_w0_prime"]

#: Location of the branch point -1/e where W0 equals -1.
BRANCH_POINT = -np.exp(-1.0)


@dataclass(frozen=True)
class SolverConfig:
    """Stopping rule for the Halley iteration.

    ``abs_tol`` bounds the residual of the defining identity relative to
    ``max(1, |x|)``; it also sets the width of the clamp band below the
    branch point inside which arguments are snapped to ``-1/e`` (round
    trips through the tail transform can land epsilon outside the domain).
    """

    abs_tol: float = 1e-14
    max_iter: int = 64

    def __post_init__(self):
        if not (self.abs_tol > 0.0):
            raise DomainError("abs_tol must be positive")
        if self.max_iter < 1:
            raise DomainError("max_iter must be at least 1")


_DEFAULT = SolverConfig()


def _initial_guess(x: np.ndarray) -> np.ndarray:
    """Piecewise starting values for Halley's method."""
    w = np.empty_like(x)

    # Square-root expansion around the branch point, accurate on [-1/e, -0.3).
    near = x < -0.3
    if near.any():
        p = np.sqrt(2.0 * (np.e * x[near] + 1.0))
        w[near] = -1.0 + p * (1.0 - p * (1.0 / 3.0) + p * p * (11.0 / 72.0))

    # Cheap rational guess in the middle; Halley converges cubically from it.
    mid = (~near) & (x < np.e)
    if mid.any():
        xm = x[mid]
        w[mid] = xm / (1.0 + xm)

    # Asymptotic guess L1 - L2 + L2/L1 + L2(L2-2)/(2 L1^2); never
    # exponentiates x, so arguments up to the float maximum are safe.
    big = x >= np.e
    if big.any():
        l1 = np.log(x[big])
        l2 = np.log(l1)
        w[big] = l1 - l2 + l2 / l1 + l2 * (l2 - 2.0) / (2.0 * l1 * l1)

    return w


def lambert_w0(x, config: SolverConfig | None = None):
    """Evaluate the principal branch W0 at ``x``.

    Parameters
    ----------
    x : float or array_like
        Argument(s), each ``>= -1/e``.  Values within ``abs_tol`` below the
        branch point are clamped to it; values further below raise
        :class:`DomainError`.  ``+inf`` maps to ``+inf``, NaN propagates.
    config : SolverConfig, optional
        Tolerance and iteration budget.

    Returns
    -------
    float or numpy.ndarray
        ``w`` with ``|w * exp(w) - x| <= abs_tol * max(1, |x|)`` and
        ``w >= -1``.

    Raises
    ------
    DomainError
        If any argument lies below the branch point beyond the clamp band.
    ConvergenceError
        If the Halley iteration exhausts ``max_iter`` (never returns a
        silently unconverged value).
    """
    cfg = config if config is not None else _DEFAULT
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0
    z = np.atleast_1d(arr).astype(float, copy=True)

    nan_mask = np.isnan(z)
    if np.any(z[~nan_mask] < BRANCH_POINT - cfg.abs_tol):
        bad = float(np.min(z[~nan_mask]))
        raise DomainError(
            f"lambert_w0 argument {bad!r} below the branch point -1/e"
        )
    np.clip(z, BRANCH_POINT, None, out=z)

    inf_mask = np.isinf(z)
    w = _initial_guess(np.where(nan_mask | inf_mask, 1.0, z))
    w[inf_mask] = np.inf
    w[nan_mask] = np.nan

    tol = cfg.abs_tol * np.maximum(1.0, np.abs(z))
    done = nan_mask | inf_mask
    eps = np.finfo(float).eps
    for _ in range(cfg.max_iter):
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            ew = np.exp(w)
            f = w * ew - z
            done = done | (np.abs(f) <= tol)
            if done.all():
                break
            wp1 = w + 1.0
            denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1)
            step = np.where(done | (denom == 0.0), 0.0, f / denom)
        w = np.maximum(w - step, -1.0)
        # A step below float resolution means w is the representable fixed
        # point; for huge arguments the residual criterion alone is finer
        # than one ulp of w can express.
        done = done | (np.abs(step) <= 4.0 * eps * (1.0 + np.abs(w)))
        if done.all():
            break
    else:
        raise ConvergenceError(
            f"lambert_w0 did not reach tolerance {cfg.abs_tol} "
            f"within {cfg.max_iter} iterations"
        )

    return float(w[0]) if scalar else w


def _w0_from_log(log_x, config: SolverConfig | None = None):
    """W0(exp(log_x)) for large ``log_x``, without forming ``exp(log_x)``.

    Solves ``w + log(w) = log_x`` by Newton steps.  Intended for arguments
    whose direct representation would overflow (``log_x`` of a few hundred
    and up); callers pass e.g. ``log(delta) + 2*log(|z|)``.
    """
    cfg = config if config is not None else _DEFAULT
    lx = np.asarray(log_x, dtype=float)
    scalar = lx.ndim == 0
    lx = np.atleast_1d(lx)
    w = lx - np.log(lx)
    for _ in range(cfg.max_iter):
        g = w + np.log(w) - lx
        if np.all(np.abs(g) <= cfg.abs_tol * np.maximum(1.0, np.abs(lx))):
            break
        w = w - g * w / (w + 1.0)
    else:
        raise ConvergenceError("log-scale Lambert W iteration did not converge")
    return float(w[0]) if scalar else w


def lambert_w0_prime(x, config: SolverConfig | None = None):
    """Derivative of W0, ``W(x) / (x * (1 + W(x)))``.

    Equals 1 at ``x = 0`` (the limit) and is singular at the branch point,
    so ``x <= -1/e`` raises :class:`DomainError`.
    """
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0
    z = np.atleast_1d(arr).astype(float)
    valid = ~np.isnan(z)
    if np.any(z[valid] <= BRANCH_POINT):
        raise DomainError("lambert_w0_prime is singular at and below -1/e")
    w = np.atleast_1d(lambert_w0(z, config))
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(z == 0.0, 1.0, w / (z * (1.0 + w)))
    return float(out[0]) if scalar else out
