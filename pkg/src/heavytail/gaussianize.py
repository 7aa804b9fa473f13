"""Scikit-learn style transformer for removing heavy tails from a series.

``Gaussianizer`` estimates the transformation vector on ``fit`` and then
maps observed data to its latent "nicely"-tailed version with
``transform`` (and back with ``inverse_transform``), so the heavy-tail
machinery drops into pipelines that expect the fit/transform protocol.
No scikit-learn dependency is required; ``get_params`` / ``set_params``
are provided for compatibility.
"""

from __future__ import annotations

import numpy as np

from .estimation import igmm, igmm_double_tail, mle_joint
from .exceptions import DataError, DomainError, NotFittedError
from .transform import TailParams, h_tau, w_tau

__all__ = ["Gaussianizer"]

_METHODS = ("igmm", "mle")
_TAILS = ("h", "hh")


class Gaussianizer:
    """Estimate and apply the tail-removing transform.

    Parameters
    ----------
    method : {"igmm", "mle"}
        Estimator for the transformation vector: iterative method of
        moments (kurtosis matching, no distributional assumption beyond
        the target kurtosis) or Gaussian-input maximum likelihood.
    tail : {"h", "hh"}
        One shared tail parameter or separate left/right parameters.

    Attributes
    ----------
    tau_ : TailParams
        Fitted transformation vector.
    result_ : FitResult
        Full fit diagnostics.
    """

    def __init__(self, method: str = "igmm", tail: str = "h"):
        self.method = method
        self.tail = tail

    def get_params(self, deep: bool = True) -> dict:
        return {"method": self.method, "tail": self.tail}

    def set_params(self, **params) -> "Gaussianizer":
        for key, value in params.items():
            if key not in ("method", "tail"):
                raise DomainError(f"unknown parameter {key!r}")
            setattr(self, key, value)
        return self

    def fit(self, y, X=None) -> "Gaussianizer":
        """Estimate the transformation vector from a 1-D series."""
        if self.method not in _METHODS:
            raise DomainError(f"method must be one of {_METHODS}")
        if self.tail not in _TAILS:
            raise DomainError(f"tail must be one of {_TAILS}")
        y = self._check_series(y)
        if self.method == "igmm":
            result = igmm(y) if self.tail == "h" else igmm_double_tail(y)
        else:
            result = mle_joint(y, family="gaussian", tail=self.tail)
        self.result_ = result
        self.tau_ = result.tau
        return self

    def transform(self, y) -> np.ndarray:
        """Map observed data to the latent scale (remove heavy tails)."""
        return w_tau(self._check_series(y, fitted=True), self.tau_)

    def inverse_transform(self, x) -> np.ndarray:
        """Map latent-scale data back to the observed heavy-tailed scale."""
        return h_tau(self._check_series(x, fitted=True), self.tau_)

    def fit_transform(self, y, X=None) -> np.ndarray:
        return self.fit(y).transform(y)

    def _check_series(self, y, fitted: bool = False) -> np.ndarray:
        if fitted and not isinstance(getattr(self, "tau_", None), TailParams):
            raise NotFittedError("Gaussianizer must be fitted before transforming")
        arr = np.asarray(y, dtype=float).ravel()
        if arr.size == 0:
            raise DataError("empty series")
        if not np.all(np.isfinite(arr)):
            raise DataError("series must be finite")
        return arr
