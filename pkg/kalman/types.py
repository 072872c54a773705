"""
Result containers of the Kalman recursions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from utils.model import InitialState


@dataclass(frozen=True)
class FilterOutput:
    """
    Forward-pass moments, indexed by t = 0..T-1 for observations 1..T.

    The Woodbury by-products ``scaled_innovations`` (Z'F⁻¹v) and
    ``innovation_precisions`` (Z'F⁻¹Z) stand in for a factorization of the
    n×n innovation covariance, which is never formed.

    :ivar F_pred: T×m one-step-ahead state means
    :ivar P_pred: T×m×m one-step-ahead covariances
    :ivar F_filt: T×m filtered means
    :ivar P_filt: T×m×m filtered covariances
    :ivar innovations: T×n prediction errors
    :ivar scaled_innovations: T×m
    :ivar innovation_precisions: T×m×m
    :ivar loglik: Gaussian prediction-error log-likelihood
    :ivar init: Prior of the first state
    """

    F_pred: np.ndarray
    P_pred: np.ndarray
    F_filt: np.ndarray
    P_filt: np.ndarray
    innovations: np.ndarray
    scaled_innovations: np.ndarray
    innovation_precisions: np.ndarray
    loglik: float
    init: InitialState

    @property
    def T(self) -> int:
        return self.F_pred.shape[0]

    @property
    def m(self) -> int:
        return self.F_pred.shape[1]


@dataclass(frozen=True)
class SmootherOutput:
    """
    Backward-pass moments conditional on the whole sample.

    ``lag1[t]`` is Cov(s_t, s_{t-1} | X); the first state has no predecessor
    and ``lag1[0]`` is zero.
    """

    means: np.ndarray
    covs: np.ndarray
    lag1: np.ndarray
    variant: str
    warnings: tuple[str, ...] = ()

    @property
    def T(self) -> int:
        return self.means.shape[0]


@dataclass(frozen=True)
class RiccatiResult:
    """
    Steady state of the one-step-ahead covariance recursion.

    :ivar P_pred: Fixed point P* of the prediction covariance
    :ivar P_filt: Matching filtered covariance
    :ivar iterations: Number of Riccati steps taken
    :ivar residual: Last ``‖P_{k+1} - P_k‖``
    :ivar trace_path: Trace of the factor block of P_{k|k-1} per iteration
    """

    P_pred: np.ndarray
    P_filt: np.ndarray
    iterations: int
    residual: float
    trace_path: np.ndarray
