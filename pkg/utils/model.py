"""
Domain types of the factor model.

All types are frozen dataclasses holding numpy arrays; nothing mutates them
after construction, so they can be shared read-only between threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from utils.constants import (
    DIFFUSE_SCALE,
    EM_MAX_ITER,
    EM_MIN_ITER,
    EM_TOL,
    I1_FLOOR_FRAC,
    LOGLIK_SLACK,
    VAR_ORDER,
)
from utils.exceptions import InvalidSpecError


@dataclass(frozen=True)
class ModelSpec:
    """
    Model dimensions plus algorithm settings.

    ``d`` (cointegration deficit) is only needed by the trend-cycle stage; the
    filtering and estimation stages accept ``d=None``. When given it must
    satisfy ``0 < d < q``.

    :ivar n: Number of series
    :ivar T: Number of time periods
    :ivar r: Number of static factors
    :ivar q: Number of dynamic shocks, ``q <= r``
    :ivar d: Cointegration deficit; ``q - d`` is the number of common trends
    :ivar var_order: VAR order of the factors, fixed at 2
    :ivar diffuse_scale: Prior variance κ of the nonstationary initial states
    :ivar em_tol: EM stopping threshold η on the relative likelihood change
    :ivar em_max_iter: EM iteration budget
    :ivar em_min_iter: Minimum number of EM iterations before stopping
    :ivar i1_floor_frac: Observation-variance floor fraction for I(1) idiosyncratic series
    :ivar loglik_slack: Relative slack tolerated on likelihood decreases
    """

    n: int
    T: int
    r: int
    q: int
    d: int | None = None
    var_order: int = VAR_ORDER
    diffuse_scale: float = DIFFUSE_SCALE
    em_tol: float = EM_TOL
    em_max_iter: int = EM_MAX_ITER
    em_min_iter: int = EM_MIN_ITER
    i1_floor_frac: float = I1_FLOOR_FRAC
    loglik_slack: float = LOGLIK_SLACK

    def __post_init__(self):
        for name in ("n", "T", "r", "q", "em_max_iter", "em_min_iter"):
            if getattr(self, name) < 1:
                raise InvalidSpecError(f"{name} must be a positive integer", field=name)
        if self.q > self.r:
            raise InvalidSpecError(f"q={self.q} must not exceed r={self.r}", field="q")
        if self.r > self.n:
            raise InvalidSpecError(f"r={self.r} must not exceed n={self.n}", field="r")
        if self.d is not None and not 0 < self.d < self.q:
            raise InvalidSpecError(f"d={self.d} must satisfy 0 < d < q={self.q}", field="d")
        if self.var_order != VAR_ORDER:
            raise InvalidSpecError("only VAR(2) factor dynamics are supported", field="var_order")
        for name in ("diffuse_scale", "em_tol", "i1_floor_frac"):
            if not getattr(self, name) > 0:
                raise InvalidSpecError(f"{name} must be positive", field=name)
        if self.loglik_slack < 0:
            raise InvalidSpecError("loglik_slack must be nonnegative", field="loglik_slack")

    @property
    def trend_count(self) -> int | None:
        """Number of common trends ``q - d``."""
        return None if self.d is None else self.q - self.d

    def with_updates(self, **changes) -> ModelSpec:
        return replace(self, **changes)


@dataclass(frozen=True)
class Params:
    """
    Parameter vector Θ of the state-space model.

    :ivar Lambda: Loadings, n×r
    :ivar A1: First VAR lag matrix, r×r
    :ivar A2: Second VAR lag matrix, r×r
    :ivar H: Shock loading, r×q; only ``H H'`` is identified
    :ivar R: Diagonal measurement variances (random-walk innovation variance when rho=1)
    :ivar rho: I(1) idiosyncratic flags in {0, 1}
    :ivar floor: Observation-variance floors, one per series
    """

    Lambda: np.ndarray
    A1: np.ndarray
    A2: np.ndarray
    H: np.ndarray
    R: np.ndarray
    rho: np.ndarray
    floor: np.ndarray

    @property
    def n(self) -> int:
        return self.Lambda.shape[0]

    @property
    def r(self) -> int:
        return self.Lambda.shape[1]

    @property
    def q(self) -> int:
        return self.H.shape[1]

    @property
    def i1_index(self) -> np.ndarray:
        """Indices of the series carrying a random-walk idiosyncratic state."""
        return np.flatnonzero(self.rho == 1)

    @property
    def n_i1(self) -> int:
        return int(np.sum(self.rho == 1))

    @property
    def shock_cov(self) -> np.ndarray:
        """Rank-q factor innovation covariance ``H H'``."""
        return self.H @ self.H.T

    def with_updates(self, **changes) -> Params:
        return replace(self, **changes)


@dataclass(frozen=True)
class StateSpace:
    """
    Augmented state space with state ``[F_t; F_{t-1}; ξ⁽¹⁾_t]``.

    :ivar Tmat: m×m transition matrix
    :ivar Zmat: n×m observation matrix
    :ivar Qmat: m×m state innovation covariance
    :ivar Hobs: Observation variances, length n
    :ivar r: Number of static factors
    :ivar i1_index: Series indices owning a random-walk state, in state order
    """

    Tmat: np.ndarray
    Zmat: np.ndarray
    Qmat: np.ndarray
    Hobs: np.ndarray
    r: int
    i1_index: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=int))

    @property
    def m(self) -> int:
        return self.Tmat.shape[0]

    @property
    def n(self) -> int:
        return self.Zmat.shape[0]


@dataclass(frozen=True)
class InitialState:
    """Mean and covariance of the first state s_1 before x_1 is observed."""

    mean: np.ndarray
    cov: np.ndarray


@dataclass(frozen=True)
class FactorEstimates:
    """
    Smoothed factors and the implied common/idiosyncratic split.

    :ivar F_smoothed: T×m smoothed state means
    :ivar P_smoothed: T×m×m smoothed covariances
    :ivar P_lag1: T×m×m cross-covariances Cov(s_t, s_{t-1} | X)
    :ivar chi: n×T common components
    :ivar xi: n×T idiosyncratic components, ``chi + xi = X``
    :ivar loglik: Log-likelihood at the final parameters
    :ivar r: Number of static factors
    """

    F_smoothed: np.ndarray
    P_smoothed: np.ndarray
    P_lag1: np.ndarray
    chi: np.ndarray
    xi: np.ndarray
    loglik: float
    r: int

    @property
    def factors(self) -> np.ndarray:
        """Smoothed static factors as an r×T matrix."""
        return self.F_smoothed[:, : self.r].T


@dataclass(frozen=True)
class ValidationReport:
    """List of violated parameter invariants; empty when the parameters are valid."""

    violations: tuple[str, ...] = ()

    @property
    def is_valid(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.is_valid
