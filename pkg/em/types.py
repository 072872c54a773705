"""
State and sufficient statistics of the EM iterations.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np

from kalman.types import FilterOutput, SmootherOutput
from utils.model import Params, StateSpace

TieGroups = Mapping[str, Sequence[int]]


@dataclass(frozen=True)
class SufficientStats:
    """
    Smoothed moments entering the M-step.

    Sums labelled "transition" run over the in-sample transitions
    s_{t-1} -> s_t, t = 2..T; the others over t = 1..T. ``z_t`` denotes
    ``(F_t', F_{t-1}')'``.

    :ivar Sxf: Σ x_t F̂_t', n×r
    :ivar Sff: Σ E[F_t F_t'], r×r
    :ivar Sxx: Σ x_it², length n
    :ivar S_lag: Transition Σ E[F_t z_{t-1}'], r×2r
    :ivar Szz: Transition Σ E[z_{t-1} z_{t-1}'], 2r×2r
    :ivar Sff_next: Transition Σ E[F_t F_t'], r×r
    :ivar Sxi_f: Σ E[ξ_it F_t'] for the random-walk series, n₁×r
    :ivar Sdxi: Transition Σ E[(ξ_it - ξ_i,t-1)²], length n₁
    :ivar T: Number of observations
    :ivar params: Parameters the moments were computed under
    """

    Sxf: np.ndarray
    Sff: np.ndarray
    Sxx: np.ndarray
    S_lag: np.ndarray
    Szz: np.ndarray
    Sff_next: np.ndarray
    Sxi_f: np.ndarray
    Sdxi: np.ndarray
    T: int
    params: Params

    @property
    def transitions(self) -> int:
        return self.T - 1


@dataclass(frozen=True)
class EStepOutput:
    """Everything one filter/smoother pass produces for a parameter value."""

    stats: SufficientStats
    loglik: float
    ss: StateSpace
    filtered: FilterOutput
    smoothed: SmootherOutput


@dataclass(frozen=True)
class EMState:
    """
    Outcome of the EM iterations.

    :ivar params: Final parameters Θ̂
    :ivar loglik_path: Log-likelihood at Θ_0, Θ_1, ..., Θ_k
    :ivar k: Number of completed EM updates
    :ivar converged: Whether the stopping rule fired before the budget ran out
    :ivar delta_l: Last relative likelihood change Δℓ
    :ivar warnings: Numerical warnings raised along the way (ridge fallbacks...)
    """

    params: Params
    loglik_path: np.ndarray
    k: int
    converged: bool
    delta_l: float
    warnings: tuple[str, ...] = field(default=())

    @property
    def loglik(self) -> float:
        return float(self.loglik_path[-1])
