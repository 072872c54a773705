"""
Classic fixed-interval (Rauch-Tung-Striebel) smoother.

Needs P_{t+1|t}⁻¹. When the predicted covariance is near-singular, which
happens whenever rank(HH') < r and the second VAR lag carries no extra
uncertainty, the Moore-Penrose inverse is used and a warning is recorded.
Kept mainly as a cross-check of the inversion-free variant.
"""

import numpy as np
from scipy import linalg

from kalman.types import FilterOutput, SmootherOutput
from strategies.base import SmootherStrategy
from utils.linalg import symmetrize
from utils.model import StateSpace


class ClassicSmootherStrategy(SmootherStrategy):
    """
    Backward iterations on the filtered moments::

        J_t = P_{t|t} T' P_{t+1|t}⁻¹
        ŝ_t = s_{t|t} + J_t (ŝ_{t+1} - s_{t+1|t})
        V_t = P_{t|t} + J_t (V_{t+1} - P_{t+1|t}) J_t'
        Cov(s_{t+1}, s_t) = V_{t+1} J_t'
    """

    def get_variant_name(self) -> str:
        return "classic_pinv"

    def _gain(
        self, P_f: np.ndarray, Tm: np.ndarray, P_next: np.ndarray, t: int, warnings: list[str]
    ) -> np.ndarray:
        cond = np.linalg.cond(P_next)
        if not np.isfinite(cond) or cond > self.config.pinv_cond_limit:
            message = f"P_pred at t={t} near-singular (cond={cond:.3e}); using pseudo-inverse"
            warnings.append(message)
            self._log.warning(message)
            return P_f @ Tm.T @ linalg.pinv(P_next)
        return linalg.solve(P_next, Tm @ P_f, assume_a="sym").T

    def smooth(self, filtered: FilterOutput, ss: StateSpace) -> SmootherOutput:
        T, m = filtered.T, filtered.m
        Tm = ss.Tmat
        warnings: list[str] = []

        means = np.empty((T, m))
        covs = np.empty((T, m, m))
        lag1 = np.zeros((T, m, m))
        if T > 0:
            means[-1] = filtered.F_filt[-1]
            covs[-1] = filtered.P_filt[-1]

        for t in range(T - 2, -1, -1):
            P_next = filtered.P_pred[t + 1]
            J = self._gain(filtered.P_filt[t], Tm, P_next, t + 1, warnings)
            means[t] = filtered.F_filt[t] + J @ (means[t + 1] - filtered.F_pred[t + 1])
            covs[t] = symmetrize(filtered.P_filt[t] + J @ (covs[t + 1] - P_next) @ J.T)
            lag1[t + 1] = covs[t + 1] @ J.T

        return SmootherOutput(
            means=means,
            covs=covs,
            lag1=lag1,
            variant=self.get_variant_name(),
            warnings=tuple(warnings),
        )
