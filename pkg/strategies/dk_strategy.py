"""
Inversion-free state smoother.

Backward recursion on the weighted innovation sums (r_t, N_t), started at
r_T = 0 and N_T = 0. Only the by-products stored by the filter are used, so
no covariance matrix is ever inverted.
"""

import numpy as np

from kalman.types import FilterOutput, SmootherOutput
from strategies.base import SmootherStrategy
from utils.linalg import symmetrize
from utils.model import StateSpace


class DurbinKoopmanSmootherStrategy(SmootherStrategy):
    """
    State smoother driven by the filter's scaled innovations.

    With L_t = T(I - P_{t|t-1} Z'F_t⁻¹Z)::

        r_{t-1} = Z'F_t⁻¹v_t + L_t' r_t
        N_{t-1} = Z'F_t⁻¹Z + L_t' N_t L_t
        ŝ_t     = s_{t|t-1} + P_{t|t-1} r_{t-1}
        V_t     = P_{t|t-1} - P_{t|t-1} N_{t-1} P_{t|t-1}
        Cov(s_t, s_{t+1}) = P_{t|t-1} L_t' (I - N_t P_{t+1|t})

    This is the default variant.
    """

    def get_variant_name(self) -> str:
        return "dk_no_inverse"

    def smooth(self, filtered: FilterOutput, ss: StateSpace) -> SmootherOutput:
        T, m = filtered.T, filtered.m
        Tm = ss.Tmat
        eye = np.eye(m)

        means = np.empty((T, m))
        covs = np.empty((T, m, m))
        lag1 = np.zeros((T, m, m))

        r = np.zeros(m)
        N = np.zeros((m, m))
        for t in range(T - 1, -1, -1):
            a, P = filtered.F_pred[t], filtered.P_pred[t]
            L = Tm - Tm @ P @ filtered.innovation_precisions[t]
            if t < T - 1:
                cross = P @ L.T @ (eye - N @ filtered.P_pred[t + 1])
                lag1[t + 1] = cross.T
            r = filtered.scaled_innovations[t] + L.T @ r
            N = symmetrize(filtered.innovation_precisions[t] + L.T @ N @ L)
            means[t] = a + P @ r
            covs[t] = symmetrize(P - P @ N @ P)

        return SmootherOutput(
            means=means,
            covs=covs,
            lag1=lag1,
            variant=self.get_variant_name(),
        )
