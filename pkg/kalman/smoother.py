"""
Fixed-interval smoothing entry point and MSE diagnostics.
"""

from __future__ import annotations

import numpy as np

from kalman.types import FilterOutput, SmootherOutput
from utils.logging_interfaces import LoggerProtocol
from utils.model import StateSpace


def ks_backward(
    filtered: FilterOutput,
    ss: StateSpace,
    variant="dk_no_inverse",
    *,
    logger: LoggerProtocol | None = None,
) -> SmootherOutput:
    """
    Smooth the output of :func:`kalman.filter.kf_forward`.

    :param filtered: Forward pass on the same data and parameters
    :param ss: State space used by the forward pass
    :param variant: ``SmootherVariant`` or its string value
    """
    from strategies.factory import SmootherStrategyFactory

    strategy = SmootherStrategyFactory.create(variant, logger=logger)
    return strategy.smooth(filtered, ss)


def mse_traces(filtered: FilterOutput, smoothed: SmootherOutput, r: int) -> np.ndarray:
    """
    Traces of the F_t block of P_{t|t-1}, P_{t|t} and P_{t|T}.

    :return: T×3 array with columns (predicted, filtered, smoothed)
    """
    block = slice(0, r)

    def _trace(P: np.ndarray) -> np.ndarray:
        return np.trace(P[:, block, block], axis1=1, axis2=2)

    return np.column_stack(
        [_trace(filtered.P_pred), _trace(filtered.P_filt), _trace(smoothed.covs)]
    )
