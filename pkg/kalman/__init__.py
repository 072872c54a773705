"""
Kalman filtering and smoothing on the augmented factor state space.
"""

from kalman.types import FilterOutput, RiccatiResult, SmootherOutput
from kalman.state_space import build_state_space, diffuse_initial_state, validate_params
from kalman.filter import kf_forward
from kalman.smoother import ks_backward, mse_traces
from kalman.riccati import burn_in_index, riccati_steady_state

__all__ = [
    "FilterOutput",
    "SmootherOutput",
    "RiccatiResult",
    "build_state_space",
    "validate_params",
    "diffuse_initial_state",
    "kf_forward",
    "ks_backward",
    "mse_traces",
    "riccati_steady_state",
    "burn_in_index",
]
