"""
Smoother Strategy Pattern - Base Classes.

Both fixed-interval smoothers consume the same :class:`FilterOutput` and
return the same :class:`SmootherOutput`; the strategy decides the backward
recursion used to get there.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass

from kalman.types import FilterOutput, SmootherOutput
from utils.constants import PINV_COND_LIMIT
from utils.logging_interfaces import LoggerProtocol
from utils.model import StateSpace


@dataclass(frozen=True)
class SmootherConfig:
    """
    Configuration shared by the smoother strategies.

    :ivar pinv_cond_limit: Condition number of P_{t+1|t} above which the
        classic smoother switches to a pseudo-inverse
    """

    pinv_cond_limit: float = PINV_COND_LIMIT

    def __post_init__(self):
        if self.pinv_cond_limit <= 1.0:
            raise ValueError(f"pinv_cond_limit must exceed 1, got {self.pinv_cond_limit}")


class SmootherStrategy(ABC):
    """
    Abstract base class for backward smoothing recursions.

    :ivar config: Smoother configuration
    """

    def __init__(
        self, config: SmootherConfig | None = None, *, logger: LoggerProtocol | None = None
    ):
        self._config = config or SmootherConfig()
        if logger is None:
            from utils.logger import log as logger
        self._log: LoggerProtocol = logger

    @property
    def config(self) -> SmootherConfig:
        return self._config

    @abstractmethod
    def get_variant_name(self) -> str:
        """Return the variant identifier (``classic_pinv`` or ``dk_no_inverse``)."""

    @abstractmethod
    def smooth(self, filtered: FilterOutput, ss: StateSpace) -> SmootherOutput:
        """
        Run the backward pass.

        :param filtered: Forward pass on the same data and parameters
        :param ss: State space used by the forward pass
        :return: Smoothed means, covariances and lag-one cross-covariances
        """

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(variant={self.get_variant_name()!r})"
