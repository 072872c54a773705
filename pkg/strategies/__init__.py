"""
Smoother Strategy Pattern Module.

Main components:
- SmootherStrategy: Abstract base class defining the backward-pass interface
- SmootherConfig: Configuration shared by the strategies
- DurbinKoopmanSmootherStrategy: Inversion-free recursion (default)
- ClassicSmootherStrategy: Classic recursion with a generalized inverse
- SmootherStrategyFactory / SmootherVariant: Creation by name

Quick start:
    >>> from strategies import SmootherStrategyFactory, SmootherVariant
    >>> strategy = SmootherStrategyFactory.create(SmootherVariant.CLASSIC_PINV)
"""

from strategies.base import SmootherConfig, SmootherStrategy
from strategies.classic_strategy import ClassicSmootherStrategy
from strategies.dk_strategy import DurbinKoopmanSmootherStrategy
from strategies.factory import DEFAULT_VARIANT, SmootherStrategyFactory, SmootherVariant

__all__ = [
    "SmootherStrategy",
    "SmootherConfig",
    "ClassicSmootherStrategy",
    "DurbinKoopmanSmootherStrategy",
    "SmootherStrategyFactory",
    "SmootherVariant",
    "DEFAULT_VARIANT",
]
