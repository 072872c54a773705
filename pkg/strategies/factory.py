"""
Smoother Strategy Factory.

Central place where a :class:`SmootherVariant` is turned into a concrete
strategy instance.
"""

from enum import Enum

from strategies.base import SmootherConfig, SmootherStrategy
from strategies.classic_strategy import ClassicSmootherStrategy
from strategies.dk_strategy import DurbinKoopmanSmootherStrategy
from utils.logging_interfaces import LoggerProtocol


class SmootherVariant(str, Enum):
    """
    Supported smoother recursions.

    :cvar CLASSIC_PINV: Classic backward iterations with a generalized inverse
    :cvar DK_NO_INVERSE: Inversion-free recursion on weighted innovations (default)
    """

    CLASSIC_PINV = "classic_pinv"
    DK_NO_INVERSE = "dk_no_inverse"

    @classmethod
    def from_string(cls, value: str) -> "SmootherVariant":
        """
        Convert a string to a SmootherVariant (case-insensitive).

        :raises ValueError: If the value is not a known variant
        """
        try:
            return cls(value.lower())
        except ValueError:
            valid = ", ".join(v.value for v in cls)
            raise ValueError(
                f"Invalid smoother variant: {value!r}. Must be one of: {valid}"
            ) from None


DEFAULT_VARIANT = SmootherVariant.DK_NO_INVERSE


class SmootherStrategyFactory:
    """
    Factory for smoother strategies.

    Example usage:
        >>> strategy = SmootherStrategyFactory.create("dk_no_inverse")
        >>> smoothed = strategy.smooth(filtered, ss)

    :cvar _strategy_registry: Maps variants to strategy classes
    """

    _strategy_registry: dict[SmootherVariant, type[SmootherStrategy]] = {
        SmootherVariant.CLASSIC_PINV: ClassicSmootherStrategy,
        SmootherVariant.DK_NO_INVERSE: DurbinKoopmanSmootherStrategy,
    }

    @classmethod
    def create(
        cls,
        variant: SmootherVariant | str = DEFAULT_VARIANT,
        config: SmootherConfig | None = None,
        *,
        logger: LoggerProtocol | None = None,
    ) -> SmootherStrategy:
        """
        Instantiate the strategy registered for ``variant``.

        :raises ValueError: If the variant is unknown or unregistered
        """
        if isinstance(variant, str) and not isinstance(variant, SmootherVariant):
            variant = SmootherVariant.from_string(variant)

        strategy_class = cls._strategy_registry.get(variant)
        if strategy_class is None:
            valid = ", ".join(v.value for v in cls._strategy_registry)
            raise ValueError(f"No strategy registered for {variant}. Registered: {valid}")

        return strategy_class(config, logger=logger)

    @classmethod
    def register_strategy(
        cls, variant: SmootherVariant, strategy_class: type[SmootherStrategy]
    ) -> None:
        """
        Register or replace the strategy used for ``variant``.

        :raises TypeError: If ``strategy_class`` is not a SmootherStrategy subclass
        """
        if not (isinstance(strategy_class, type) and issubclass(strategy_class, SmootherStrategy)):
            raise TypeError(
                f"Strategy class must be a subclass of SmootherStrategy, got {strategy_class}"
            )
        cls._strategy_registry[variant] = strategy_class

    @classmethod
    def get_available_variants(cls) -> list[str]:
        return [variant.value for variant in cls._strategy_registry]
