"""
Result containers of the trend-cycle decomposition.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from utils.linalg import VarFit


@dataclass(frozen=True)
class TrendFit:
    """
    Common trends as the leading principal components of the factors' long-run covariance.

    :ivar Phi1: r×(q-d) orthonormal trend directions
    :ivar trends: (q-d)×T common trends ``Φ₁'F̂_t``
    :ivar eigenvalues: All eigenvalues of the long-run covariance, descending
    :ivar warnings: Eigengap warnings
    """

    Phi1: np.ndarray
    trends: np.ndarray
    eigenvalues: np.ndarray
    warnings: tuple[str, ...] = ()


@dataclass(frozen=True)
class CycleFit:
    """
    Cycles extracted from the projection of the factors on the cointegration space.

    :ivar G: (r-q+d)×T projection ``Φ₀'F̂_t``
    :ivar Hmat: (r-q+d)×d orthonormal cycle directions
    :ivar cycles: d×T common cycles ``𝓗'G_t``
    :ivar residual_cycles: (r-q+d)×T remainder ``G_t - 𝓗C_t``
    :ivar var_fit: VAR fitted on G_t
    :ivar warnings: Stability warnings of the VAR fit
    """

    G: np.ndarray
    Hmat: np.ndarray
    cycles: np.ndarray
    residual_cycles: np.ndarray
    var_fit: VarFit
    warnings: tuple[str, ...] = ()


@dataclass(frozen=True)
class TCDecomposition:
    """
    ``F̂_t = Φ₁T_t + Φ₀𝓗C_t + Φ₀(G_t - 𝓗C_t)``.

    :ivar Phi1: r×(q-d) trend directions
    :ivar Phi0: r×(r-q+d) orthonormal complement of Phi1
    :ivar trends: (q-d)×T
    :ivar G: (r-q+d)×T
    :ivar Hmat: (r-q+d)×d
    :ivar cycles: d×T
    :ivar residual_cycles: (r-q+d)×T
    :ivar var_fit: VAR(2) fitted on G_t
    :ivar eigenvalues: Eigenvalues of the long-run covariance
    :ivar warnings: Warnings collected by both extraction steps
    """

    Phi1: np.ndarray
    Phi0: np.ndarray
    trends: np.ndarray
    G: np.ndarray
    Hmat: np.ndarray
    cycles: np.ndarray
    residual_cycles: np.ndarray
    var_fit: VarFit
    eigenvalues: np.ndarray
    warnings: tuple[str, ...] = ()

    @property
    def trend_part(self) -> np.ndarray:
        """r×T contribution ``Φ₁T_t``."""
        return self.Phi1 @ self.trends

    @property
    def cycle_part(self) -> np.ndarray:
        """r×T contribution ``Φ₀𝓗C_t``."""
        return self.Phi0 @ self.Hmat @ self.cycles

    @property
    def residual_part(self) -> np.ndarray:
        """r×T contribution ``Φ₀(G_t - 𝓗C_t)``."""
        return self.Phi0 @ self.residual_cycles

    def reconstruct(self) -> np.ndarray:
        return self.trend_part + self.cycle_part + self.residual_part


@dataclass(frozen=True)
class VariableComponents:
    """
    Additive split of one series ``y_t`` on its original (transformed) scale.

    ``deterministic + trend + cycle + residual_cycle + idiosyncratic == y``.
    """

    series_id: str
    deterministic: np.ndarray
    trend: np.ndarray
    cycle: np.ndarray
    residual_cycle: np.ndarray
    idiosyncratic: np.ndarray

    @property
    def common(self) -> np.ndarray:
        return self.trend + self.cycle + self.residual_cycle

    def total(self) -> np.ndarray:
        return self.deterministic + self.common + self.idiosyncratic


@dataclass(frozen=True)
class SpectralReport:
    """
    Smoothed spectral densities of the differenced trends, cycles and residual cycles.

    :ivar frequencies: Evaluation grid in [0, π]
    :ivar bandwidth: Bartlett truncation lag
    :ivar trends: (q-d)×F densities of ΔT_t
    :ivar cycles: d×F densities of ΔC_t
    :ivar residual_cycles: (r-q+d)×F densities of the differenced residual cycles
    :ivar variances: Total variance of the levels of each group
    """

    frequencies: np.ndarray
    bandwidth: int
    trends: np.ndarray
    cycles: np.ndarray
    residual_cycles: np.ndarray
    variances: dict[str, float]
