"""
Synthetic panels with known factors, trends, cycles and idiosyncratic parts.

Dynamic factors (default design)::

    f_t = Ψ τ_t + γ_t,   τ_t = τ_{t-1} + Ψ' u_t,   γ_t = Γ γ_{t-1} + u_t

with u_t ~ N(0, I_q), Ψ a q×(q-d) orthonormal matrix and Γ a scaled random
orthogonal matrix (all eigenvalues of modulus ``gamma_radius``). The static
factors stack s+1 lags: F_t = K (f_t', ..., f_{t-s}')'.

Dominant-cycle design (``dominant_cycle=True``): with O a random r×r
orthogonal matrix split into trend, cycle and residual columns,

    F_t = O_τ τ_t + O_c c_t + O_e e_t
    τ_t = τ_{t-1} + u^τ_t,   c_t = φ c_{t-1} + σ_c u^c_t,   e_t = δ D u_{t-1}

so the d cycles carry the largest stationary innovations and the residual
block only echoes last period's shocks. F still follows a VAR(2) driven by
the q shocks u_t = (u^τ_t, u^c_t), and the cycle part of every series is
known exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import ortho_group

from utils.exceptions import InvalidSpecError


@dataclass(frozen=True)
class DGPConfig:
    """
    Data-generating process settings.

    :ivar n: Number of series
    :ivar T: Number of periods
    :ivar q: Number of dynamic shocks
    :ivar d: Cointegration deficit, 0 < d < q
    :ivar s: Lags of f_t loaded by the data; r = q(s+1)
    :ivar loading_scale: Standard deviation of the loadings
    :ivar idio_ar: AR(1) coefficient of the stationary idiosyncratic components
    :ivar i1_share: Share of series whose idiosyncratic component is a random walk
    :ivar snr: var(Δχ_i) / var(idiosyncratic innovation); ``inf`` gives noiseless data
    :ivar gamma_radius: Modulus of the eigenvalues of Γ
    :ivar random_rotation: Draw a random orthogonal K instead of K = I
    :ivar dominant_cycle: Use the dominant-cycle design; series 0 then loads the
        trends and the cycles with unit weights
    :ivar cycle_ar: AR(1) coefficient φ of the dominant cycles
    :ivar cycle_scale: Innovation scale σ_c of the dominant cycles
    :ivar residual_scale: Scale δ of the residual stationary block
    :ivar burn_in: Discarded periods of the stationary VAR
    :ivar seed: Root seed
    """

    n: int
    T: int
    q: int
    d: int
    s: int = 1
    loading_scale: float = 1.0
    idio_ar: float = 0.5
    i1_share: float = 0.0
    snr: float = 1.0
    gamma_radius: float = 0.7
    random_rotation: bool = False
    dominant_cycle: bool = False
    cycle_ar: float = 0.5
    cycle_scale: float = 1.0
    residual_scale: float = 0.5
    burn_in: int = 100
    seed: int = 0

    def __post_init__(self):
        if self.n < 1 or self.T < 2 or self.q < 1:
            raise InvalidSpecError("n, q must be positive and T at least 2", field="n")
        if not 0 < self.d < self.q:
            raise InvalidSpecError(f"d={self.d} must satisfy 0 < d < q={self.q}", field="d")
        if self.s not in (0, 1):
            raise InvalidSpecError("s must be 0 or 1", field="s")
        if self.r > self.n:
            raise InvalidSpecError(f"r={self.r} must not exceed n={self.n}", field="n")
        if not 0.0 <= self.i1_share <= 1.0:
            raise InvalidSpecError("i1_share must lie in [0, 1]", field="i1_share")
        if not abs(self.idio_ar) < 1.0:
            raise InvalidSpecError("idio_ar must lie in (-1, 1)", field="idio_ar")
        if not 0.0 <= self.gamma_radius < 1.0:
            raise InvalidSpecError("gamma_radius must lie in [0, 1)", field="gamma_radius")
        if not abs(self.cycle_ar) < 1.0:
            raise InvalidSpecError("cycle_ar must lie in (-1, 1)", field="cycle_ar")
        if not self.cycle_scale > 0 or self.residual_scale < 0:
            raise InvalidSpecError(
                "cycle_scale must be positive and residual_scale non-negative",
                field="cycle_scale",
            )
        if not self.snr > 0:
            raise InvalidSpecError("snr must be positive", field="snr")

    @property
    def r(self) -> int:
        return self.q * (self.s + 1)

    @property
    def trend_count(self) -> int:
        return self.q - self.d


@dataclass(frozen=True)
class GroundTruth:
    """
    Everything :func:`gen_dfm` used to build the panel.

    :ivar F: r×T static factors
    :ivar Lambda: n×r loadings
    :ivar f: q×T dynamic factors
    :ivar tau: (q-d)×T common trends
    :ivar gamma: q×T stationary part of f
    :ivar Psi: q×(q-d) trend loadings
    :ivar K: r×r rotation applied to the stacked lags
    :ivar trend_space: r×(q-d) directions of the common trends in F coordinates
    :ivar chi: n×T common components
    :ivar chi_trend: n×T part of chi driven by τ
    :ivar chi_cycle: n×T stationary part of chi; the dominant cycles only in
        the dominant-cycle design
    :ivar chi_residual: n×T residual stationary block, zero in the default design
    :ivar xi: n×T idiosyncratic components
    :ivar rho: I(1) flags of the idiosyncratic components
    """

    F: np.ndarray
    Lambda: np.ndarray
    f: np.ndarray
    tau: np.ndarray
    gamma: np.ndarray
    Psi: np.ndarray
    K: np.ndarray
    trend_space: np.ndarray
    chi: np.ndarray
    chi_trend: np.ndarray
    chi_cycle: np.ndarray
    chi_residual: np.ndarray
    xi: np.ndarray
    rho: np.ndarray


def _stack_lags(z: np.ndarray, s: int) -> np.ndarray:
    """Rows (z_t, ..., z_{t-s}) for t = s..end."""
    T = z.shape[1] - s
    return np.vstack([z[:, s - j : s - j + T] for j in range(s + 1)])


def _lagged_factors(
    cfg: DGPConfig, rng_structure: np.random.Generator, rng_factor: np.random.Generator
) -> dict[str, np.ndarray]:
    q, k, s, T = cfg.q, cfg.trend_count, cfg.s, cfg.T

    Psi = ortho_group.rvs(q, random_state=rng_structure)[:, :k]
    Gamma = cfg.gamma_radius * ortho_group.rvs(q, random_state=rng_structure)
    K = ortho_group.rvs(cfg.r, random_state=rng_structure) if cfg.random_rotation else np.eye(cfg.r)
    Lambda = cfg.loading_scale * rng_structure.standard_normal((cfg.n, cfg.r))

    total = cfg.burn_in + T + s
    u = rng_factor.standard_normal((q, total))
    gamma = np.zeros((q, total))
    for t in range(1, total):
        gamma[:, t] = Gamma @ gamma[:, t - 1] + u[:, t]
    u, gamma = u[:, cfg.burn_in :], gamma[:, cfg.burn_in :]
    tau = np.cumsum(Psi.T @ u, axis=1)

    return {
        "Lambda": Lambda,
        "F_trend": K @ _stack_lags(Psi @ tau, s),
        "F_cycle": K @ _stack_lags(gamma, s),
        "F_residual": np.zeros((cfg.r, T)),
        "f": (Psi @ tau + gamma)[:, s:],
        "tau": tau[:, s:],
        "gamma": gamma[:, s:],
        "Psi": Psi,
        "K": K,
        "trend_space": K @ np.vstack([Psi] * (s + 1)),
    }


def _dominant_cycle_factors(
    cfg: DGPConfig, rng_structure: np.random.Generator, rng_factor: np.random.Generator
) -> dict[str, np.ndarray]:
    q, k, d, r, T = cfg.q, cfg.trend_count, cfg.d, cfg.r, cfg.T

    basis = ortho_group.rvs(r, random_state=rng_structure)
    trend_dirs, cycle_dirs, residual_dirs = basis[:, :k], basis[:, k:q], basis[:, q:]
    D = ortho_group.rvs(q, random_state=rng_structure)[: r - q]
    Lambda = cfg.loading_scale * rng_structure.standard_normal((cfg.n, r))
    Lambda[0] = cfg.loading_scale * (
        trend_dirs.sum(axis=1) / np.sqrt(k) + cycle_dirs.sum(axis=1) / np.sqrt(d)
    )

    total = cfg.burn_in + T + 1
    u = rng_factor.standard_normal((q, total))
    c = np.zeros((d, total))
    for t in range(1, total):
        c[:, t] = cfg.cycle_ar * c[:, t - 1] + cfg.cycle_scale * u[k:, t]
    start = cfg.burn_in + 1
    tau = np.cumsum(u[:k, start:], axis=1)
    cycles = c[:, start:]
    residual = cfg.residual_scale * D @ u[:, start - 1 : -1]

    return {
        "Lambda": Lambda,
        "F_trend": trend_dirs @ tau,
        "F_cycle": cycle_dirs @ cycles,
        "F_residual": residual_dirs @ residual,
        "f": np.vstack([tau, cycles]),
        "tau": tau,
        "gamma": np.vstack([np.zeros((k, T)), cycles]),
        "Psi": np.eye(q)[:, :k],
        "K": np.eye(r),
        "trend_space": trend_dirs,
    }


def gen_dfm(cfg: DGPConfig) -> tuple[np.ndarray, GroundTruth]:
    """
    Draw a panel X = ΛF + ξ.

    Randomness flows from ``SeedSequence(cfg.seed)`` split into independent
    streams for structure, factor shocks and idiosyncratic shocks.

    :return: (X as n×T, ground truth)
    """
    structure_seq, factor_seq, idio_seq = np.random.SeedSequence(cfg.seed).spawn(3)
    rng_structure = np.random.default_rng(structure_seq)
    rng_factor = np.random.default_rng(factor_seq)
    rng_idio = np.random.default_rng(idio_seq)
    n, T = cfg.n, cfg.T

    build = _dominant_cycle_factors if cfg.dominant_cycle else _lagged_factors
    parts = build(cfg, rng_structure, rng_factor)
    Lambda = parts["Lambda"]
    F = parts["F_trend"] + parts["F_cycle"] + parts["F_residual"]
    chi_trend = Lambda @ parts["F_trend"]
    chi_cycle = Lambda @ parts["F_cycle"]
    chi_residual = Lambda @ parts["F_residual"]
    chi = chi_trend + chi_cycle + chi_residual

    n_i1 = int(round(cfg.i1_share * n))
    rho = np.zeros(n, dtype=int)
    rho[rng_idio.permutation(n)[:n_i1]] = 1

    dchi_std = np.std(np.diff(chi, axis=1), axis=1)
    sigma = np.where(dchi_std > 0, dchi_std, cfg.loading_scale) / np.sqrt(cfg.snr)
    e = rng_idio.standard_normal((n, T)) * sigma[:, None]
    xi = np.empty((n, T))
    ar = np.where(rho == 1, 1.0, cfg.idio_ar)
    xi[:, 0] = np.where(rho == 1, e[:, 0], e[:, 0] / np.sqrt(1.0 - cfg.idio_ar**2))
    for t in range(1, T):
        xi[:, t] = ar * xi[:, t - 1] + e[:, t]

    truth = GroundTruth(
        F=F,
        Lambda=Lambda,
        f=parts["f"],
        tau=parts["tau"],
        gamma=parts["gamma"],
        Psi=parts["Psi"],
        K=parts["K"],
        trend_space=parts["trend_space"],
        chi=chi,
        chi_trend=chi_trend,
        chi_cycle=chi_cycle,
        chi_residual=chi_residual,
        xi=xi,
        rho=rho,
    )
    return chi + xi, truth
