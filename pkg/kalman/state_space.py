"""
Assembly of the augmented state space ``s_t = [F_t; F_{t-1}; ξ⁽¹⁾_t]``.

Transition::

    [F_t    ]   [A1 A2 0] [F_{t-1}]   [H u_t]
    [F_{t-1}] = [I  0  0] [F_{t-2}] + [0    ]
    [ξ⁽¹⁾_t ]   [0  0  I] [ξ⁽¹⁾_{t-1}] [e⁽¹⁾_t]

Observation: ``x_it = λ_i'F_t + ξ⁽¹⁾_it + ε_it``, where the random-walk state
is present only for series with rho_i = 1 and ε_it has variance R_i
(rho_i = 0) or the floor (rho_i = 1).
"""

from __future__ import annotations

import numpy as np
from scipy import linalg

from utils.constants import DIFFUSE_SCALE
from utils.exceptions import DimensionMismatchError, InvalidSpecError
from utils.linalg import spectral_radius, symmetrize
from utils.model import InitialState, ModelSpec, Params, StateSpace, ValidationReport


def _check_shape(name: str, array: np.ndarray, expected: tuple[int, ...]) -> None:
    if np.shape(array) != expected:
        raise DimensionMismatchError(name, expected, tuple(np.shape(array)))


def build_state_space(params: Params, spec: ModelSpec) -> StateSpace:
    """
    Build the transition, observation and covariance matrices from Θ.

    :raises DimensionMismatchError: When a parameter block disagrees with ``spec``
    """
    n, r, q = spec.n, spec.r, spec.q
    _check_shape("Lambda", params.Lambda, (n, r))
    _check_shape("A1", params.A1, (r, r))
    _check_shape("A2", params.A2, (r, r))
    _check_shape("H", params.H, (r, q))
    _check_shape("R", params.R, (n,))
    _check_shape("rho", params.rho, (n,))
    _check_shape("floor", params.floor, (n,))

    i1 = params.i1_index
    n1 = i1.size
    m = 2 * r + n1

    Tmat = np.zeros((m, m))
    Tmat[:r, :r] = params.A1
    Tmat[:r, r : 2 * r] = params.A2
    Tmat[r : 2 * r, :r] = np.eye(r)
    Tmat[2 * r :, 2 * r :] = np.eye(n1)

    Zmat = np.zeros((n, m))
    Zmat[:, :r] = params.Lambda
    Zmat[i1, 2 * r + np.arange(n1)] = 1.0

    Qmat = np.zeros((m, m))
    Qmat[:r, :r] = params.shock_cov
    Qmat[2 * r :, 2 * r :] = np.diag(params.R[i1])

    Hobs = np.where(params.rho == 1, params.floor, params.R).astype(float)

    return StateSpace(
        Tmat=Tmat, Zmat=Zmat, Qmat=symmetrize(Qmat), Hobs=Hobs, r=r, i1_index=i1.copy()
    )


def validate_params(params: Params, spec: ModelSpec) -> ValidationReport:
    """
    Collect every violated parameter invariant. Never raises.

    :return: Report whose ``violations`` is empty iff the parameters are valid
    """
    violations: list[str] = []
    n, r, q = spec.n, spec.r, spec.q
    expected = {
        "Lambda": (n, r),
        "A1": (r, r),
        "A2": (r, r),
        "H": (r, q),
        "R": (n,),
        "rho": (n,),
        "floor": (n,),
    }
    shapes_ok = True
    for name, shape in expected.items():
        got = np.shape(getattr(params, name))
        if got != shape:
            violations.append(f"{name} has shape {got}, expected {shape}")
            shapes_ok = False
    if not shapes_ok:
        return ValidationReport(tuple(violations))

    for name in expected:
        if not np.all(np.isfinite(getattr(params, name))):
            violations.append(f"{name} contains non-finite entries")

    rho = np.asarray(params.rho)
    if not np.all(np.isin(rho, (0, 1))):
        violations.append("rho entries must be 0 or 1")
    for i in np.flatnonzero((rho == 0) & ~(params.R > 0)):
        violations.append(f"[R]_{{ii}}>0 violated at i={i}")
    for i in np.flatnonzero((rho == 1) & (params.R < 0)):
        violations.append(f"random-walk variance [R]_{{ii}}>=0 violated at i={i}")
    for i in np.flatnonzero((rho == 1) & ~(params.floor > 0)):
        violations.append(f"observation floor must be positive at i={i}")

    if np.all(np.isfinite(params.H)):
        rank = np.linalg.matrix_rank(params.H)
        if rank < q:
            violations.append(f"H has rank {rank}, expected full column rank {q}")

    return ValidationReport(tuple(violations))


def diffuse_initial_state(
    ss: StateSpace,
    diffuse_scale: float = DIFFUSE_SCALE,
    *,
    stationary_factor_block: bool = False,
) -> InitialState:
    """
    Large-κ prior on the first state s_1.

    With ``stationary_factor_block`` the factor/companion block uses the
    stationary covariance solving ``P = T P T' + Q`` instead of κ·I.

    :raises InvalidSpecError: If the stationary solve is requested for an unstable companion
    """
    m = ss.m
    cov = diffuse_scale * np.eye(m)
    if stationary_factor_block:
        k = 2 * ss.r
        block_T = ss.Tmat[:k, :k]
        if spectral_radius(block_T) >= 1.0:
            raise InvalidSpecError(
                "stationary initialization requires a stable factor VAR", field="A1"
            )
        block = linalg.solve_discrete_lyapunov(block_T, ss.Qmat[:k, :k])
        cov[:k, :k] = symmetrize(block)
    return InitialState(mean=np.zeros(m), cov=cov)
