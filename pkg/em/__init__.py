"""
Quasi-maximum-likelihood estimation of the factor model by EM.
"""

from em.types import EMState, EStepOutput, SufficientStats, TieGroups
from em.initialization import init_pca, observation_floors, pca_factors, shock_loading
from em.steps import collect_stats, e_step, m_step, run_e_step
from em.runner import common_components, factor_estimates, relative_change, run_em

__all__ = [
    "EMState",
    "EStepOutput",
    "SufficientStats",
    "TieGroups",
    "init_pca",
    "pca_factors",
    "observation_floors",
    "shock_loading",
    "collect_stats",
    "e_step",
    "run_e_step",
    "m_step",
    "run_em",
    "relative_change",
    "common_components",
    "factor_estimates",
]
