"""Random-coefficient truncated Fock states: statistics, engineering recipes and loss fidelity."""

__version__ = "0.1.0"

from .engineer import Recipe, optimize_transmittance, plan, simulate_recipe, success_probability
from .estimators import PhotonStatistics, RecipePlanner
from .fock import FockState
from .lossy import branch_states, fidelity_with_loss
from .stats import StatsReport, husimi, report, scaling_sweep
from .tsrc import EnsembleSpec, TsrcSpec, ensemble_states, generate_tsrc

__all__ = [
    "EnsembleSpec",
    "FockState",
    "PhotonStatistics",
    "Recipe",
    "RecipePlanner",
    "StatsReport",
    "TsrcSpec",
    "branch_states",
    "ensemble_states",
    "fidelity_with_loss",
    "generate_tsrc",
    "husimi",
    "optimize_transmittance",
    "plan",
    "report",
    "scaling_sweep",
    "simulate_recipe",
    "success_probability",
]
