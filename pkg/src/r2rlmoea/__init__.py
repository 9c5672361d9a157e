"""Reinforcement-learned operator selection for an R2-indicator MOEA."""

from .core import Population, RunConfig
from .operators import OperatorId
from .problems import get_problem

__all__ = ["OperatorId", "Population", "RunConfig", "get_problem"]
__version__ = "0.1.0"
