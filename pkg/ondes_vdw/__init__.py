from .core.solveur import Solveur, SolverSettings, SolveReport
from .core.analyseur import Analyseur, verify_solution
from .models.grille import GridSpec, Field, make_grid
from .models.fonctionnelle import ModelParams, Regime, regime_classify

__all__ = ["Solveur", "SolverSettings", "SolveReport", "Analyseur", "verify_solution",
           "GridSpec", "Field", "make_grid", "ModelParams", "Regime", "regime_classify"]
