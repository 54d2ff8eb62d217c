"""
Package numeric - Évaluation, balayages en troncature, suites aléatoires.
"""

from .evaluator import Evaluator, Value, evaluate
from .sweeps import (
    SweepReport, Verdict, classify, operator_norm_sweep, riesz_solve,
    truncation_sweep, unboundedness_probe,
)
from .invariants import SUITES, InvariantReport

__all__ = [
    'Evaluator',
    'Value',
    'evaluate',
    'SweepReport',
    'Verdict',
    'classify',
    'operator_norm_sweep',
    'riesz_solve',
    'truncation_sweep',
    'unboundedness_probe',
    'SUITES',
    'InvariantReport'
]
