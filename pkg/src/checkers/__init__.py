"""
Package checkers - Vérification de bonne formation contre les domaines.
"""

from .base_rule import BaseRule, CheckContext
from .checker import Checker, RULE_EXPLANATIONS, explain
from .domains import DomainOracle, op_factors, worst

__all__ = [
    'BaseRule',
    'CheckContext',
    'Checker',
    'RULE_EXPLANATIONS',
    'explain',
    'DomainOracle',
    'op_factors',
    'worst'
]
