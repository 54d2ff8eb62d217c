"""
Package rewriting - Réécriture symbolique des expressions.
"""

from .engine import RewriteEngine, RewriteResult, RewriteRule, RewriteStep, RewriteTrace
from .rewriter import (
    Rewriter, Site, adjoint, convert, expand_linear, insert_identity, simplify,
)

__all__ = [
    'RewriteEngine',
    'RewriteResult',
    'RewriteRule',
    'RewriteStep',
    'RewriteTrace',
    'Rewriter',
    'Site',
    'adjoint',
    'convert',
    'expand_linear',
    'insert_identity',
    'simplify'
]
