"""
repfree - Notation sans représentation pour les expressions d'espace de Hilbert.

Ce package contient:
- parsing: Lecture des notations slash et bra-ket
- rendering: Rendu slash, bra-ket et LaTeX
- checkers: Vérification des domaines d'opérateurs
- rewriting: Réécriture symbolique et conversion
- numeric: Évaluation numérique, balayages, suites aléatoires
- models: Arbre d'expressions, modèles, diagnostics
- config: Système de configuration
- utils: Utilitaires (logger)
"""

__version__ = "1.0.0"
__author__ = "repfree team"

from .checkers import Checker
from .numeric import evaluate
from .parsing import parse
from .rewriting import Rewriter

__all__ = ['Checker', 'Rewriter', 'evaluate', 'parse']
