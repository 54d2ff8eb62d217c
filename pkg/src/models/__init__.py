"""
Package models - Arbre d'expressions, modèles d'espace de Hilbert, diagnostics.
"""

from .span import SourceSpan
from .expr import Notation, Attachment, Origin, ValueKind
from .hilbert import HilbertModel, ModelKind, Membership, Linearity
from .model_loader import load_model, load_model_file
from .diagnostic import Diagnostic, Rule, Severity

__all__ = [
    'SourceSpan',
    'Notation',
    'Attachment',
    'Origin',
    'ValueKind',
    'HilbertModel',
    'ModelKind',
    'Membership',
    'Linearity',
    'load_model',
    'load_model_file',
    'Diagnostic',
    'Rule',
    'Severity'
]
