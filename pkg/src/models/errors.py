"""
Hiérarchie des exceptions du package.

Chaque famille correspond à un code de sortie de la CLI:
NotationError -> 1, vérification/conversion -> 2, ModelError -> 3.
"""

from typing import Iterable, Optional


class RepfreeError(Exception):
    """Erreur de base du package."""


# --- Modèles ---------------------------------------------------------------

class ModelError(RepfreeError):
    """Erreur liée au modèle d'espace de Hilbert."""


class ModelSyntaxError(ModelError):
    """Fichier modèle mal formé."""

    def __init__(self, message: str, line: int, column: int = 1):
        self.line = line
        self.column = column
        super().__init__(f"{line}:{column}: {message}")


class ModelInvariantError(ModelError):
    """Invariant du modèle violé (ex: état de norme infinie)."""

    def __init__(self, rule: str, message: str, line: Optional[int] = None):
        self.rule = rule
        self.line = line
        where = f"{line}: " if line is not None else ""
        super().__init__(f"{where}[{rule}] {message}")


class UnknownSymbolError(ModelError):
    """Étiquette d'état ou symbole d'opérateur inconnu du modèle."""

    def __init__(self, kind: str, name: str):
        self.kind = kind
        self.name = name
        super().__init__(f"unknown {kind} '{name}'")


class NonOrthonormalBasisError(ModelError):
    """Base déclarée non orthonormée."""


class NonDiagonalOperatorError(ModelError):
    """Opération réservée aux opérateurs diagonaux tronqués."""


# --- Notation --------------------------------------------------------------

class NotationError(RepfreeError):
    """Erreur de lecture d'une expression."""

    def __init__(self, message: str, span=None):
        self.span = span
        self.message = message
        where = f"{span.line}:{span.column}: " if span is not None else ""
        super().__init__(f"{where}{message}")


class NotationSyntaxError(NotationError):
    """Erreur de syntaxe, avec l'ensemble des jetons attendus."""

    def __init__(self, message: str, span=None, expected: Iterable[str] = ()):
        self.expected = tuple(sorted(set(expected)))
        if self.expected:
            message = f"{message} (expected one of: {', '.join(self.expected)})"
        super().__init__(message, span)


class MixedNotationError(NotationError):
    """Mélange des notations slash et bra-ket dans une même expression."""


class UnbalancedParenthesisError(NotationError):
    """Parenthèses non équilibrées."""


# --- Évaluation ------------------------------------------------------------

class EvaluationError(RepfreeError):
    """Erreur d'évaluation numérique."""


class MissingTruncationError(EvaluationError):
    """Un modèle tronqué exige un niveau de troncature N."""


class UnboundScalarError(EvaluationError):
    """Constante symbolique sans valeur."""


class NonScalarError(EvaluationError):
    """Une valeur scalaire était attendue."""


class IllFormedExpressionError(EvaluationError):
    """Expression rejetée par le vérificateur, évaluée sans forçage."""

    def __init__(self, message: str, diagnostics=()):
        self.diagnostics = list(diagnostics)
        super().__init__(message)


# --- Réécriture et vérification -------------------------------------------

class RewriteError(RepfreeError):
    """Erreur de réécriture symbolique."""


class InvalidSiteError(RewriteError):
    """Site d'insertion de l'identité invalide."""


class NotOperatorValuedError(RewriteError):
    """L'adjoint n'est défini que pour une expression à valeur opérateur."""


class UnknownRuleError(RepfreeError):
    """Identifiant de règle du vérificateur inconnu."""
