"""
Modèle de données pour les diagnostics du vérificateur.

Un diagnostic signale une expression dont l'écriture suppose une
appartenance au domaine qui n'est pas garantie par le modèle.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional
import json

from .span import SourceSpan


class Rule(Enum):
    """Règles du vérificateur."""
    BK1 = "BK1"  # <u|O|v>: u dans D(O†) et v dans D(O)
    BK2 = "BK2"  # <u|O seul ou (<u|O)|v>
    BK3 = "BK3"  # <u|A|v> avec A anti-linéaire
    SL1 = "SL1"  # /u/ . O/v/
    SL2 = "SL2"  # O/u/ . /v/
    SL3 = "SL3"  # A/u/ . B/v/
    DM1 = "DM1"  # O/u/ hors produit scalaire
    FN1 = "FN1"  # bra qui désigne une fonctionnelle déclarée


class Severity(Enum):
    """Niveaux de sévérité des diagnostics."""
    ERROR = "error"
    WARNING = "warning"
    INFO = "info"


SEVERITY_ORDER = {
    Severity.ERROR: 0,
    Severity.WARNING: 1,
    Severity.INFO: 2
}


@dataclass(frozen=True)
class Diagnostic:
    """
    Diagnostic émis sur une expression.

    Attributes:
        severity: Niveau de sévérité
        rule: Règle ayant produit le diagnostic
        span: Position de la sous-expression fautive
        message: Description lisible
        suggestion: Réécriture proposée (notation slash), si elle existe
        metadata: Détails (états, opérateurs, appartenances)
    """
    severity: Severity
    rule: Rule
    span: Optional[SourceSpan]
    message: str
    suggestion: Optional[str] = None
    metadata: Dict[str, Any] = field(default_factory=dict, compare=False, hash=False)

    @property
    def is_error(self) -> bool:
        return self.severity is Severity.ERROR

    def with_suggestion(self, suggestion: Optional[str]) -> "Diagnostic":
        return Diagnostic(self.severity, self.rule, self.span, self.message,
                          suggestion, dict(self.metadata))

    def sort_key(self):
        start = self.span.start if self.span is not None else -1
        return (start, SEVERITY_ORDER[self.severity], self.rule.value)

    def to_dict(self) -> Dict[str, Any]:
        """
        Convertit le diagnostic en dictionnaire pour sérialisation.

        Returns:
            Dictionnaire représentant le diagnostic
        """
        data: Dict[str, Any] = {
            'severity': self.severity.value,
            'rule': self.rule.value,
            'line': self.span.line if self.span else None,
            'column': self.span.column if self.span else None,
            'start': self.span.start if self.span else None,
            'end': self.span.end if self.span else None,
            'message': self.message,
        }
        if self.suggestion is not None:
            data['suggestion'] = self.suggestion
        if self.metadata:
            data['metadata'] = self.metadata
        return data

    def to_json(self) -> str:
        """Une ligne JSON (format structured de la CLI)."""
        return json.dumps(self.to_dict(), ensure_ascii=False, sort_keys=True)

    def to_text_line(self) -> str:
        """
        Ligne texte: 'severity rule line:col message [suggestion]'.
        """
        where = str(self.span) if self.span is not None else "-:-"
        line = f"{self.severity.value} {self.rule.value} {where} {self.message}"
        if self.suggestion:
            line += f" [suggestion: {self.suggestion}]"
        return line

    def __repr__(self) -> str:
        return (f"Diagnostic(rule={self.rule.value}, "
                f"severity={self.severity.value}, at={self.span})")
