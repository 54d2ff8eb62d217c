"""
Classe de base abstraite pour toutes les règles du vérificateur.

Définit l'interface commune que toutes les règles doivent implémenter.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, replace
from typing import Any, Dict, List, Optional

from ..models.diagnostic import Diagnostic, Rule, Severity
from ..models.expr import Expr, Node, State
from ..models.hilbert import HilbertModel, Membership
from ..models.span import SourceSpan
from ..utils.logger import get_logger
from .domains import DomainOracle

logger = get_logger()


@dataclass(frozen=True)
class CheckContext:
    """
    Contexte d'un noeud pendant le parcours.

    Attributes:
        model: Modèle d'espace de Hilbert
        oracle: Questions de domaine sur les sous-expressions
        in_product: Le noeud est un argument de produit scalaire ou d'élément de matrice
        in_application: Le noeud est l'argument d'un opérateur déjà vérifié
        acting_right: Convention "l'opérateur n'agit qu'à droite"
        unknown_severity: Sévérité d'une appartenance inconnue (None: ignorée)
    """
    model: HilbertModel
    oracle: DomainOracle
    in_product: bool = False
    in_application: bool = False
    acting_right: bool = False
    unknown_severity: Optional[Severity] = Severity.WARNING

    def nested(self, **changes) -> "CheckContext":
        return replace(self, **changes)


class BaseRule(ABC):
    """
    Classe abstraite de base pour toutes les règles.

    Chaque règle spécifique doit hériter de cette classe
    et implémenter applies_to() et check().
    """

    rule: Rule

    def __init__(self, config: Optional[Dict[str, Any]] = None):
        """
        Initialise la règle.

        Args:
            config: Configuration spécifique à la règle
        """
        self.config = config or {}
        self.name = self.__class__.__name__
        self.enabled = self.config.get('enabled', True)
        logger.debug(f"Initialized rule: {self.name}")

    @abstractmethod
    def applies_to(self, node: Node, context: CheckContext) -> bool:
        """La règle concerne-t-elle ce noeud ?"""

    @abstractmethod
    def check(self, node: Expr, context: CheckContext) -> List[Diagnostic]:
        """
        Vérifie un noeud.

        Args:
            node: Noeud concerné
            context: Contexte du parcours

        Returns:
            Liste des diagnostics (vide si le noeud est bien formé)
        """

    def is_enabled(self) -> bool:
        """Vérifie si la règle est activée."""
        return self.enabled

    def verdict(self, memberships: List[Membership], context: CheckContext,
                span: Optional[SourceSpan], message: str,
                metadata: Optional[Dict[str, Any]] = None,
                rule: Optional[Rule] = None) -> List[Diagnostic]:
        """
        Transforme des appartenances en diagnostic.

        OUT donne une erreur; UNKNOWN la sévérité configurée; IN rien.
        """
        if Membership.OUT in memberships:
            severity = Severity.ERROR
        elif Membership.UNKNOWN in memberships:
            severity = context.unknown_severity
            if severity is None:
                return []
            message = f"{message} (domain membership unknown)"
        else:
            return []
        return [self.diagnostic(severity, span, message, metadata, rule)]

    def diagnostic(self, severity: Severity, span: Optional[SourceSpan], message: str,
                   metadata: Optional[Dict[str, Any]] = None,
                   rule: Optional[Rule] = None) -> Diagnostic:
        return Diagnostic(severity=severity, rule=rule or self.rule, span=span,
                          message=message, metadata=metadata or {})


def is_functional_label(node: Expr, model: HilbertModel) -> bool:
    """Le bra désigne-t-il une fonctionnelle déclarée plutôt qu'un état ?"""
    return (isinstance(node, State) and node.label in model.functionals
            and node.label not in model.states)


def describe(membership: Membership) -> str:
    return {"in": "∈", "out": "∉", "unknown": "∈?"}[membership.value]
