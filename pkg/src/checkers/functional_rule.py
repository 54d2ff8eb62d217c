"""
Règle FN1: bras désignant une fonctionnelle déclarée.

Dans la version d'origine de la notation, un bra est une fonctionnelle
linéaire quelconque. Une fonctionnelle non bornée n'est représentée par
aucun vecteur, donc par aucun bra.
"""

from typing import List, Optional

from ..models.diagnostic import Diagnostic, Severity
from ..models.diagnostic import Rule
from ..models.expr import (
    BraOperator, Covector, Dagger, Expr, MatrixElement, Node, OpApply,
    OuterProduct, ScalarProduct, State, Symbol,
)
from ..models.hilbert import Membership
from ..rendering.renderers import render_slash
from .base_rule import BaseRule, CheckContext, is_functional_label


def bra_of(node: Node) -> Optional[Expr]:
    if isinstance(node, ScalarProduct):
        return node.left
    if isinstance(node, (MatrixElement, BraOperator)):
        return node.bra
    if isinstance(node, Covector):
        return node.inner
    if isinstance(node, OuterProduct):
        return node.bra
    return None


class FunctionalRule(BaseRule):
    """FN1: la fonctionnelle doit admettre un vecteur représentant."""

    rule = Rule.FN1

    def applies_to(self, node: Node, context: CheckContext) -> bool:
        bra = bra_of(node)
        return bra is not None and is_functional_label(bra, context.model)

    def check(self, node: Expr, context: CheckContext) -> List[Diagnostic]:
        bra = bra_of(node)
        name = bra.label
        functional = context.model.functional(name)
        membership = context.model.functional_membership(name)
        metadata = {'functional': name, 'membership': membership.value}

        if membership is Membership.OUT:
            message = (f"functional {name} = (/{functional.state_label}/, "
                       f"{functional.operator_symbol} . ) is unbounded: "
                       f"no vector represents it, so <{name}| is not a bra")
            return [self.diagnostic(Severity.ERROR, bra.span, message, metadata)]
        if membership is Membership.UNKNOWN:
            if context.unknown_severity is None:
                return []
            message = f"boundedness of functional {name} is unknown"
            return [self.diagnostic(context.unknown_severity, bra.span, message, metadata)]

        suggestion = None
        if functional.values is None:
            vector = OpApply(Dagger(Symbol(functional.operator_symbol)), State(functional.state_label))
            suggestion = render_slash(vector)
            message = f"functional {name} is bounded; it is represented by {suggestion}"
        else:
            message = f"functional {name} is bounded; its representing vector is given by riesz_solve"
        return [Diagnostic(Severity.INFO, self.rule, bra.span, message, suggestion, metadata)]
