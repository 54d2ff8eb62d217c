"""
Règles propres aux formes bra-ket: éléments de matrice chaînés,
action à gauche, opérateurs anti-linéaires.
"""

from typing import List

from ..models.diagnostic import Diagnostic, Rule, Severity
from ..models.expr import BraOperator, Expr, MatrixElement, Node, Origin
from ..rendering.renderers import SlashRenderer
from .base_rule import BaseRule, CheckContext, describe, is_functional_label

_TEXT = SlashRenderer()


def op_text(op) -> str:
    return _TEXT.op_chain(op)


def vec_text(vector: Expr) -> str:
    return _TEXT.render(vector)


class ChainedMatrixElementRule(BaseRule):
    """
    BK1: <u|O|v> n'a de sens que si u ∈ D(O†) et v ∈ D(O).

    Avec la convention "agit à droite" seule la condition sur v est exigée.
    """

    rule = Rule.BK1

    def applies_to(self, node: Node, context: CheckContext) -> bool:
        return (isinstance(node, MatrixElement) and node.origin is Origin.BRAKET_CHAINED
                and not context.oracle.is_antilinear(node.op)
                and not is_functional_label(node.bra, context.model))

    def check(self, node: MatrixElement, context: CheckContext) -> List[Diagnostic]:
        left = context.oracle.membership(node.bra, node.op, daggered=True)
        right = context.oracle.membership(node.ket, node.op)
        memberships = [right] if context.acting_right else [left, right]
        op, u, v = op_text(node.op), vec_text(node.bra), vec_text(node.ket)
        message = (f"<u|O|v> requires {u} ∈ D(dag({op})) and {v} ∈ D({op}); "
                   f"here {u} {describe(left)} D(dag({op})), {v} {describe(right)} D({op})")
        return self.verdict(memberships, context, node.bra.span or node.span, message, {
            'bra_membership': left.value,
            'ket_membership': right.value,
            'operator': op
        })


class BraActionRule(BaseRule):
    """BK2: <u|O (seul ou appliqué à un ket) exige u ∈ D(O†)."""

    rule = Rule.BK2

    def applies_to(self, node: Node, context: CheckContext) -> bool:
        if isinstance(node, BraOperator):
            return not is_functional_label(node.bra, context.model)
        return (isinstance(node, MatrixElement) and node.origin is Origin.BRA_ACTION
                and not is_functional_label(node.bra, context.model))

    def check(self, node: Expr, context: CheckContext) -> List[Diagnostic]:
        membership = context.oracle.membership(node.bra, node.op, daggered=True)
        op, u = op_text(node.op), vec_text(node.bra)
        message = f"<{u}|{op} acting to the left requires {u} ∈ D(dag({op}))"
        return self.verdict([membership], context, node.bra.span or node.span, message, {
            'bra_membership': membership.value,
            'operator': op
        })


class AntilinearChainRule(BaseRule):
    """BK3: <u|K|v> avec K anti-linéaire est toujours mal formé."""

    rule = Rule.BK3

    def applies_to(self, node: Node, context: CheckContext) -> bool:
        return (isinstance(node, MatrixElement) and node.origin is Origin.BRAKET_CHAINED
                and context.oracle.is_antilinear(node.op))

    def check(self, node: MatrixElement, context: CheckContext) -> List[Diagnostic]:
        op = op_text(node.op)
        message = (f"chained form with anti-linear {op} has no meaning; "
                   f"write (<u|{op})|v> or <u|({op}|v>) explicitly")
        return [self.diagnostic(Severity.ERROR, node.span, message, {'operator': op})]
