"""
Règles de la notation slash: produits scalaires et applications d'opérateurs.
"""

from typing import List

from ..models.diagnostic import Diagnostic, Rule
from ..models.expr import Expr, MatrixElement, Node, OpApply, Origin, ScalarProduct
from ..models.hilbert import Membership
from .base_rule import BaseRule, CheckContext
from .braket_rules import op_text, vec_text


def _has_operator(vector: Expr) -> bool:
    return any(isinstance(n, OpApply) for n in _vector_nodes(vector))


def _vector_nodes(vector: Expr):
    yield vector
    for attr in ("term", "arg"):
        child = getattr(vector, attr, None)
        if isinstance(child, Expr):
            yield from _vector_nodes(child)
    for child in getattr(vector, "terms", ()):
        yield from _vector_nodes(child)


class ScalarProductRule(BaseRule):
    """
    SL1/SL2/SL3: /u/ . O/v/, O/u/ . /v/ et A/u/ . B/v/.

    Chaque emplacement n'exige que la définition de son propre vecteur.
    Les éléments de matrice sans point /u/O/v/ relèvent de SL1.
    """

    rule = Rule.SL1

    def applies_to(self, node: Node, context: CheckContext) -> bool:
        if isinstance(node, MatrixElement):
            return node.origin is Origin.SLASH_DOTLESS
        return isinstance(node, ScalarProduct) and (
            _has_operator(node.left) or _has_operator(node.right))

    def check(self, node: Expr, context: CheckContext) -> List[Diagnostic]:
        oracle = context.oracle
        if isinstance(node, MatrixElement):
            membership = oracle.membership(node.ket, node.op)
            message = (f"/u/O/v/ means /u/ . O/v/ and requires "
                       f"{vec_text(node.ket)} ∈ D({op_text(node.op)})")
            return self._emit(Rule.SL1, [membership], context, node, message)

        left_op, right_op = _has_operator(node.left), _has_operator(node.right)
        left = oracle.definedness(node.left) if left_op else Membership.IN
        right = oracle.definedness(node.right) if right_op else Membership.IN
        if left_op and right_op:
            rule = Rule.SL3
            message = f"both {vec_text(node.left)} and {vec_text(node.right)} must be defined"
        elif right_op:
            rule = Rule.SL1
            message = f"{vec_text(node.right)} requires its argument in the operator domain"
        else:
            rule = Rule.SL2
            message = f"{vec_text(node.left)} requires its argument in the operator domain"
        return self._emit(rule, [left, right], context, node, message)

    def _emit(self, rule: Rule, memberships, context, node, message) -> List[Diagnostic]:
        metadata = {'memberships': [m.value for m in memberships]}
        return self.verdict(memberships, context, node.span, message, metadata, rule)


class DomainRule(BaseRule):
    """
    DM1: O/u/ hors produit scalaire (vecteur, covecteur, projection)
    exige u ∈ D(O).
    """

    rule = Rule.DM1

    def applies_to(self, node: Node, context: CheckContext) -> bool:
        return isinstance(node, OpApply) and not (context.in_product or context.in_application)

    def check(self, node: OpApply, context: CheckContext) -> List[Diagnostic]:
        membership = context.oracle.definedness(node)
        message = f"{vec_text(node)} requires {vec_text(node.arg)} ∈ D({op_text(node.op)})"
        return self.verdict([membership], context, node.span, message,
                            {'membership': membership.value})
