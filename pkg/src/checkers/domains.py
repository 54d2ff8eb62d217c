"""
Appartenance aux domaines pour des sous-expressions quelconques.

Le modèle ne connaît que des paires (état, opérateur); ce module ramène une
chaîne d'opérateurs appliquée à un vecteur composite à ces requêtes.
"""

from typing import Iterable, List, Tuple, Union

from ..models.expr import (
    Compose, Dagger, Expr, Identity, OpApply, OpExpr, OuterOp, OuterProduct,
    Scaled, State, Sum, Symbol,
)
from ..models.hilbert import HilbertModel, Membership

# Facteur élémentaire: (symbole, daggered) ou projection
Factor = Union[Tuple[str, bool], OuterProduct]

_RANK = {Membership.IN: 0, Membership.UNKNOWN: 1, Membership.OUT: 2}


def worst(memberships: Iterable[Membership]) -> Membership:
    """OUT l'emporte sur UNKNOWN, qui l'emporte sur IN."""
    result = Membership.IN
    for membership in memberships:
        if _RANK[membership] > _RANK[result]:
            result = membership
    return result


def op_factors(op: OpExpr, daggered: bool = False) -> List[Factor]:
    """
    Facteurs d'une chaîne dans l'ordre d'application (le premier agit en premier).

    Args:
        op: Chaîne d'opérateurs
        daggered: Décomposer op† plutôt que op

    Returns:
        Liste de (symbole, daggered) et de projections
    """
    if isinstance(op, Symbol):
        return [(op.name, daggered)]
    if isinstance(op, Dagger):
        return op_factors(op.inner, not daggered)
    if isinstance(op, Identity):
        return []
    if isinstance(op, OuterOp):
        outer = op.outer
        return [OuterProduct(outer.bra, outer.ket) if daggered else outer]
    if isinstance(op, Compose):
        # A B: B agit en premier; (A B)† = B† A†, A† agit en premier
        ordered = op.factors if daggered else tuple(reversed(op.factors))
        factors: List[Factor] = []
        for factor in ordered:
            factors.extend(op_factors(factor, daggered))
        return factors
    raise TypeError(f"Not an operator: {op!r}")


class DomainOracle:
    """
    Répond aux questions de domaine pour le vérificateur.
    """

    def __init__(self, model: HilbertModel):
        self.model = model

    def chain_membership(self, vector: Expr, factors: List[Factor]) -> Membership:
        """Appartenance de vector au domaine de la chaîne donnée."""
        if isinstance(vector, OpApply):
            return self.chain_membership(vector.arg, op_factors(vector.op) + factors)
        if isinstance(vector, Scaled):
            return self.chain_membership(vector.term, factors)
        if isinstance(vector, Sum):
            return worst(self.chain_membership(t, factors) for t in vector.terms)
        if isinstance(vector, State):
            return self._state_chain(vector.label, factors)
        return Membership.UNKNOWN

    def _state_chain(self, label: str, factors: List[Factor]) -> Membership:
        self.model.state(label)
        for index, factor in enumerate(factors):
            if isinstance(factor, OuterProduct):
                # Après une projection, la suite de la chaîne agit sur le ket
                before = self.model.chain_membership(label, factors[:index])
                return worst([
                    before,
                    self.definedness(factor.bra),
                    self.chain_membership(factor.ket, factors[index + 1:]),
                ])
        return self.model.chain_membership(label, factors)

    def membership(self, vector: Expr, op: OpExpr, daggered: bool = False) -> Membership:
        """
        Appartenance de vector au domaine de op (ou op†).

        Args:
            vector: Expression à valeur vecteur
            op: Chaîne d'opérateurs
            daggered: Interroger le domaine de l'adjoint

        Returns:
            Membership
        """
        return self.chain_membership(vector, op_factors(op, daggered))

    def definedness(self, vector: Expr) -> Membership:
        """Le vecteur lui-même est-il défini (chaque O/u/ a u dans D(O))."""
        return self.chain_membership(vector, [])

    def is_antilinear(self, op: OpExpr) -> bool:
        return any(
            not isinstance(f, OuterProduct) and self.model.is_antilinear(f[0])
            for f in op_factors(op)
        )
