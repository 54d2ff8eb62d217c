"""
Transformations symboliques: conversion de notation, adjoint, insertion de
résolutions de l'identité, développement linéaire et simplification.
"""

from enum import Enum
from itertools import product
from typing import FrozenSet, List, Optional, Sequence

from ..models.errors import InvalidSiteError, NotOperatorValuedError, UnknownSymbolError
from ..models.expr import (
    Attachment, Compose, Conj, Dagger, Expr, Identity, Node, Notation, OpApply,
    OperatorTerm, OpExpr, OuterProduct, Scaled, ScalarProduct, ScalarRef, State,
    Sum, ValueKind, kind_of, map_children, substitute, walk,
)
from ..models.hilbert import HilbertModel
from ..utils.logger import get_logger
from .engine import RewriteEngine, RewriteResult
from .rules import (
    LINEARITY_RULES, SIMPLIFY_RULES, TO_BRAKET_RULES, TO_SLASH_RULES,
    is_antilinear_op,
)

logger = get_logger()


class Site(Enum):
    """Emplacement d'insertion de l'identité."""
    AT_DOT = "at-dot"  # /x/ . I/y/
    BEFORE_OPERATOR = "before-operator"  # /u/ . I O/v/
    AFTER_OPERATOR = "after-operator"  # /u/ . O I/v/
    BOTH_SIDES = "both-sides"  # /u/ . I O I/v/


class Rewriter:
    """
    Façade des transformations.

    Les symboles anti-linéaires (et le modèle, pour les bases) sont fixés
    à la construction.
    """

    def __init__(self, antilinear: FrozenSet[str] = frozenset(),
                 model: Optional[HilbertModel] = None):
        if model is not None:
            antilinear = frozenset(antilinear) | model.antilinear_symbols()
        self.antilinear = frozenset(antilinear)
        self.model = model

    def engine(self, *rule_sets) -> RewriteEngine:
        rules = [rule for rule_set in rule_sets for rule in rule_set]
        return RewriteEngine(rules, antilinear=self.antilinear)

    def simplify(self, e: Expr) -> RewriteResult:
        """
        Forme normale: constantes extraites vers l'extérieur, sommes
        au-dessus des constantes, adjoints poussés vers les symboles.

        Returns:
            RewriteResult(expression, trace)
        """
        return self.engine(SIMPLIFY_RULES).run(e)

    def convert(self, e: Expr, target: Notation) -> RewriteResult:
        """
        Applique la correspondance entre notations.

        Args:
            e: Expression
            target: Notation cible

        Returns:
            RewriteResult(expression, trace); la trace porte une note pour
            chaque forme chaînée produite
        """
        target = Notation(target)
        rules = TO_SLASH_RULES if target is Notation.SLASH else TO_BRAKET_RULES
        result = self.engine(SIMPLIFY_RULES, rules).run(e)
        logger.debug(f"Converted to {target.value} in {len(result.trace)} steps")
        return result

    def adjoint(self, e: Expr) -> Expr:
        """
        Adjoint d'une expression à valeur opérateur.

        Args:
            e: OperatorTerm, produit extérieur, combinaison de ceux-ci

        Returns:
            Expression adjointe simplifiée

        Raises:
            NotOperatorValuedError: L'expression n'est pas un opérateur
        """
        return self.adjoint_with_trace(e).expr

    def adjoint_with_trace(self, e: Expr) -> RewriteResult:
        if not isinstance(e, Expr) or kind_of(e) is not ValueKind.OPERATOR:
            raise NotOperatorValuedError(f"adjoint needs an operator-valued expression, got {type(e).__name__}")
        return self.simplify(self._adjoint(e))

    def _adjoint(self, e: Expr) -> Expr:
        if isinstance(e, OperatorTerm):
            return OperatorTerm(Dagger(e.op))
        if isinstance(e, OuterProduct):
            return OuterProduct(e.bra, e.ket)
        if isinstance(e, Sum):
            return Sum(tuple(self._adjoint(t) for t in e.terms))
        if isinstance(e, Scaled):
            scalar = e.scalar if self._is_antilinear_term(e.term) else Conj(e.scalar)
            return Scaled(scalar, self._adjoint(e.term), Attachment.DELIMITED)
        raise NotOperatorValuedError(f"no adjoint for {type(e).__name__}")

    def _is_antilinear_term(self, e: Expr) -> bool:
        return isinstance(e, OperatorTerm) and is_antilinear_op(e.op, self.antilinear)

    def expand_linear(self, e: Expr) -> Expr:
        """
        Distribue produits scalaires, applications et produits extérieurs
        sur les sommes, puis extrait les constantes (conjuguées dans
        l'emplacement gauche et sous un opérateur anti-linéaire).
        """
        return self.engine(LINEARITY_RULES, SIMPLIFY_RULES).run(e).expr

    # --- Résolutions de l'identité -----------------------------------------

    def insert_identity(self, e: Expr, basis: str, site: Site = Site.AT_DOT,
                        occurrence: int = 0, expand: bool = True) -> Expr:
        """
        Insère I[basis] dans le produit scalaire désigné.

        Args:
            e: Expression
            basis: Nom de la base
            site: Emplacement (au point, avant/après l'opérateur, des deux côtés)
            occurrence: Rang du produit scalaire dans l'ordre préfixe
            expand: Développer I[basis] en somme finie (modèle requis)

        Returns:
            Expression transformée

        Raises:
            InvalidSiteError: Aucun produit scalaire ou opérateur à cet endroit
            UnknownSymbolError: Base absente du modèle
        """
        site = Site(site)
        if self.model is not None and basis not in self.model.bases:
            raise UnknownSymbolError("basis", basis)

        products = [n for n in walk(e) if isinstance(n, ScalarProduct)]
        if occurrence >= len(products):
            raise InvalidSiteError(f"no scalar product #{occurrence} in expression")
        target = products[occurrence]
        inserted = self._insert(target, Identity(basis), site)
        if expand:
            if self.model is None:
                raise InvalidSiteError("expanding an identity needs a model with a declared basis")
            inserted = self.expand_identities(inserted)
        logger.debug(f"Inserted I[{basis}] at {site.value} of scalar product #{occurrence}")
        return substitute(e, target, inserted)

    def _insert(self, sp: ScalarProduct, identity: Identity, site: Site) -> ScalarProduct:
        right = sp.right
        if site is Site.AT_DOT:
            return ScalarProduct(sp.left, OpApply(identity, right))
        if not isinstance(right, OpApply):
            raise InvalidSiteError(f"site {site.value} needs an operator application in the right slot")
        factors = list(right.op.factors) if isinstance(right.op, Compose) else [right.op]
        if site in (Site.BEFORE_OPERATOR, Site.BOTH_SIDES):
            factors.insert(0, identity)
        if site in (Site.AFTER_OPERATOR, Site.BOTH_SIDES):
            factors.append(identity)
        return ScalarProduct(sp.left, OpApply(Compose(tuple(factors)), right.arg))

    def expand_identities(self, e: Node) -> Node:
        """
        Remplace chaque /x/ . (... I[b] ...)/y/ par la somme finie sur la
        base: /x/ . /m/ ^ /m/ . O/n/ ^ /n/ . /y/
        """
        e = map_children(e, self.expand_identities)
        if not (isinstance(e, ScalarProduct) and isinstance(e.right, OpApply)):
            return e
        factors = list(e.right.op.factors) if isinstance(e.right.op, Compose) else [e.right.op]
        cuts = [i for i, f in enumerate(factors) if isinstance(f, Identity) and f.basis]
        if not cuts:
            return e

        segments: List[List[OpExpr]] = []
        start = 0
        for cut in cuts:
            segments.append(factors[start:cut])
            start = cut + 1
        segments.append(factors[start:])
        labels = [self.model.basis_labels(factors[cut].basis) for cut in cuts]

        terms = []
        for choice in product(*labels):
            vectors: Sequence[Expr] = [e.left] + [State(label) for label in choice] + [e.right.arg]
            products_ = [
                ScalarProduct(vectors[i], _apply(segments[i], vectors[i + 1]))
                for i in range(len(segments))
            ]
            term: Expr = products_[-1]
            for factor in reversed(products_[:-1]):
                term = Scaled(ScalarRef(factor), term, Attachment.DELIMITED)
            terms.append(term)
        return Sum(tuple(terms))


def _apply(segment: List[OpExpr], vector: Expr) -> Expr:
    if not segment:
        return vector
    op = segment[0] if len(segment) == 1 else Compose(tuple(segment))
    return OpApply(op, vector)


def convert(e: Expr, target, antilinear: FrozenSet[str] = frozenset()) -> RewriteResult:
    return Rewriter(antilinear).convert(e, target)


def simplify(e: Expr, antilinear: FrozenSet[str] = frozenset()) -> RewriteResult:
    return Rewriter(antilinear).simplify(e)


def adjoint(e: Expr, antilinear: FrozenSet[str] = frozenset()) -> Expr:
    return Rewriter(antilinear).adjoint(e)


def expand_linear(e: Expr, antilinear: FrozenSet[str] = frozenset()) -> Expr:
    return Rewriter(antilinear).expand_linear(e)


def insert_identity(e: Expr, basis: str, site: Site = Site.AT_DOT,
                    model: Optional[HilbertModel] = None, occurrence: int = 0) -> Expr:
    """Insère (et développe si un modèle est fourni) une résolution de l'identité."""
    rewriter = Rewriter(model=model)
    return rewriter.insert_identity(e, basis, site, occurrence, expand=model is not None)
