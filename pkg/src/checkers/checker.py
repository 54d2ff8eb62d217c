"""
Vérificateur de bonne formation.

Parcourt l'expression, applique chaque règle aux noeuds concernés et
propose des réécritures slash bien formées pour les éléments de matrice
rejetés.
"""

from dataclasses import replace
from typing import Any, Dict, List, Optional, Union

from ..models.diagnostic import Diagnostic, Rule, Severity
from ..models.errors import UnknownRuleError, UnknownSymbolError
from ..models.expr import (
    BraOperator, Covector, Dagger, Expr, Identity, MatrixElement, Node, OpApply,
    Origin, ReducedMatrixElement, ScalarProduct, State, Symbol, children,
    map_children, substitute, walk,
)
from ..models.hilbert import HilbertModel
from ..rendering.renderers import render_slash
from ..utils.logger import get_logger
from .base_rule import BaseRule, CheckContext
from .braket_rules import AntilinearChainRule, BraActionRule, ChainedMatrixElementRule
from .domains import DomainOracle
from .functional_rule import FunctionalRule
from .slash_rules import DomainRule, ScalarProductRule

logger = get_logger()

RULE_EXPLANATIONS: Dict[Rule, str] = {
    Rule.BK1: (
        "A chained matrix element <u|O|v> is the common value of (u, O v) and "
        "(O† u, v). It exists only when u∈D(O†) and v∈D(O) simultaneously; if "
        "either u∉D(O†) or v∉D(O) the chained form has no meaning, even when "
        "(u, O v) itself exists. Write /u/ . O/v/ or dag(O)/u/ . /v/ instead."
    ),
    Rule.BK2: (
        "The covector <u|O is the functional v -> (u, O v) seen as acting to the "
        "left. It is represented by the vector O† u, which exists only if u∈D(O†). "
        "When u∈D(O) but u∉D(O†) the expression is ambiguous and is rejected."
    ),
    Rule.BK3: (
        "For an anti-linear operator K, (u, K v) = conj((K† u, v)) and the two "
        "readings of <u|K|v> differ. The chained form is therefore never accepted "
        "for anti-linear operators; the parenthesized forms (<u|K)|v> and "
        "<u|(K|v>) must be written explicitly."
    ),
    Rule.SL1: (
        "/u/ . O/v/ requires only v∈D(O): the operator acts on the right slot "
        "and nothing is asked of u."
    ),
    Rule.SL2: (
        "O/u/ . /v/ requires only u∈D(O): the operator acts on the left slot "
        "and nothing is asked of v."
    ),
    Rule.SL3: (
        "A/u/ . B/v/ requires u∈D(A) and v∈D(B); each slot is checked on its own."
    ),
    Rule.DM1: (
        "Outside a scalar product, O/u/ (as a vector, a covector O/u/ . or inside "
        "a projection-type operator) denotes a vector only if u∈D(O)."
    ),
    Rule.FN1: (
        "A bra in the original sense is an arbitrary linear functional. Only "
        "bounded functionals are represented by vectors (Riesz); due to the "
        "Schwarz inequality every functional of the form (u, .) is bounded, so "
        "an unbounded functional such as v -> (u, O v) with u∉D(O†) is not a bra."
    ),
}

_UNKNOWN_SEVERITY = {
    'warning': Severity.WARNING,
    'error': Severity.ERROR,
    'info': Severity.INFO,
    'ignore': None,
}


def _strip_spans(node: Node) -> Node:
    node = map_children(node, _strip_spans)
    return node if node.span is None else replace(node, span=None)


class Checker:
    """
    Vérifie une expression contre les faits de domaine d'un modèle.
    """

    def __init__(self, model: HilbertModel, config: Optional[Dict[str, Any]] = None):
        """
        Initialise le vérificateur.

        Args:
            model: Modèle d'espace de Hilbert
            config: Section 'checker' de la configuration
        """
        self.model = model
        self.config = config or {}
        rule_config = self.config.get('rules', {})
        self.rules: List[BaseRule] = [
            ChainedMatrixElementRule(rule_config.get('BK1')),
            BraActionRule(rule_config.get('BK2')),
            AntilinearChainRule(rule_config.get('BK3')),
            ScalarProductRule(rule_config.get('SL')),
            DomainRule(rule_config.get('DM1')),
            FunctionalRule(rule_config.get('FN1')),
        ]
        unknown = self.config.get('unknown_membership', 'warning')
        if unknown not in _UNKNOWN_SEVERITY:
            raise ValueError(f"Invalid unknown_membership setting: {unknown}")
        self.context = CheckContext(
            model=model,
            oracle=DomainOracle(model),
            acting_right=bool(self.config.get('acting_right_convention', False)),
            unknown_severity=_UNKNOWN_SEVERITY[unknown]
        )
        logger.debug(f"Checker ready with {len(self.rules)} rules, model {model}")

    # --- Vérification -------------------------------------------------------

    def resolve(self, e: Expr):
        """Vérifie que chaque étiquette et symbole existe dans le modèle."""
        for node in walk(e):
            if isinstance(node, State):
                if node.label not in self.model.states and node.label not in self.model.functionals:
                    raise UnknownSymbolError("state", node.label)
            elif isinstance(node, Symbol):
                if not self.model.has_operator(node.name):
                    raise UnknownSymbolError("operator", node.name)
            elif isinstance(node, Identity) and node.basis is not None:
                if node.basis not in self.model.bases:
                    raise UnknownSymbolError("basis", node.basis)

    def check(self, e: Expr, with_suggestions: bool = True) -> List[Diagnostic]:
        """
        Applique les règles à toute l'expression.

        Args:
            e: Expression lue
            with_suggestions: Joindre une réécriture aux erreurs BK1/BK2

        Returns:
            Diagnostics triés par position

        Raises:
            UnknownSymbolError: Étiquette ou symbole absent du modèle
        """
        self.resolve(e)
        found: List[tuple] = []
        self._visit(e, self.context, found)
        diagnostics = []
        for node, diagnostic in found:
            if with_suggestions and diagnostic.is_error and diagnostic.rule in (Rule.BK1, Rule.BK2):
                candidates = self._clean_candidates(node)
                if candidates:
                    diagnostic = diagnostic.with_suggestion(render_slash(candidates[0]))
            diagnostics.append(diagnostic)
        diagnostics = sorted(dict.fromkeys(diagnostics), key=Diagnostic.sort_key)
        errors = sum(1 for d in diagnostics if d.is_error)
        logger.info(f"Checked expression: {len(diagnostics)} diagnostics, {errors} errors")
        return diagnostics

    def _visit(self, node: Node, context: CheckContext, found: List[tuple]):
        if isinstance(node, ReducedMatrixElement):
            return
        if isinstance(node, Expr):
            for rule in self.rules:
                if rule.is_enabled() and rule.applies_to(node, context):
                    found.extend((node, d) for d in rule.check(node, context))
        if isinstance(node, (ScalarProduct, MatrixElement, BraOperator)):
            inner = context.nested(in_product=True, in_application=False)
        elif isinstance(node, OpApply):
            inner = context.nested(in_application=True)
        elif isinstance(node, Covector):
            inner = context.nested(in_product=False, in_application=False)
        else:
            inner = context
        for child in children(node):
            self._visit(child, inner, found)

    # --- Suggestions --------------------------------------------------------

    def _candidates(self, node: Expr) -> List[Expr]:
        """Formes slash équivalentes: /u/ . O/v/ puis dag(O)/u/ . /v/."""
        if isinstance(node, MatrixElement):
            bra, op, ket = _strip_spans(node.bra), _strip_spans(node.op), _strip_spans(node.ket)
            return [
                ScalarProduct(bra, OpApply(op, ket)),
                ScalarProduct(OpApply(Dagger(op), bra), ket),
            ]
        if isinstance(node, BraOperator):
            bra, op = _strip_spans(node.bra), _strip_spans(node.op)
            return [Covector(OpApply(Dagger(op), bra))]
        return []

    def _clean_candidates(self, node: Expr) -> List[Expr]:
        clean = []
        for candidate in self._candidates(node):
            found: List[tuple] = []
            self._visit(candidate, self.context, found)
            if not any(d.severity in (Severity.ERROR, Severity.WARNING) for _, d in found):
                clean.append(candidate)
        return clean

    def suggest(self, e: Expr) -> List[Expr]:
        """
        Réécritures bien formées de l'expression.

        Le premier élément de matrice (ou covecteur <u|O) en erreur est
        remplacé par chacune de ses formes slash équivalentes qui passent
        la vérification.

        Args:
            e: Expression

        Returns:
            Liste d'expressions (vide si aucune forme n'existe)
        """
        self.resolve(e)
        found: List[tuple] = []
        self._visit(e, self.context, found)
        for node, diagnostic in found:
            if diagnostic.is_error and isinstance(node, (MatrixElement, BraOperator)):
                if isinstance(node, MatrixElement) and node.origin is Origin.SLASH_DOTLESS:
                    continue
                return [substitute(e, node, c) for c in self._clean_candidates(node)]
        return []


def explain(rule: Union[Rule, str]) -> str:
    """
    Explication d'une règle.

    Args:
        rule: Identifiant (Rule ou 'BK1', ...)

    Returns:
        Texte explicatif

    Raises:
        UnknownRuleError: Identifiant inconnu
    """
    if isinstance(rule, str):
        try:
            rule = Rule(rule.strip().upper())
        except ValueError:
            raise UnknownRuleError(f"unknown rule '{rule}'") from None
    return RULE_EXPLANATIONS[rule]
