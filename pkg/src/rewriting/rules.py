"""
Règles de réécriture.

Chaque règle reçoit un noeud et le contexte, et renvoie le remplaçant ou
None. Les listes en fin de module fixent l'ordre d'application.
"""

from typing import FrozenSet, List, Optional

from ..models.expr import (
    Attachment, BraOperator, Compose, Conj, Covector, Dagger, Identity, Literal,
    MatrixElement, Node, OpApply, OpExpr, Origin, OuterOp, OuterProduct, Scaled,
    ScalarProduct, ScalarRef, ScalarTerm, State, Sum, Symbol, Times, walk,
)
from .engine import RewriteContext, RewriteRule

CHAINED_NOTE = ("chained <u|O|v> stands for /u/ . O/v/ only when u ∈ D(dag(O)) "
                "and v ∈ D(O); run check to confirm")
INVOLUTION_NOTE = "dag(dag(X)) = X assumes X is closed"


def is_antilinear_op(op: OpExpr, antilinear: FrozenSet[str]) -> bool:
    """Une chaîne est anti-linéaire si elle compte un nombre impair de facteurs anti-linéaires."""
    count = sum(1 for n in walk(op) if isinstance(n, Symbol) and n.name in antilinear)
    return count % 2 == 1


def delimited(scalar, term) -> Scaled:
    return Scaled(scalar, term, Attachment.DELIMITED)


# --- Constantes -------------------------------------------------------------

def conj_conj(node: Node, context: RewriteContext) -> Optional[Node]:
    if isinstance(node, Conj) and isinstance(node.inner, Conj):
        return node.inner.inner
    return None


def conj_literal(node: Node, context: RewriteContext) -> Optional[Node]:
    if isinstance(node, Conj) and isinstance(node.inner, Literal):
        return Literal(node.inner.value.conjugate())
    return None


def flatten_times(node: Node, context: RewriteContext) -> Optional[Node]:
    if not isinstance(node, Times):
        return None
    if len(node.factors) == 1:
        return node.factors[0]
    if any(isinstance(f, Times) for f in node.factors):
        factors = []
        for f in node.factors:
            factors.extend(f.factors if isinstance(f, Times) else (f,))
        return Times(tuple(factors))
    return None


def fold_literals(node: Node, context: RewriteContext) -> Optional[Node]:
    if not isinstance(node, Times):
        return None
    literals = [f for f in node.factors if isinstance(f, Literal)]
    if len(literals) < 2:
        return None
    value = complex(1)
    for literal in literals:
        value *= literal.value
    rest = tuple(f for f in node.factors if not isinstance(f, Literal))
    if not rest:
        return Literal(value)
    return Times(rest if value == 1 else (Literal(value),) + rest)


def unwrap_scalar_term(node: Node, context: RewriteContext) -> Optional[Node]:
    if isinstance(node, ScalarRef) and isinstance(node.expr, ScalarTerm):
        return node.expr.scalar
    return None


# --- Opérateurs -------------------------------------------------------------

def double_dagger(node: Node, context: RewriteContext) -> Optional[Node]:
    if isinstance(node, Dagger) and isinstance(node.inner, Dagger):
        return node.inner.inner
    return None


def dagger_compose(node: Node, context: RewriteContext) -> Optional[Node]:
    """dag(A B) = dag(B) dag(A)."""
    if isinstance(node, Dagger) and isinstance(node.inner, Compose):
        return Compose(tuple(Dagger(f) for f in reversed(node.inner.factors)))
    return None


def dagger_outer(node: Node, context: RewriteContext) -> Optional[Node]:
    """dag(/u/ ^ /v/ .) = /v/ ^ /u/ ."""
    if isinstance(node, Dagger) and isinstance(node.inner, OuterOp):
        outer = node.inner.outer
        return OuterOp(OuterProduct(outer.bra, outer.ket))
    return None


def dagger_identity(node: Node, context: RewriteContext) -> Optional[Node]:
    if isinstance(node, Dagger) and isinstance(node.inner, Identity):
        return node.inner
    return None


def flatten_compose(node: Node, context: RewriteContext) -> Optional[Node]:
    if not isinstance(node, Compose):
        return None
    if len(node.factors) == 1:
        return node.factors[0]
    if any(isinstance(f, Compose) for f in node.factors):
        factors = []
        for f in node.factors:
            factors.extend(f.factors if isinstance(f, Compose) else (f,))
        return Compose(tuple(factors))
    return None


# --- Expressions ------------------------------------------------------------

def flatten_sum(node: Node, context: RewriteContext) -> Optional[Node]:
    if not isinstance(node, Sum):
        return None
    if len(node.terms) == 1:
        return node.terms[0]
    if any(isinstance(t, Sum) for t in node.terms):
        terms = []
        for t in node.terms:
            terms.extend(t.terms if isinstance(t, Sum) else (t,))
        return Sum(tuple(terms))
    return None


def expand_dotless(node: Node, context: RewriteContext) -> Optional[Node]:
    """/u/O/v/ est l'écriture sans point de /u/ . O/v/."""
    if isinstance(node, MatrixElement) and node.origin is Origin.SLASH_DOTLESS:
        return ScalarProduct(node.bra, OpApply(node.op, node.ket))
    return None


def outer_action(node: Node, context: RewriteContext) -> Optional[Node]:
    """(/u/ ^ /v/ .) /w/ = /u/ ^ /v/ . /w/"""
    if isinstance(node, OpApply) and isinstance(node.op, OuterOp):
        outer = node.op.outer
        return delimited(ScalarRef(ScalarProduct(outer.bra, node.arg)), outer.ket)
    return None


def extract_outer_constant(node: Node, context: RewriteContext) -> Optional[Node]:
    """/m/ ^ c ^ /n/ . = c ^ /m/ ^ /n/ ."""
    if not isinstance(node, OuterProduct):
        return None
    if isinstance(node.bra, Scaled):
        return delimited(Conj(node.bra.scalar), OuterProduct(node.ket, node.bra.term))
    if isinstance(node.ket, Scaled):
        return delimited(node.ket.scalar, OuterProduct(node.ket.term, node.bra))
    return None


def extract_product_constant(node: Node, context: RewriteContext) -> Optional[Node]:
    """c/u/ . /v/ = conj(c) ^ /u/ . /v/ ; /u/ . c/v/ = c ^ /u/ . /v/"""
    if not isinstance(node, ScalarProduct):
        return None
    if isinstance(node.left, Scaled):
        return delimited(Conj(node.left.scalar), ScalarProduct(node.left.term, node.right))
    if isinstance(node.right, Scaled):
        return delimited(node.right.scalar, ScalarProduct(node.left, node.right.term))
    return None


def extract_covector_constant(node: Node, context: RewriteContext) -> Optional[Node]:
    if isinstance(node, Covector) and isinstance(node.inner, Scaled):
        return delimited(Conj(node.inner.scalar), Covector(node.inner.term))
    return None


def extract_application_constant(node: Node, context: RewriteContext) -> Optional[Node]:
    """O(c/v/) = c ^ O/v/, ou conj(c) ^ O/v/ si O est anti-linéaire."""
    if isinstance(node, OpApply) and isinstance(node.arg, Scaled):
        scalar = node.arg.scalar
        if is_antilinear_op(node.op, context.antilinear):
            scalar = Conj(scalar)
        return delimited(scalar, OpApply(node.op, node.arg.term))
    return None


def merge_scaled(node: Node, context: RewriteContext) -> Optional[Node]:
    if isinstance(node, Scaled) and isinstance(node.term, Scaled):
        return delimited(Times((node.scalar, node.term.scalar)), node.term.term)
    return None


def drop_unit(node: Node, context: RewriteContext) -> Optional[Node]:
    if isinstance(node, Scaled) and isinstance(node.scalar, Literal) and node.scalar.value == 1:
        return node.term
    return None


def distribute_scaled(node: Node, context: RewriteContext) -> Optional[Node]:
    if isinstance(node, Scaled) and isinstance(node.term, Sum):
        return Sum(tuple(Scaled(node.scalar, t, node.attachment) for t in node.term.terms))
    return None


def conjugate_symmetry(node: Node, context: RewriteContext) -> Optional[Node]:
    """
    /v/ . /u/ devient conj(/u/ . /v/) lorsque les deux ordres figurent
    dans l'expression; l'ordre canonique suit les étiquettes.
    """
    if not (isinstance(node, ScalarProduct) and isinstance(node.left, State)
            and isinstance(node.right, State)):
        return None
    if node.left.label <= node.right.label:
        return None
    canonical = ScalarProduct(node.right, node.left)
    if not any(n == canonical for n in walk(context.root)):
        return None
    return ScalarTerm(Conj(ScalarRef(canonical)))


# --- Linéarité --------------------------------------------------------------

def distribute_product(node: Node, context: RewriteContext) -> Optional[Node]:
    if not isinstance(node, ScalarProduct):
        return None
    if isinstance(node.right, Sum):
        return Sum(tuple(ScalarProduct(node.left, t) for t in node.right.terms))
    if isinstance(node.left, Sum):
        return Sum(tuple(ScalarProduct(t, node.right) for t in node.left.terms))
    return None


def distribute_application(node: Node, context: RewriteContext) -> Optional[Node]:
    if isinstance(node, OpApply) and isinstance(node.arg, Sum):
        return Sum(tuple(OpApply(node.op, t) for t in node.arg.terms))
    return None


def distribute_outer(node: Node, context: RewriteContext) -> Optional[Node]:
    if not isinstance(node, OuterProduct):
        return None
    if isinstance(node.ket, Sum):
        return Sum(tuple(OuterProduct(t, node.bra) for t in node.ket.terms))
    if isinstance(node.bra, Sum):
        return Sum(tuple(OuterProduct(node.ket, t) for t in node.bra.terms))
    return None


def distribute_covector(node: Node, context: RewriteContext) -> Optional[Node]:
    if isinstance(node, Covector) and isinstance(node.inner, Sum):
        return Sum(tuple(Covector(t) for t in node.inner.terms))
    return None


# --- Correspondance des notations ------------------------------------------

def chained_to_product(node: Node, context: RewriteContext) -> Optional[Node]:
    """<u|O|v> -> /u/ . O/v/"""
    if isinstance(node, MatrixElement) and node.origin is Origin.BRAKET_CHAINED:
        return ScalarProduct(node.bra, OpApply(node.op, node.ket))
    return None


def bra_action_to_product(node: Node, context: RewriteContext) -> Optional[Node]:
    """(<u|O)|v> -> dag(O)/u/ . /v/"""
    if isinstance(node, MatrixElement) and node.origin is Origin.BRA_ACTION:
        return ScalarProduct(OpApply(Dagger(node.op), node.bra), node.ket)
    return None


def bra_operator_to_covector(node: Node, context: RewriteContext) -> Optional[Node]:
    """<u|O -> dag(O)/u/ ."""
    if isinstance(node, BraOperator):
        return Covector(OpApply(Dagger(node.op), node.bra))
    return None


def product_to_chained(node: Node, context: RewriteContext) -> Optional[Node]:
    """/u/ . O/v/ -> <u|O|v>, sauf pour un opérateur anti-linéaire."""
    if (isinstance(node, ScalarProduct) and isinstance(node.right, OpApply)
            and not isinstance(node.right.op, OuterOp)
            and not is_antilinear_op(node.right.op, context.antilinear)):
        return MatrixElement(node.left, node.right.op, node.right.arg, Origin.BRAKET_CHAINED)
    return None


def adjoint_product_to_bra_action(node: Node, context: RewriteContext) -> Optional[Node]:
    """dag(O)/u/ . /v/ -> (<u|O)|v>"""
    if (isinstance(node, ScalarProduct) and isinstance(node.left, OpApply)
            and isinstance(node.left.op, Dagger)):
        return MatrixElement(node.left.arg, node.left.op.inner, node.right, Origin.BRA_ACTION)
    return None


def covector_to_bra_operator(node: Node, context: RewriteContext) -> Optional[Node]:
    """dag(O)/u/ . -> <u|O"""
    if (isinstance(node, Covector) and isinstance(node.inner, OpApply)
            and isinstance(node.inner.op, Dagger)):
        return BraOperator(node.inner.arg, node.inner.op.inner)
    return None


SIMPLIFY_RULES: List[RewriteRule] = [
    RewriteRule("conj-conj", conj_conj),
    RewriteRule("conj-literal", conj_literal),
    RewriteRule("flatten-times", flatten_times),
    RewriteRule("fold-literals", fold_literals),
    RewriteRule("unwrap-scalar-term", unwrap_scalar_term),
    RewriteRule("double-dagger", double_dagger, INVOLUTION_NOTE),
    RewriteRule("dagger-compose", dagger_compose),
    RewriteRule("dagger-outer", dagger_outer),
    RewriteRule("dagger-identity", dagger_identity),
    RewriteRule("flatten-compose", flatten_compose),
    RewriteRule("flatten-sum", flatten_sum),
    RewriteRule("expand-dotless", expand_dotless),
    RewriteRule("outer-action", outer_action),
    RewriteRule("extract-outer-constant", extract_outer_constant),
    RewriteRule("extract-product-constant", extract_product_constant),
    RewriteRule("extract-covector-constant", extract_covector_constant),
    RewriteRule("extract-application-constant", extract_application_constant),
    RewriteRule("merge-scaled", merge_scaled),
    RewriteRule("drop-unit", drop_unit),
    RewriteRule("distribute-scaled", distribute_scaled),
    RewriteRule("conjugate-symmetry", conjugate_symmetry),
]

LINEARITY_RULES: List[RewriteRule] = [
    RewriteRule("distribute-product", distribute_product),
    RewriteRule("distribute-application", distribute_application),
    RewriteRule("distribute-outer", distribute_outer),
    RewriteRule("distribute-covector", distribute_covector),
]

TO_SLASH_RULES: List[RewriteRule] = [
    RewriteRule("chained-to-product", chained_to_product),
    RewriteRule("bra-action-to-product", bra_action_to_product),
    RewriteRule("bra-operator-to-covector", bra_operator_to_covector),
]

TO_BRAKET_RULES: List[RewriteRule] = [
    RewriteRule("product-to-chained", product_to_chained, CHAINED_NOTE),
    RewriteRule("adjoint-product-to-bra-action", adjoint_product_to_bra_action),
    RewriteRule("covector-to-bra-operator", covector_to_bra_operator),
]
