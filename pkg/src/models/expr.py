"""
Arbre d'expressions commun aux deux notations.

Trois familles de noeuds:
- Expr: états, covecteurs, produits scalaires, opérateurs de type projection...
- OpExpr: chaînes d'opérateurs (symboles, adjoints, compositions, identité)
- ScalarExpr: constantes (littéraux, symboles, conjugués, produits)

Tous les noeuds sont immuables. L'égalité est structurelle: la position
dans le texte source (span) n'entre pas dans la comparaison.
"""

from dataclasses import dataclass, field, fields, replace
from enum import Enum
from typing import Callable, Iterator, Optional, Tuple

from .span import SourceSpan


class Notation(Enum):
    """Notations de surface."""
    SLASH = "slash"
    BRAKET = "braket"


class Attachment(Enum):
    """Rattachement d'une constante: c/psi/ ou c ^ /psi/."""
    BOUND = "bound-to-state"
    DELIMITED = "delimited"


class Origin(Enum):
    """Forme d'origine d'un élément de matrice."""
    BRAKET_CHAINED = "braket-chained"  # <u|O|v>
    SLASH_DOTLESS = "slash-dotless"  # /u/O/v/
    BRA_ACTION = "bra-action"  # (<u|O)|v>


class ValueKind(Enum):
    """Nature de la valeur dénotée par une expression."""
    VECTOR = "vector"
    COVECTOR = "covector"
    SCALAR = "scalar"
    OPERATOR = "operator"


@dataclass(frozen=True)
class Node:
    """Base de tous les noeuds."""
    span: Optional[SourceSpan] = field(
        default=None, compare=False, repr=False, kw_only=True
    )


# --- Constantes -------------------------------------------------------------

@dataclass(frozen=True)
class ScalarExpr(Node):
    pass


@dataclass(frozen=True)
class Literal(ScalarExpr):
    value: complex


@dataclass(frozen=True)
class ScalarSymbol(ScalarExpr):
    name: str


@dataclass(frozen=True)
class Conj(ScalarExpr):
    inner: ScalarExpr


@dataclass(frozen=True)
class Times(ScalarExpr):
    factors: Tuple[ScalarExpr, ...]


@dataclass(frozen=True)
class ScalarRef(ScalarExpr):
    """Expression à valeur scalaire utilisée comme constante."""
    expr: "Expr"


# --- Opérateurs -------------------------------------------------------------

@dataclass(frozen=True)
class OpExpr(Node):
    pass


@dataclass(frozen=True)
class Symbol(OpExpr):
    name: str


@dataclass(frozen=True)
class Dagger(OpExpr):
    inner: OpExpr


@dataclass(frozen=True)
class Compose(OpExpr):
    """Composition; le facteur le plus à droite agit en premier."""
    factors: Tuple[OpExpr, ...]


@dataclass(frozen=True)
class Identity(OpExpr):
    basis: Optional[str] = None


@dataclass(frozen=True)
class OuterOp(OpExpr):
    """Opérateur de type projection utilisé dans une chaîne d'opérateurs."""
    outer: "OuterProduct"


# --- Expressions ------------------------------------------------------------

@dataclass(frozen=True)
class Expr(Node):
    pass


@dataclass(frozen=True)
class State(Expr):
    label: str


@dataclass(frozen=True)
class Covector(Expr):
    """/u/ . ou <u|"""
    inner: Expr


@dataclass(frozen=True)
class OpApply(Expr):
    op: OpExpr
    arg: Expr


@dataclass(frozen=True)
class ScalarProduct(Expr):
    """/u/ . /v/ : anti-linéaire à gauche, linéaire à droite."""
    left: Expr
    right: Expr


@dataclass(frozen=True)
class OuterProduct(Expr):
    """/u/ ^ /v/ . ou |u><v|"""
    ket: Expr
    bra: Expr


@dataclass(frozen=True)
class Scaled(Expr):
    scalar: ScalarExpr
    term: Expr
    attachment: Attachment = Attachment.DELIMITED


@dataclass(frozen=True)
class Sum(Expr):
    terms: Tuple[Expr, ...]


@dataclass(frozen=True)
class MatrixElement(Expr):
    bra: Expr
    op: OpExpr
    ket: Expr
    origin: Origin = Origin.BRAKET_CHAINED


@dataclass(frozen=True)
class BraOperator(Expr):
    """Covecteur <u|O."""
    bra: Expr
    op: OpExpr


@dataclass(frozen=True)
class ScalarTerm(Expr):
    """Constante isolée ou conj(...) à la place d'une expression."""
    scalar: ScalarExpr


@dataclass(frozen=True)
class OperatorTerm(Expr):
    """Opérateur isolé, ex: dag(A B)."""
    op: OpExpr


@dataclass(frozen=True)
class ReducedMatrixElement(Expr):
    """/A//O_j//B/ : atome opaque, sans sémantique."""
    left: str
    op: str
    right: str


# --- Parcours ---------------------------------------------------------------

def children(node: Node) -> Iterator[Node]:
    """Itère sur les sous-noeuds directs, dans l'ordre des champs."""
    for f in fields(node):
        if f.name == "span":
            continue
        value = getattr(node, f.name)
        if isinstance(value, Node):
            yield value
        elif isinstance(value, tuple):
            for item in value:
                if isinstance(item, Node):
                    yield item


def map_children(node: Node, fn: Callable[[Node], Node]) -> Node:
    """Reconstruit le noeud en appliquant fn à chaque sous-noeud direct."""
    changes = {}
    for f in fields(node):
        if f.name == "span":
            continue
        value = getattr(node, f.name)
        if isinstance(value, Node):
            new = fn(value)
            if new is not value:
                changes[f.name] = new
        elif isinstance(value, tuple) and any(isinstance(v, Node) for v in value):
            new_tuple = tuple(fn(v) if isinstance(v, Node) else v for v in value)
            if any(a is not b for a, b in zip(new_tuple, value)):
                changes[f.name] = new_tuple
    return replace(node, **changes) if changes else node


def substitute(tree: Node, target: Node, replacement: Node) -> Node:
    """Remplace le sous-arbre target (comparé par identité) dans tree."""
    if tree is target:
        return replacement
    return map_children(tree, lambda child: substitute(child, target, replacement))


def walk(node: Node) -> Iterator[Node]:
    """Parcours préfixe."""
    yield node
    for child in children(node):
        yield from walk(child)


def depth(node: Node) -> int:
    kids = list(children(node))
    return 1 + (max(depth(k) for k in kids) if kids else 0)


def kind_of(expr: Expr) -> ValueKind:
    """
    Nature de la valeur dénotée par une expression.

    Args:
        expr: Expression

    Returns:
        ValueKind correspondant
    """
    if isinstance(expr, State):
        return ValueKind.VECTOR
    if isinstance(expr, (Covector, BraOperator)):
        return ValueKind.COVECTOR
    if isinstance(expr, (ScalarProduct, MatrixElement, ScalarTerm, ReducedMatrixElement)):
        return ValueKind.SCALAR
    if isinstance(expr, (OuterProduct, OperatorTerm)):
        return ValueKind.OPERATOR
    if isinstance(expr, OpApply):
        return kind_of(expr.arg)
    if isinstance(expr, Scaled):
        return kind_of(expr.term)
    if isinstance(expr, Sum):
        return kind_of(expr.terms[0]) if expr.terms else ValueKind.SCALAR
    raise TypeError(f"Not an expression: {expr!r}")


def is_vector(expr: Expr) -> bool:
    return isinstance(expr, Expr) and kind_of(expr) is ValueKind.VECTOR


def operator_symbols(node: Node) -> Tuple[str, ...]:
    """Symboles d'opérateurs apparaissant dans le noeud (ordre de rencontre)."""
    seen = []
    for n in walk(node):
        if isinstance(n, Symbol) and n.name not in seen:
            seen.append(n.name)
    return tuple(seen)


def state_labels(node: Node) -> Tuple[str, ...]:
    seen = []
    for n in walk(node):
        if isinstance(n, State) and n.label not in seen:
            seen.append(n.label)
    return tuple(seen)


def scalar_symbols(node: Node) -> Tuple[str, ...]:
    seen = []
    for n in walk(node):
        if isinstance(n, ScalarSymbol) and n.name not in seen:
            seen.append(n.name)
    return tuple(seen)


def format_tree(node: Node, indent: int = 0) -> str:
    """Représentation indentée de l'arbre (commande parse)."""
    pad = "  " * indent
    attrs = []
    for f in fields(node):
        if f.name == "span":
            continue
        value = getattr(node, f.name)
        if isinstance(value, Enum):
            attrs.append(f"{f.name}={value.value}")
        elif isinstance(value, (str, complex, int, float)) or value is None:
            attrs.append(f"{f.name}={value!r}")
    head = f"{pad}{type(node).__name__}"
    if attrs:
        head += "(" + ", ".join(attrs) + ")"
    if node.span is not None:
        head += f" @{node.span}"
    lines = [head]
    for child in children(node):
        lines.append(format_tree(child, indent + 1))
    return "\n".join(lines)
