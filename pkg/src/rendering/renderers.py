"""
Rendu des expressions en notation slash, bra-ket et LaTeX.

Le rendu slash est l'inverse exact du parseur: parse(render_slash(e)) == e
pour tout arbre que le parseur peut produire. Les niveaux de précédence
ci-dessous reproduisent ceux de la grammaire:

    somme '+'  <  chaîne '^'  <  point '.'  <  produit '*'  <  juxtaposition  <  atome
"""

from dataclasses import dataclass
from enum import IntEnum
from typing import Dict, FrozenSet, List, Optional, Tuple
import math
import re

from ..models.expr import (
    Attachment, BraOperator, Compose, Conj, Covector, Dagger, Expr, Identity,
    Literal, MatrixElement, OpApply, OperatorTerm, OpExpr, Origin, OuterOp,
    OuterProduct, ReducedMatrixElement, Scaled, ScalarExpr, ScalarProduct,
    ScalarRef, ScalarSymbol, ScalarTerm, State, Sum, Symbol, Times, ValueKind,
    kind_of, operator_symbols,
)

LATEX_PREAMBLE = (
    "\\usepackage{amssymb}\n"
    "\\newcommand{\\lcdot}{\\mathbin{\\stackrel{\\centerdot}{}}}\n"
    "\\newcommand{\\sep}{_{\\scriptscriptstyle\\land}}\n"
)

GREEK_LETTERS = frozenset({
    "alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta",
    "iota", "kappa", "lambda", "mu", "nu", "xi", "pi", "rho", "sigma", "tau",
    "upsilon", "phi", "chi", "psi", "omega",
    "Gamma", "Delta", "Theta", "Lambda", "Xi", "Pi", "Sigma", "Upsilon",
    "Phi", "Psi", "Omega",
})

_LABEL_RE = re.compile(r"^([A-Za-z]+)(\d*)$")

ANTILINEAR_CHAINED = "anti-linear operator in chained form"
COMPOSITE_BRA = "no bra form for a composite vector"


class Precedence(IntEnum):
    SUM = 0
    WEDGE = 1
    DOT = 2
    PRODUCT = 3
    JUXT = 4
    ATOM = 5


def format_literal(value: complex) -> str:
    """'2' pour un entier réel positif, '(a+bi)' sinon."""
    value = complex(value)
    real, imag = value.real, value.imag
    if imag == 0 and real >= 0 and float(real).is_integer() and real < 1e15:
        return str(int(real))
    sign = "-" if math.copysign(1.0, imag) < 0 else "+"
    return f"({real!r}{sign}{abs(imag)!r}i)"


def latex_label(label: str) -> str:
    """psi -> \\psi, psi1 -> \\psi_{1}; les autres étiquettes sont inchangées."""
    match = _LABEL_RE.match(label)
    if match and match.group(1) in GREEK_LETTERS:
        digits = match.group(2)
        return f"\\{match.group(1)}" + (f"_{{{digits}}}" if digits else "")
    return label


class ExprRenderer:
    """
    Base commune: constantes, opérateurs et parenthésage.

    Les sous-classes fournissent expr(e) -> (texte, précédence).
    """

    TIMES = "*"

    def __init__(self, adjoint_names: Optional[Dict[str, str]] = None):
        self.adjoint_names = dict(adjoint_names or {})

    def render(self, e: Expr) -> str:
        return self.expr(e)[0]

    def expr(self, e: Expr) -> Tuple[str, Precedence]:
        raise NotImplementedError

    def wrap(self, e: Expr, minimum: Precedence) -> str:
        text, level = self.expr(e)
        return f"({text})" if level < minimum else text

    # --- Constantes ---------------------------------------------------------

    def conj_text(self, inner: str) -> str:
        return f"conj({inner})"

    def scalar(self, s: ScalarExpr) -> Tuple[str, Precedence]:
        if isinstance(s, Literal):
            return format_literal(s.value), Precedence.ATOM
        if isinstance(s, ScalarSymbol):
            return s.name, Precedence.ATOM
        if isinstance(s, Conj):
            return self.conj_text(self.scalar(s.inner)[0]), Precedence.ATOM
        if isinstance(s, Times):
            parts = [self.scalar_wrapped(f, Precedence.JUXT) for f in s.factors]
            return self.TIMES.join(parts), Precedence.PRODUCT
        if isinstance(s, ScalarRef):
            return self.expr(s.expr)
        raise TypeError(f"Not a scalar: {s!r}")

    def scalar_wrapped(self, s: ScalarExpr, minimum: Precedence) -> str:
        text, level = self.scalar(s)
        return f"({text})" if level < minimum else text

    # --- Opérateurs ---------------------------------------------------------

    def symbol_text(self, name: str) -> str:
        return name

    def identity_text(self, basis: Optional[str]) -> str:
        return f"I[{basis}]" if basis else "I"

    def dagger_text(self, inner: OpExpr) -> str:
        if isinstance(inner, OuterOp):
            return f"dag({self.render(inner.outer)})"
        return f"dag({self.op_chain(inner)})"

    def op_atom(self, op: OpExpr) -> str:
        if isinstance(op, Symbol):
            return self.symbol_text(op.name)
        if isinstance(op, Dagger):
            if isinstance(op.inner, Symbol) and op.inner.name in self.adjoint_names:
                return self.symbol_text(self.adjoint_names[op.inner.name])
            return self.dagger_text(op.inner)
        if isinstance(op, Identity):
            return self.identity_text(op.basis)
        if isinstance(op, Compose):
            return f"({self.op_chain(op)})"
        if isinstance(op, OuterOp):
            return f"({self.render(op.outer)})"
        raise TypeError(f"Not an operator: {op!r}")

    def op_chain(self, op: OpExpr) -> str:
        if isinstance(op, Compose):
            return " ".join(self.op_atom(f) for f in op.factors)
        return self.op_atom(op)


class SlashRenderer(ExprRenderer):
    """Notation slash: /u/, ' . ', ' ^ ', dag(O)."""

    DOT = " . "
    TRAILING_DOT = " ."
    SEP = " ^ "
    PLUS = " + "

    def join(self, left: str, token: str, right: str) -> str:
        return f"{left}{token}{right}"

    def state_text(self, label: str) -> str:
        return f"/{label}/"

    def reduced_text(self, e: ReducedMatrixElement) -> str:
        return f"/{e.left}//{e.op}//{e.right}/"

    def vector_primary(self, e: Expr) -> str:
        if isinstance(e, State):
            return self.state_text(e.label)
        return f"({self.render(e)})"

    def argument(self, arg: Expr) -> str:
        if isinstance(arg, State):
            return self.state_text(arg.label)
        if isinstance(arg, OpApply):
            return " " + self.render(arg)
        return f"({self.render(arg)})"

    def expr(self, e: Expr) -> Tuple[str, Precedence]:
        if isinstance(e, State):
            return self.state_text(e.label), Precedence.ATOM
        if isinstance(e, ReducedMatrixElement):
            return self.reduced_text(e), Precedence.ATOM
        if isinstance(e, Covector):
            return self.wrap(e.inner, Precedence.JUXT) + self.TRAILING_DOT, Precedence.DOT
        if isinstance(e, ScalarProduct):
            text = self.join(self.wrap(e.left, Precedence.JUXT), self.DOT,
                             self.wrap(e.right, Precedence.JUXT))
            return text, Precedence.DOT
        if isinstance(e, OuterProduct):
            bra = self.wrap(e.bra, Precedence.JUXT) + self.TRAILING_DOT
            return self.join(self.wrap(e.ket, Precedence.DOT), self.SEP, bra), Precedence.WEDGE
        if isinstance(e, Scaled):
            return self.scaled(e)
        if isinstance(e, Sum):
            if not e.terms:
                return "0", Precedence.ATOM
            return self.PLUS.join(self.wrap(t, Precedence.WEDGE) for t in e.terms), Precedence.SUM
        if isinstance(e, OpApply):
            return self.op_atom(e.op) + self.argument(e.arg), Precedence.JUXT
        if isinstance(e, MatrixElement):
            text = self.vector_primary(e.bra) + self.op_chain(e.op) + self.vector_primary(e.ket)
            return text, Precedence.JUXT
        if isinstance(e, BraOperator):
            text = self.op_atom(Dagger(e.op)) + self.argument(e.bra) + self.TRAILING_DOT
            return text, Precedence.DOT
        if isinstance(e, ScalarTerm):
            return self.scalar(e.scalar)
        if isinstance(e, OperatorTerm):
            return self.op_chain(e.op), Precedence.JUXT
        raise TypeError(f"Not an expression: {e!r}")

    def scaled(self, e: Scaled) -> Tuple[str, Precedence]:
        if e.attachment is Attachment.BOUND:
            term = self.vector_primary(e.term)
            return self.scalar_wrapped(e.scalar, Precedence.ATOM) + term, Precedence.JUXT
        if isinstance(e.scalar, ScalarRef) and kind_of(e.term) is ValueKind.VECTOR:
            # Vecteur en tête: /u/ ^ /v/ . /w/
            text = self.join(self.wrap(e.term, Precedence.DOT), self.SEP,
                             self.wrap(e.scalar.expr, Precedence.WEDGE))
            return text, Precedence.WEDGE
        text = self.join(self.scalar_wrapped(e.scalar, Precedence.DOT), self.SEP,
                         self.wrap(e.term, Precedence.WEDGE))
        return text, Precedence.WEDGE


class LatexSlashRenderer(SlashRenderer):
    """Notation slash en LaTeX, avec les macros \\lcdot et \\sep."""

    DOT = "\\lcdot"
    TRAILING_DOT = "\\lcdot"
    SEP = "\\sep"
    TIMES = "\\,"

    def join(self, left: str, token: str, right: str) -> str:
        space = " " if right[:1].isalpha() else ""
        return f"{left}{token}{space}{right}"

    def state_text(self, label: str) -> str:
        return f"/{latex_label(label)}/"

    def conj_text(self, inner: str) -> str:
        return f"\\overline{{{inner}}}"

    def identity_text(self, basis: Optional[str]) -> str:
        return f"I_{{{basis}}}" if basis else "I"

    def dagger_text(self, inner: OpExpr) -> str:
        if isinstance(inner, Dagger):
            return f"{{{self.op_atom(inner)}}}^\\dagger"
        return f"{self.op_atom(inner)}^\\dagger"


@dataclass(frozen=True)
class BraketRendering:
    """
    Résultat du rendu bra-ket.

    Attributes:
        text: Texte produit (forme parenthésée de repli si non représentable)
        problems: Constructions sans forme bra-ket chaînée
    """
    text: str
    problems: Tuple[str, ...] = ()

    @property
    def representable(self) -> bool:
        return not self.problems

    @property
    def report(self) -> Optional[str]:
        if self.representable:
            return None
        return "unrepresentable: " + "; ".join(self.problems)

    def __str__(self) -> str:
        return self.text


class BraketRenderer(ExprRenderer):
    """Notation bra-ket: |u>, <u|, <u|v>, <u|O|v>, |u><v|."""

    BRA_OPEN = "<"
    KET_CLOSE = ">"
    BAR = "|"

    def __init__(self, antilinear: FrozenSet[str] = frozenset(),
                 adjoint_names: Optional[Dict[str, str]] = None):
        super().__init__(adjoint_names)
        self.antilinear = frozenset(antilinear)
        self._problems: List[str] = []

    def render_full(self, e: Expr) -> BraketRendering:
        self._problems = []
        text = self.render(e)
        problems = tuple(dict.fromkeys(self._problems))
        return BraketRendering(text, problems)

    def problem(self, message: str):
        self._problems.append(message)

    def is_antilinear(self, op: OpExpr) -> bool:
        return any(name in self.antilinear for name in operator_symbols(op))

    # --- Briques ------------------------------------------------------------

    def label_text(self, label: str) -> str:
        return label

    def ket_state(self, label: str) -> str:
        return f"{self.BAR}{self.label_text(label)}{self.KET_CLOSE}"

    def bra_state(self, label: str) -> str:
        return f"{self.BRA_OPEN}{self.label_text(label)}{self.BAR}"

    def reduced_text(self, e: ReducedMatrixElement) -> str:
        return f"{self.BRA_OPEN}{e.left}{self.BAR}{self.BAR}{e.op}{self.BAR}{self.BAR}{e.right}{self.KET_CLOSE}"

    def ket_arg(self, arg: Expr) -> str:
        if isinstance(arg, State):
            return self.ket_state(arg.label)
        if isinstance(arg, OpApply):
            return " " + self.ket(arg)
        return f"({self.render(arg)})"

    def ket(self, e: Expr) -> str:
        """Texte d'un vecteur en position de ket."""
        if isinstance(e, State):
            return self.ket_state(e.label)
        if isinstance(e, OpApply):
            return self.op_atom(e.op) + self.ket_arg(e.arg)
        if isinstance(e, Scaled) and e.attachment is Attachment.BOUND:
            return self.scalar_wrapped(e.scalar, Precedence.ATOM) + self.ket_arg(e.term)
        return f"({self.render(e)})"

    def bra(self, e: Expr) -> str:
        """Texte du covecteur associé à un vecteur."""
        if isinstance(e, State):
            return self.bra_state(e.label)
        if isinstance(e, Scaled):
            scalar = e.scalar.inner if isinstance(e.scalar, Conj) else Conj(e.scalar)
            return self.scalar_wrapped(scalar, Precedence.ATOM) + self.bra(e.term)
        if isinstance(e, OpApply):
            chain: List[OpExpr] = []
            target: Expr = e
            while isinstance(target, OpApply):
                chain.append(target.op)
                target = target.arg
            if any(self.is_antilinear(op) for op in chain):
                self.problem(ANTILINEAR_CHAINED)
            if not isinstance(target, State):
                self.problem(COMPOSITE_BRA)
                return f"({self.render(e)})^dag"
            # <A B u| = <u| B† A†
            adjoints = [self.op_atom(op.inner if isinstance(op, Dagger) else Dagger(op))
                        for op in reversed(chain)]
            return f"({self.bra_state(target.label)}{' '.join(adjoints)})"
        self.problem(COMPOSITE_BRA)
        return f"({self.render(e)})^dag"

    # --- Expressions --------------------------------------------------------

    def expr(self, e: Expr) -> Tuple[str, Precedence]:
        if isinstance(e, (State, OpApply)):
            return self.ket(e), Precedence.JUXT
        if isinstance(e, ReducedMatrixElement):
            return self.reduced_text(e), Precedence.ATOM
        if isinstance(e, Covector):
            return self.bra(e.inner), Precedence.JUXT
        if isinstance(e, ScalarProduct):
            if isinstance(e.left, State) and isinstance(e.right, State):
                text = (f"{self.BRA_OPEN}{self.label_text(e.left.label)}{self.BAR}"
                        f"{self.label_text(e.right.label)}{self.KET_CLOSE}")
                return text, Precedence.ATOM
            right = self.ket_state(e.right.label) if isinstance(e.right, State) else f"({self.ket(e.right)})"
            return self.bra(e.left) + right, Precedence.JUXT
        if isinstance(e, OuterProduct):
            return self.ket(e.ket) + self.bra(e.bra), Precedence.JUXT
        if isinstance(e, MatrixElement):
            return self.matrix_element(e), Precedence.JUXT
        if isinstance(e, BraOperator):
            if self.is_antilinear(e.op):
                self.problem(ANTILINEAR_CHAINED)
            return self.bra(e.bra) + self.op_chain(e.op), Precedence.JUXT
        if isinstance(e, Scaled):
            return self.scaled(e), Precedence.JUXT
        if isinstance(e, Sum):
            if not e.terms:
                return "0", Precedence.ATOM
            return " + ".join(self.wrap(t, Precedence.WEDGE) for t in e.terms), Precedence.SUM
        if isinstance(e, ScalarTerm):
            return self.scalar(e.scalar)
        if isinstance(e, OperatorTerm):
            return self.op_chain(e.op), Precedence.JUXT
        raise TypeError(f"Not an expression: {e!r}")

    def matrix_element(self, e: MatrixElement) -> str:
        if self.is_antilinear(e.op):
            self.problem(ANTILINEAR_CHAINED)
        if e.origin is Origin.BRA_ACTION:
            ket = self.ket_state(e.ket.label) if isinstance(e.ket, State) else f"({self.ket(e.ket)})"
            return f"({self.bra(e.bra)}{self.op_chain(e.op)}){ket}"
        if isinstance(e.bra, State) and isinstance(e.ket, State) and not self.is_antilinear(e.op):
            return (f"{self.bra_state(e.bra.label)}{self.op_chain(e.op)}"
                    f"{self.ket_state(e.ket.label)}")
        # <u|(O|v>): forme parenthésée
        return f"{self.bra(e.bra)}({self.op_chain(e.op)}{self.ket_arg(e.ket)})"

    def scaled(self, e: Scaled) -> str:
        if e.attachment is Attachment.BOUND:
            return self.scalar_wrapped(e.scalar, Precedence.ATOM) + self.ket_arg(e.term)
        if isinstance(e.scalar, ScalarRef) and kind_of(e.term) is ValueKind.VECTOR:
            ref = self.wrap(e.scalar.expr, Precedence.ATOM)
            return self.ket(e.term) + ref
        return f"{self.scalar_wrapped(e.scalar, Precedence.ATOM)} {self.wrap(e.term, Precedence.WEDGE)}"


class LatexBraketRenderer(BraketRenderer):
    """Notation bra-ket en LaTeX (\\langle, \\rangle)."""

    BRA_OPEN = "\\langle "
    KET_CLOSE = "\\rangle"
    TIMES = "\\,"

    def label_text(self, label: str) -> str:
        return latex_label(label)

    def reduced_text(self, e: ReducedMatrixElement) -> str:
        return f"\\langle {e.left}\\|{e.op}\\|{e.right}\\rangle"

    def conj_text(self, inner: str) -> str:
        return f"\\overline{{{inner}}}"

    def identity_text(self, basis: Optional[str]) -> str:
        return f"I_{{{basis}}}" if basis else "I"

    def dagger_text(self, inner: OpExpr) -> str:
        if isinstance(inner, Dagger):
            return f"{{{self.op_atom(inner)}}}^\\dagger"
        return f"{self.op_atom(inner)}^\\dagger"


def render_slash(e: Expr, adjoint_names: Optional[Dict[str, str]] = None) -> str:
    """
    Rendu canonique en notation slash.

    Args:
        e: Expression
        adjoint_names: Noms d'affichage des adjoints déclarés (P -> Pd)

    Returns:
        Texte déterministe, relisible par le parseur
    """
    return SlashRenderer(adjoint_names).render(e)


def render_braket(e: Expr, antilinear: FrozenSet[str] = frozenset(),
                  adjoint_names: Optional[Dict[str, str]] = None) -> BraketRendering:
    """
    Rendu en notation bra-ket.

    Les opérateurs anti-linéaires ne sont jamais émis sous forme chaînée
    <u|K|v>: la forme parenthésée est produite et le problème est signalé.

    Args:
        e: Expression
        antilinear: Symboles d'opérateurs anti-linéaires
        adjoint_names: Noms d'affichage des adjoints déclarés

    Returns:
        BraketRendering (texte + constructions non représentables)
    """
    return BraketRenderer(antilinear, adjoint_names).render_full(e)


def render_latex(e: Expr, dialect: str = "slash",
                 antilinear: FrozenSet[str] = frozenset(),
                 adjoint_names: Optional[Dict[str, str]] = None) -> str:
    """
    Rendu LaTeX; compile avec LATEX_PREAMBLE.

    Args:
        e: Expression
        dialect: 'slash' ou 'braket'

    Returns:
        Source LaTeX
    """
    if dialect == "slash":
        return LatexSlashRenderer(adjoint_names).render(e)
    if dialect == "braket":
        return LatexBraketRenderer(antilinear, adjoint_names).render_full(e).text
    raise ValueError(f"Unknown LaTeX dialect '{dialect}'")


def render_scalar(s: ScalarExpr) -> str:
    return SlashRenderer().scalar(s)[0]
