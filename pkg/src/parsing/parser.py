"""
Parseur des notations slash et bra-ket.

Grammaire (slash):

    sum      := wedge ('+' wedge)*
    wedge    := dot ('^' dot)*                 repliée de droite à gauche
    dot      := product ['.' [product]]        '.' final: covecteur
    product  := juxt ('*' juxt)*               constantes uniquement
    juxt     := atom+                          c/u/, A B/v/, /u/O/v/
    atom     := /u/ | /A//O//B/ | nombre | (a+bi) | c | conj(..) | A | dag(..)
                | I | I[e] | '(' sum ')' | atom '†'

En bra-ket, '^' et '.' sont interdits; la juxtaposition joue le rôle du
produit: |u><v|w> est le vecteur |u> multiplié par <v|w>.
"""

from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence, Tuple, Union

from ..models.errors import MixedNotationError, NotationError, NotationSyntaxError
from ..models.expr import (
    Attachment, BraOperator, Compose, Conj, Covector, Dagger, Expr, Identity,
    Literal, MatrixElement, Notation, OpApply, OperatorTerm, OpExpr,
    Origin, OuterOp, OuterProduct, ReducedMatrixElement, Scaled, ScalarExpr,
    ScalarProduct, ScalarRef, ScalarSymbol, ScalarTerm, State, Sum, Symbol,
    Times, ValueKind, kind_of,
)
from ..models.span import SourceSpan
from ..utils.logger import get_logger
from .tokenizer import Token, TokenKind, tokenize

logger = get_logger()

KEYWORDS = {"dag", "conj"}

ATOM_START = frozenset({
    TokenKind.STATE, TokenKind.REDUCED, TokenKind.NUMBER, TokenKind.COMPLEX,
    TokenKind.IDENT, TokenKind.IDENTITY, TokenKind.LPAREN, TokenKind.BRA,
    TokenKind.KET,
})

HINTS = {"auto": None, "slash": Notation.SLASH, "braket": Notation.BRAKET}


@dataclass
class ParseResult:
    """
    Résultat d'une lecture.

    Attributes:
        expr: Expression, chaque feuille porte sa position
        notation: Notation détectée
        warnings: Avertissements non bloquants
    """
    expr: Expr
    notation: Notation
    warnings: List[str] = field(default_factory=list)


@dataclass(frozen=True)
class _Item:
    """
    Élément intermédiaire: constante, opérateur ou expression.

    from_bra/from_ket marquent les jetons bra-ket bruts, nécessaires au
    regroupement <u|O|v>.
    """
    node: Union[Expr, OpExpr, ScalarExpr]
    span: SourceSpan
    from_bra: bool = False
    from_ket: bool = False

    @property
    def is_scalar(self) -> bool:
        if isinstance(self.node, ScalarExpr):
            return True
        return isinstance(self.node, Expr) and kind_of(self.node) is ValueKind.SCALAR

    @property
    def is_scalar_atom(self) -> bool:
        return isinstance(self.node, ScalarExpr)

    @property
    def is_operator(self) -> bool:
        if isinstance(self.node, OpExpr):
            return True
        return isinstance(self.node, Expr) and kind_of(self.node) is ValueKind.OPERATOR

    @property
    def is_vector(self) -> bool:
        return isinstance(self.node, Expr) and kind_of(self.node) is ValueKind.VECTOR

    @property
    def is_covector(self) -> bool:
        return isinstance(self.node, Expr) and kind_of(self.node) is ValueKind.COVECTOR


def _at(node, span: SourceSpan):
    return replace(node, span=span)


class Parser:
    """
    Parseur descendant récursif, un jeton de regard (deux pour dag( et conj().
    """

    def __init__(self, text: str, hint: str = "auto", line_offset: int = 0):
        if hint not in HINTS:
            raise ValueError(f"Unknown notation hint '{hint}'")
        self.text = text
        self.tokens = tokenize(text, line_offset)
        self.position = 0
        self.notation: Optional[Notation] = HINTS[hint]
        self.warnings: List[str] = []

    # --- Jetons -------------------------------------------------------------

    @property
    def current(self) -> Token:
        return self.tokens[self.position]

    def peek(self, offset: int = 1) -> Token:
        index = min(self.position + offset, len(self.tokens) - 1)
        return self.tokens[index]

    def advance(self) -> Token:
        token = self.current
        self._check_notation(token)
        self.position += 1
        return token

    def expect(self, kind: TokenKind) -> Token:
        if self.current.kind is not kind:
            raise NotationSyntaxError(
                f"unexpected {self._describe(self.current)}", self.current.span, [kind.value]
            )
        return self.advance()

    def _describe(self, token: Token) -> str:
        if token.kind is TokenKind.EOF:
            return "end of input"
        return f"'{token.text}'"

    def _check_notation(self, token: Token):
        family = token.notation
        if family is None:
            return
        if self.notation is None:
            self.notation = family
            logger.debug(f"Detected {family.value} notation at {token.span}")
        elif family is not self.notation:
            raise MixedNotationError(
                f"{family.value} token '{token.text}' inside a {self.notation.value} expression",
                token.span
            )
        if token.kind is TokenKind.SEP and token.text != "^":
            self.warnings.append(f"{token.span}: '{token.text}' read as the delimiter '^'")

    # --- Conversions --------------------------------------------------------

    def to_expr(self, item: _Item) -> Expr:
        node = item.node
        if isinstance(node, ScalarRef):
            return node.expr
        if isinstance(node, ScalarExpr):
            return ScalarTerm(node, span=item.span)
        if isinstance(node, OpExpr):
            return OperatorTerm(node, span=item.span)
        return node

    def to_scalar(self, item: _Item) -> ScalarExpr:
        node = item.node
        if isinstance(node, ScalarExpr):
            return node
        if isinstance(node, ScalarTerm):
            return node.scalar
        if item.is_scalar:
            return ScalarRef(node, span=item.span)
        raise NotationSyntaxError("expected a scalar", item.span, ["scalar"])

    def to_op(self, item: _Item) -> OpExpr:
        node = item.node
        if isinstance(node, OpExpr):
            return node
        if isinstance(node, OperatorTerm):
            return node.op
        if isinstance(node, OuterProduct):
            return OuterOp(node, span=item.span)
        raise NotationSyntaxError("expected an operator", item.span, ["operator"])

    def to_vector(self, item: _Item) -> Expr:
        if not item.is_vector:
            raise NotationSyntaxError("expected a vector", item.span, ["state"])
        return item.node

    # --- Grammaire ----------------------------------------------------------

    def parse(self) -> ParseResult:
        if self.current.kind is TokenKind.EOF:
            raise NotationSyntaxError("empty expression", self.current.span, ["state", "bra", "ket"])
        item = self.parse_sum()
        if self.current.kind is not TokenKind.EOF:
            raise NotationSyntaxError(
                f"unexpected {self._describe(self.current)}", self.current.span,
                ["+", "^", ".", "end of input"]
            )
        expr = self.to_expr(item)
        return ParseResult(expr=expr, notation=self.notation or Notation.SLASH,
                           warnings=list(self.warnings))

    def parse_sum(self) -> _Item:
        items = [self.parse_wedge()]
        while self.current.kind is TokenKind.PLUS:
            self.advance()
            items.append(self.parse_wedge())
        if len(items) == 1:
            return items[0]
        span = items[0].span.cover(items[-1].span)
        return _Item(Sum(tuple(self.to_expr(i) for i in items), span=span), span)

    def parse_wedge(self) -> _Item:
        groups = [self.parse_dot()]
        while self.current.kind is TokenKind.SEP:
            self.advance()
            groups.append(self.parse_dot())
        return self.fold(groups)

    def parse_dot(self) -> _Item:
        left = self.parse_product()
        if self.current.kind is not TokenKind.DOT:
            return left
        dot = self.advance()
        if self.current.kind in ATOM_START:
            right = self.parse_product()
            span = left.span.cover(right.span)
            node = ScalarProduct(self.to_vector(left), self.to_vector(right), span=span)
            return _Item(node, span)
        span = left.span.cover(dot.span)
        return _Item(Covector(self.to_vector(left), span=span), span)

    def parse_product(self) -> _Item:
        factors = [self.parse_juxt()]
        while self.current.kind is TokenKind.STAR:
            self.advance()
            factors.append(self.parse_juxt())
        if len(factors) == 1:
            return factors[0]
        span = factors[0].span.cover(factors[-1].span)
        return _Item(Times(tuple(self.to_scalar(f) for f in factors), span=span), span)

    def parse_juxt(self) -> _Item:
        if self.current.kind not in ATOM_START:
            raise NotationSyntaxError(
                f"unexpected {self._describe(self.current)}", self.current.span,
                ["state", "bra", "ket", "operator", "scalar", "("]
            )
        items = []
        while self.current.kind in ATOM_START:
            items.append(self.parse_atom())
        if self.notation is Notation.BRAKET:
            return self.braket_juxt(items)
        return self.slash_juxt(items)

    def parse_atom(self) -> _Item:
        token = self.current
        kind = token.kind
        if kind is TokenKind.STATE:
            self.advance()
            item = _Item(State(token.value, span=token.span), token.span)
        elif kind is TokenKind.REDUCED:
            self.advance()
            left, op, right = token.value
            item = _Item(ReducedMatrixElement(left, op, right, span=token.span), token.span)
        elif kind in (TokenKind.NUMBER, TokenKind.COMPLEX):
            self.advance()
            item = _Item(Literal(token.value, span=token.span), token.span)
        elif kind is TokenKind.IDENTITY:
            self.advance()
            item = _Item(Identity(token.value, span=token.span), token.span)
        elif kind is TokenKind.IDENT:
            item = self.parse_identifier()
        elif kind is TokenKind.LPAREN:
            self.advance()
            inner = self.parse_sum()
            close = self.expect(TokenKind.RPAREN)
            item = _Item(inner.node, token.span.cover(close.span))
        elif kind is TokenKind.BRA:
            self.advance()
            state = State(token.value, span=token.span)
            if self.current.kind is TokenKind.KET_TAIL:
                tail = self.advance()
                span = token.span.cover(tail.span)
                right = State(tail.value, span=tail.span)
                item = _Item(ScalarProduct(state, right, span=span), span)
            else:
                item = _Item(Covector(state, span=token.span), token.span, from_bra=True)
        else:
            self.advance()
            item = _Item(State(token.value, span=token.span), token.span, from_ket=True)
        while self.current.kind is TokenKind.DAGGER:
            mark = self.advance()
            span = item.span.cover(mark.span)
            item = _Item(Dagger(self.to_op(item), span=span), span)
        return item

    def parse_identifier(self) -> _Item:
        token = self.advance()
        name = token.value
        if name in KEYWORDS:
            if self.current.kind is not TokenKind.LPAREN:
                raise NotationSyntaxError(f"'{name}' needs an argument", self.current.span, ["("])
            self.advance()
            inner = self.parse_sum()
            close = self.expect(TokenKind.RPAREN)
            span = token.span.cover(close.span)
            if name == "dag":
                return _Item(Dagger(self.to_op(inner), span=span), span)
            return _Item(Conj(self.to_scalar(inner), span=span), span)
        if name == "I":
            return _Item(Identity(span=token.span), token.span)
        if name[0].isupper():
            return _Item(Symbol(name, span=token.span), token.span)
        return _Item(ScalarSymbol(name, span=token.span), token.span)

    # --- Juxtaposition ------------------------------------------------------

    def apply_chain(self, ops: Sequence[_Item], target: Expr, span: SourceSpan) -> Expr:
        """A B/v/ -> OpApply(A, OpApply(B, v))."""
        result = target
        for op in reversed(ops):
            result = OpApply(self.to_op(op), result, span=op.span.cover(span))
        return result

    def compose(self, ops: Sequence[_Item]) -> Tuple[OpExpr, SourceSpan]:
        span = ops[0].span.cover(ops[-1].span)
        if len(ops) == 1:
            return self.to_op(ops[0]), span
        return Compose(tuple(self.to_op(o) for o in ops), span=span), span

    def slash_juxt(self, items: List[_Item]) -> _Item:
        if len(items) == 1:
            return items[0]
        span = items[0].span.cover(items[-1].span)
        first, last, middle = items[0], items[-1], items[1:-1]
        if len(items) == 2 and first.is_scalar and not first.is_operator and isinstance(last.node, Expr):
            node = Scaled(self.to_scalar(first), last.node, Attachment.BOUND, span=span)
            return _Item(node, span)
        if all(i.is_operator for i in items[:-1]) and last.is_vector:
            return _Item(self.apply_chain(items[:-1], last.node, last.span), span)
        if all(i.is_operator for i in items):
            op, _ = self.compose(items)
            return _Item(op, span)
        if first.is_vector and last.is_vector and middle and all(i.is_operator for i in middle):
            op, _ = self.compose(middle)
            node = MatrixElement(first.node, op, last.node, Origin.SLASH_DOTLESS, span=span)
            return _Item(node, span)
        offender = next((i for i in items[1:] if not i.is_operator), items[1])
        raise NotationSyntaxError(
            "cannot juxtapose these terms; use '.' or '^'", offender.span, [".", "^"]
        )

    def braket_juxt(self, items: List[_Item]) -> _Item:
        groups: List[_Item] = []
        index = 0
        while index < len(items):
            item = items[index]
            stop = index + 1 if item.from_bra else index
            while stop < len(items) and items[stop].is_operator:
                stop += 1
            if item.from_bra:
                ops = items[index + 1:stop]
                if not ops:
                    groups.append(item)
                    index += 1
                    continue
                bra = item.node.inner
                op, op_span = self.compose(ops)
                if stop < len(items) and items[stop].from_ket:
                    # <u|O|v>
                    span = item.span.cover(items[stop].span)
                    node = MatrixElement(bra, op, items[stop].node, Origin.BRAKET_CHAINED, span=span)
                    groups.append(_Item(node, span))
                    index = stop + 1
                else:
                    span = item.span.cover(op_span)
                    groups.append(_Item(BraOperator(bra, op, span=span), span))
                    index = stop
                continue
            if stop > index:
                chain = items[index:stop]
                if stop < len(items) and items[stop].is_vector:
                    span = chain[0].span.cover(items[stop].span)
                    node = self.apply_chain(chain, items[stop].node, items[stop].span)
                    groups.append(_Item(node, span))
                    index = stop + 1
                elif len(chain) == 1:
                    groups.append(item)
                    index = stop
                else:
                    op, span = self.compose(chain)
                    groups.append(_Item(op, span))
                    index = stop
                continue
            if item.is_scalar_atom and index + 1 < len(items) and items[index + 1].is_vector:
                target = items[index + 1]
                span = item.span.cover(target.span)
                node = Scaled(self.to_scalar(item), target.node, Attachment.BOUND, span=span)
                groups.append(_Item(node, span))
                index += 2
                continue
            groups.append(item)
            index += 1
        return self.fold(groups)

    # --- Chaînes -----------------------------------------------------------

    def fold(self, groups: List[_Item]) -> _Item:
        """Replie une chaîne de droite à gauche."""
        result = groups[-1]
        for left in reversed(groups[:-1]):
            result = self.combine(left, result)
        return result

    def combine(self, left: _Item, right: _Item) -> _Item:
        span = left.span.cover(right.span)
        if left.is_scalar:
            node = Scaled(self.to_scalar(left), self.to_expr(right), Attachment.DELIMITED, span=span)
            return _Item(node, span)
        if left.is_vector:
            if right.is_covector:
                return _Item(OuterProduct(left.node, self.to_bra_vector(right.node), span=span), span)
            if right.is_scalar:
                node = Scaled(self.to_scalar(right), left.node, Attachment.DELIMITED, span=span)
                return _Item(node, span)
            raise NotationSyntaxError("two vectors in one chain", right.span, ["scalar", "covector"])
        if left.is_covector and right.is_vector and self.notation is Notation.BRAKET:
            return _Item(self.apply_covector(left.node, right.node, span), span)
        if left.is_covector:
            raise NotationSyntaxError("a covector must end the chain", left.span, ["end of chain"])
        raise NotationSyntaxError("an operator cannot start a chain", left.span, ["scalar", "state"])

    def to_bra_vector(self, covector: Expr) -> Expr:
        """Vecteur dont le covecteur donné est le dual."""
        if isinstance(covector, Covector):
            return covector.inner
        if isinstance(covector, Scaled):
            return Scaled(Conj(covector.scalar), self.to_bra_vector(covector.term),
                          Attachment.BOUND, span=covector.span)
        if isinstance(covector, BraOperator):
            return OpApply(Dagger(covector.op), covector.bra, span=covector.span)
        raise NotationSyntaxError("unsupported covector", covector.span)

    def apply_covector(self, covector: Expr, vector: Expr, span: SourceSpan) -> Expr:
        if isinstance(covector, Covector):
            return ScalarProduct(covector.inner, vector, span=span)
        if isinstance(covector, BraOperator):
            return MatrixElement(covector.bra, covector.op, vector, Origin.BRA_ACTION, span=span)
        if isinstance(covector, Scaled):
            inner = self.apply_covector(covector.term, vector, span)
            return Scaled(covector.scalar, inner, Attachment.DELIMITED, span=span)
        raise NotationSyntaxError("unsupported covector", covector.span)


def parse(text: str, hint: str = "auto") -> ParseResult:
    """
    Lit une expression dans l'une des deux notations.

    Args:
        text: Texte de l'expression
        hint: 'auto', 'slash' ou 'braket'

    Returns:
        ParseResult

    Raises:
        NotationError: Erreur de syntaxe, mélange de notations, parenthèses
    """
    result = Parser(text, hint).parse()
    logger.debug(f"Parsed {result.notation.value} expression: {text.strip()}")
    return result


def parse_file(text: str, hint: str = "auto") -> List[Tuple[int, Union[ParseResult, NotationError]]]:
    """
    Lit une expression par ligne; '#' introduit un commentaire.

    Les erreurs sont collectées ligne par ligne sans interrompre la lecture.

    Returns:
        Liste de (numéro de ligne, ParseResult ou erreur)
    """
    results = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        try:
            results.append((number, Parser(line, hint, line_offset=number - 1).parse()))
        except NotationError as exc:
            logger.debug(f"Line {number}: {exc}")
            results.append((number, exc))
    return results
