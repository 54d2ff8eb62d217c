"""
Tests du tokenizer et du parseur des deux notations.
"""

import pytest

from src.models import Attachment, Notation, Origin
from src.models.errors import (
    MixedNotationError, NotationError, NotationSyntaxError, UnbalancedParenthesisError,
)
from src.models.expr import (
    BraOperator, Compose, Conj, Covector, Dagger, Identity, Literal, MatrixElement,
    OpApply, OuterProduct, ReducedMatrixElement, Scaled, ScalarProduct, ScalarRef,
    ScalarSymbol, State, Sum, Symbol, walk,
)
from src.parsing import TokenKind, parse, parse_file, tokenize


class TestTokenizer:

    def test_slash_tokens(self):
        kinds = [t.kind for t in tokenize("/u/ . O/v/")]
        assert kinds == [TokenKind.STATE, TokenKind.DOT, TokenKind.IDENT,
                         TokenKind.STATE, TokenKind.EOF]

    def test_unicode_aliases(self):
        kinds = [t.kind for t in tokenize("/u/ ∧ /v/ · O†")]
        assert TokenKind.SEP in kinds
        assert TokenKind.DOT in kinds
        assert TokenKind.DAGGER in kinds

    def test_complex_literal(self):
        token = tokenize("(1-2i)")[0]
        assert token.kind is TokenKind.COMPLEX
        assert token.value == complex(1, -2)

    def test_spans(self):
        tokens = tokenize("/u/ . /v/", line_offset=2)
        assert tokens[2].span.start == 6
        assert tokens[2].span.line == 3
        assert tokens[2].span.column == 7

    def test_spans_are_byte_offsets(self):
        """'·' occupe deux octets UTF-8; la colonne compte les caractères."""
        tokens = tokenize("/u/ · /v/")
        assert [(t.span.start, t.span.end) for t in tokens] == [(0, 3), (4, 6), (7, 10), (10, 10)]
        assert tokens[2].span.column == 7
        dagger = tokenize("<u|O†|v>")
        assert [t.span.end for t in dagger][-1] == len("<u|O†|v>".encode("utf-8"))

    def test_unbalanced(self):
        with pytest.raises(UnbalancedParenthesisError):
            tokenize("(/u/ . /v/")
        with pytest.raises(UnbalancedParenthesisError):
            tokenize("/u/ . /v/)")


class TestSlashParser:
    """Lecture de la notation slash."""

    def test_scalar_product(self):
        result = parse("/u/ . /v/")
        assert result.notation is Notation.SLASH
        assert result.expr == ScalarProduct(State("u"), State("v"))

    def test_operator_on_the_right(self):
        assert parse("/psi/ . O/xi/").expr == ScalarProduct(
            State("psi"), OpApply(Symbol("O"), State("xi")))

    def test_dagger_on_the_left(self):
        assert parse("dag(O)/psi/ . /xi/").expr == ScalarProduct(
            OpApply(Dagger(Symbol("O")), State("psi")), State("xi"))

    def test_operator_chain(self):
        assert parse("A B/v/").expr == OpApply(Symbol("A"), OpApply(Symbol("B"), State("v")))
        assert parse("dag(A B)/v/").expr == OpApply(
            Dagger(Compose((Symbol("A"), Symbol("B")))), State("v"))

    def test_covector_and_outer_product(self):
        assert parse("/psi/ .").expr == Covector(State("psi"))
        assert parse("/u/ ^ /v/ .").expr == OuterProduct(State("u"), State("v"))

    def test_delimited_chain(self):
        """/u/ ^ /v1/ . /w1/ ^ /v2/ . /w2/: vecteur suivi de deux constantes."""
        expr = parse("/u/ ^ /v1/ . /w1/ ^ /v2/ . /w2/").expr
        assert isinstance(expr, Scaled)
        assert expr.attachment is Attachment.DELIMITED
        assert expr.term == State("u")
        products = [n for n in walk(expr) if isinstance(n, ScalarProduct)]
        assert products == [ScalarProduct(State("v1"), State("w1")),
                            ScalarProduct(State("v2"), State("w2"))]

    def test_delimited_scalar(self):
        expr = parse("/x/ . /n/ ^ /n/ . /y/").expr
        assert expr == Scaled(ScalarRef(ScalarProduct(State("x"), State("n"))),
                              ScalarProduct(State("n"), State("y")), Attachment.DELIMITED)

    def test_bound_constant(self):
        expr = parse("c/psi/ . /xi/").expr
        assert expr == ScalarProduct(
            Scaled(ScalarSymbol("c"), State("psi"), Attachment.BOUND), State("xi"))

    def test_literal_constants(self):
        assert parse("2/u/").expr == Scaled(Literal(2), State("u"), Attachment.BOUND)
        assert parse("(1+2i)/u/").expr == Scaled(Literal(1 + 2j), State("u"), Attachment.BOUND)

    def test_conj(self):
        assert parse("conj(/u/ . /v/)").expr.scalar == Conj(
            ScalarRef(ScalarProduct(State("u"), State("v"))))

    def test_dotless_matrix_element(self):
        assert parse("/u/O/v/").expr == MatrixElement(
            State("u"), Symbol("O"), State("v"), Origin.SLASH_DOTLESS)

    def test_identity_with_basis(self):
        expr = parse("/x/ . I[e]/y/").expr
        assert expr.right.op == Identity("e")

    def test_scattering_label(self):
        expr = parse("/p1 s1, p2 s2 +/ . /psi/").expr
        assert expr.left == State("p1 s1, p2 s2 +")

    def test_reduced_matrix_element(self):
        assert parse("/j1//O//j2/").expr == ReducedMatrixElement("j1", "O", "j2")

    def test_sum(self):
        expr = parse("/u/ . /v/ + /u/ . /w/").expr
        assert isinstance(expr, Sum)
        assert len(expr.terms) == 2

    def test_leaves_carry_spans(self):
        expr = parse("A/u/ . B/v/").expr
        for node in walk(expr):
            if isinstance(node, (State, Symbol)):
                assert node.span is not None
        assert expr.right.arg.span.column == 9


class TestBraketParser:
    """Lecture de la notation bra-ket."""

    def test_bracket(self):
        result = parse("<u|v>")
        assert result.notation is Notation.BRAKET
        assert result.expr == ScalarProduct(State("u"), State("v"))

    def test_chained_matrix_element(self):
        assert parse("<u|O|v>").expr == MatrixElement(
            State("u"), Symbol("O"), State("v"), Origin.BRAKET_CHAINED)

    def test_bra_operator(self):
        assert parse("<psi|O").expr == BraOperator(State("psi"), Symbol("O"))

    def test_left_and_right_action_differ(self):
        left = parse("(<u|O)|v>").expr
        right = parse("<u|(O|v>)").expr
        assert left == MatrixElement(State("u"), Symbol("O"), State("v"), Origin.BRA_ACTION)
        assert right == ScalarProduct(State("u"), OpApply(Symbol("O"), State("v")))
        assert left != right

    def test_outer_product(self):
        assert parse("|u><v|").expr == OuterProduct(State("u"), State("v"))

    def test_dagger_mark(self):
        expr = parse("<psi|O†|xi>").expr
        assert expr.op == Dagger(Symbol("O"))

    def test_ket_and_bra(self):
        assert parse("|u>").expr == State("u")
        assert parse("<u|").expr == Covector(State("u"))
        assert parse("O|u>").expr == OpApply(Symbol("O"), State("u"))

    def test_hint(self):
        assert parse("<u|v>", hint="braket").notation is Notation.BRAKET
        with pytest.raises(NotationError):
            parse("<u|v>", hint="slash")


class TestParseErrors:

    def test_mixed_notation(self):
        """<u|/v/: erreur à la colonne du '/'."""
        with pytest.raises(MixedNotationError) as exc_info:
            parse("<u|/v/")
        assert exc_info.value.span.column == 4

    def test_expected_tokens(self):
        with pytest.raises(NotationSyntaxError) as exc_info:
            parse("/u/ .. /v/")
        assert exc_info.value.expected

    def test_empty(self):
        with pytest.raises(NotationSyntaxError):
            parse("   ")

    def test_delimiter_rejected_in_braket(self):
        with pytest.raises(NotationError):
            parse("|u> ^ <v|")


class TestParseFile:

    def test_lines_and_comments(self):
        text = "/u/ . /v/\n  # note\n<a|b>\n<u|/v/\n/w/\n"
        results = parse_file(text)
        assert [line for line, _ in results] == [1, 3, 4, 5]
        assert results[0][1].notation is Notation.SLASH
        assert results[1][1].notation is Notation.BRAKET
        assert isinstance(results[2][1], MixedNotationError)
        assert results[3][1].expr == State("w")

    def test_error_lines_use_file_numbering(self):
        results = parse_file("/u/\n\n/v/ . (\n")
        error = results[1][1]
        assert isinstance(error, NotationError)
        assert error.span.line == 3

    def test_corpus_parses(self, corpus_lines):
        """Chaque expression du corpus se lit sans erreur."""
        assert len(corpus_lines) >= 30
        for line in corpus_lines:
            parse(line)
