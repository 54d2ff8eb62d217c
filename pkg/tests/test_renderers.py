"""
Tests du rendu slash, bra-ket et LaTeX.
"""

from hypothesis import given, settings

from src.models import Attachment, Notation, Origin
from src.models.expr import (
    BraOperator, Covector, Dagger, Literal, MatrixElement, OpApply,
    ScalarProduct, ScalarSymbol, Scaled, State, Symbol, depth,
)
from src.parsing import parse
from src.rendering import LATEX_PREAMBLE, render_braket, render_latex, render_scalar, render_slash
from src.rendering.renderers import ANTILINEAR_CHAINED, COMPOSITE_BRA, format_literal

from .strategies import MAX_DEPTH, expressions


class TestSlashRendering:
    """Le rendu slash est relu à l'identique par le parseur."""

    def test_canonical_spacing(self):
        assert render_slash(parse("/u/.  /v/").expr) == "/u/ . /v/"
        assert render_slash(parse("/u/^/v/.").expr) == "/u/ ^ /v/ ."
        assert render_slash(parse("<psi|O").expr) == "dag(O)/psi/ ."

    def test_corpus_round_trip(self, corpus_lines):
        for line in corpus_lines:
            result = parse(line)
            if result.notation is not Notation.SLASH:
                continue
            assert parse(render_slash(result.expr)).expr == result.expr, line

    @given(expressions)
    @settings(max_examples=500, deadline=None)
    def test_render_then_parse(self, expr):
        assert depth(expr) <= MAX_DEPTH
        assert parse(render_slash(expr)).expr == expr

    def test_adjoint_names(self):
        expr = OpApply(Dagger(Symbol("O")), State("u"))
        assert render_slash(expr) == "dag(O)/u/"
        assert render_slash(expr, {"O": "Od"}) == "Od/u/"

    def test_literals(self):
        assert format_literal(2) == "2"
        assert format_literal(complex(1, 2)) == "(1.0+2.0i)"
        assert render_scalar(Literal(complex(0, -1))) == "(0.0-1.0i)"
        assert parse(render_slash(Scaled(Literal(1 + 2j), State("u"), Attachment.BOUND))).expr == \
            Scaled(Literal(1 + 2j), State("u"), Attachment.BOUND)


class TestBraketRendering:

    def test_chained_forms(self):
        assert render_braket(parse("/u/ . /v/").expr).text == "<u|v>"
        assert render_braket(parse("/u/O/v/").expr).text == "<u|O|v>"
        assert render_braket(parse("/u/ ^ /v/ .").expr).text == "|u><v|"
        assert render_braket(parse("/u/ .").expr).text == "<u|"

    def test_right_action_is_parenthesized(self):
        rendering = render_braket(parse("/u/ . O/v/").expr)
        assert rendering.text == "<u|(O|v>)"
        assert rendering.representable
        assert rendering.report is None

    def test_bra_operator(self):
        assert render_braket(BraOperator(State("psi"), Symbol("O"))).text == "<psi|O"

    def test_antilinear_never_chained(self):
        """<u|K|v> n'a pas de sens pour K anti-linéaire."""
        expr = MatrixElement(State("u"), Symbol("K"), State("v"), Origin.SLASH_DOTLESS)
        rendering = render_braket(expr, antilinear=frozenset({"K"}))
        assert rendering.text == "<u|(K|v>)"
        assert ANTILINEAR_CHAINED in rendering.problems
        assert not rendering.representable
        assert rendering.report.startswith("unrepresentable")

    def test_antilinear_in_bra(self):
        expr = ScalarProduct(OpApply(Symbol("K"), State("u")), State("v"))
        rendering = render_braket(expr, antilinear=frozenset({"K"}))
        assert rendering.problems == (ANTILINEAR_CHAINED,)

    def test_composite_bra(self):
        inner = OpApply(Symbol("A"), Scaled(ScalarSymbol("c"), State("u"), Attachment.DELIMITED))
        rendering = render_braket(Covector(inner))
        assert COMPOSITE_BRA in rendering.problems
        assert rendering.text.endswith("^dag")

    def test_scaled_bra_conjugates(self):
        expr = Covector(Scaled(ScalarSymbol("c"), State("u"), Attachment.BOUND))
        assert render_braket(expr).text == "conj(c)<u|"


class TestLatexRendering:

    def test_slash_dot_macro(self):
        assert render_latex(parse("/u/ . /v/").expr) == "/u/\\lcdot/v/"

    def test_greek_labels(self):
        assert render_latex(parse("/psi1/ . O/xi/").expr) == "/\\psi_{1}/\\lcdot O/\\xi/"

    def test_braket_dialect(self):
        assert render_latex(parse("<u|v>").expr, dialect="braket") == "\\langle u|v\\rangle"
        assert render_latex(parse("<u|O†|v>").expr, dialect="braket") == \
            "\\langle u|O^\\dagger|v\\rangle"

    def test_conjugate_bar(self):
        expr = Scaled(ScalarSymbol("c"), State("u"), Attachment.BOUND)
        assert render_latex(Covector(expr), dialect="braket").startswith("\\overline{c}")

    def test_preamble_defines_macros(self):
        assert "\\lcdot" in LATEX_PREAMBLE
        assert "\\sep" in LATEX_PREAMBLE
