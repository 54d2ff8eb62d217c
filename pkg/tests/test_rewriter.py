"""
Tests des réécritures: simplification, conversion, adjoint, identité.
"""

import numpy as np
import pytest
from hypothesis import given, settings

from src.models import Notation
from src.models.errors import InvalidSiteError, NotOperatorValuedError, UnknownSymbolError
from src.models.expr import Compose, Dagger, OperatorTerm, Scaled, ScalarSymbol, Symbol, depth
from src.numeric import Evaluator
from src.parsing import parse
from src.rendering import render_braket, render_slash
from src.rewriting import Rewriter, Site, adjoint, convert, expand_linear, insert_identity, simplify
from src.rewriting.rules import CHAINED_NOTE, INVOLUTION_NOTE

from .conftest import small_finite_model
from .strategies import MAX_DEPTH, SCALAR_VALUES, expressions, operator_valued, scalar_products


def same_value(evaluator, first, second):
    left, right = evaluator.value(first), evaluator.value(second)
    assert left.kind is right.kind
    np.testing.assert_allclose(np.asarray(left.data), np.asarray(right.data), rtol=1e-9, atol=1e-9)


class TestSimplify:

    def test_constants_move_outward(self):
        assert render_slash(simplify(parse("c/u/ . /v/").expr).expr) == "conj(c) ^ /u/ . /v/"
        assert render_slash(simplify(parse("/u/ . c/v/").expr).expr) == "c ^ /u/ . /v/"

    def test_literal_conjugate_is_folded(self):
        expr = simplify(parse("(1+2i)/u/ . /v/").expr).expr
        assert render_slash(expr) == "(1.0-2.0i) ^ /u/ . /v/"

    def test_dotless_form_is_expanded(self):
        assert simplify(parse("/u/O/v/").expr).expr == parse("/u/ . O/v/").expr

    def test_projection_acting_on_a_vector(self):
        expr = simplify(parse("(/u/ ^ /v/ .)/w/").expr).expr
        assert render_slash(expr) == "/u/ ^ /v/ . /w/"

    def test_conjugate_symmetry(self):
        expr = simplify(parse("/v/ . /u/ + /u/ . /v/").expr).expr
        assert render_slash(expr) == "conj(/u/ . /v/) + /u/ . /v/"

    @given(expressions)
    @settings(max_examples=500, deadline=None)
    def test_idempotent(self, expr):
        assert depth(expr) <= MAX_DEPTH
        once = simplify(expr).expr
        assert simplify(once).expr == once

    @given(expressions)
    @settings(max_examples=100, deadline=None)
    def test_trace_replays(self, expr):
        result = simplify(expr)
        assert result.trace.replay() == result.expr


class TestConvert:
    """Correspondance slash <-> bra-ket."""

    def test_slash_to_braket(self):
        result = convert(parse("/u/ . O/v/").expr, Notation.BRAKET)
        assert render_braket(result.expr).text == "<u|O|v>"
        assert CHAINED_NOTE in result.trace.notes

    def test_right_action_becomes_chained(self):
        result = convert(parse("<u|(O|v>)").expr, "braket")
        assert render_braket(result.expr).text == "<u|O|v>"

    def test_braket_to_slash(self):
        assert render_slash(convert(parse("<psi|O").expr, "slash").expr) == "dag(O)/psi/ ."
        assert render_slash(convert(parse("<u|O|v>").expr, "slash").expr) == "/u/ . O/v/"
        assert render_slash(convert(parse("(<u|O)|v>").expr, "slash").expr) == "dag(O)/u/ . /v/"

    def test_left_action_round_trip(self):
        result = convert(parse("dag(O)/u/ . /v/").expr, "braket")
        assert render_braket(result.expr).text == "(<u|O)|v>"

    def test_antilinear_stays_in_slash_form(self):
        result = Rewriter(frozenset({"K"})).convert(parse("/u/ . K/v/").expr, "braket")
        assert render_slash(result.expr) == "/u/ . K/v/"
        assert CHAINED_NOTE not in result.trace.notes

    def test_model_supplies_antilinear_symbols(self, finite_model):
        rewriter = Rewriter(model=finite_model)
        assert "K" in rewriter.antilinear
        result = rewriter.convert(parse("/u/ . K/v/").expr, "braket")
        assert render_braket(result.expr, rewriter.antilinear).text == "<u|(K|v>)"

    @given(expressions)
    @settings(max_examples=150, deadline=None)
    def test_round_trip(self, expr):
        there = convert(expr, Notation.BRAKET).expr
        assert convert(there, Notation.SLASH).expr == simplify(expr).expr

    def test_corpus_round_trip(self, corpus_lines):
        for line in corpus_lines:
            expr = parse(line).expr
            for target in Notation:
                direct = convert(expr, target).expr
                for other in Notation:
                    assert convert(convert(expr, other).expr, target).expr == direct, line

    def test_trace_format(self):
        trace = convert(parse("<u|O|v>").expr, "slash").trace
        assert trace.format() == "1. chained-to-product: /u/O/v/ => /u/ . O/v/"
        assert trace.format("braket").startswith("1. chained-to-product: <u|O|v> => <u|(O|v>)")


class TestAdjoint:

    def test_outer_product(self):
        assert render_slash(adjoint(parse("/u/ ^ /v/ .").expr)) == "/v/ ^ /u/ ."

    def test_scaled_outer_product(self):
        assert render_slash(adjoint(parse("c ^ /u/ ^ /v/ .").expr)) == "conj(c) ^ /v/ ^ /u/ ."

    def test_composition_reverses(self):
        expr = OperatorTerm(Compose((Symbol("A"), Symbol("B"))))
        assert adjoint(expr) == OperatorTerm(Compose((Dagger(Symbol("B")), Dagger(Symbol("A")))))

    def test_antilinear_keeps_constant(self):
        expr = Scaled(ScalarSymbol("c"), OperatorTerm(Symbol("K")))
        result = adjoint(expr, frozenset({"K"}))
        assert result == Scaled(ScalarSymbol("c"), OperatorTerm(Dagger(Symbol("K"))))

    def test_involution_note(self):
        result = Rewriter().adjoint_with_trace(OperatorTerm(Dagger(Symbol("A"))))
        assert result.expr == OperatorTerm(Symbol("A"))
        assert INVOLUTION_NOTE in result.trace.notes

    def test_not_operator_valued(self):
        with pytest.raises(NotOperatorValuedError):
            adjoint(parse("/u/ . /v/").expr)

    @given(operator_valued)
    @settings(max_examples=100, deadline=None)
    def test_involution(self, expr):
        assert adjoint(adjoint(expr)) == simplify(expr).expr


class TestExpandLinear:

    def test_right_slot_is_linear(self):
        expr = expand_linear(parse("/u/ . (c/v/ + /w/)").expr)
        assert render_slash(expr) == "c ^ /u/ . /v/ + /u/ . /w/"

    def test_left_slot_is_antilinear(self):
        expr = expand_linear(parse("(c/v/ + /w/) . /u/").expr)
        assert render_slash(expr) == "conj(c) ^ /v/ . /u/ + /w/ . /u/"

    def test_antilinear_operator_conjugates(self):
        expr = expand_linear(parse("/u/ . K(c/v/)").expr, frozenset({"K"}))
        assert render_slash(expr) == "conj(c) ^ /u/ . K/v/"


class TestInsertIdentity:

    def test_at_dot_expands_over_basis(self, finite_model):
        expr = insert_identity(parse("/x/ . /y/").expr, "e", model=finite_model)
        assert render_slash(expr) == "/x/ . /e1/ ^ /e1/ . /y/ + /x/ . /e2/ ^ /e2/ . /y/"
        same_value(Evaluator(finite_model), expr, parse("/x/ . /y/").expr)

    def test_without_model_keeps_symbol(self):
        expr = insert_identity(parse("/x/ . /y/").expr, "e")
        assert render_slash(expr) == "/x/ . I[e]/y/"

    def test_before_operator(self, finite_model):
        rewriter = Rewriter(model=finite_model)
        original = parse("/u/ . O/v/").expr
        inserted = rewriter.insert_identity(original, "e", Site.BEFORE_OPERATOR, expand=False)
        assert render_slash(inserted) == "/u/ . (I[e] O)/v/"
        expanded = rewriter.insert_identity(original, "e", Site.BEFORE_OPERATOR)
        assert render_slash(expanded) == "/u/ . /e1/ ^ /e1/ . O/v/ + /u/ . /e2/ ^ /e2/ . O/v/"
        same_value(Evaluator(finite_model), expanded, original)

    def test_both_sides(self, finite_model):
        original = parse("/u/ . O/v/").expr
        expanded = insert_identity(original, "e", Site.BOTH_SIDES, model=finite_model)
        assert len(expanded.terms) == 4
        same_value(Evaluator(finite_model), expanded, original)

    def test_occurrence(self, finite_model):
        expr = parse("/u/ . /v/ + /x/ . /y/").expr
        result = Rewriter(model=finite_model).insert_identity(expr, "e", occurrence=1, expand=False)
        assert render_slash(result) == "/u/ . /v/ + /x/ . I[e]/y/"

    def test_invalid_sites(self, finite_model):
        rewriter = Rewriter(model=finite_model)
        with pytest.raises(InvalidSiteError):
            rewriter.insert_identity(parse("/x/ . /y/").expr, "e", Site.AFTER_OPERATOR)
        with pytest.raises(InvalidSiteError):
            rewriter.insert_identity(parse("/x/ . /y/").expr, "e", occurrence=1)
        with pytest.raises(InvalidSiteError):
            Rewriter().insert_identity(parse("/x/ . /y/").expr, "e")
        with pytest.raises(UnknownSymbolError):
            rewriter.insert_identity(parse("/x/ . /y/").expr, "f")


class TestSemanticPreservation:
    """Les réécritures ne changent pas la valeur numérique."""

    def setup_method(self):
        self.evaluator = Evaluator(small_finite_model(seed=3), scalars=SCALAR_VALUES)

    @given(expressions)
    @settings(max_examples=100, deadline=None)
    def test_simplify(self, expr):
        same_value(self.evaluator, expr, simplify(expr).expr)

    @given(expressions)
    @settings(max_examples=100, deadline=None)
    def test_convert(self, expr):
        same_value(self.evaluator, expr, convert(expr, Notation.BRAKET).expr)

    @given(scalar_products)
    @settings(max_examples=100, deadline=None)
    def test_expand_linear(self, expr):
        same_value(self.evaluator, expr, expand_linear(expr))

    @given(operator_valued)
    @settings(max_examples=50, deadline=None)
    def test_adjoint_matrix(self, expr):
        matrix = self.evaluator.value(expr).data
        daggered = self.evaluator.value(adjoint(expr)).data
        np.testing.assert_allclose(daggered, np.conj(matrix).T, rtol=1e-9, atol=1e-9)
