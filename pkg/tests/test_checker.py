"""
Tests du vérificateur de domaines.
"""

from fractions import Fraction

import pytest

from src.checkers import Checker, explain
from src.models import HilbertModel, Membership, Rule, Severity
from src.models.errors import UnknownRuleError, UnknownSymbolError
from src.parsing import parse
from src.rendering import render_slash

from .conftest import power_law_model


def diagnose(checker, text):
    return checker.check(parse(text).expr)


class TestBraketRules:
    """Éléments de matrice chaînés et action à gauche."""

    def setup_method(self):
        self.model = power_law_model(Fraction(3, 4), 1)
        self.checker = Checker(self.model)

    def test_chained_element_outside_domain(self):
        """<u|P|v> avec u hors de D(P†): BK1 au bra, réécriture proposée."""
        diagnostics = diagnose(self.checker, "<u|P|v>")
        assert len(diagnostics) == 1
        diagnostic = diagnostics[0]
        assert diagnostic.rule is Rule.BK1
        assert diagnostic.severity is Severity.ERROR
        assert diagnostic.span.column == 1
        assert diagnostic.suggestion == "/u/ . P/v/"
        assert diagnostic.metadata['bra_membership'] == "out"
        assert diagnostic.metadata['ket_membership'] == "in"

    def test_suggestion_is_well_formed(self):
        suggestion = diagnose(self.checker, "<u|P|v>")[0].suggestion
        assert diagnose(self.checker, suggestion) == []

    def test_mirror_case_suggests_left_action(self):
        checker = Checker(power_law_model(Fraction(3), 1, q_v=Fraction(3, 4)))
        diagnostics = diagnose(checker, "<u|P|v>")
        assert diagnostics[0].suggestion == "dag(P)/u/ . /v/"

    def test_no_well_formed_rewrite(self):
        """<u|P|u> avec u hors de D(P): aucune forme slash ne convient."""
        diagnostics = diagnose(self.checker, "<u|P|u>")
        assert [d.rule for d in diagnostics] == [Rule.BK1]
        assert diagnostics[0].suggestion is None
        assert self.checker.suggest(parse("<u|P|u>").expr) == []

    def test_suggest_substitutes_in_place(self):
        expr = parse("<u|P|v> + <v|v>").expr
        rewrites = self.checker.suggest(expr)
        assert [render_slash(r) for r in rewrites] == ["/u/ . P/v/ + /v/ . /v/"]

    def test_inside_domain(self):
        assert diagnose(self.checker, "<v|P|v>") == []

    def test_bra_action(self):
        assert [d.rule for d in diagnose(self.checker, "<u|P")] == [Rule.BK2]
        assert [d.rule for d in diagnose(self.checker, "(<u|P)|v>")] == [Rule.BK2]
        assert diagnose(self.checker, "<v|P") == []

    def test_acting_right_convention(self):
        checker = Checker(self.model, {'acting_right_convention': True})
        assert diagnose(checker, "<u|P|v>") == []
        assert [d.rule for d in diagnose(checker, "<v|P|u>")] == [Rule.BK1]

    def test_disabled_rule(self):
        checker = Checker(self.model, {'rules': {'BK1': {'enabled': False}}})
        assert diagnose(checker, "<u|P|v>") == []

    def test_antilinear_chain(self, finite_model):
        checker = Checker(finite_model)
        diagnostics = diagnose(checker, "<u|K|v>")
        assert [d.rule for d in diagnostics] == [Rule.BK3]
        assert diagnostics[0].is_error
        assert diagnose(checker, "<u|(K|v>)") == []

    def test_finite_model_accepts_chained_form(self, finite_model):
        assert diagnose(Checker(finite_model), "<u|O|v>") == []


class TestSlashRules:
    """Chaque emplacement du produit scalaire est vérifié seul."""

    def setup_method(self):
        self.checker = Checker(power_law_model(Fraction(3, 4), 1))

    def test_right_slot(self):
        assert diagnose(self.checker, "/u/ . P/v/") == []
        assert [d.rule for d in diagnose(self.checker, "/v/ . P/u/")] == [Rule.SL1]

    def test_left_slot(self):
        assert diagnose(self.checker, "P/v/ . /u/") == []
        assert [d.rule for d in diagnose(self.checker, "P/u/ . /v/")] == [Rule.SL2]

    def test_both_slots(self):
        assert diagnose(self.checker, "P/v/ . P/v/") == []
        assert [d.rule for d in diagnose(self.checker, "P/v/ . P/u/")] == [Rule.SL3]

    def test_dotless_matrix_element(self):
        assert diagnose(self.checker, "/u/P/v/") == []
        assert [d.rule for d in diagnose(self.checker, "/v/P/u/")] == [Rule.SL1]

    def test_vector_outside_product(self):
        assert [d.rule for d in diagnose(self.checker, "P/u/")] == [Rule.DM1]
        assert [d.rule for d in diagnose(self.checker, "P/u/ .")] == [Rule.DM1]
        assert [d.rule for d in diagnose(self.checker, "/v/ ^ P/u/ .")] == [Rule.DM1]
        assert diagnose(self.checker, "P/v/") == []

    def test_operator_chain(self):
        """P P/v/ exige v dans D(P^2)."""
        assert diagnose(self.checker, "P P/v/") == []
        checker = Checker(power_law_model(Fraction(3, 4), 1, q_v=Fraction(2)))
        assert [d.rule for d in diagnose(checker, "P P/v/")] == [Rule.DM1]

    def test_diagnostics_sorted_by_position(self):
        diagnostics = diagnose(self.checker, "P/u/ . /v/ + /v/ . P/u/")
        starts = [d.span.start for d in diagnostics]
        assert starts == sorted(starts)
        assert len(diagnostics) == 2


class TestFunctionalRule:

    def test_unbounded_functional(self, unbounded_model):
        diagnostics = diagnose(Checker(unbounded_model), "<F|v>")
        assert [d.rule for d in diagnostics] == [Rule.FN1]
        assert diagnostics[0].is_error
        assert "unbounded" in diagnostics[0].message

    def test_bounded_functional_is_info(self, finite_model):
        diagnostics = diagnose(Checker(finite_model), "<F|v>")
        assert [d.severity for d in diagnostics] == [Severity.INFO]
        assert "riesz_solve" in diagnostics[0].message


class TestUnknownMembership:
    """Sévérité configurable quand le modèle ne tranche pas."""

    def setup_method(self):
        self.model = power_law_model(Fraction(3, 4), 1)

    @pytest.fixture(autouse=True)
    def unknown(self, mocker):
        mocker.patch.object(HilbertModel, "chain_membership", return_value=Membership.UNKNOWN)

    def test_default_is_warning(self):
        diagnostics = diagnose(Checker(self.model), "<u|P|v>")
        assert [d.severity for d in diagnostics] == [Severity.WARNING]
        assert diagnostics[0].message.endswith("(domain membership unknown)")

    @pytest.mark.parametrize("setting,expected", [
        ("error", [Severity.ERROR]),
        ("info", [Severity.INFO]),
        ("ignore", []),
    ])
    def test_configured_severity(self, setting, expected):
        checker = Checker(self.model, {'unknown_membership': setting})
        assert [d.severity for d in diagnose(checker, "<u|P|v>")] == expected

    def test_invalid_setting(self):
        with pytest.raises(ValueError):
            Checker(self.model, {'unknown_membership': "loud"})


class TestResolution:

    def setup_method(self):
        self.checker = Checker(power_law_model(Fraction(3, 4), 1))

    def test_unknown_state(self):
        with pytest.raises(UnknownSymbolError):
            diagnose(self.checker, "/z/ . /v/")

    def test_unknown_operator(self):
        with pytest.raises(UnknownSymbolError):
            diagnose(self.checker, "Q/v/")

    def test_reduced_element_is_opaque(self, finite_model):
        assert diagnose(Checker(finite_model), "<j1||O||j2>") == []

    def test_explain(self):
        assert "D(O†)" in explain("bk1")
        assert explain(Rule.SL1).startswith("/u/ . O/v/")
        with pytest.raises(UnknownRuleError):
            explain("ZZ9")

    def test_corpus_checks_clean_on_finite_model(self, finite_model, corpus_lines):
        checker = Checker(finite_model)
        for line in corpus_lines:
            errors = [d for d in checker.check(parse(line).expr) if d.is_error]
            assert errors == [], line
