"""
Tests du chargement des modèles et des opérations d'espace de Hilbert.
"""

from fractions import Fraction

import numpy as np
import pytest

from src.models import Membership, ModelKind, load_model
from src.models.diagnostic import Diagnostic, Rule, Severity
from src.models.errors import (
    MissingTruncationError, ModelInvariantError, ModelSyntaxError,
    NonOrthonormalBasisError, UnknownSymbolError,
)
from src.models.hilbert import power_law_in_domain
from src.models.span import SourceSpan

from .conftest import power_law_model


class TestModelLoader:
    """Tests du format texte des modèles."""

    def test_load_finite_model(self, finite_model):
        """Le modèle fini livré se charge avec ses états, opérateurs et base."""
        assert finite_model.kind is ModelKind.FINITE
        assert finite_model.dim == 2
        assert {"u", "v", "psi", "xi", "e1", "e2"} <= set(finite_model.states)
        assert finite_model.operator("K").is_antilinear
        assert finite_model.basis_labels("e") == ("e1", "e2")

    def test_normalize(self, finite_model):
        assert finite_model.norm("u") == pytest.approx(1.0)
        assert finite_model.norm("xi") == pytest.approx(1.0)

    def test_load_truncated_model(self, unbounded_model):
        """Le modèle tronqué dérive ses faits de domaine des exposants."""
        assert unbounded_model.kind is ModelKind.TRUNCATED
        assert unbounded_model.state("u").decay_q == Fraction(3, 4)
        assert unbounded_model.domain_membership("u", "P") is Membership.OUT
        assert unbounded_model.domain_membership("u", "P", daggered=True) is Membership.OUT
        assert unbounded_model.domain_membership("v", "P") is Membership.IN

    def test_syntax_error_has_position(self):
        text = "[space]\nkind = finite\ndim = 2\n[state u]\ncoeffs = (1,0), oops\n"
        with pytest.raises(ModelSyntaxError) as exc_info:
            load_model(text)
        assert exc_info.value.line == 5

    def test_unknown_section(self):
        with pytest.raises(ModelSyntaxError, match="unknown section"):
            load_model("[space]\nkind = finite\ndim = 1\n[widget w]\n")

    def test_missing_space(self):
        with pytest.raises(ModelSyntaxError, match="space"):
            load_model("[state u]\ncoeffs = 1\n")

    def test_state_length_invariant(self):
        text = "[space]\nkind = finite\ndim = 2\n[state u]\ncoeffs = 1, 0, 0\n"
        with pytest.raises(ModelInvariantError) as exc_info:
            load_model(text)
        assert exc_info.value.rule == "state-length"

    def test_infinite_norm_rejected(self):
        """2q <= 1 donne un état de norme infinie."""
        text = "[space]\nkind = truncated\n[state u]\ndecay q = 1/2\n"
        with pytest.raises(ModelInvariantError) as exc_info:
            load_model(text)
        assert exc_info.value.rule == "finite-norm"

    def test_non_orthonormal_basis(self):
        text = (
            "[space]\nkind = finite\ndim = 2\n"
            "[state a]\ncoeffs = 1, 0\n"
            "[state b]\ncoeffs = 1, 1\n"
            "[basis e]\nstates = a, b\n"
        )
        with pytest.raises(NonOrthonormalBasisError):
            load_model(text)

    def test_declared_domain_fact(self):
        text = (
            "[space]\nkind = truncated\n"
            "[state u]\ndecay q = 3/4\n"
            "[operator P]\ndiagonal p = 1\n"
            "[operator Q]\ndiagonal p = 1\n"
            "[domain]\nin u dag(Q)\n"
        )
        model = load_model(text)
        assert model.domain_membership("u", "Q", daggered=True) is Membership.IN

    def test_duplicate_key(self):
        with pytest.raises(ModelSyntaxError, match="duplicate"):
            load_model("[space]\nkind = finite\nkind = finite\n")


class TestHilbertModel:
    """Tests des opérations du modèle."""

    def test_inner_product_is_antilinear_on_the_left(self, finite_model):
        direct = finite_model.inner_product("x", "y")
        expected = np.vdot(finite_model.state_vector("x"), finite_model.state_vector("y"))
        assert direct == pytest.approx(expected)
        assert finite_model.inner_product("y", "x") == pytest.approx(np.conj(expected))

    def test_adjoint_identity(self, finite_model):
        """(O† u, v) = (u, O v)."""
        u, v = finite_model.state_vector("x"), finite_model.state_vector("y")
        left = np.vdot(finite_model.apply_to_vector("O", u, daggered=True), v)
        right = np.vdot(u, finite_model.apply_to_vector("O", v))
        assert left == pytest.approx(right, abs=1e-12)

    def test_antilinear_adjoint(self, finite_model):
        """(K† u, v) = conj((u, K v)) pour K anti-linéaire."""
        u, v = finite_model.state_vector("x"), finite_model.state_vector("y")
        left = np.vdot(finite_model.apply_to_vector("K", u, daggered=True), v)
        right = np.conj(np.vdot(u, finite_model.apply_to_vector("K", v)))
        assert left == pytest.approx(right, abs=1e-12)

    def test_declared_adjoint_name(self, finite_model):
        spec, daggered = finite_model.resolve_operator("Od")
        assert spec.symbol == "O"
        assert daggered
        assert finite_model.adjoint_names() == {"O": "Od"}

    def test_unknown_symbols(self, finite_model):
        with pytest.raises(UnknownSymbolError):
            finite_model.state("nope")
        with pytest.raises(UnknownSymbolError):
            finite_model.operator("Z")

    def test_truncated_needs_n(self, unbounded_model):
        with pytest.raises(MissingTruncationError):
            unbounded_model.state_vector("u")
        assert unbounded_model.state_vector("u", 4)[3] == pytest.approx(4 ** -0.75)

    def test_alternating_phase(self, unbounded_model):
        w = unbounded_model.state_vector("w", 3)
        np.testing.assert_allclose(w.real, [1.0, -(2 ** -3), 3 ** -3])

    @pytest.mark.parametrize("q,p,inside", [
        (Fraction(3, 4), 1, False),
        (Fraction(3), 1, True),
        (Fraction(2), 1, True),
        (Fraction(3, 2), 1, False),
        (Fraction(5, 4), 0, True),
    ])
    def test_power_law_membership(self, q, p, inside):
        """u dans D(P) si et seulement si 2(q - p) > 1."""
        assert power_law_in_domain(q, Fraction(p)) is inside
        model = power_law_model(q, p)
        expected = Membership.IN if inside else Membership.OUT
        assert model.domain_membership("u", "P") is expected

    def test_chain_membership(self):
        """P P/v/ exige v dans D(P^2): 2(q - 2p) > 1."""
        model = power_law_model(Fraction(3, 4), 1, q_v=Fraction(3))
        assert model.chain_membership("v", [("P", False), ("P", False)]) is Membership.IN
        model = power_law_model(Fraction(3, 4), 1, q_v=Fraction(2))
        assert model.chain_membership("v", [("P", False), ("P", False)]) is Membership.OUT

    def test_finite_membership_is_always_in(self, finite_model):
        assert finite_model.domain_membership("u", "O") is Membership.IN


class TestDiagnostic:
    """Tests de la sérialisation des diagnostics."""

    def test_to_dict_and_text(self):
        diagnostic = Diagnostic(Severity.ERROR, Rule.BK1, SourceSpan(0, 3, 1, 1),
                                "bad", suggestion="/u/ . P/v/")
        data = diagnostic.to_dict()
        assert data['rule'] == "BK1"
        assert data['line'] == 1 and data['column'] == 1
        assert data['suggestion'] == "/u/ . P/v/"
        assert "[suggestion: /u/ . P/v/]" in diagnostic.to_text_line()
        assert diagnostic.to_json().startswith("{")

    def test_sort_key_orders_by_position_then_severity(self):
        late = Diagnostic(Severity.ERROR, Rule.SL1, SourceSpan(5, 8, 1, 6), "late")
        early = Diagnostic(Severity.WARNING, Rule.DM1, SourceSpan(0, 3, 1, 1), "early")
        error = Diagnostic(Severity.ERROR, Rule.DM1, SourceSpan(0, 3, 1, 1), "early error")
        ordered = sorted([late, early, error], key=Diagnostic.sort_key)
        assert [d.message for d in ordered] == ["early error", "early", "late"]
