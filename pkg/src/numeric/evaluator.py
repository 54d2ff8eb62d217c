"""
Évaluation numérique des expressions sur un modèle.

Les valeurs sont calculées à troncature N fixée (modèle tronqué) ou en
dimension finie. Un covecteur est stocké par ses coefficients d_n, de sorte
que F(v) = sum_n d_n v_n; pour le covecteur d'un vecteur u, d = conj(u).
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional, Tuple, Union

import numpy as np

from ..checkers.checker import Checker
from ..checkers.domains import op_factors
from ..models.errors import (
    EvaluationError, IllFormedExpressionError, NonScalarError, UnboundScalarError,
)
from ..models.expr import (
    BraOperator, Conj, Covector, Dagger, Expr, Literal, MatrixElement, OpApply,
    OperatorTerm, OpExpr, Origin, OuterProduct, ReducedMatrixElement, Scaled,
    ScalarExpr, ScalarProduct, ScalarRef, ScalarSymbol, ScalarTerm, State, Sum,
    Times, ValueKind,
)
from ..models.hilbert import HilbertModel
from ..utils.logger import get_logger

logger = get_logger()

Number = Union[complex, float, int]


@dataclass(frozen=True)
class Value:
    """
    Valeur d'une expression.

    Attributes:
        kind: scalaire, vecteur, covecteur ou opérateur
        data: complexe (scalaire), coefficients (vecteur, covecteur) ou matrice
        truncation: N pour un modèle tronqué
        antilinear: Opérateur anti-linéaire (action v -> M conj(v))
        forced: Évaluation d'une expression rejetée par le vérificateur;
            le résultat dépend de la troncature
    """
    kind: ValueKind
    data: Any = field(compare=False)
    truncation: Optional[int] = None
    antilinear: bool = False
    forced: bool = False

    @property
    def scalar(self) -> complex:
        if self.kind is not ValueKind.SCALAR:
            raise NonScalarError(f"expected a scalar value, got a {self.kind.value}")
        return complex(self.data)

    def representing_vector(self) -> np.ndarray:
        """Vecteur u dont le covecteur est (u, .)."""
        if self.kind is not ValueKind.COVECTOR:
            raise EvaluationError(f"{self.kind.value} values have no representing vector")
        return np.conj(self.data)

    def to_dict(self) -> Dict[str, Any]:
        """Représentation sérialisable (sortie structurée de la CLI)."""
        def pair(z: complex) -> List[float]:
            return [float(z.real), float(z.imag)]

        data = self.data
        if self.kind is ValueKind.SCALAR:
            payload: Any = pair(complex(data))
        elif self.kind is ValueKind.OPERATOR:
            payload = [[pair(z) for z in row] for row in np.asarray(data)]
        else:
            payload = [pair(z) for z in np.asarray(data)]
        record = {'kind': self.kind.value, 'value': payload, 'truncation': self.truncation,
                  'forced': self.forced}
        if self.antilinear:
            record['antilinear'] = True
        return record

    def __str__(self) -> str:
        if self.kind is ValueKind.SCALAR:
            text = _format_complex(complex(self.data))
        else:
            text = np.array2string(np.asarray(self.data), precision=10, suppress_small=True)
        if self.forced:
            text += " (forced: truncation-dependent)"
        return text


def _format_complex(z: complex) -> str:
    sign = "-" if z.imag < 0 else "+"
    return f"{z.real:.12g}{sign}{abs(z.imag):.12g}j"


class Evaluator:
    """
    Évalue récursivement une expression sur un modèle.
    """

    def __init__(self, model: HilbertModel, truncation: Optional[int] = None,
                 scalars: Optional[Mapping[str, Number]] = None):
        """
        Initialise l'évaluateur.

        Args:
            model: Modèle d'espace de Hilbert
            truncation: N, obligatoire pour un modèle tronqué
            scalars: Valeurs des constantes symboliques
        """
        self.model = model
        self.size = model.size(truncation)
        self.truncation = None if model.is_finite else self.size
        self.scalars = {k: complex(v) for k, v in (scalars or {}).items()}
        self._states: Dict[str, np.ndarray] = {}

    # --- Constantes ---------------------------------------------------------

    def scalar(self, s: ScalarExpr) -> complex:
        if isinstance(s, Literal):
            return complex(s.value)
        if isinstance(s, ScalarSymbol):
            if s.name not in self.scalars:
                raise UnboundScalarError(f"scalar '{s.name}' has no value (use --scalar {s.name}=...)")
            return self.scalars[s.name]
        if isinstance(s, Conj):
            return self.scalar(s.inner).conjugate()
        if isinstance(s, Times):
            result = complex(1)
            for factor in s.factors:
                result *= self.scalar(factor)
            return result
        if isinstance(s, ScalarRef):
            return self.value(s.expr).scalar
        raise TypeError(f"Not a scalar: {s!r}")

    # --- Vecteurs -----------------------------------------------------------

    def state(self, label: str) -> np.ndarray:
        if label not in self._states:
            self._states[label] = self.model.state(label).coefficients(self.size)
        return self._states[label]

    def is_functional(self, e: Expr) -> bool:
        return (isinstance(e, State) and e.label in self.model.functionals
                and e.label not in self.model.states)

    def functional(self, label: str) -> np.ndarray:
        """Coefficients d_n de la fonctionnelle déclarée: F(v) = sum d_n v_n."""
        functional = self.model.functional(label)
        if functional.values is not None:
            values = np.asarray(functional.values, dtype=complex)
            if values.shape[0] != self.size:
                raise EvaluationError(f"functional '{label}' has {values.shape[0]} values, model has {self.size}")
            return values
        # F(v) = (u, O v) = (O† u, v) à N fini
        u = self.state(functional.state_label)
        return np.conj(self.model.apply_to_vector(functional.operator_symbol, u, daggered=True))

    def apply(self, op: OpExpr, vector: np.ndarray) -> np.ndarray:
        """Applique une chaîne, facteur par facteur dans l'ordre d'application."""
        for factor in op_factors(op):
            if isinstance(factor, OuterProduct):
                vector = self.vector(factor.ket) * complex(np.vdot(self.vector(factor.bra), vector))
            else:
                symbol, daggered = factor
                vector = self.model.apply_to_vector(symbol, vector, daggered)
        return vector

    def vector(self, e: Expr) -> np.ndarray:
        value = self.value(e)
        if value.kind is not ValueKind.VECTOR:
            raise EvaluationError(f"expected a vector, got a {value.kind.value}")
        return np.asarray(value.data)

    def covector(self, e: Expr) -> np.ndarray:
        """Coefficients du covecteur associé au bra e."""
        if self.is_functional(e):
            return self.functional(e.label)
        return np.conj(self.vector(e))

    def pairing(self, bra: Expr, vector: np.ndarray) -> complex:
        return complex(np.sum(self.covector(bra) * vector))

    def operator_matrix(self, op: OpExpr) -> Tuple[np.ndarray, bool]:
        """
        Matrice de la chaîne (colonnes = images des vecteurs de base) et
        anti-linéarité.
        """
        identity = np.eye(self.size, dtype=complex)
        columns = [self.apply(op, identity[:, j]) for j in range(self.size)]
        antilinear = sum(
            1 for f in op_factors(op)
            if not isinstance(f, OuterProduct) and self.model.is_antilinear(f[0])
        ) % 2 == 1
        return np.column_stack(columns), antilinear

    # --- Expressions --------------------------------------------------------

    def value(self, e: Expr) -> Value:
        """
        Valeur d'une sous-expression.

        Raises:
            EvaluationError: Expression sans valeur numérique
        """
        kind, data, antilinear = self._compute(e)
        return Value(kind, data, self.truncation, antilinear)

    def _compute(self, e: Expr) -> Tuple[ValueKind, Any, bool]:
        if isinstance(e, State):
            if self.is_functional(e):
                raise EvaluationError(f"functional '{e.label}' is not a vector")
            return ValueKind.VECTOR, self.state(e.label), False
        if isinstance(e, OpApply):
            return ValueKind.VECTOR, self.apply(e.op, self.vector(e.arg)), False
        if isinstance(e, ScalarProduct):
            return ValueKind.SCALAR, self.pairing(e.left, self.vector(e.right)), False
        if isinstance(e, MatrixElement):
            return ValueKind.SCALAR, self.matrix_element(e), False
        if isinstance(e, Covector):
            return ValueKind.COVECTOR, self.covector(e.inner), False
        if isinstance(e, BraOperator):
            # v -> (u, O v) représenté par O† u
            if self.is_functional(e.bra):
                raise EvaluationError(f"functional '{e.bra.label}' cannot be composed with an operator")
            return ValueKind.COVECTOR, np.conj(self.apply(Dagger(e.op), self.vector(e.bra))), False
        if isinstance(e, OuterProduct):
            ket, bra = self.vector(e.ket), self.covector(e.bra)
            return ValueKind.OPERATOR, np.outer(ket, bra), False
        if isinstance(e, OperatorTerm):
            matrix, antilinear = self.operator_matrix(e.op)
            return ValueKind.OPERATOR, matrix, antilinear
        if isinstance(e, Scaled):
            inner = self.value(e.term)
            return inner.kind, self.scalar(e.scalar) * inner.data, inner.antilinear
        if isinstance(e, Sum):
            if not e.terms:
                return ValueKind.SCALAR, complex(0), False
            values = [self.value(t) for t in e.terms]
            kinds = {v.kind for v in values}
            if len(kinds) != 1:
                raise EvaluationError("sum of values of different kinds")
            total = values[0].data
            for v in values[1:]:
                total = total + v.data
            return values[0].kind, total, values[0].antilinear
        if isinstance(e, ScalarTerm):
            return ValueKind.SCALAR, self.scalar(e.scalar), False
        if isinstance(e, ReducedMatrixElement):
            raise EvaluationError("reduced matrix elements have no numeric value")
        raise TypeError(f"Not an expression: {e!r}")

    def matrix_element(self, e: MatrixElement) -> complex:
        if e.origin is Origin.BRA_ACTION:
            if self.is_functional(e.bra):
                raise EvaluationError(f"functional '{e.bra.label}' cannot be composed with an operator")
            # (<u|O)|v> = (O† u, v)
            left = self.apply(Dagger(e.op), self.vector(e.bra))
            return complex(np.vdot(left, self.vector(e.ket)))
        return self.pairing(e.bra, self.apply(e.op, self.vector(e.ket)))


def evaluate(e: Expr, m: HilbertModel, N: Optional[int] = None,
             scalars: Optional[Mapping[str, Number]] = None, force: bool = False,
             checker_config: Optional[Dict[str, Any]] = None) -> Value:
    """
    Évalue une expression vérifiée.

    Args:
        e: Expression
        m: Modèle
        N: Troncature (modèle tronqué)
        scalars: Valeurs des constantes symboliques
        force: Évaluer même si le vérificateur rejette l'expression
        checker_config: Section 'checker' de la configuration

    Returns:
        Value, marquée forced si l'expression était rejetée

    Raises:
        IllFormedExpressionError: Expression rejetée, sans forçage
        MissingTruncationError: N absent pour un modèle tronqué
        UnboundScalarError: Constante sans valeur
    """
    evaluator = Evaluator(m, N, scalars)
    errors = [d for d in Checker(m, checker_config).check(e, with_suggestions=False) if d.is_error]
    if errors and not force:
        rules = ", ".join(sorted({d.rule.value for d in errors}))
        raise IllFormedExpressionError(f"expression is not well-formed ({rules}); use force to evaluate", errors)
    value = evaluator.value(e)
    if errors:
        logger.warning(f"Forced evaluation of an ill-formed expression at N={N}")
        value = Value(value.kind, value.data, value.truncation, value.antilinear, forced=True)
    return value
