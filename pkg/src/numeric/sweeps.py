"""
Balayages en troncature et sondes de non-bornitude.

Verdicts:
- convergent: critère de Cauchy sur les deux derniers pas, ou incréments
  décroissant avec une pente log-log inférieure à decay_threshold
- divergent: croissance monotone avec exposant ajusté supérieur à
  growth_threshold, ou incréments qui ne décroissent pas
- inconclusive: sinon
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from scipy import stats

from ..models.errors import EvaluationError, NonOrthonormalBasisError
from ..models.expr import Expr
from ..models.hilbert import ORTHONORMALITY_TOLERANCE, HilbertModel
from ..utils.logger import get_logger, log_function_call
from .evaluator import evaluate

logger = get_logger()

CAUCHY_TOLERANCE = 1e-8
GROWTH_THRESHOLD = 0.05
DECAY_THRESHOLD = -0.1
# Incréments dont la pente dépasse cette valeur: aucune décroissance
STALL_THRESHOLD = -0.05


class Verdict(Enum):
    CONVERGENT = "convergent"
    DIVERGENT = "divergent"
    INCONCLUSIVE = "inconclusive"


@dataclass
class SweepReport:
    """
    Résultat d'un balayage.

    Attributes:
        ns: Niveaux de troncature
        values: Module des valeurs à chaque niveau
        verdict: convergent / divergent / inconclusive
        exponent: Pente log-log ajustée des valeurs
        cauchy_met: Le critère de Cauchy est satisfait sur les deux derniers pas
        title: Description du balayage
        raw: Valeurs complexes (balayage d'une expression)
    """
    ns: List[int]
    values: List[float]
    verdict: Verdict
    exponent: float
    cauchy_met: bool = False
    title: str = ""
    raw: List[complex] = field(default_factory=list)

    def __post_init__(self):
        if len(self.ns) != len(self.values):
            raise ValueError("ns and values must have the same length")

    @property
    def last(self) -> float:
        return self.values[-1]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({'N': self.ns, 'value': self.values})

    def verdict_line(self) -> str:
        return (f"verdict: {self.verdict.value} (exponent {self.exponent:.4f}, "
                f"cauchy {'met' if self.cauchy_met else 'not met'})")

    def to_table(self) -> str:
        """Tableau (N, value) suivi de la ligne de verdict."""
        frame = self.to_frame()
        table = frame.to_string(index=False, float_format=lambda x: f"{x:.12g}")
        lines = [self.title] if self.title else []
        lines.extend([table, self.verdict_line()])
        return "\n".join(lines)

    def to_csv(self, path: str, sep: str = ","):
        """Données pour un tracé externe."""
        self.to_frame().to_csv(path, sep=sep, index=False)
        logger.info(f"Wrote sweep data to {path}")

    def to_dict(self) -> Dict[str, Any]:
        return {
            'title': self.title,
            'ns': list(self.ns),
            'values': [float(v) for v in self.values],
            'verdict': self.verdict.value,
            'exponent': float(self.exponent),
            'cauchy_met': self.cauchy_met
        }


def _slope(xs: Sequence[float], ys: Sequence[float]) -> Optional[float]:
    """Pente de log(y) en fonction de log(x), None si non définie."""
    pairs = [(x, y) for x, y in zip(xs, ys) if x > 0 and y > 0]
    if len(pairs) < 2:
        return None
    x, y = np.log([p[0] for p in pairs]), np.log([p[1] for p in pairs])
    if np.ptp(x) == 0:
        return None
    return float(stats.linregress(x, y).slope)


def classify(ns: Sequence[int], values: Sequence[Union[float, complex]],
             config: Optional[Mapping[str, Any]] = None) -> Tuple[Verdict, float, bool]:
    """
    Verdict d'une suite de valeurs indexée par la troncature.

    Args:
        ns: Niveaux N croissants
        values: Valeurs (complexes acceptées)
        config: Section 'numeric' (cauchy_tolerance, growth_threshold, decay_threshold)

    Returns:
        (verdict, exposant ajusté, critère de Cauchy satisfait)
    """
    config = config or {}
    tolerance = config.get('cauchy_tolerance', CAUCHY_TOLERANCE)
    growth = config.get('growth_threshold', GROWTH_THRESHOLD)
    decay = config.get('decay_threshold', DECAY_THRESHOLD)

    raw = np.asarray(values, dtype=complex)
    magnitudes = np.abs(raw)
    exponent = _slope(ns, magnitudes)
    exponent = 0.0 if exponent is None else exponent

    increments = np.abs(np.diff(raw))
    cauchy = len(increments) >= 2 and bool(np.all(increments[-2:] < tolerance))
    if cauchy:
        return Verdict.CONVERGENT, exponent, True

    if bool(np.all(np.diff(magnitudes) > 0)) and exponent > growth:
        return Verdict.DIVERGENT, exponent, False

    increment_slope = _slope(ns[1:], increments)
    if increment_slope is not None:
        if increment_slope < decay:
            return Verdict.CONVERGENT, exponent, False
        if increment_slope >= STALL_THRESHOLD:
            return Verdict.DIVERGENT, exponent, False
    return Verdict.INCONCLUSIVE, exponent, False


def _report(ns: Sequence[int], values: Sequence[Union[float, complex]], title: str,
            config: Optional[Mapping[str, Any]]) -> SweepReport:
    verdict, exponent, cauchy = classify(ns, values, config)
    report = SweepReport(
        ns=[int(n) for n in ns],
        values=[float(abs(v)) for v in values],
        verdict=verdict,
        exponent=exponent,
        cauchy_met=cauchy,
        title=title,
        raw=[complex(v) for v in values]
    )
    logger.info(f"{title}: {verdict.value}, exponent={exponent:.4f}")
    return report


def _require_truncated(m: HilbertModel, what: str):
    if m.is_finite:
        raise EvaluationError(f"{what} needs a truncated model")


@log_function_call
def truncation_sweep(e: Expr, m: HilbertModel, Ns: Sequence[int],
                     scalars: Optional[Mapping[str, complex]] = None, force: bool = False,
                     config: Optional[Mapping[str, Any]] = None,
                     checker_config: Optional[Dict[str, Any]] = None) -> SweepReport:
    """
    Évalue une expression scalaire à chaque troncature.

    Args:
        e: Expression à valeur scalaire
        m: Modèle tronqué
        Ns: Niveaux de troncature croissants
        force: Évaluer une expression rejetée par le vérificateur

    Returns:
        SweepReport

    Raises:
        NonScalarError: L'expression n'est pas scalaire
    """
    _require_truncated(m, "truncation_sweep")
    values = []
    for n in Ns:
        value = evaluate(e, m, n, scalars, force=force, checker_config=checker_config)
        values.append(value.scalar)
    title = "truncation sweep" + (" (forced)" if force else "")
    return _report(Ns, values, title, config)


@log_function_call
def unboundedness_probe(m: HilbertModel, u: str, op: str, Ns: Sequence[int],
                        config: Optional[Mapping[str, Any]] = None) -> SweepReport:
    """
    sup_{n<=N} |(u, O v_n)| = max_{n<=N} |lambda_n u_n| sur les états de base v_n.

    Raises:
        NonDiagonalOperatorError: O n'est pas une règle diagonale
    """
    _require_truncated(m, "unboundedness_probe")
    spec = m.operator(op)
    state = m.state(u)
    values = []
    for n in Ns:
        weights = np.abs(spec.spectrum(int(n)) * state.coefficients(int(n)))
        values.append(float(np.max(weights)))
    return _report(Ns, values, f"sup |({u}, {op} v_n)|, n <= N", config)


@log_function_call
def operator_norm_sweep(m: HilbertModel, op: str, Ns: Sequence[int],
                        config: Optional[Mapping[str, Any]] = None) -> SweepReport:
    """
    Norme de la troncature N d'un opérateur diagonal: max_{n<=N} |lambda_n|.

    Raises:
        NonDiagonalOperatorError: O n'est pas une règle diagonale
    """
    _require_truncated(m, "operator_norm_sweep")
    spec = m.operator(op)
    values = [float(np.max(np.abs(spec.spectrum(int(n))))) for n in Ns]
    return _report(Ns, values, f"norm of truncated {op}", config)


def riesz_solve(m: HilbertModel, functional: Union[str, Sequence[complex]],
                basis: Optional[str] = None,
                tolerance: float = ORTHONORMALITY_TOLERANCE) -> Tuple[np.ndarray, float]:
    """
    Vecteur représentant d'une fonctionnelle bornée.

    Args:
        m: Modèle fini
        functional: Nom d'une fonctionnelle déclarée, ou valeurs F(b_n)
        basis: Base orthonormée déclarée (base standard si None)
        tolerance: Écart admis à l'orthonormalité

    Returns:
        (coefficients de u, résidu max_n |F(b_n) - (u, b_n)|)

    Raises:
        NonOrthonormalBasisError: La base n'est pas orthonormée
    """
    if not m.is_finite:
        raise EvaluationError("riesz_solve needs a finite model")
    if isinstance(functional, str):
        declared = m.functional(functional)
        if declared.values is None:
            raise EvaluationError(f"functional '{functional}' has no basis values")
        values = np.asarray(declared.values, dtype=complex)
    else:
        values = np.asarray(functional, dtype=complex)

    if basis is None:
        vectors = np.eye(m.dim, dtype=complex)
    else:
        labels = m.basis_labels(basis)
        deviation = m.check_orthonormal(labels)
        if deviation > tolerance:
            raise NonOrthonormalBasisError(f"basis '{basis}' deviates from orthonormality by {deviation:.3g}")
        vectors = np.array([m.state_vector(label) for label in labels])
    if values.shape[0] != vectors.shape[0]:
        raise EvaluationError(f"functional has {values.shape[0]} values, basis has {vectors.shape[0]} states")

    # u = sum_n conj(F(b_n)) b_n
    u = np.conj(values) @ vectors
    residual = float(np.max(np.abs(values - vectors @ u.conj()))) if len(values) else 0.0
    return u, residual
