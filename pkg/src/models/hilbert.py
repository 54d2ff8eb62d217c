"""
Modèles concrets d'espaces de Hilbert.

Deux familles:
- finite: espace de dimension finie, états et opérateurs explicites
- truncated: famille de troncatures N d'un espace à base dénombrable, avec
  états en loi de puissance u_n = n^{-q} e^{i phi(n)} et opérateurs diagonaux
  lambda_n = n^p

Règle de domaine (troncatures): u appartient à D(O) si et seulement si
sum_n |lambda_n u_n|^2 = sum_n n^{2p-2q} converge, c.-à-d. 2(q - p) > 1.
La phase ne joue aucun rôle.
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from types import MappingProxyType
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

import numpy as np

from .errors import (
    MissingTruncationError,
    ModelError,
    NonDiagonalOperatorError,
    UnknownSymbolError,
)
from ..utils.logger import get_logger

logger = get_logger()

ORTHONORMALITY_TOLERANCE = 1e-10


class ModelKind(Enum):
    """Types de modèles."""
    FINITE = "finite"
    TRUNCATED = "truncated"


class Linearity(Enum):
    LINEAR = "linear"
    ANTILINEAR = "anti-linear"


class Membership(Enum):
    """Appartenance d'un état au domaine d'un opérateur."""
    IN = "in"
    OUT = "out"
    UNKNOWN = "unknown"


class Provenance(Enum):
    DECLARED = "declared"
    DERIVED = "derived-power-law"


class Phase(Enum):
    NONE = "none"
    ALTERNATING = "alternating"


def _readonly(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=complex)
    array.setflags(write=False)
    return array


def power_law_in_domain(decay_q: Fraction, power_p: Fraction) -> bool:
    """Critère de convergence de sum n^{2p-2q}: 2(q - p) > 1 (arithmétique exacte)."""
    return 2 * (Fraction(decay_q) - Fraction(power_p)) > 1


@dataclass(frozen=True)
class StateDef:
    """
    Vecteur d'état.

    Attributes:
        label: Étiquette de l'état
        coeffs: Coefficients explicites (modèle fini)
        decay_q: Exposant q de la loi u_n = n^{-q} (modèle tronqué)
        phase: Phase phi(n) (modèle tronqué)
    """
    label: str
    coeffs: Optional[np.ndarray] = field(default=None, compare=False)
    decay_q: Optional[Fraction] = None
    phase: Phase = Phase.NONE

    def __post_init__(self):
        if (self.coeffs is None) == (self.decay_q is None):
            raise ValueError(f"State '{self.label}' needs exactly one of coeffs or decay q")
        if self.coeffs is not None:
            object.__setattr__(self, 'coeffs', _readonly(self.coeffs))

    @property
    def is_power_law(self) -> bool:
        return self.decay_q is not None

    @property
    def norm_finite(self) -> bool:
        """Norme finie: toujours en dimension finie, 2q > 1 pour une loi de puissance."""
        if self.decay_q is None:
            return True
        return 2 * self.decay_q > 1

    def coefficients(self, n_terms: int) -> np.ndarray:
        """
        Coefficients sur la base standard.

        Args:
            n_terms: Nombre de composantes (N pour un modèle tronqué)

        Returns:
            Vecteur complexe
        """
        if self.coeffs is not None:
            return self.coeffs
        n = np.arange(1, n_terms + 1, dtype=float)
        values = n ** (-float(self.decay_q))
        if self.phase is Phase.ALTERNATING:
            values = values * np.where(n % 2 == 1, 1.0, -1.0)
        return values.astype(complex)


@dataclass(frozen=True)
class DomainFact:
    """Fait d'appartenance d'un état au domaine de O (ou de O† si daggered)."""
    state_label: str
    operator_symbol: str
    daggered: bool
    membership: Membership
    provenance: Provenance

    @property
    def key(self) -> Tuple[str, str, bool]:
        return (self.state_label, self.operator_symbol, self.daggered)


@dataclass(frozen=True)
class OperatorSpec:
    """
    Opérateur du modèle.

    Attributes:
        symbol: Symbole de l'opérateur
        linearity: Linéaire ou anti-linéaire
        matrix: Matrice explicite (modèle fini); pour un anti-linéaire,
            l'action est O v = M conj(v)
        power_p: Exposant du spectre diagonal lambda_n = n^p (modèle tronqué)
        declared_adjoint: Nom d'affichage de O†
    """
    symbol: str
    linearity: Linearity = Linearity.LINEAR
    matrix: Optional[np.ndarray] = field(default=None, compare=False)
    power_p: Optional[Fraction] = None
    declared_adjoint: Optional[str] = None

    def __post_init__(self):
        if (self.matrix is None) == (self.power_p is None):
            raise ValueError(f"Operator '{self.symbol}' needs exactly one of matrix or diagonal p")
        if self.matrix is not None:
            matrix = _readonly(self.matrix)
            if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
                raise ValueError(f"Operator '{self.symbol}' matrix must be square")
            object.__setattr__(self, 'matrix', matrix)

    @property
    def is_antilinear(self) -> bool:
        return self.linearity is Linearity.ANTILINEAR

    @property
    def is_diagonal(self) -> bool:
        return self.power_p is not None

    @property
    def is_unbounded(self) -> bool:
        return self.power_p is not None and self.power_p > 0

    def spectrum(self, n_terms: int) -> np.ndarray:
        """Valeurs propres lambda_n = n^p pour n = 1..N."""
        if self.power_p is None:
            raise NonDiagonalOperatorError(f"Operator '{self.symbol}' is not a diagonal rule")
        n = np.arange(1, n_terms + 1, dtype=float)
        return n ** float(self.power_p)

    def linear_part(self, n_terms: int) -> np.ndarray:
        """Matrice M de la partie linéaire (O v = M v ou M conj(v))."""
        if self.matrix is not None:
            return np.array(self.matrix)
        return np.diag(self.spectrum(n_terms)).astype(complex)

    def adjoint_linear_part(self, n_terms: int) -> np.ndarray:
        """
        Partie linéaire de O†.

        Linéaire: M^H, de sorte que (O†u, v) = (u, Ov).
        Anti-linéaire: M^T, de sorte que (O†u, v) = conj((u, Ov)) = (Ov, u).
        """
        matrix = self.linear_part(n_terms)
        return matrix.T if self.is_antilinear else matrix.conj().T


@dataclass(frozen=True)
class Basis:
    """Base déclarée: liste d'états ou règle standard."""
    name: str
    labels: Tuple[str, ...] = ()
    rule: Optional[str] = None


@dataclass(frozen=True)
class FunctionalDef:
    """
    Fonctionnelle linéaire déclarée (bra au sens de la version originale).

    Modèle fini: valeurs F(e_n) sur la base standard.
    Modèle tronqué: F(v) = (u, O v) avec state_label = u, operator_symbol = O.
    """
    name: str
    values: Optional[np.ndarray] = field(default=None, compare=False)
    state_label: Optional[str] = None
    operator_symbol: Optional[str] = None

    def __post_init__(self):
        if self.values is not None:
            object.__setattr__(self, 'values', _readonly(self.values))


class HilbertModel:
    """
    Modèle concret d'espace de Hilbert, immuable après chargement.

    Les méthodes implémentent les opérations du modèle: appartenance au
    domaine, produit scalaire, action et adjoint d'un opérateur.
    """

    def __init__(
        self,
        kind: ModelKind,
        dim: Optional[int] = None,
        states: Optional[Mapping[str, StateDef]] = None,
        operators: Optional[Mapping[str, OperatorSpec]] = None,
        bases: Optional[Mapping[str, Basis]] = None,
        functionals: Optional[Mapping[str, FunctionalDef]] = None,
        declared_facts: Iterable[DomainFact] = (),
        orthonormality_tolerance: float = ORTHONORMALITY_TOLERANCE
    ):
        if kind is ModelKind.FINITE and (dim is None or dim < 1):
            raise ModelError("finite models need a positive dimension")
        self.kind = kind
        self.dim = dim
        self.orthonormality_tolerance = orthonormality_tolerance
        self.states: Mapping[str, StateDef] = MappingProxyType(dict(states or {}))
        self.operators: Mapping[str, OperatorSpec] = MappingProxyType(dict(operators or {}))
        self.bases: Mapping[str, Basis] = MappingProxyType(dict(bases or {}))
        self.functionals: Mapping[str, FunctionalDef] = MappingProxyType(dict(functionals or {}))
        self._adjoint_names = {
            spec.declared_adjoint: spec.symbol
            for spec in self.operators.values() if spec.declared_adjoint
        }
        facts = self._derive_facts()
        for fact in declared_facts:
            facts[fact.key] = fact
        self.domain_facts: Mapping[Tuple[str, str, bool], DomainFact] = MappingProxyType(facts)
        logger.debug(
            f"Built {kind.value} model: {len(self.states)} states, "
            f"{len(self.operators)} operators, {len(self.domain_facts)} domain facts"
        )

    @property
    def is_finite(self) -> bool:
        return self.kind is ModelKind.FINITE

    def _derive_facts(self) -> Dict[Tuple[str, str, bool], DomainFact]:
        """Calcule les faits de domaine dérivés de la loi de puissance."""
        facts = {}
        if self.is_finite:
            return facts
        for state in self.states.values():
            for spec in self.operators.values():
                if not (state.is_power_law and spec.is_diagonal):
                    continue
                inside = power_law_in_domain(state.decay_q, spec.power_p)
                for daggered in (False, True):
                    fact = DomainFact(
                        state_label=state.label,
                        operator_symbol=spec.symbol,
                        daggered=daggered,
                        membership=Membership.IN if inside else Membership.OUT,
                        provenance=Provenance.DERIVED
                    )
                    facts[fact.key] = fact
        return facts

    # --- Résolution -------------------------------------------------------

    def state(self, label: str) -> StateDef:
        try:
            return self.states[label]
        except KeyError:
            raise UnknownSymbolError("state", label) from None

    def operator(self, symbol: str) -> OperatorSpec:
        spec, _ = self.resolve_operator(symbol)
        return spec

    def has_operator(self, symbol: str) -> bool:
        return symbol in self.operators or symbol in self._adjoint_names

    def resolve_operator(self, symbol: str) -> Tuple[OperatorSpec, bool]:
        """
        Résout un symbole, y compris un nom d'adjoint déclaré.

        Returns:
            (spécification, daggered)
        """
        if symbol in self.operators:
            return self.operators[symbol], False
        if symbol in self._adjoint_names:
            return self.operators[self._adjoint_names[symbol]], True
        raise UnknownSymbolError("operator", symbol)

    def adjoint_names(self) -> Dict[str, str]:
        """Noms d'affichage des adjoints déclarés: symbole -> nom de O†."""
        return {s.symbol: s.declared_adjoint for s in self.operators.values() if s.declared_adjoint}

    def antilinear_symbols(self) -> frozenset:
        names = {s.symbol for s in self.operators.values() if s.is_antilinear}
        names |= {s.declared_adjoint for s in self.operators.values()
                  if s.is_antilinear and s.declared_adjoint}
        return frozenset(names)

    def is_antilinear(self, symbol: str) -> bool:
        return self.operator(symbol).is_antilinear

    def functional(self, name: str) -> FunctionalDef:
        try:
            return self.functionals[name]
        except KeyError:
            raise UnknownSymbolError("functional", name) from None

    def basis_labels(self, name: str) -> Tuple[str, ...]:
        """Étiquettes des états d'une base déclarée (finie)."""
        try:
            basis = self.bases[name]
        except KeyError:
            raise UnknownSymbolError("basis", name) from None
        if not basis.labels:
            raise ModelError(f"basis '{name}' has no finite list of states")
        return basis.labels

    def size(self, truncation: Optional[int] = None) -> int:
        """Nombre de composantes: dim (fini) ou N (tronqué)."""
        if self.is_finite:
            return self.dim
        if truncation is None:
            raise MissingTruncationError("truncated models need a truncation level N")
        if truncation < 1:
            raise ValueError(f"Truncation level must be positive, got {truncation}")
        return int(truncation)

    # --- Opérations -------------------------------------------------------

    def domain_membership(self, state: str, op: str, daggered: bool = False) -> Membership:
        """
        Appartenance de l'état au domaine de O (ou O† si daggered).

        Args:
            state: Étiquette de l'état
            op: Symbole de l'opérateur (ou nom d'adjoint déclaré)
            daggered: Interroger D(O†) plutôt que D(O)

        Returns:
            Membership.IN / OUT / UNKNOWN
        """
        self.state(state)
        spec, flipped = self.resolve_operator(op)
        if self.is_finite:
            return Membership.IN
        daggered = daggered != flipped
        fact = self.domain_facts.get((state, spec.symbol, daggered))
        if fact is None:
            # Diagonale réelle: autoadjointe, D(O) = D(O†)
            fact = self.domain_facts.get((state, spec.symbol, not daggered))
            if fact is None or fact.provenance is not Provenance.DERIVED:
                return Membership.UNKNOWN
        return fact.membership

    def chain_membership(self, state: str, chain: Sequence[Tuple[str, bool]]) -> Membership:
        """
        Appartenance de l'état au domaine d'un produit d'opérateurs.

        Args:
            state: Étiquette de l'état
            chain: Facteurs (symbole, daggered) dans l'ordre d'application

        Returns:
            IN si chaque produit partiel est défini, OUT si l'un ne l'est pas
        """
        if not chain:
            return Membership.IN
        if len(chain) == 1:
            return self.domain_membership(state, chain[0][0], chain[0][1])
        self.state(state)
        if self.is_finite:
            return Membership.IN
        state_def = self.state(state)
        specs = [self.resolve_operator(symbol)[0] for symbol, _ in chain]
        if not state_def.is_power_law or not all(s.is_diagonal for s in specs):
            return Membership.UNKNOWN
        cumulative = Fraction(0)
        for spec in specs:
            cumulative += spec.power_p
            if not power_law_in_domain(state_def.decay_q, cumulative):
                return Membership.OUT
        return Membership.IN

    def state_vector(self, label: str, truncation: Optional[int] = None) -> np.ndarray:
        return self.state(label).coefficients(self.size(truncation))

    def inner_product(self, u: str, v: str, truncation: Optional[int] = None) -> complex:
        """
        Produit scalaire (u, v) = sum_n conj(u_n) v_n.

        Args:
            u: État de gauche (anti-linéaire)
            v: État de droite (linéaire)
            truncation: N, obligatoire pour un modèle tronqué

        Returns:
            Scalaire complexe
        """
        return complex(np.vdot(self.state_vector(u, truncation), self.state_vector(v, truncation)))

    def norm(self, label: str, truncation: Optional[int] = None) -> float:
        return float(np.linalg.norm(self.state_vector(label, truncation)))

    def apply_to_vector(self, op: str, vector: np.ndarray, daggered: bool = False) -> np.ndarray:
        """
        Action de O (ou O†) sur un vecteur de coefficients.

        Les anti-linéaires conjuguent les coefficients avant leur partie linéaire.
        """
        spec, flipped = self.resolve_operator(op)
        daggered = daggered != flipped
        vector = np.asarray(vector, dtype=complex)
        n_terms = vector.shape[0]
        if spec.is_diagonal:
            factors = spec.spectrum(n_terms)
            source = np.conj(vector) if spec.is_antilinear else vector
            return factors * source
        if spec.matrix.shape[0] != n_terms:
            raise ModelError(
                f"Operator '{spec.symbol}' has dimension {spec.matrix.shape[0]}, "
                f"vector has {n_terms} components"
            )
        matrix = spec.adjoint_linear_part(n_terms) if daggered else spec.linear_part(n_terms)
        source = np.conj(vector) if spec.is_antilinear else vector
        return matrix @ source

    def apply_operator(self, op: str, state: str, truncation: Optional[int] = None) -> np.ndarray:
        """
        Applique O à un état du modèle.

        Le verdict de domaine n'est pas bloquant: à N fini tout est défini.
        """
        return self.apply_to_vector(op, self.state_vector(state, truncation))

    def operator_matrix(self, op: str, truncation: Optional[int] = None) -> np.ndarray:
        """Matrice (partie linéaire) de O, tronquée à N le cas échéant."""
        spec, daggered = self.resolve_operator(op)
        n_terms = self.size(truncation)
        return spec.adjoint_linear_part(n_terms) if daggered else spec.linear_part(n_terms)

    def adjoint_matrix(self, op: str, truncation: Optional[int] = None) -> np.ndarray:
        """
        Matrice de O†.

        Linéaire: transposée conjuguée. Anti-linéaire: transposée, pour que
        (O†u, v) = conj((u, Ov)).
        """
        spec, daggered = self.resolve_operator(op)
        n_terms = self.size(truncation)
        return spec.linear_part(n_terms) if daggered else spec.adjoint_linear_part(n_terms)

    def functional_membership(self, name: str) -> Membership:
        """
        Existence d'un vecteur représentant la fonctionnelle.

        Fini: toujours (théorème de Riesz). Tronqué: F(v) = (u, Ov) est bornée
        si et seulement si u appartient à D(O†).
        """
        functional = self.functional(name)
        if functional.values is not None:
            return Membership.IN
        return self.domain_membership(functional.state_label, functional.operator_symbol, True)

    def check_orthonormal(self, labels: Sequence[str]) -> float:
        """Écart maximal de la matrice de Gram à l'identité."""
        vectors = np.array([self.state_vector(label) for label in labels])
        gram = vectors.conj() @ vectors.T
        return float(np.max(np.abs(gram - np.eye(len(labels))))) if len(labels) else 0.0

    def __repr__(self) -> str:
        size = f"dim={self.dim}" if self.is_finite else "N=*"
        return (f"HilbertModel(kind={self.kind.value}, {size}, "
                f"states={len(self.states)}, operators={len(self.operators)})")
