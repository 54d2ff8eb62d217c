"""
Lecture des fichiers modèles.

Format texte ligne par ligne, sections entre crochets:

    [space]            kind = finite | truncated, dim = 2
    [state u]          coeffs = (1,0), (0,1)   normalize = true
                       decay q = 3/4           phase = none | alternating
    [operator P]       matrix = (0,0), (1,0); (1,0), (0,0)
                       diagonal p = 1          antilinear = true
                       adjoint = Pd
    [basis e]          states = u, v  |  rule = standard
    [functional F]     values = (1,0), (0,0)  |  state = u, operator = P
    [domain]           in u P  /  out u dag(P)

Les commentaires commencent par '#'. Encodage UTF-8.
"""

import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np

from .errors import ModelInvariantError, ModelSyntaxError, NonOrthonormalBasisError
from .hilbert import (
    ORTHONORMALITY_TOLERANCE,
    Basis,
    DomainFact,
    FunctionalDef,
    HilbertModel,
    Linearity,
    Membership,
    ModelKind,
    OperatorSpec,
    Phase,
    Provenance,
    StateDef,
)
from ..utils.logger import get_logger

logger = get_logger()

SECTION_RE = re.compile(r"^\[\s*(\w+)(?:\s+([^\]]+?))?\s*\]$")
COMPLEX_RE = re.compile(r"\(\s*([^,()]+?)\s*,\s*([^,()]+?)\s*\)|([^,\s()]+)")
DAGGER_RE = re.compile(r"^dag\(\s*(\S+?)\s*\)$|^(\S+?)†$")

SECTIONS_WITH_NAME = {'state', 'operator', 'basis', 'functional'}
SECTIONS_WITHOUT_NAME = {'space', 'domain'}


@dataclass
class _Entry:
    """Ligne clé = valeur, avec sa position."""
    key: str
    value: str
    line: int
    column: int


@dataclass
class _Section:
    kind: str
    name: Optional[str]
    line: int
    entries: Dict[str, _Entry] = field(default_factory=dict)
    bare: List[Tuple[str, int]] = field(default_factory=list)

    def get(self, key: str) -> Optional[_Entry]:
        return self.entries.get(key)


def _parse_number(text: str, line: int, column: int) -> float:
    """Réel, éventuellement sous forme de fraction (3/4)."""
    try:
        return float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError):
        raise ModelSyntaxError(f"invalid number '{text.strip()}'", line, column) from None


def _parse_fraction(entry: _Entry) -> Fraction:
    try:
        return Fraction(entry.value.strip())
    except (ValueError, ZeroDivisionError):
        raise ModelSyntaxError(f"invalid exponent '{entry.value}'", entry.line, entry.column) from None


def _parse_complex_list(text: str, line: int, column: int) -> List[complex]:
    """Liste '(re,im), (re,im), ...' ou nombres réels séparés par des virgules."""
    values = []
    position = 0
    for match in COMPLEX_RE.finditer(text):
        gap = text[position:match.start()].strip()
        if gap not in ("", ","):
            raise ModelSyntaxError(f"unexpected '{gap}'", line, column + position)
        col = column + match.start()
        if match.group(3) is not None:
            values.append(complex(_parse_number(match.group(3), line, col), 0.0))
        else:
            values.append(complex(
                _parse_number(match.group(1), line, col),
                _parse_number(match.group(2), line, col)
            ))
        position = match.end()
    if text[position:].strip() not in ("", ","):
        raise ModelSyntaxError(f"unexpected '{text[position:].strip()}'", line, column + position)
    if not values:
        raise ModelSyntaxError("empty coefficient list", line, column)
    return values


def _parse_matrix(entry: _Entry) -> np.ndarray:
    rows = []
    offset = 0
    for chunk in entry.value.split(";"):
        rows.append(_parse_complex_list(chunk, entry.line, entry.column + offset))
        offset += len(chunk) + 1
    widths = {len(row) for row in rows}
    if len(widths) != 1:
        raise ModelSyntaxError("matrix rows have different lengths", entry.line, entry.column)
    return np.array(rows, dtype=complex)


def _parse_bool(entry: _Entry) -> bool:
    value = entry.value.strip().lower()
    if value in ("true", "yes", "1"):
        return True
    if value in ("false", "no", "0"):
        return False
    raise ModelSyntaxError(f"expected true or false, got '{entry.value}'", entry.line, entry.column)


def _split_sections(text: str) -> List[_Section]:
    """Découpe le texte en sections."""
    sections: List[_Section] = []
    current: Optional[_Section] = None
    for number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].rstrip()
        stripped = content.strip()
        if not stripped:
            continue
        indent = len(content) - len(content.lstrip())
        header = SECTION_RE.match(stripped)
        if header:
            kind, name = header.group(1).lower(), header.group(2)
            if kind in SECTIONS_WITH_NAME and not name:
                raise ModelSyntaxError(f"section [{kind}] needs a name", number, indent + 1)
            if kind in SECTIONS_WITHOUT_NAME and name:
                raise ModelSyntaxError(f"section [{kind}] takes no name", number, indent + 1)
            if kind not in SECTIONS_WITH_NAME | SECTIONS_WITHOUT_NAME:
                raise ModelSyntaxError(f"unknown section [{kind}]", number, indent + 1)
            current = _Section(kind=kind, name=name.strip() if name else None, line=number)
            sections.append(current)
            continue
        if current is None:
            raise ModelSyntaxError("content before the first section", number, indent + 1)
        if "=" in stripped:
            key, value = stripped.split("=", 1)
            key = " ".join(key.lower().split())
            column = indent + content.lstrip().index("=") + 2
            if key in current.entries:
                raise ModelSyntaxError(f"duplicate key '{key}'", number, indent + 1)
            current.entries[key] = _Entry(key, value.strip(), number, column)
        elif current.kind == "domain":
            current.bare.append((stripped, number))
        else:
            raise ModelSyntaxError("expected 'key = value'", number, indent + 1)
    return sections


class ModelLoader:
    """
    Construit un HilbertModel validé à partir du texte d'un fichier modèle.
    """

    def __init__(self, orthonormality_tolerance: float = ORTHONORMALITY_TOLERANCE):
        self.orthonormality_tolerance = orthonormality_tolerance

    def load(self, text: str) -> HilbertModel:
        """
        Charge et valide un modèle.

        Args:
            text: Contenu du fichier modèle

        Returns:
            HilbertModel avec ses faits de domaine dérivés
        """
        sections = _split_sections(text)
        spaces = [s for s in sections if s.kind == "space"]
        if len(spaces) != 1:
            line = spaces[1].line if len(spaces) > 1 else 1
            raise ModelSyntaxError("exactly one [space] section is required", line)
        kind, dim = self._read_space(spaces[0])

        states: Dict[str, StateDef] = {}
        operators: Dict[str, OperatorSpec] = {}
        bases: Dict[str, Basis] = {}
        functionals: Dict[str, FunctionalDef] = {}
        names: Dict[Tuple[str, str], int] = {}

        for section in sections:
            if section.name is not None:
                key = (section.kind, section.name)
                if key in names:
                    raise ModelSyntaxError(
                        f"duplicate section [{section.kind} {section.name}]", section.line
                    )
                names[key] = section.line
            if section.kind == "state":
                states[section.name] = self._read_state(section, kind, dim)
            elif section.kind == "operator":
                operators[section.name] = self._read_operator(section, kind, dim)

        for section in sections:
            if section.kind == "basis":
                bases[section.name] = self._read_basis(section, kind, dim, states)
            elif section.kind == "functional":
                functionals[section.name] = self._read_functional(
                    section, kind, dim, states, operators
                )

        facts = []
        for section in sections:
            if section.kind == "domain":
                facts.extend(self._read_domain(section, states, operators))

        model = HilbertModel(
            kind=kind,
            dim=dim,
            states=states,
            operators=operators,
            bases=bases,
            functionals=functionals,
            declared_facts=facts,
            orthonormality_tolerance=self.orthonormality_tolerance
        )
        self._check_bases(model, sections)
        logger.info(f"Loaded model: {model}")
        return model

    # --- Sections ---------------------------------------------------------

    def _read_space(self, section: _Section) -> Tuple[ModelKind, Optional[int]]:
        entry = section.get("kind")
        if entry is None:
            raise ModelSyntaxError("[space] needs 'kind = finite|truncated'", section.line)
        try:
            kind = ModelKind(entry.value.strip().lower())
        except ValueError:
            raise ModelSyntaxError(f"unknown model kind '{entry.value}'", entry.line, entry.column) from None
        dim = None
        dim_entry = section.get("dim")
        if kind is ModelKind.FINITE:
            if dim_entry is None:
                raise ModelSyntaxError("finite models need 'dim'", section.line)
            try:
                dim = int(dim_entry.value)
            except ValueError:
                raise ModelSyntaxError(f"invalid dim '{dim_entry.value}'", dim_entry.line, dim_entry.column) from None
            if dim < 1:
                raise ModelInvariantError("positive-dimension", f"dim must be positive, got {dim}", dim_entry.line)
        elif dim_entry is not None:
            raise ModelSyntaxError("truncated models take no 'dim'", dim_entry.line, dim_entry.column)
        return kind, dim

    def _read_state(self, section: _Section, kind: ModelKind, dim: Optional[int]) -> StateDef:
        label = section.name
        if kind is ModelKind.FINITE:
            entry = section.get("coeffs")
            if entry is None:
                raise ModelSyntaxError(f"state '{label}' needs 'coeffs'", section.line)
            coeffs = np.array(_parse_complex_list(entry.value, entry.line, entry.column))
            if len(coeffs) != dim:
                raise ModelInvariantError(
                    "state-length",
                    f"state '{label}' has {len(coeffs)} coefficients, model dim is {dim}",
                    entry.line
                )
            normalize = section.get("normalize")
            if normalize is not None and _parse_bool(normalize):
                norm = np.linalg.norm(coeffs)
                if norm == 0:
                    raise ModelInvariantError("nonzero-state", f"state '{label}' is zero", entry.line)
                coeffs = coeffs / norm
            return StateDef(label=label, coeffs=coeffs)

        entry = section.get("decay q")
        if entry is None:
            raise ModelSyntaxError(f"state '{label}' needs 'decay q'", section.line)
        decay_q = _parse_fraction(entry)
        phase = Phase.NONE
        phase_entry = section.get("phase")
        if phase_entry is not None:
            try:
                phase = Phase(phase_entry.value.strip().lower())
            except ValueError:
                raise ModelSyntaxError(
                    f"unknown phase '{phase_entry.value}'", phase_entry.line, phase_entry.column
                ) from None
        state = StateDef(label=label, decay_q=decay_q, phase=phase)
        if not state.norm_finite:
            raise ModelInvariantError(
                "finite-norm",
                f"state '{label}' has decay q = {decay_q}: 2q <= 1 gives an infinite norm",
                entry.line
            )
        return state

    def _read_operator(self, section: _Section, kind: ModelKind, dim: Optional[int]) -> OperatorSpec:
        symbol = section.name
        linearity = Linearity.LINEAR
        antilinear = section.get("antilinear")
        if antilinear is not None and _parse_bool(antilinear):
            linearity = Linearity.ANTILINEAR
        adjoint_entry = section.get("adjoint")
        declared_adjoint = adjoint_entry.value.strip() if adjoint_entry else None

        matrix_entry = section.get("matrix")
        diagonal_entry = section.get("diagonal p")
        if kind is ModelKind.FINITE:
            if matrix_entry is None:
                raise ModelSyntaxError(f"operator '{symbol}' needs 'matrix'", section.line)
            matrix = _parse_matrix(matrix_entry)
            if matrix.shape != (dim, dim):
                raise ModelInvariantError(
                    "operator-shape",
                    f"operator '{symbol}' is {matrix.shape[0]}x{matrix.shape[1]}, model dim is {dim}",
                    matrix_entry.line
                )
            return OperatorSpec(symbol=symbol, linearity=linearity, matrix=matrix,
                                declared_adjoint=declared_adjoint)

        if diagonal_entry is None:
            raise ModelSyntaxError(
                f"operator '{symbol}' needs 'diagonal p' in a truncated model", section.line
            )
        return OperatorSpec(symbol=symbol, linearity=linearity,
                            power_p=_parse_fraction(diagonal_entry),
                            declared_adjoint=declared_adjoint)

    def _read_basis(self, section: _Section, kind: ModelKind, dim: Optional[int],
                    states: Dict[str, StateDef]) -> Basis:
        name = section.name
        rule = section.get("rule")
        listed = section.get("states")
        if rule is not None:
            if rule.value.strip().lower() != "standard":
                raise ModelSyntaxError(f"unknown basis rule '{rule.value}'", rule.line, rule.column)
            if kind is ModelKind.TRUNCATED:
                return Basis(name=name, rule="standard")
            labels = []
            for k in range(1, dim + 1):
                label = f"{name}{k}"
                if label in states:
                    raise ModelInvariantError(
                        "basis-label", f"basis '{name}' would shadow state '{label}'", rule.line
                    )
                coeffs = np.zeros(dim, dtype=complex)
                coeffs[k - 1] = 1.0
                states[label] = StateDef(label=label, coeffs=coeffs)
                labels.append(label)
            return Basis(name=name, labels=tuple(labels), rule="standard")
        if listed is None:
            raise ModelSyntaxError(f"basis '{name}' needs 'states' or 'rule'", section.line)
        labels = tuple(item.strip() for item in listed.value.split(",") if item.strip())
        for label in labels:
            if label not in states:
                raise ModelSyntaxError(f"basis '{name}' lists unknown state '{label}'",
                                       listed.line, listed.column)
        return Basis(name=name, labels=labels)

    def _read_functional(self, section: _Section, kind: ModelKind, dim: Optional[int],
                         states: Dict[str, StateDef],
                         operators: Dict[str, OperatorSpec]) -> FunctionalDef:
        name = section.name
        values = section.get("values")
        if values is not None:
            if kind is not ModelKind.FINITE:
                raise ModelSyntaxError("'values' functionals need a finite model", values.line, values.column)
            array = np.array(_parse_complex_list(values.value, values.line, values.column))
            if len(array) != dim:
                raise ModelInvariantError(
                    "functional-length",
                    f"functional '{name}' has {len(array)} values, model dim is {dim}",
                    values.line
                )
            return FunctionalDef(name=name, values=array)
        state, operator = section.get("state"), section.get("operator")
        if state is None or operator is None:
            raise ModelSyntaxError(f"functional '{name}' needs 'values' or 'state' and 'operator'",
                                   section.line)
        if state.value not in states:
            raise ModelSyntaxError(f"unknown state '{state.value}'", state.line, state.column)
        if operator.value not in operators:
            raise ModelSyntaxError(f"unknown operator '{operator.value}'", operator.line, operator.column)
        return FunctionalDef(name=name, state_label=state.value, operator_symbol=operator.value)

    def _read_domain(self, section: _Section, states: Dict[str, StateDef],
                     operators: Dict[str, OperatorSpec]) -> List[DomainFact]:
        facts = []
        for text, line in section.bare:
            parts = text.split(None, 2)
            if len(parts) != 3:
                raise ModelSyntaxError("expected '<in|out|unknown> <state> <operator>'", line)
            verdict, label, op_text = parts
            try:
                membership = Membership(verdict.lower())
            except ValueError:
                raise ModelSyntaxError(f"unknown membership '{verdict}'", line) from None
            daggered = False
            match = DAGGER_RE.match(op_text.strip())
            symbol = op_text.strip()
            if match:
                symbol = match.group(1) or match.group(2)
                daggered = True
            if label not in states:
                raise ModelSyntaxError(f"unknown state '{label}'", line, text.index(label) + 1)
            if symbol not in operators:
                raise ModelSyntaxError(f"unknown operator '{symbol}'", line, text.index(op_text) + 1)
            facts.append(DomainFact(label, symbol, daggered, membership, Provenance.DECLARED))
        return facts

    def _check_bases(self, model: HilbertModel, sections: List[_Section]):
        """Vérifie l'orthonormalité des bases finies."""
        if not model.is_finite:
            return
        lines = {s.name: s.line for s in sections if s.kind == "basis"}
        for basis in model.bases.values():
            deviation = model.check_orthonormal(basis.labels)
            if deviation > self.orthonormality_tolerance:
                raise NonOrthonormalBasisError(
                    f"{lines.get(basis.name, '?')}: basis '{basis.name}' is not orthonormal "
                    f"(max Gram deviation {deviation:.3e})"
                )


def load_model(text: str, orthonormality_tolerance: float = ORTHONORMALITY_TOLERANCE) -> HilbertModel:
    """
    Charge un modèle depuis son texte.

    Args:
        text: Contenu du fichier modèle
        orthonormality_tolerance: Tolérance sur les bases déclarées

    Returns:
        HilbertModel validé
    """
    return ModelLoader(orthonormality_tolerance).load(text)


def load_model_file(path, orthonormality_tolerance: float = ORTHONORMALITY_TOLERANCE) -> HilbertModel:
    """Charge un fichier modèle (UTF-8)."""
    path = Path(path)
    logger.info(f"Loading model from {path}")
    return load_model(path.read_text(encoding="utf-8"), orthonormality_tolerance)
