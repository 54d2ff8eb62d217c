"""
Suites aléatoires reproductibles (graine explicite).

Chaque suite renvoie un InvariantReport: nombre d'essais, de violations,
et écart maximal observé.
"""

from dataclasses import dataclass
from typing import Any, Dict, Iterable, List

import numpy as np

from ..models.expr import Dagger, OperatorTerm, OuterOp, OuterProduct, ScalarProduct, State, Sum
from ..models.hilbert import Basis, HilbertModel, Linearity, ModelKind, OperatorSpec, StateDef
from ..rewriting.rewriter import Rewriter, Site
from ..utils.logger import get_logger, log_function_call
from .evaluator import Evaluator
from .sweeps import riesz_solve

logger = get_logger()

DEFAULT_SEED = 42


@dataclass
class InvariantReport:
    """Résultat d'une suite aléatoire."""
    name: str
    trials: int
    violations: int
    max_error: float
    tolerance: float
    seed: int

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'trials': self.trials,
            'violations': self.violations,
            'max_error': self.max_error,
            'tolerance': self.tolerance,
            'seed': self.seed,
            'passed': self.passed
        }

    def summary(self) -> str:
        status = "ok" if self.passed else "VIOLATED"
        return (f"{self.name}: {self.trials} trials, {self.violations} violations, "
                f"max error {self.max_error:.3e} (tolerance {self.tolerance:g}, seed {self.seed}) {status}")


def random_vector(rng: np.random.Generator, dim: int) -> np.ndarray:
    return rng.normal(size=dim) + 1j * rng.normal(size=dim)


def random_model(rng: np.random.Generator, dim: int, n_states: int = 2,
                 operators: Iterable[str] = ("O",), antilinear: Iterable[str] = ()) -> HilbertModel:
    """Modèle fini aléatoire: états u1.., opérateurs linéaires et anti-linéaires."""
    states = {f"u{i}": StateDef(f"u{i}", coeffs=random_vector(rng, dim))
              for i in range(1, n_states + 1)}
    specs = {}
    for symbol in operators:
        matrix = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        specs[symbol] = OperatorSpec(symbol, matrix=matrix)
    for symbol in antilinear:
        matrix = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        specs[symbol] = OperatorSpec(symbol, Linearity.ANTILINEAR, matrix=matrix)
    return HilbertModel(ModelKind.FINITE, dim=dim, states=states, operators=specs)


def _report(name: str, errors: List[float], tolerance: float, seed: int) -> InvariantReport:
    violations = sum(1 for error in errors if error > tolerance)
    report = InvariantReport(name, len(errors), violations,
                             max(errors) if errors else 0.0, tolerance, seed)
    if report.passed:
        logger.info(report.summary())
    else:
        logger.warning(report.summary())
    return report


@log_function_call
def schwarz_suite(pairs: int = 1000, max_dim: int = 16, seed: int = DEFAULT_SEED,
                  tolerance: float = 1e-12) -> InvariantReport:
    """|(u, v)| <= ||u|| ||v||, dépassement absolu de la borne."""
    rng = np.random.default_rng(seed)
    errors = []
    for _ in range(pairs):
        dim = int(rng.integers(1, max_dim + 1))
        u, v = random_vector(rng, dim), random_vector(rng, dim)
        bound = np.linalg.norm(u) * np.linalg.norm(v)
        errors.append(max(0.0, abs(np.vdot(u, v)) - bound))
    return _report("schwarz", errors, tolerance, seed)


@log_function_call
def adjoint_suite(triples: int = 100, min_dim: int = 2, max_dim: int = 8,
                  seed: int = DEFAULT_SEED, tolerance: float = 1e-10) -> InvariantReport:
    """|(dag(O)u, v) - (u, Ov)| pour des triplets aléatoires, par dimension."""
    rng = np.random.default_rng(seed)
    errors = []
    for dim in range(min_dim, max_dim + 1):
        for _ in range(triples):
            model = random_model(rng, dim)
            u, v = model.state_vector("u1"), model.state_vector("u2")
            left = np.vdot(model.apply_to_vector("O", u, daggered=True), v)
            right = np.vdot(u, model.apply_to_vector("O", v))
            errors.append(abs(left - right))
    return _report("adjoint", errors, tolerance, seed)


@log_function_call
def antilinear_adjoint_suite(triples: int = 100, min_dim: int = 2, max_dim: int = 8,
                             seed: int = DEFAULT_SEED, tolerance: float = 1e-12) -> InvariantReport:
    """
    |(dag(K)u, v) - conj((u, Kv))| pour K = conjugation composante par
    composante dans la base standard.
    """
    rng = np.random.default_rng(seed)
    errors = []
    for dim in range(min_dim, max_dim + 1):
        conjugation = OperatorSpec("K", Linearity.ANTILINEAR, matrix=np.eye(dim))
        for _ in range(triples):
            states = {"u": StateDef("u", coeffs=random_vector(rng, dim)),
                      "v": StateDef("v", coeffs=random_vector(rng, dim))}
            model = HilbertModel(ModelKind.FINITE, dim=dim, states=states,
                                 operators={"K": conjugation})
            u, v = model.state_vector("u"), model.state_vector("v")
            left = np.vdot(model.apply_to_vector("K", u, daggered=True), v)
            right = np.conj(np.vdot(u, model.apply_to_vector("K", v)))
            errors.append(abs(left - right))
    return _report("anti-linear adjoint", errors, tolerance, seed)


@log_function_call
def riesz_suite(functionals: int = 100, min_dim: int = 2, max_dim: int = 8,
                seed: int = DEFAULT_SEED, tolerance: float = 1e-12) -> InvariantReport:
    """Résidu du vecteur représentant pour des fonctionnelles aléatoires."""
    rng = np.random.default_rng(seed)
    errors = []
    for _ in range(functionals):
        dim = int(rng.integers(min_dim, max_dim + 1))
        model = HilbertModel(ModelKind.FINITE, dim=dim)
        _, residual = riesz_solve(model, random_vector(rng, dim))
        errors.append(residual)
    return _report("riesz", errors, tolerance, seed)


@log_function_call
def projection_adjoint_suite(pairs: int = 50, dim: int = 4, seed: int = DEFAULT_SEED,
                             tolerance: float = 1e-12) -> InvariantReport:
    """Matrice de dag(/u/ ^ /v/ .) contre celle de /v/ ^ /u/ ."""
    rng = np.random.default_rng(seed)
    errors = []
    u, v = State("u1"), State("u2")
    daggered = OperatorTerm(Dagger(OuterOp(OuterProduct(u, v))))
    swapped = OuterProduct(v, u)
    for _ in range(pairs):
        evaluator = Evaluator(random_model(rng, dim))
        left = evaluator.value(daggered).data
        right = evaluator.value(swapped).data
        errors.append(float(np.max(np.abs(left - right))))
    return _report("projection adjoint", errors, tolerance, seed)


def completeness_sum(dim: int) -> Sum:
    """sum_n /en/ ^ /en/ . sur la base standard e1..ed."""
    return Sum(tuple(OuterProduct(State(f"e{n}"), State(f"e{n}")) for n in range(1, dim + 1)))


@log_function_call
def completeness_suite(cases: int = 50, dim: int = 5, seed: int = DEFAULT_SEED,
                       tolerance: float = 1e-10) -> InvariantReport:
    """
    /x/ . I/y/ développé sur la base standard contre /x/ . /y/, et
    sum_n /en/ ^ /en/ . contre la matrice identité.
    """
    rng = np.random.default_rng(seed)
    errors = []
    basis = {f"e{n}": StateDef(f"e{n}", coeffs=np.eye(dim)[n - 1]) for n in range(1, dim + 1)}
    for _ in range(cases):
        states = dict(basis)
        states["x"] = StateDef("x", coeffs=random_vector(rng, dim))
        states["y"] = StateDef("y", coeffs=random_vector(rng, dim))
        model = HilbertModel(ModelKind.FINITE, dim=dim, states=states,
                             bases={"e": Basis("e", labels=tuple(basis))})
        evaluator = Evaluator(model)
        product = ScalarProduct(State("x"), State("y"))
        expanded = Rewriter(model=model).insert_identity(product, "e", Site.AT_DOT)
        errors.append(abs(evaluator.value(expanded).scalar - evaluator.value(product).scalar))
        identity = evaluator.value(completeness_sum(dim)).data
        errors.append(float(np.max(np.abs(identity - np.eye(dim)))))
    return _report("completeness", errors, tolerance, seed)


SUITES = {
    'schwarz': schwarz_suite,
    'adjoint': adjoint_suite,
    'antilinear-adjoint': antilinear_adjoint_suite,
    'riesz': riesz_suite,
    'projection-adjoint': projection_adjoint_suite,
    'completeness': completeness_suite,
}
