"""
Fixtures partagées: modèles livrés, corpus, modèles construits en mémoire.
"""

from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from src.models import HilbertModel, ModelKind, load_model_file
from src.models.hilbert import Linearity, OperatorSpec, StateDef

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture
def finite_model() -> HilbertModel:
    return load_model_file(DATA_DIR / "finite.model")


@pytest.fixture
def unbounded_model() -> HilbertModel:
    return load_model_file(DATA_DIR / "unbounded.model")


@pytest.fixture
def corpus_lines():
    text = (DATA_DIR / "corpus.txt").read_text(encoding="utf-8")
    return [line for line in (raw.split("#", 1)[0].strip() for raw in text.splitlines()) if line]


def power_law_model(q_u, p, q_v=Fraction(3)) -> HilbertModel:
    """u_n = n^-q_u, v_n = n^-q_v, (P x)_n = n^p x_n."""
    return HilbertModel(
        ModelKind.TRUNCATED,
        states={
            "u": StateDef("u", decay_q=Fraction(q_u)),
            "v": StateDef("v", decay_q=Fraction(q_v)),
        },
        operators={"P": OperatorSpec("P", power_p=Fraction(p))},
    )


def small_finite_model(seed: int = 0, dim: int = 3) -> HilbertModel:
    """Modèle fini aléatoire avec deux opérateurs linéaires et K anti-linéaire."""
    rng = np.random.default_rng(seed)

    def vector():
        return rng.normal(size=dim) + 1j * rng.normal(size=dim)

    def matrix():
        return rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))

    return HilbertModel(
        ModelKind.FINITE,
        dim=dim,
        states={label: StateDef(label, coeffs=vector()) for label in ("u", "v", "w", "x")},
        operators={
            "A": OperatorSpec("A", matrix=matrix()),
            "B": OperatorSpec("B", matrix=matrix()),
            "K": OperatorSpec("K", Linearity.ANTILINEAR, matrix=np.eye(dim)),
        },
    )
