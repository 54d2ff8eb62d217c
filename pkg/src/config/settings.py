"""
Système de configuration.

Charge et gère la configuration depuis config/config.yaml.
"""

import copy
from pathlib import Path
from typing import Any, Dict, List

import yaml

from ..utils.logger import get_logger

logger = get_logger()


DEFAULT_CONFIG: Dict[str, Any] = {
    'logging': {
        'level': 'WARNING',
        'format': 'text',
        'file': None,
        'rotation': '10 MB',
        'retention': '7 days'
    },
    'checker': {
        'acting_right_convention': False,
        'unknown_membership': 'warning'
    },
    'numeric': {
        'orthonormality_tolerance': 1e-10,
        'cauchy_tolerance': 1e-8,
        'growth_threshold': 0.05,
        'decay_threshold': -0.1,
        'sweep_ns': [3125, 6250, 12500, 25000, 50000, 100000],
        'demos': {
            'unbounded': {'decay_q': 0.75, 'power_p': 1, 'ns': [16, 256, 4096]},
            'hellinger': {'power_p': 1, 'ns': [10, 100, 1000]},
            'riesz': {'functionals': 100, 'min_dim': 2, 'max_dim': 8},
            'schwarz': {'pairs': 1000, 'max_dim': 16},
            'adjoint': {'triples': 100, 'min_dim': 2, 'max_dim': 8}
        }
    },
    'cli': {
        'seed': 42,
        'format': 'text'
    }
}


def _merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    """Fusion récursive: les clés de override remplacent celles de base."""
    merged = copy.deepcopy(base)
    for key, value in (override or {}).items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


class Settings:
    """
    Classe pour charger et gérer la configuration.

    Les valeurs du fichier config.yaml sont fusionnées avec les valeurs
    par défaut, de sorte qu'un fichier partiel reste valide.
    """

    def __init__(self, config_dir: str = "config"):
        """
        Initialise les settings.

        Args:
            config_dir: Répertoire contenant config.yaml
        """
        self.config_dir = Path(config_dir)
        self.config: Dict[str, Any] = {}

        self._load_configuration()

    def _load_configuration(self):
        """Charge le fichier de configuration."""
        config_file = self.config_dir / "config.yaml"
        if config_file.exists():
            with open(config_file, 'r', encoding='utf-8') as f:
                loaded = yaml.safe_load(f) or {}
            self.config = _merge(DEFAULT_CONFIG, loaded)
            logger.info(f"Loaded configuration from {config_file}")
        else:
            logger.warning(f"Config file not found: {config_file}, using defaults")
            self.config = copy.deepcopy(DEFAULT_CONFIG)

    # Accesseurs pour les différentes sections

    @property
    def logging_config(self) -> Dict[str, Any]:
        """Configuration du logging."""
        return self.config.get('logging', {})

    @property
    def checker_config(self) -> Dict[str, Any]:
        """Configuration du vérificateur."""
        return self.config.get('checker', {})

    @property
    def numeric_config(self) -> Dict[str, Any]:
        """Configuration numérique (tolérances, balayages)."""
        return self.config.get('numeric', {})

    @property
    def cli_config(self) -> Dict[str, Any]:
        """Configuration de la ligne de commande."""
        return self.config.get('cli', {})

    @property
    def sweep_ns(self) -> List[int]:
        """Niveaux de troncature par défaut."""
        return list(self.numeric_config.get('sweep_ns', []))

    def get_demo_config(self, demo_name: str) -> Dict[str, Any]:
        """
        Récupère la configuration d'une démonstration.

        Args:
            demo_name: Nom de la démonstration (unbounded, riesz, ...)

        Returns:
            Configuration de la démonstration
        """
        return self.numeric_config.get('demos', {}).get(demo_name, {})

    def reload(self):
        """Recharge la configuration depuis le fichier."""
        logger.info("Reloading configuration...")
        self._load_configuration()

    def __repr__(self) -> str:
        return f"Settings(config_dir={self.config_dir})"
