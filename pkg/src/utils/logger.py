"""
Configuration du système de logging.

Utilise Loguru. La console écrit sur stderr: stdout est réservé à la sortie
des commandes (les rapports structurés doivent rester stables octet par octet).
"""

import os
import sys
from functools import wraps
from pathlib import Path
from typing import Optional

from loguru import logger

COLOR_ENV_VAR = "REPFREE_COLOR"


def resolve_colorize(mode: Optional[str] = None) -> bool:
    """
    Décide si la sortie console doit être colorée.

    Args:
        mode: auto, never ou always (défaut: variable REPFREE_COLOR, sinon auto)

    Returns:
        True si la couleur doit être activée
    """
    mode = (mode or os.environ.get(COLOR_ENV_VAR, "auto")).lower()
    if mode == "always":
        return True
    if mode == "never":
        return False
    if mode != "auto":
        logger.warning(f"Unknown {COLOR_ENV_VAR} value '{mode}', falling back to auto")
    return sys.stderr.isatty()


class LoggerConfig:
    """Configuration centralisée du logger."""

    def __init__(
        self,
        level: str = "WARNING",
        log_file: Optional[str] = None,
        rotation: str = "10 MB",
        retention: str = "7 days",
        format_type: str = "text",
        color: Optional[str] = None
    ):
        """
        Initialise la configuration du logger.

        Args:
            level: Niveau de log (DEBUG, INFO, WARNING, ERROR, CRITICAL)
            log_file: Chemin du fichier de log
            rotation: Taille de rotation des logs
            retention: Durée de rétention des logs
            format_type: Type de format (text ou json)
            color: Mode de couleur (auto, never, always)
        """
        self.level = level
        self.log_file = log_file
        self.rotation = rotation
        self.retention = retention
        self.format_type = format_type
        self.colorize = resolve_colorize(color)

        # Supprimer les handlers par défaut
        logger.remove()

        self._setup_logger()

    def _setup_logger(self):
        """Configure les handlers du logger."""
        console_format = (
            "<green>{time:YYYY-MM-DD HH:mm:ss}</green> | "
            "<level>{level: <8}</level> | "
            "<cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> | "
            "<level>{message}</level>"
        )

        logger.add(
            sys.stderr,
            format=console_format,
            level=self.level,
            colorize=self.colorize
        )

        if self.log_file:
            log_path = Path(self.log_file)
            log_path.parent.mkdir(parents=True, exist_ok=True)

            logger.add(
                self.log_file,
                format=console_format,
                level=self.level,
                rotation=self.rotation,
                retention=self.retention,
                compression="zip",
                serialize=self.format_type == "json"
            )

    @staticmethod
    def get_logger():
        """Retourne l'instance du logger."""
        return logger


def get_logger():
    """
    Retourne le logger configuré.

    Usage:
        from src.utils.logger import get_logger
        logger = get_logger()
        logger.info("Message")
    """
    return logger


def log_function_call(func):
    """
    Décorateur pour tracer les appels de fonction (niveau DEBUG).

    Usage:
        @log_function_call
        def ma_fonction(param1, param2):
            pass
    """
    @wraps(func)
    def wrapper(*args, **kwargs):
        logger.debug(f"Calling {func.__name__}")
        try:
            result = func(*args, **kwargs)
            logger.debug(f"{func.__name__} completed successfully")
            return result
        except Exception as e:
            logger.debug(f"{func.__name__} failed with error: {e}")
            raise
    return wrapper
