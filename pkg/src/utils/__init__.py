"""
Package utils - Utilitaires.
"""

from .logger import get_logger, LoggerConfig, log_function_call

__all__ = ['get_logger', 'LoggerConfig', 'log_function_call']
