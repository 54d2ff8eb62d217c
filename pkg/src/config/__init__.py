"""
Package config - Configuration de repfree.
"""

from .settings import Settings

__all__ = ['Settings']