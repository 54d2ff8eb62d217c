"""
Package rendering - Rendu slash, bra-ket et LaTeX.
"""

from .renderers import (
    LATEX_PREAMBLE,
    BraketRendering,
    render_braket,
    render_latex,
    render_scalar,
    render_slash,
)

__all__ = [
    'LATEX_PREAMBLE',
    'BraketRendering',
    'render_braket',
    'render_latex',
    'render_scalar',
    'render_slash'
]
