"""
Package parsing - Lecture des notations slash et bra-ket.
"""

from .parser import ParseResult, parse, parse_file
from .tokenizer import Token, TokenKind, tokenize

__all__ = [
    'ParseResult',
    'parse',
    'parse_file',
    'Token',
    'TokenKind',
    'tokenize'
]
