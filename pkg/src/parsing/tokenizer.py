"""
Découpage en jetons des deux notations.

Le tokenizer reconnaît les jetons des deux familles; c'est le parseur qui
décide de la notation et signale les mélanges.
"""

import re
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional

from ..models.errors import NotationSyntaxError, UnbalancedParenthesisError
from ..models.expr import Notation
from ..models.span import SourceSpan


class TokenKind(Enum):
    STATE = "state"  # /u/
    REDUCED = "reduced"  # /A//O//B/ ou <A||O||B>
    SEP = "^"
    DOT = "."
    BRA = "bra"  # <u|
    KET = "ket"  # |u>
    KET_TAIL = "ket-tail"  # v> après <u|
    IDENT = "identifier"
    IDENTITY = "identity"  # I[e]
    NUMBER = "number"
    COMPLEX = "complex"  # (a+bi)
    LPAREN = "("
    RPAREN = ")"
    PLUS = "+"
    STAR = "*"
    DAGGER = "†"
    EOF = "end of input"


SLASH_KINDS = frozenset({TokenKind.STATE, TokenKind.SEP, TokenKind.DOT})
BRAKET_KINDS = frozenset({TokenKind.BRA, TokenKind.KET, TokenKind.KET_TAIL})

_NUM = r"\d+(?:\.\d+)?(?:[eE][+-]?\d+)?"

_PATTERNS = [
    (TokenKind.COMPLEX, re.compile(
        rf"\(\s*([+-]?{_NUM})\s*([+-])\s*({_NUM})\s*[ij]\s*\)")),
    (TokenKind.REDUCED, re.compile(r"/([^/\n]+)//([^/\n]+)//([^/\n]+)/")),
    (TokenKind.REDUCED, re.compile(r"<([^|<>\n]+)\|\|([^|<>\n]+)\|\|([^|<>\n]+)>")),
    (TokenKind.SEP, re.compile(r"\^|∧|/\\(?=\s)")),
    (TokenKind.STATE, re.compile(r"/([^/\n]*)/")),
    (TokenKind.BRA, re.compile(r"<([^|<>\n]*)\|")),
    (TokenKind.KET, re.compile(r"\|([^|<>\n]*)>")),
    (TokenKind.IDENTITY, re.compile(r"I\[\s*([A-Za-z_][\w]*)\s*\]")),
    (TokenKind.IDENT, re.compile(r"[A-Za-z_][\w']*")),
    (TokenKind.NUMBER, re.compile(_NUM)),
    (TokenKind.DOT, re.compile(r"\.|·")),
    (TokenKind.LPAREN, re.compile(r"\(")),
    (TokenKind.RPAREN, re.compile(r"\)")),
    (TokenKind.PLUS, re.compile(r"\+")),
    (TokenKind.STAR, re.compile(r"\*")),
    (TokenKind.DAGGER, re.compile(r"†")),
]

_KET_TAIL = re.compile(r"([^|<>()\n]*)>")
_WHITESPACE = re.compile(r"\s+")


@dataclass(frozen=True)
class Token:
    """
    Jeton avec sa position.

    Attributes:
        kind: Type du jeton
        text: Texte source
        span: Position
        value: Valeur extraite (étiquette, nombre, nom)
    """
    kind: TokenKind
    text: str
    span: SourceSpan
    value: object = None

    @property
    def notation(self) -> Optional[Notation]:
        if self.kind in SLASH_KINDS or (self.kind is TokenKind.REDUCED and self.text.startswith("/")):
            return Notation.SLASH
        if self.kind in BRAKET_KINDS or (self.kind is TokenKind.REDUCED and self.text.startswith("<")):
            return Notation.BRAKET
        return None


class Tokenizer:
    """
    Tokenizer LL: un seul jeton de contexte (KET_TAIL n'est reconnu
    qu'immédiatement après un bra).
    """

    def __init__(self, text: str, line_offset: int = 0):
        self.text = text
        self.line_offset = line_offset
        self._line_starts = [0] + [i + 1 for i, c in enumerate(text) if c == "\n"]
        # offset UTF-8 de chaque position de caractère (alias ·, ∧, † sur plusieurs octets)
        self._byte_offsets = [0]
        for c in text:
            self._byte_offsets.append(self._byte_offsets[-1] + len(c.encode("utf-8")))

    def span(self, start: int, end: int) -> SourceSpan:
        """Span en octets à partir de positions en caractères; la colonne reste en caractères."""
        line = 0
        for index, offset in enumerate(self._line_starts):
            if offset <= start:
                line = index
        return SourceSpan(self._byte_offsets[start], self._byte_offsets[end],
                          line + 1 + self.line_offset, start - self._line_starts[line] + 1)

    def tokenize(self) -> List[Token]:
        tokens: List[Token] = []
        position = 0
        depth: List[int] = []
        while position < len(self.text):
            blank = _WHITESPACE.match(self.text, position)
            if blank:
                position = blank.end()
                continue
            token = self._next(position, tokens[-1] if tokens else None)
            if token.kind is TokenKind.LPAREN:
                depth.append(position)
            elif token.kind is TokenKind.RPAREN:
                if not depth:
                    raise UnbalancedParenthesisError("unmatched ')'", token.span)
                depth.pop()
            tokens.append(token)
            position += len(token.text)
        if depth:
            raise UnbalancedParenthesisError("unclosed '('", self.span(depth[-1], depth[-1] + 1))
        tokens.append(Token(TokenKind.EOF, "", self.span(len(self.text), len(self.text))))
        return tokens

    def _next(self, position: int, previous: Optional[Token]) -> Token:
        if previous is not None and previous.kind is TokenKind.BRA:
            tail = _KET_TAIL.match(self.text, position)
            if tail:
                return Token(TokenKind.KET_TAIL, tail.group(0), self.span(position, tail.end()),
                             tail.group(1).strip())
        for kind, pattern in _PATTERNS:
            match = pattern.match(self.text, position)
            if not match:
                continue
            span = self.span(position, match.end())
            return Token(kind, match.group(0), span, self._value(kind, match, span))
        raise NotationSyntaxError(f"unexpected character '{self.text[position]}'",
                                  self.span(position, position + 1))

    def _value(self, kind: TokenKind, match: re.Match, span: SourceSpan):
        if kind is TokenKind.COMPLEX:
            real = float(match.group(1))
            imag = float(match.group(3))
            return complex(real, -imag if match.group(2) == "-" else imag)
        if kind is TokenKind.NUMBER:
            return complex(float(match.group(0)), 0.0)
        if kind is TokenKind.REDUCED:
            return tuple(part.strip() for part in match.groups())
        if kind in (TokenKind.STATE, TokenKind.BRA, TokenKind.KET, TokenKind.IDENTITY):
            label = match.group(1).strip()
            if not label:
                raise NotationSyntaxError("empty label", span)
            return label
        if kind is TokenKind.IDENT:
            return match.group(0)
        return None


def tokenize(text: str, line_offset: int = 0) -> List[Token]:
    """Découpe un texte en jetons (EOF final inclus)."""
    return Tokenizer(text, line_offset).tokenize()
