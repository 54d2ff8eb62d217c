"""
Positions dans le texte source.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class SourceSpan:
    """
    Intervalle d'octets dans le texte source.

    Attributes:
        start: Offset de début (inclus)
        end: Offset de fin (exclu)
        line: Ligne (à partir de 1)
        column: Colonne du début (à partir de 1)
    """
    start: int
    end: int
    line: int = 1
    column: int = 1

    def __post_init__(self):
        if self.start > self.end:
            raise ValueError(f"Span start {self.start} after end {self.end}")

    def cover(self, other: "SourceSpan") -> "SourceSpan":
        """Plus petit intervalle contenant les deux."""
        first = self if self.start <= other.start else other
        return SourceSpan(
            start=min(self.start, other.start),
            end=max(self.end, other.end),
            line=first.line,
            column=first.column
        )

    def contains(self, other: "SourceSpan") -> bool:
        return self.start <= other.start and other.end <= self.end

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"
