"""
Error types shared by every layer of the engine.
"""
from typing import Optional


class FacplError(Exception):
    """Base class for all engine errors"""


class SourceError(FacplError):
    """Syntax or static error in a text input, located by line and column (1-based)"""

    def __init__(self, message: str, line: int = 1, column: int = 1, snippet: str = "", path: Optional[str] = None):
        self.message = message
        self.line = line
        self.column = column
        self.snippet = snippet
        self.path = path
        super().__init__(str(self))

    def with_path(self, path: str) -> "SourceError":
        return SourceError(self.message, self.line, self.column, self.snippet, path)

    def __str__(self) -> str:
        where = f"{self.path}:" if self.path else ""
        text = f"{where}{self.line}:{self.column}: {self.message}"
        if self.snippet:
            text += f"\n    {self.snippet}\n    {' ' * (self.column - 1)}^"
        return text


class UsageError(FacplError):
    """An operation was called outside its contract"""


class EnumerationLimitError(FacplError):
    """The request space of a domain is larger than the configured cap"""

    def __init__(self, product: int, cap: int, factors: str = ""):
        self.product = product
        self.cap = cap
        detail = f" ({factors})" if factors else ""
        super().__init__(f"request space has {product} requests{detail}, above the cap of {cap}")


class EncodingError(FacplError):
    """A policy cannot be encoded against the given domain"""


class SolverError(FacplError):
    """The external SMT solver could not be run or its answer could not be read"""
