# Copyright (C) 2023, CERN
# This software is distributed under the terms of the MIT
# licence, copied verbatim in the file "LICENSE".
# In applying this license, CERN does not waive the privileges and immunities
# granted to it by virtue of its status as Intergovernmental Organization
# or submit itself to any jurisdiction.

from __future__ import annotations

import dataclasses


@dataclasses.dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int

    def __str__(self) -> str:
        return f"line {self.line}, column {self.column}"


class LNNError(Exception):
    """Base class of every error raised for a bad knowledge base or model."""


class KBSyntaxError(LNNError):
    def __init__(self, message: str, span: SourceSpan):
        super().__init__(f"{span}: {message}")
        self.message = message
        self.span = span


class UndeclaredSymbolError(KBSyntaxError):
    def __init__(self, symbol: str, span: SourceSpan, *, kind: str = "symbol"):
        super().__init__(f"undeclared {kind} '{symbol}'", span)
        self.symbol = symbol


class ArityError(KBSyntaxError):
    def __init__(self, symbol: str, expected: int, got: int, span: SourceSpan):
        super().__init__(
            f"'{symbol}' is declared with arity {expected} but used with {got} argument(s)",
            span,
        )
        self.symbol = symbol
        self.expected = expected
        self.got = got


class DuplicateDeclarationError(KBSyntaxError):
    def __init__(self, symbol: str, span: SourceSpan):
        super().__init__(f"'{symbol}' is already declared", span)
        self.symbol = symbol


class TheoryError(LNNError):
    """A construct requires a first-order theory which is not enabled."""


class SubstitutionError(LNNError):
    pass


class RewriteError(LNNError):
    pass


class CompileError(LNNError):
    pass


class ConfigurationError(LNNError, ValueError):
    pass


class InvariantViolation(LNNError):
    """An internal guarantee of the engine did not hold."""
