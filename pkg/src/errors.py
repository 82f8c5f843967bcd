"""
Exception hierarchy of the quantitative expressions toolkit.

Library modules raise these; only the command line layer turns them into
exit codes and coloured diagnostics.
"""

from __future__ import annotations

from collections.abc import Sequence


class QuantLangError(Exception):
    """Base class of every error raised by the toolkit."""


class InputError(QuantLangError):
    """Malformed input or violated precondition.

    Parameters
    ----------
    message : str
        Human readable description.
    word : Sequence[str], optional
        Counterexample word attached to the error, if any.
    """

    def __init__(self, message: str, word: Sequence[str] | None = None) -> None:
        super().__init__(message)
        self.word = tuple(word) if word is not None else None


class AmbiguityError(InputError):
    """An automaton required to be unambiguous has two accepting runs on some word."""


class FunctionalityError(QuantLangError):
    """A combinator produced zero or several outputs for an argument tuple."""

    def __init__(self, message: str, args: Sequence[int]) -> None:
        super().__init__(message)
        self.args_tuple = tuple(args)


class UnsupportedCombinatorError(QuantLangError):
    """A decision procedure met a combinator without piecewise-linear structure."""


class NotSynchronisedError(QuantLangError):
    """Starred expressions or chop automata that are not synchronised.

    Parameters
    ----------
    message : str
        Human readable description.
    first, second : str
        Descriptions of the offending pair (star nodes or automata).
    word : Sequence[str], optional
        Word on which the pair disagrees.
    """

    def __init__(self, message: str, first: str, second: str, word: Sequence[str] | None = None) -> None:
        super().__init__(message)
        self.first = first
        self.second = second
        self.word = tuple(word) if word is not None else None


class ChopError(QuantLangError):
    """Structural violation in a generalised or weighted chop automaton."""


class CounterMachineError(QuantLangError):
    """Ill-typed counter machine or configuration."""


class DefinitionError(QuantLangError):
    """Semantic error in a definition file (unknown reference, arity, flags)."""

    def __init__(self, message: str, line: int = 0, column: int = 0) -> None:
        location = f"line {line}, column {column}: " if line else ""
        super().__init__(f"{location}{message}")
        self.line = line
        self.column = column
        self.message = message


class DefinitionSyntaxError(DefinitionError):
    """Positioned syntax error in a definition file."""
