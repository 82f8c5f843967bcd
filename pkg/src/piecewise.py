"""
Piecewise-linear integer functions.

Combinators used by decision procedures are built from arguments, integer
constants, addition, scaling by an integer and n-ary max/min. The same tree
serves evaluation, the Presburger formula of a combinator, the Lipschitz
constant of an s-expression and the case split used to take images of
semi-linear sets.
"""

from __future__ import annotations

import itertools
from collections.abc import Sequence
from dataclasses import dataclass


@dataclass(frozen=True)
class Arg:
    """The ``index``-th argument."""

    index: int


@dataclass(frozen=True)
class Const:
    """An integer constant."""

    value: int


@dataclass(frozen=True)
class Add:
    """Sum of two functions."""

    left: Pwl
    right: Pwl


@dataclass(frozen=True)
class Scale:
    """Integer multiple of a function."""

    factor: int
    inner: Pwl


@dataclass(frozen=True)
class Max:
    """Pointwise maximum of at least one function."""

    args: tuple[Pwl, ...]


@dataclass(frozen=True)
class Min:
    """Pointwise minimum of at least one function."""

    args: tuple[Pwl, ...]


Pwl = Arg | Const | Add | Scale | Max | Min


@dataclass(frozen=True)
class Guard:
    """Linear constraint ``coefficients · x + constant >= 0``."""

    coefficients: tuple[int, ...]
    constant: int


@dataclass(frozen=True)
class Piece:
    """Affine function ``coefficients · x + constant`` valid where every guard holds."""

    coefficients: tuple[int, ...]
    constant: int
    guards: tuple[Guard, ...] = ()


def minus(left: Pwl, right: Pwl) -> Pwl:
    """Return ``left - right``."""
    return Add(left, Scale(-1, right))


def evaluate(p: Pwl, args: Sequence[int]) -> int:
    """Evaluate ``p`` on an argument vector."""
    match p:
        case Arg(index):
            return args[index]
        case Const(value):
            return value
        case Add(left, right):
            return evaluate(left, args) + evaluate(right, args)
        case Scale(factor, inner):
            return factor * evaluate(inner, args)
        case Max(items):
            return max(evaluate(item, args) for item in items)
        case Min(items):
            return min(evaluate(item, args) for item in items)
    msg = f"Unknown piecewise-linear node {p!r}"
    raise TypeError(msg)


def substitute(p: Pwl, replacements: Sequence[Pwl]) -> Pwl:
    """Replace every ``Arg(i)`` by ``replacements[i]`` (function composition)."""
    match p:
        case Arg(index):
            return replacements[index]
        case Const():
            return p
        case Add(left, right):
            return Add(substitute(left, replacements), substitute(right, replacements))
        case Scale(factor, inner):
            return Scale(factor, substitute(inner, replacements))
        case Max(items):
            return Max(tuple(substitute(item, replacements) for item in items))
        case Min(items):
            return Min(tuple(substitute(item, replacements) for item in items))
    msg = f"Unknown piecewise-linear node {p!r}"
    raise TypeError(msg)


def arguments(p: Pwl) -> frozenset[int]:
    """Return the argument indices occurring in ``p``."""
    match p:
        case Arg(index):
            return frozenset({index})
        case Const():
            return frozenset()
        case Add(left, right):
            return arguments(left) | arguments(right)
        case Scale(_, inner):
            return arguments(inner)
        case Max(items) | Min(items):
            return frozenset().union(*(arguments(item) for item in items))
    msg = f"Unknown piecewise-linear node {p!r}"
    raise TypeError(msg)


def _affine_add(first: Piece, second: Piece, factor: int = 1) -> tuple[tuple[int, ...], int]:
    coefficients = tuple(a + factor * b for a, b in zip(first.coefficients, second.coefficients, strict=True))
    return coefficients, first.constant + factor * second.constant


def _keep(guards: Sequence[Guard]) -> tuple[Guard, ...] | None:
    """Drop trivially true guards; None when some guard is trivially false."""
    kept = []
    for guard in guards:
        if not any(guard.coefficients):
            if guard.constant < 0:
                return None
            continue
        if guard not in kept:
            kept.append(guard)
    return tuple(kept)


def pieces(p: Pwl, arity: int) -> list[Piece]:
    """Split ``p`` into affine pieces with linear guards.

    The guards of the pieces cover Z^arity; pieces may overlap on ties of a
    max/min, where they agree.
    """
    match p:
        case Arg(index):
            return [Piece(tuple(int(i == index) for i in range(arity)), 0)]
        case Const(value):
            return [Piece((0,) * arity, value)]
        case Add(left, right):
            result = []
            for first, second in itertools.product(pieces(left, arity), pieces(right, arity)):
                guards = _keep(first.guards + second.guards)
                if guards is not None:
                    result.append(Piece(*_affine_add(first, second), guards))
            return result
        case Scale(factor, inner):
            return [Piece(tuple(factor * c for c in piece.coefficients), factor * piece.constant, piece.guards) for piece in pieces(inner, arity)]
        case Max(items) | Min(items):
            sign = 1 if isinstance(p, Max) else -1
            result = []
            for choice in itertools.product(*(pieces(item, arity) for item in items)):
                common = tuple(guard for piece in choice for guard in piece.guards)
                for chosen, winner in enumerate(choice):
                    comparisons = [
                        Guard(tuple(sign * c for c in diff[0]), sign * diff[1])
                        for other, piece in enumerate(choice)
                        if other != chosen
                        for diff in (_affine_add(winner, piece, -1),)
                    ]
                    guards = _keep(common + tuple(comparisons))
                    if guards is not None:
                        result.append(Piece(winner.coefficients, winner.constant, guards))
            return result
    msg = f"Unknown piecewise-linear node {p!r}"
    raise TypeError(msg)


def lipschitz(p: Pwl, constants: Sequence[int]) -> int:
    """Return a Lipschitz constant of ``p`` composed with arguments of constants ``constants``."""
    match p:
        case Arg(index):
            return constants[index]
        case Const():
            return 0
        case Add(left, right):
            return lipschitz(left, constants) + lipschitz(right, constants)
        case Scale(factor, inner):
            return abs(factor) * lipschitz(inner, constants)
        case Max(items) | Min(items):
            return max(lipschitz(item, constants) for item in items)
    msg = f"Unknown piecewise-linear node {p!r}"
    raise TypeError(msg)


def is_simple(p: Pwl) -> bool:
    """Whether ``p`` only uses max, min, addition and subtraction of arguments."""
    match p:
        case Arg():
            return True
        case Const():
            return False
        case Add(left, right):
            return is_simple(left) and is_simple(right)
        case Scale(factor, inner):
            return factor in {1, -1} and is_simple(inner)
        case Max(items) | Min(items):
            return all(is_simple(item) for item in items)
    return False


def to_text(p: Pwl, names: Sequence[str]) -> str:
    """Render ``p`` in the expression syntax of definition files, arguments named by ``names``."""
    match p:
        case Arg(index):
            return names[index]
        case Const(value):
            return str(value) if value >= 0 else f"(-{-value})"
        case Add(left, Scale(-1, right)):
            return f"({to_text(left, names)} - {to_text(right, names)})"
        case Add(left, right):
            return f"({to_text(left, names)} + {to_text(right, names)})"
        case Scale(-1, inner):
            return f"neg({to_text(inner, names)})"
        case Scale(factor, inner):
            return f"({factor} * {to_text(inner, names)})" if factor >= 0 else f"((-{-factor}) * {to_text(inner, names)})"
        case Max(items):
            return f"max({', '.join(to_text(item, names) for item in items)})"
        case Min(items):
            return f"min({', '.join(to_text(item, names) for item in items)})"
    msg = f"Unknown piecewise-linear node {p!r}"
    raise TypeError(msg)
