"""
Regular expressions: syntax tree, parser, Thompson construction and state elimination.

The syntax tree is shared by two clients. Definition files describe edge
languages of chop automata with it, and range computations turn an automaton
into an expression over its transitions by state elimination before
evaluating it in a commutative monoid with ``fold``.

Surface syntax (whitespace is ignored)::

    r|s   union            rs   concatenation      r*  r+  r?   postfix operators
    (r)   grouping         ()   empty word         .            any symbol of the alphabet
    [ab]  symbol class     \\x   escaped symbol     <tok>        multi-character symbol
"""

from __future__ import annotations

from abc import ABC
from collections.abc import Callable, Hashable, Iterable
from dataclasses import dataclass
from typing import TypeVar

import src.automata as am
from src.errors import InputError

T = TypeVar("T")

_SPECIAL = set("|*+?()[].\\<>")


class RegexSyntaxError(InputError):
    """Syntax error at a character offset of a regular expression."""

    def __init__(self, message: str, position: int) -> None:
        super().__init__(message)
        self.position = position


class Regex(ABC):  # noqa: B024
    """Base class of regular expression nodes."""


@dataclass(frozen=True)
class EmptySet(Regex):
    """The empty language."""

    def __str__(self) -> str:
        return "∅"


@dataclass(frozen=True)
class Epsilon(Regex):
    """The language containing only the empty word."""

    def __str__(self) -> str:
        return "()"


@dataclass(frozen=True)
class Letter(Regex):
    """A single letter; letters are symbols or any hashable label."""

    symbol: Hashable

    def __str__(self) -> str:
        text = str(self.symbol)
        if len(text) == 1:
            return f"\\{text}" if text in _SPECIAL else text
        return f"<{text}>"


@dataclass(frozen=True)
class Concat(Regex):
    """Concatenation of two expressions."""

    left: Regex
    right: Regex

    def __str__(self) -> str:
        return f"{_wrap(self.left, Union)}{_wrap(self.right, Union)}"


@dataclass(frozen=True)
class Union(Regex):
    """Union of two expressions."""

    left: Regex
    right: Regex

    def __str__(self) -> str:
        return f"{self.left}|{self.right}"


@dataclass(frozen=True)
class Star(Regex):
    """Kleene closure."""

    inner: Regex

    def __str__(self) -> str:
        return f"{_wrap(self.inner, Union, Concat)}*"


def _wrap(node: Regex, *kinds: type) -> str:
    return f"({node})" if isinstance(node, kinds) else str(node)


def concat(left: Regex, right: Regex) -> Regex:
    """Concatenate, simplifying the empty language and the empty word."""
    if isinstance(left, EmptySet) or isinstance(right, EmptySet):
        return EmptySet()
    if isinstance(left, Epsilon):
        return right
    if isinstance(right, Epsilon):
        return left
    return Concat(left, right)


def union(left: Regex, right: Regex) -> Regex:
    """Unite, dropping the empty language and syntactic duplicates."""
    if isinstance(left, EmptySet):
        return right
    if isinstance(right, EmptySet) or left == right:
        return left
    return Union(left, right)


def star(inner: Regex) -> Regex:
    """Close under iteration, simplifying trivial arguments."""
    if isinstance(inner, EmptySet | Epsilon):
        return Epsilon()
    if isinstance(inner, Star):
        return inner
    return Star(inner)


def fold(
    node: Regex,
    letter: Callable[[Hashable], T],
    empty: Callable[[], T],
    epsilon: Callable[[], T],
    times: Callable[[T, T], T],
    plus: Callable[[T, T], T],
    closure: Callable[[T], T],
) -> T:
    """Evaluate an expression homomorphically.

    Shared subtrees (frequent after state elimination) are evaluated once.
    """
    memo: dict[int, T] = {}

    def visit(current: Regex) -> T:
        key = id(current)
        if key in memo:
            return memo[key]
        if isinstance(current, EmptySet):
            value = empty()
        elif isinstance(current, Epsilon):
            value = epsilon()
        elif isinstance(current, Letter):
            value = letter(current.symbol)
        elif isinstance(current, Concat):
            value = times(visit(current.left), visit(current.right))
        elif isinstance(current, Union):
            value = plus(visit(current.left), visit(current.right))
        elif isinstance(current, Star):
            value = closure(visit(current.inner))
        else:
            msg = f"Unknown regular expression node {current!r}"
            raise TypeError(msg)
        memo[key] = value
        return value

    return visit(node)


class _Parser:
    """Recursive descent parser over the surface syntax."""

    def __init__(self, text: str, alphabet: frozenset[str]) -> None:
        self.text = text
        self.alphabet = alphabet
        self.pos = 0

    def error(self, message: str) -> RegexSyntaxError:
        return RegexSyntaxError(f"{message} at offset {self.pos} in /{self.text}/", self.pos)

    def peek(self) -> str | None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else None

    def take(self) -> str:
        char = self.peek()
        if char is None:
            raise self.error("Unexpected end of expression")
        self.pos += 1
        return char

    def symbol(self, name: str) -> Regex:
        if name not in self.alphabet:
            raise self.error(f"Symbol {name!r} is not in the alphabet")
        return Letter(name)

    def parse(self) -> Regex:
        node = self.alternation()
        if self.peek() is not None:
            raise self.error(f"Unexpected {self.peek()!r}")
        return node

    def alternation(self) -> Regex:
        node = self.sequence()
        while self.peek() == "|":
            self.take()
            node = union(node, self.sequence())
        return node

    def sequence(self) -> Regex:
        node: Regex = Epsilon()
        while self.peek() not in {None, "|", ")"}:
            node = concat(node, self.postfix())
        return node

    def postfix(self) -> Regex:
        node = self.atom()
        while self.peek() in {"*", "+", "?"}:
            operator = self.take()
            if operator == "*":
                node = star(node)
            elif operator == "+":
                node = concat(node, star(node))
            else:
                node = union(Epsilon(), node)
        return node

    def atom(self) -> Regex:
        char = self.take()
        if char == "(":
            node = self.alternation()
            if self.take() != ")":
                raise self.error("Expected ')'")
            return node
        if char == "[":
            members: Regex = EmptySet()
            while self.peek() != "]":
                inner = self.take()
                name = self.take() if inner == "\\" else self.token() if inner == "<" else inner
                members = union(members, self.symbol(name))
            self.take()
            return members
        if char == ".":
            node = EmptySet()
            for name in sorted(self.alphabet):
                node = union(node, Letter(name))
            return node
        if char == "\\":
            return self.symbol(self.take())
        if char == "<":
            return self.symbol(self.token())
        if char in _SPECIAL:
            raise self.error(f"Unexpected {char!r}")
        return self.symbol(char)

    def token(self) -> str:
        end = self.text.find(">", self.pos)
        if end < 0:
            raise self.error("Unterminated <token>")
        name = self.text[self.pos : end]
        self.pos = end + 1
        return name


def parse_regex(text: str, alphabet: Iterable[str]) -> Regex:
    """Parse the surface syntax into a syntax tree.

    Raises
    ------
    RegexSyntaxError
        With the character offset of the problem.
    """
    return _Parser(text, frozenset(alphabet)).parse()


def to_nfa(node: Regex, alphabet: Iterable[str]) -> am.Nfa:
    """Build an epsilon-free trimmed automaton by Thompson's construction."""
    symbols = frozenset(alphabet)
    transitions: set = set()
    counter = iter(range(1_000_000_000))

    def build(current: Regex) -> tuple[int, int]:
        start, end = next(counter), next(counter)
        if isinstance(current, Epsilon):
            transitions.add((start, None, end))
        elif isinstance(current, Letter):
            if current.symbol not in symbols:
                msg = f"Symbol {current.symbol!r} is not in the alphabet"
                raise InputError(msg)
            transitions.add((start, current.symbol, end))
        elif isinstance(current, Concat):
            s1, e1 = build(current.left)
            s2, e2 = build(current.right)
            transitions.update({(start, None, s1), (e1, None, s2), (e2, None, end)})
        elif isinstance(current, Union):
            for part in (current.left, current.right):
                s, e = build(part)
                transitions.update({(start, None, s), (e, None, end)})
        elif isinstance(current, Star):
            s, e = build(current.inner)
            transitions.update({(start, None, s), (e, None, end), (start, None, end), (e, None, s)})
        return start, end

    start, end = build(node)
    states = {start, end} | {p for p, _, _ in transitions} | {q for _, _, q in transitions}
    automaton = am.Nfa(frozenset(states), symbols, frozenset({start}), frozenset({end}), frozenset(transitions))
    return am.trim(am.remove_epsilon(automaton)).renumber()


def state_elimination(
    states: Iterable[Hashable],
    initial: Iterable[Hashable],
    final: Iterable[Hashable],
    edges: Iterable[tuple[Hashable, Regex, Hashable]],
) -> Regex:
    """Turn a labelled graph into one expression for its initial-to-final paths.

    States are removed lowest degree first (number of distinct neighbours,
    ties broken by representation).
    """
    source, sink = ("elimination", "source"), ("elimination", "sink")
    graph: dict[tuple, Regex] = {}

    def add(p: Hashable, label: Regex, q: Hashable) -> None:
        graph[p, q] = union(graph.get((p, q), EmptySet()), label)

    for state in initial:
        add(source, Epsilon(), state)
    for state in final:
        add(state, Epsilon(), sink)
    for p, label, q in edges:
        add(p, label, q)

    def degree(state: Hashable) -> tuple[int, str]:
        neighbours = {q for (p, q) in graph if p == state} | {p for (p, q) in graph if q == state}
        neighbours.discard(state)
        return len(neighbours), repr(state)

    remaining = set(states)
    while remaining:
        victim = min(remaining, key=degree)
        remaining.discard(victim)
        loop = star(graph.pop((victim, victim), EmptySet()))
        incoming = [(p, label) for (p, q), label in graph.items() if q == victim]
        outgoing = [(q, label) for (p, q), label in graph.items() if p == victim]
        for p, _ in incoming:
            del graph[p, victim]
        for q, _ in outgoing:
            del graph[victim, q]
        for p, left in incoming:
            for q, right in outgoing:
                add(p, concat(left, concat(loop, right)), q)
    return graph.get((source, sink), EmptySet())


def nfa_to_regex(a: am.Nfa) -> Regex:
    """Return an expression for L(a) by state elimination."""
    edges = [(p, Epsilon() if symbol is None else Letter(symbol), q) for p, symbol, q in am.ordered(a.transitions)]
    return state_elimination(a.states, a.initial, a.final, edges)
