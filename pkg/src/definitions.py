"""
Definition files: parsing and writing.

A definition file declares an alphabet, regular languages, weighted automata,
combinators, expressions and chop automata, one statement per line or per
``{}`` block; ``#`` starts a comment (except in ``*#`` and inside ``/.../``).
The grammar is documented in ``DEFINITIONS.md``.

``write_chops`` renders chop automata back into the same syntax so that the
output of ``compile`` can be parsed again.
"""

from __future__ import annotations

import pathlib
import re
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass, field
from typing import NamedTuple

import src.automata as am
import src.chop as ch
import src.constants as const
import src.expressions as ex
import src.logging_utils as lu
import src.piecewise as pw
import src.presburger as pb
import src.regex as rx
import src.weighted as wa
from src.errors import ChopError, DefinitionError, DefinitionSyntaxError, FunctionalityError, InputError

logger = lu.setup_logger(__name__)

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_TOKEN = re.compile(r"(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>\*#|>=|<=|->|[-+*(),.=<>\[\]])")
_KEYWORDS = {"and", "or", "exists"}


@dataclass
class DefinitionFile:
    """Named objects of a definition file.

    Attributes
    ----------
    alphabet : frozenset[str]
        The declared symbols.
    languages : dict[str, Nfa]
        ``language`` and ``nfa`` declarations.
    automata : dict[str, WeightedAutomaton]
        ``wa`` declarations.
    combinators : dict[str, FunctionalCombinator]
        ``combinator`` declarations.
    expressions : dict[str, Expression]
        ``expr`` declarations.
    chops : dict[str, ChopAutomaton]
        ``chop`` declarations.
    """

    alphabet: frozenset[str] = frozenset()
    languages: dict[str, am.Nfa] = field(default_factory=dict)
    automata: dict[str, wa.WeightedAutomaton] = field(default_factory=dict)
    combinators: dict[str, pb.FunctionalCombinator] = field(default_factory=dict)
    expressions: dict[str, ex.Expression] = field(default_factory=dict)
    chops: dict[str, ch.ChopAutomaton] = field(default_factory=dict)
    atoms: dict[str, ex.Atom] = field(default_factory=dict, repr=False)

    def names(self) -> set[str]:
        """Every declared name."""
        return {*self.languages, *self.automata, *self.combinators, *self.expressions, *self.chops}

    def atom(self, name: str) -> ex.Atom:
        """The atom of a weighted automaton, created once per name."""
        if name not in self.atoms:
            self.atoms[name] = ex.Atom(self.automata[name], name)
        return self.atoms[name]

    def expression(self, name: str) -> ex.Expression:
        """Expression named ``name``; a weighted automaton name gives its atom.

        Raises
        ------
        DefinitionError
            If no expression or weighted automaton has that name.
        """
        if name in self.expressions:
            return self.expressions[name]
        if name in self.automata:
            return self.atom(name)
        msg = f"Unknown expression {name!r}"
        raise DefinitionError(msg)

    def target(self, name: str) -> ex.Expression | ch.ChopAutomaton:
        """Expression or chop automaton named ``name``."""
        if name in self.chops:
            return self.chops[name]
        return self.expression(name)


class _Token(NamedTuple):
    kind: str
    text: str
    column: int


class _Stream:
    """Token cursor over one statement."""

    def __init__(self, text: str, line: int, column: int) -> None:
        self.line = line
        self.tokens: list[_Token] = []
        position = 0
        while position < len(text):
            if text[position].isspace():
                position += 1
                continue
            match = _TOKEN.match(text, position)
            if match is None:
                msg = f"Unexpected character {text[position]!r}"
                raise DefinitionSyntaxError(msg, line, column + position)
            self.tokens.append(_Token(match.lastgroup, match.group(), column + position))
            position = match.end()
        self.end_column = column + len(text)
        self.index = 0

    def peek(self) -> _Token | None:
        return self.tokens[self.index] if self.index < len(self.tokens) else None

    def at(self, *texts: str) -> bool:
        token = self.peek()
        return token is not None and token.text in texts

    def take(self) -> _Token:
        token = self.peek()
        if token is None:
            raise self.error("Unexpected end of statement")
        self.index += 1
        return token

    def expect(self, text: str) -> _Token:
        token = self.peek()
        if token is None or token.text != text:
            raise self.error(f"Expected {text!r}")
        return self.take()

    def name(self) -> _Token:
        token = self.peek()
        if token is None or token.kind != "name" or token.text in _KEYWORDS:
            raise self.error("Expected a name")
        return self.take()

    def integer(self) -> int:
        sign = -1 if self.at("-") else 1
        if sign < 0:
            self.take()
        token = self.peek()
        if token is None or token.kind != "int":
            raise self.error("Expected an integer")
        return sign * int(self.take().text)

    def finish(self) -> None:
        if self.peek() is not None:
            raise self.error(f"Unexpected {self.peek().text!r}")

    def error(self, message: str) -> DefinitionSyntaxError:
        token = self.peek()
        return DefinitionSyntaxError(message, self.line, token.column if token else self.end_column)


@dataclass(frozen=True)
class _Lin:
    """Piecewise-linear function of distinct leaves (expressions or chop automata)."""

    pwl: pw.Pwl
    leaves: tuple = ()

    @property
    def is_constant(self) -> bool:
        return not self.leaves


@dataclass(frozen=True)
class _Call:
    """User combinator applied to chop automata; only a whole edge label."""

    combinator: pb.FunctionalCombinator
    children: tuple


def _merge(values: Sequence[_Lin]) -> tuple[list[pw.Pwl], tuple]:
    leaves: list = []
    index: dict[int, int] = {}
    bodies = []
    for value in values:
        mapping = []
        for leaf in value.leaves:
            if id(leaf) not in index:
                index[id(leaf)] = len(leaves)
                leaves.append(leaf)
            mapping.append(pw.Arg(index[id(leaf)]))
        bodies.append(pw.substitute(value.pwl, mapping))
    return bodies, tuple(leaves)


def _combinator_for(p: pw.Pwl, arity: int) -> pb.FunctionalCombinator:
    """Builtin combinator with this structure, or a generated one."""
    candidates = [pb.identity(), pb.negate(), pb.minus(), pb.abs_diff(), pb.maximum(arity), pb.minimum(arity), pb.plus(arity)]
    for candidate in candidates:
        if candidate.arity == arity and candidate.pwl == p:
            return candidate
    return pb.from_pwl(p, arity)


class _ExpressionParser:
    """Arithmetic, builtin calls, user combinators and ``*#`` over named leaves."""

    def __init__(
        self,
        stream: _Stream,
        resolve: Callable[[_Token], object],
        combinators: Mapping[str, pb.FunctionalCombinator],
        *,
        chop_mode: bool,
    ) -> None:
        self.stream = stream
        self.resolve = resolve
        self.combinators = combinators
        self.chop_mode = chop_mode

    def parse(self) -> _Lin | _Call:
        value = self.sum()
        self.stream.finish()
        return value

    def lin(self, value: _Lin | _Call, token: _Token | None) -> _Lin:
        if isinstance(value, _Call):
            msg = "A user combinator in a chop label must be the whole label"
            raise DefinitionSyntaxError(msg, self.stream.line, token.column if token else 0)
        return value

    def sum(self) -> _Lin | _Call:
        start = self.stream.peek()
        value = self.product()
        while self.stream.at("+", "-"):
            operator = self.stream.take()
            right = self.lin(self.product(), operator)
            (left_body, right_body), leaves = _merge([self.lin(value, start), right])
            body = pw.Add(left_body, right_body) if operator.text == "+" else pw.minus(left_body, right_body)
            value = _Lin(body, leaves)
        return value

    def product(self) -> _Lin | _Call:
        start = self.stream.peek()
        value = self.unary()
        while self.stream.at("*"):
            operator = self.stream.take()
            left, right = self.lin(value, start), self.lin(self.unary(), operator)
            if not (left.is_constant or right.is_constant):
                msg = "One side of '*' must be a constant"
                raise DefinitionSyntaxError(msg, self.stream.line, operator.column)
            factor, other = (left, right) if left.is_constant else (right, left)
            value = _Lin(pw.Scale(pw.evaluate(factor.pwl, []), other.pwl), other.leaves)
        return value

    def unary(self) -> _Lin | _Call:
        if self.stream.at("-"):
            operator = self.stream.take()
            inner = self.lin(self.unary(), operator)
            return _Lin(pw.Scale(-1, inner.pwl), inner.leaves)
        return self.postfix()

    def postfix(self) -> _Lin | _Call:
        start = self.stream.peek()
        value = self.primary()
        while self.stream.at("*#"):
            operator = self.stream.take()
            if self.chop_mode:
                msg = "Iterated sums are not allowed in chop labels"
                raise DefinitionSyntaxError(msg, self.stream.line, operator.column)
            value = _Lin(pw.Arg(0), (ex.Star(self.finish(self.lin(value, start), start)),))
        return value

    def finish(self, value: _Lin, token: _Token | None) -> ex.Expression:
        if value.is_constant:
            msg = "A constant has no domain; use const(E, c)"
            raise DefinitionSyntaxError(msg, self.stream.line, token.column if token else 0)
        if value.pwl == pw.Arg(0) and len(value.leaves) == 1:
            return value.leaves[0]
        return ex.Combine(_combinator_for(value.pwl, len(value.leaves)), value.leaves)

    def arguments(self) -> list[tuple[_Token, _Lin]]:
        self.stream.expect("(")
        items = []
        while True:
            start = self.stream.peek()
            items.append((start, self.lin(self.sum(), start)))
            if self.stream.at(")"):
                self.stream.take()
                return items
            self.stream.expect(",")

    def primary(self) -> _Lin | _Call:
        token = self.stream.peek()
        if token is None:
            raise self.stream.error("Unexpected end of expression")
        if token.text == "(":
            self.stream.take()
            value = self.sum()
            self.stream.expect(")")
            return value
        if token.kind == "int":
            return _Lin(pw.Const(int(self.stream.take().text)))
        name = self.stream.name()
        if not self.stream.at("("):
            if name.text in self.combinators:
                msg = f"Combinator {name.text!r} used without arguments"
                raise DefinitionError(msg, self.stream.line, name.column)
            return _Lin(pw.Arg(0), (self.resolve(name),))
        arguments = self.arguments()
        return self.call(name, arguments)

    def call(self, name: _Token, arguments: list[tuple[_Token, _Lin]]) -> _Lin | _Call:
        values = [value for _, value in arguments]

        def arity(*allowed: int) -> None:
            if len(values) not in allowed:
                msg = f"{name.text} takes {' or '.join(map(str, allowed))} argument(s), got {len(values)}"
                raise DefinitionError(msg, self.stream.line, name.column)

        match name.text:
            case "max" | "min" if values:
                bodies, leaves = _merge(values)
                return _Lin(pw.Max(tuple(bodies)) if name.text == "max" else pw.Min(tuple(bodies)), leaves)
            case "neg":
                arity(1)
                return _Lin(pw.Scale(-1, values[0].pwl), values[0].leaves)
            case "id":
                arity(1)
                return values[0]
            case "abs":
                arity(1, 2)
                if len(values) == 1:
                    bodies, leaves = [values[0].pwl], values[0].leaves
                    return _Lin(pw.Max((bodies[0], pw.Scale(-1, bodies[0]))), leaves)
                (x, y), leaves = _merge(values)
                return _Lin(pw.Max((pw.minus(x, y), pw.minus(y, x))), leaves)
            case "const":
                arity(2)
                if not values[1].is_constant:
                    msg = "The second argument of const must be an integer"
                    raise DefinitionError(msg, self.stream.line, arguments[1][0].column)
                return _Lin(pw.Const(pw.evaluate(values[1].pwl, [])), values[0].leaves)
        if name.text not in self.combinators:
            msg = f"Unknown combinator {name.text!r}"
            raise DefinitionError(msg, self.stream.line, name.column)
        combinator = self.combinators[name.text]
        if len(values) != combinator.arity:
            msg = f"Combinator {name.text} has arity {combinator.arity}, got {len(values)} argument(s)"
            raise DefinitionError(msg, self.stream.line, name.column)
        if self.chop_mode:
            children = []
            for token, value in arguments:
                if value.pwl != pw.Arg(0) or len(value.leaves) != 1:
                    msg = f"Arguments of {name.text} in a chop label must be chop automaton names"
                    raise DefinitionError(msg, self.stream.line, token.column)
                children.append(value.leaves[0])
            return _Call(combinator, tuple(children))
        children = tuple(self.finish(value, token) for token, value in arguments)
        return _Lin(pw.Arg(0), (ex.Combine(combinator, children),))


class _FormulaParser:
    """Positive existential Presburger formulas over linear terms."""

    def __init__(self, stream: _Stream) -> None:
        self.stream = stream

    def parse(self) -> pb.Formula:
        formula = self.disjunction()
        self.stream.finish()
        return formula

    def disjunction(self) -> pb.Formula:
        formula = self.conjunction()
        while self.stream.at("or"):
            self.stream.take()
            formula = pb.Or(formula, self.conjunction())
        return formula

    def conjunction(self) -> pb.Formula:
        formula = self.unit()
        while self.stream.at("and"):
            self.stream.take()
            formula = pb.And(formula, self.unit())
        return formula

    def unit(self) -> pb.Formula:
        if self.stream.at("exists"):
            self.stream.take()
            variables = [self.stream.name().text]
            while self.stream.at(","):
                self.stream.take()
                variables.append(self.stream.name().text)
            self.stream.expect(".")
            return pb.exists(variables, self.disjunction())
        if self.stream.at("("):
            self.stream.take()
            formula = self.disjunction()
            self.stream.expect(")")
            return formula
        left = self.linear()
        relation = self.stream.take()
        if relation.text not in {"=", ">", ">=", "<", "<="}:
            msg = f"Expected a relation, got {relation.text!r}"
            raise DefinitionSyntaxError(msg, self.stream.line, relation.column)
        right = self.linear()
        if relation.text in {"<", "<="}:
            left, right = right, left
        coefficients = dict(left[0])
        for var, c in right[0].items():
            coefficients[var] = coefficients.get(var, 0) - c
        coefficients = {var: c for var, c in coefficients.items() if c}
        constant = left[1] - right[1]
        return pb.linear_atom(coefficients, constant, strict=relation.text in {">", "<"}, equality=relation.text == "=")

    def linear(self) -> tuple[dict[str, int], int]:
        coefficients: dict[str, int] = {}
        constant = 0
        sign = 1
        if self.stream.at("-"):
            self.stream.take()
            sign = -1
        while True:
            factor = None
            if self.stream.peek() is not None and self.stream.peek().kind == "int":
                factor = int(self.stream.take().text)
                if self.stream.at("*"):
                    self.stream.take()
            token = self.stream.peek()
            if token is not None and token.kind == "name" and token.text not in _KEYWORDS:
                var = self.stream.take().text
                coefficients[var] = coefficients.get(var, 0) + sign * (1 if factor is None else factor)
            elif factor is not None:
                constant += sign * factor
            else:
                raise self.stream.error("Expected a term")
            if not self.stream.at("+", "-"):
                return coefficients, constant
            sign = 1 if self.stream.take().text == "+" else -1


@dataclass
class _Statement:
    line: int
    column: int
    text: str
    body: list[tuple[int, int, str]] = field(default_factory=list)


def _scan(line: str) -> tuple[str, list[int]]:
    """Strip the comment of a line; return the text and the offsets of ';' separators outside /.../."""
    in_regex = False
    separators = []
    i = 0
    while i < len(line):
        char = line[i]
        if in_regex and char == "\\":
            i += 2
            continue
        if char == "/":
            in_regex = not in_regex
        elif not in_regex and char == "#" and (i == 0 or line[i - 1] != "*"):
            return line[:i], separators
        elif not in_regex and char == ";":
            separators.append(i)
        i += 1
    return line, separators


def _statements(text: str) -> list[_Statement]:
    """Split a file into statements, grouping ``{}`` block bodies."""
    pieces: list[tuple[int, int, str]] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        content, separators = _scan(raw)
        start = 0
        for end in [*separators, len(content)]:
            piece = content[start:end]
            if piece.strip():
                pieces.append((number, start + len(piece) - len(piece.lstrip()) + 1, piece.strip()))
            start = end + 1
    statements: list[_Statement] = []
    current: _Statement | None = None
    for number, column, piece in pieces:
        if current is not None:
            if piece == "}":
                statements.append(current)
                current = None
            else:
                current.body.append((number, column, piece))
            continue
        if piece.endswith("{"):
            current = _Statement(number, column, piece[:-1].rstrip())
        else:
            statements.append(_Statement(number, column, piece))
    if current is not None:
        msg = "Unclosed block"
        raise DefinitionSyntaxError(msg, current.line, current.column)
    return statements


class _DefinitionParser:
    """Statement dispatcher filling a ``DefinitionFile``."""

    def __init__(self, text: str) -> None:
        self.statements = _statements(text)
        self.defs = DefinitionFile()

    def parse(self) -> DefinitionFile:
        for statement in self.statements:
            keyword = statement.text.split(maxsplit=1)[0]
            handler = {
                "alphabet": self.alphabet,
                "language": self.language,
                "nfa": self.nfa,
                "wa": self.weighted,
                "combinator": self.combinator,
                "expr": self.expression,
                "chop": self.chop,
            }.get(keyword)
            if handler is None:
                msg = f"Unknown statement {keyword!r}"
                raise DefinitionSyntaxError(msg, statement.line, statement.column)
            try:
                handler(statement)
            except (InputError, ChopError, FunctionalityError) as e:
                raise DefinitionError(str(e), statement.line, statement.column) from e
        msg = f"Parsed {len(self.defs.names())} definition(s) over {len(self.defs.alphabet)} symbol(s)"
        logger.debug(msg)
        return self.defs

    def declare(self, name: str, statement: _Statement) -> str:
        if not _NAME.fullmatch(name) or name in _KEYWORDS:
            msg = f"Invalid name {name!r}"
            raise DefinitionSyntaxError(msg, statement.line, statement.column)
        if name in self.defs.names():
            msg = f"Duplicate name {name!r}"
            raise DefinitionError(msg, statement.line, statement.column)
        if not self.defs.alphabet:
            msg = "The alphabet must be declared first"
            raise DefinitionError(msg, statement.line, statement.column)
        return name

    def header(self, statement: _Statement, keyword: str) -> tuple[str, list[str]]:
        words = statement.text[len(keyword) :].split()
        if not words:
            msg = f"{keyword} needs a name"
            raise DefinitionSyntaxError(msg, statement.line, statement.column)
        return self.declare(words[0], statement), words[1:]

    def alphabet(self, statement: _Statement) -> None:
        if self.defs.alphabet:
            msg = "The alphabet is declared twice"
            raise DefinitionError(msg, statement.line, statement.column)
        symbols = statement.text.split()[1:]
        forbidden = [s for s in symbols if s in {":", "/", const.EPSILON_TOKEN} or "#" in s or ";" in s]
        if not symbols or forbidden:
            msg = f"Invalid alphabet symbols {forbidden}" if forbidden else "Empty alphabet"
            raise DefinitionSyntaxError(msg, statement.line, statement.column)
        self.defs.alphabet = frozenset(symbols)

    def regex(self, text: str, line: int, column: int) -> am.Nfa:
        text = text.strip()
        if len(text) < 2 or not text.startswith("/") or not text.endswith("/"):
            msg = "Expected /regex/"
            raise DefinitionSyntaxError(msg, line, column)
        try:
            node = rx.parse_regex(text[1:-1], self.defs.alphabet)
        except rx.RegexSyntaxError as e:
            raise DefinitionSyntaxError(str(e), line, column + 1 + e.position) from e
        return rx.to_nfa(node, self.defs.alphabet)

    def language(self, statement: _Statement) -> None:
        head, _, text = statement.text.partition("=")
        name, rest = self.header(_Statement(statement.line, statement.column, head), "language")
        if rest or not text:
            msg = "Expected language NAME = /regex/"
            raise DefinitionSyntaxError(msg, statement.line, statement.column)
        self.defs.languages[name] = self.regex(text, statement.line, statement.column + len(head) + 1)

    def ends(self, statement: _Statement) -> tuple[set[str], set[str], list[tuple[int, int, list[str]]]]:
        initial: set[str] = set()
        final: set[str] = set()
        lines = []
        for number, column, piece in statement.body:
            words = piece.split()
            if words[0] == "initial":
                initial.update(words[1:])
            elif words[0] == "final":
                final.update(words[1:])
            else:
                lines.append((number, column, piece))
        return initial, final, lines

    def symbol(self, text: str, line: int, column: int) -> str:
        if text not in self.defs.alphabet:
            msg = f"Symbol {text!r} is not in the alphabet"
            raise DefinitionError(msg, line, column)
        return text

    def nfa(self, statement: _Statement) -> None:
        name, _ = self.header(statement, "nfa")
        initial, final, lines = self.ends(statement)
        states = set(initial | final)
        transitions = set()
        for number, column, piece in lines:
            words = piece.split()
            if len(words) != 3:
                msg = "Expected 'source symbol target'"
                raise DefinitionSyntaxError(msg, number, column)
            p, symbol, q = words
            letter = None if symbol == const.EPSILON_TOKEN else self.symbol(symbol, number, column)
            transitions.add((p, letter, q))
            states.update((p, q))
        self.defs.languages[name] = am.Nfa(frozenset(states), self.defs.alphabet, frozenset(initial), frozenset(final), frozenset(transitions))

    def weighted(self, statement: _Statement) -> None:
        name, flags = self.header(statement, "wa")
        unknown = set(flags) - {"unambiguous", "deterministic"}
        if unknown:
            msg = f"Unknown flag(s) {', '.join(sorted(unknown))}"
            raise DefinitionSyntaxError(msg, statement.line, statement.column)
        initial, final, lines = self.ends(statement)
        edges = []
        for number, column, piece in lines:
            transition, _, weight = piece.partition(":")
            words = transition.split()
            if len(words) != 3:
                msg = "Expected 'source symbol target : weight'"
                raise DefinitionSyntaxError(msg, number, column)
            p, symbol, q = words
            try:
                value = int(weight) if weight.strip() else 0
            except ValueError as e:
                msg = f"Invalid weight {weight.strip()!r}"
                raise DefinitionSyntaxError(msg, number, column + len(transition) + 1) from e
            edges.append((p, self.symbol(symbol, number, column), q, value))
        states = initial | final | {p for p, *_ in edges} | {q for _, _, q, _ in edges}
        m = wa.WeightedAutomaton.from_edges(states, self.defs.alphabet, initial, final, edges)
        if "deterministic" in flags and not m.underlying.is_deterministic:
            msg = f"Automaton {name} is declared deterministic but is not"
            raise DefinitionError(msg, statement.line, statement.column)
        if "unambiguous" in flags and not m.is_unambiguous:
            word = am.format_word(m.ambiguity.word or ())
            msg = f"Automaton {name} is declared unambiguous but has two accepting runs on {word}"
            raise DefinitionError(msg, statement.line, statement.column)
        self.defs.automata[name] = m

    def combinator(self, statement: _Statement) -> None:
        stream = _Stream(statement.text, statement.line, statement.column)
        stream.expect("combinator")
        name = self.declare(stream.name().text, statement)
        stream.expect("(")
        inputs = [stream.name().text]
        while stream.at(","):
            stream.take()
            inputs.append(stream.name().text)
        stream.expect(")")
        stream.expect("->")
        output = stream.name().text
        box = None
        if stream.at("check"):
            stream.take()
            box = stream.integer()
        stream.finish()
        if not statement.body:
            msg = f"Combinator {name} has no formula"
            raise DefinitionSyntaxError(msg, statement.line, statement.column)
        number, column, _ = statement.body[0]
        text = " ".join(piece for _, _, piece in statement.body)
        formula = _FormulaParser(_Stream(text, number, column)).parse()
        c = pb.from_formula(formula, inputs, output, name)
        if box is not None:
            c = pb.verified(c, [(-box, box)] * len(inputs))
        self.defs.combinators[name] = c

    def resolve_expression(self, token: _Token) -> ex.Expression:
        name = token.text
        if name in self.defs.expressions:
            return self.defs.expressions[name]
        if name in self.defs.automata:
            return self.defs.atom(name)
        msg = f"Unknown reference {name!r}"
        raise DefinitionError(msg, 0, token.column)

    def expression(self, statement: _Statement) -> None:
        head, _, text = statement.text.partition("=")
        name, rest = self.header(_Statement(statement.line, statement.column, head), "expr")
        if rest or not text.strip():
            msg = "Expected expr NAME = expression"
            raise DefinitionSyntaxError(msg, statement.line, statement.column)
        stream = _Stream(text, statement.line, statement.column + len(head) + 1)
        start = stream.peek()
        parser = _ExpressionParser(stream, self.located(self.resolve_expression, statement.line), self.defs.combinators, chop_mode=False)
        self.defs.expressions[name] = parser.finish(parser.parse(), start)

    def located(self, resolve: Callable[[_Token], object], line: int) -> Callable[[_Token], object]:
        def wrapped(token: _Token) -> object:
            try:
                return resolve(token)
            except DefinitionError as e:
                raise DefinitionError(e.message, line, token.column) from e

        return wrapped

    def resolve_chop(self, token: _Token) -> ch.ChopAutomaton:
        name = token.text
        if name in self.defs.chops:
            return self.defs.chops[name]
        if name in self.defs.automata:
            return ch.level_zero(self.defs.automata[name])
        msg = f"Unknown chop automaton {name!r}"
        raise DefinitionError(msg, 0, token.column)

    def label(self, text: str, line: int, column: int) -> ch.ChopExpression:
        stream = _Stream(text, line, column)
        parser = _ExpressionParser(stream, self.located(self.resolve_chop, line), self.defs.combinators, chop_mode=True)
        value = parser.parse()
        if isinstance(value, _Call):
            return ch.ChopExpression(value.combinator, value.children)
        if value.is_constant:
            msg = "A chop label needs at least one chop automaton"
            raise DefinitionSyntaxError(msg, line, column)
        return ch.ChopExpression(_combinator_for(value.pwl, len(value.leaves)), value.leaves)

    def chop(self, statement: _Statement) -> None:
        name, _ = self.header(statement, "chop")
        initial, final, lines = self.ends(statement)
        states = set(initial | final)
        edges: dict = {}
        labels: dict = {}
        epsilon_value = None
        for number, column, piece in lines:
            if piece.split()[0] == "epsilon":
                stream = _Stream(piece[len("epsilon") :], number, column + len("epsilon"))
                epsilon_value = (stream.integer(),)
                stream.finish()
                continue
            arrow, _, rest = piece.partition(":")
            ends = [word.strip() for word in arrow.split("->")]
            language, at, label = rest.rpartition("@")
            if len(ends) != 2 or not at:
                msg = "Expected 'source -> target : language @ label'"
                raise DefinitionSyntaxError(msg, number, column)
            p, q = ends
            offset = column + len(arrow) + 1
            reference = language.strip()
            if reference.startswith("/"):
                edges[p, q] = self.regex(reference, number, offset)
            elif reference in self.defs.languages:
                edges[p, q] = self.defs.languages[reference]
            else:
                msg = f"Unknown language {reference!r}"
                raise DefinitionError(msg, number, offset)
            labels[p, q] = self.label(label, number, offset + len(language) + 1)
            states.update((p, q))
        level = 1 + max((child.level for label in labels.values() for child in label.children), default=0)
        for edge, label in labels.items():
            if max(child.level for child in label.children) < level - 1:
                labels[edge] = ch.ChopExpression(label.combinator, tuple(ch.lift(child, level - 1) for child in label.children))
            report = ch.wca_is_synchronised(labels[edge].children)
            if not report.synchronised:
                msg = f"Children of edge {edge[0]} -> {edge[1]} are not synchronised"
                raise DefinitionError(msg, statement.line, statement.column)
        gnfa = ch.GeneralizedNfa(frozenset(states), self.defs.alphabet, frozenset(initial), frozenset(final), edges)
        report = ch.gnfa_is_unambiguous(gnfa)
        if not report.unambiguous:
            msg = f"Chop automaton {name} is ambiguous on {am.format_word(report.word or ())}"
            raise DefinitionError(msg, statement.line, statement.column)
        self.defs.chops[name] = ch.make_chop(level, gnfa, {edge: (label,) for edge, label in labels.items()}, epsilon_value)


def parse_definitions(text: str) -> DefinitionFile:
    """Parse the text of a definition file.

    Raises
    ------
    DefinitionSyntaxError
        On malformed statements, with line and column.
    DefinitionError
        On unknown references, arity mismatches, duplicate names, symbols
        outside the alphabet and automata violating their declared flags.
    """
    return _DefinitionParser(text).parse()


def load_definitions(path: pathlib.Path) -> DefinitionFile:
    """Read and parse a definition file.

    Raises
    ------
    FileNotFoundError
        If the file does not exist.
    """
    if not path.exists():
        msg = f"Definition file not found: {path}"
        raise FileNotFoundError(msg)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError:
        msg = f"Error reading definition file {path}"
        logger.exception(msg)
        raise
    else:
        return parse_definitions(text)


class _Writer:
    """Renders chop automata, children first, with fresh names for sub-automata."""

    def __init__(self, outputs: Mapping[str, ch.ChopAutomaton]) -> None:
        self.names: dict[int, str] = {id(c): name for name, c in outputs.items()}
        self.done: set[int] = set()
        self.blocks: list[str] = []
        self.combinators: dict[str, pb.FunctionalCombinator] = {}
        self.fresh = 0

    def name(self, c: ch.ChopAutomaton) -> str:
        if id(c) not in self.names:
            self.names[id(c)] = f"_sub{self.fresh}"
            self.fresh += 1
        self.write(c)
        return self.names[id(c)]

    def write(self, c: ch.ChopAutomaton) -> None:
        if id(c) in self.done:
            return
        self.done.add(id(c))
        if c.dimension != 1:
            msg = "Only scalar chop automata can be written"
            raise InputError(msg)
        if c.level == 0:
            self.blocks.append(self.weighted(self.names[id(c)], c.base))
        else:
            self.blocks.append(self.chop(self.names[id(c)], c))

    @staticmethod
    def weighted(name: str, m: wa.WeightedAutomaton) -> str:
        numbering = am.state_numbering(m.underlying)
        lines = [
            f"wa {name} unambiguous {{",
            f"  initial {' '.join(str(numbering[s]) for s in am.ordered(m.underlying.initial))}",
            f"  final {' '.join(str(numbering[s]) for s in am.ordered(m.underlying.final))}",
        ]
        rows = sorted((numbering[p], x, numbering[q], w[0]) for (p, x, q), w in m.weights.items())
        lines.extend(f"  {p} {x} {q} : {w}" for p, x, q, w in rows)
        lines.append("}")
        return "\n".join(lines)

    def expression(self, e: ch.ChopExpression) -> str:
        names = [self.name(child) for child in e.children]
        c = e.combinator
        if c.pwl is not None:
            return pw.to_text(c.pwl, names)
        self.combinators[c.name] = c
        return f"{c.name}({', '.join(names)})"

    def chop(self, name: str, c: ch.ChopAutomaton) -> str:
        gnfa = c.gnfa
        numbering = {state: i for i, state in enumerate(am.ordered(gnfa.initial) + am.ordered(gnfa.states - gnfa.initial))}
        rows = []
        for (p, q), language in sorted(gnfa.edges.items(), key=lambda item: (numbering[item[0][0]], numbering[item[0][1]])):
            regex = rx.nfa_to_regex(language)
            rows.append(f"  {numbering[p]} -> {numbering[q]} : /{regex}/ @ {self.expression(c.labels[p, q][0])}")
        lines = [
            f"chop {name} {{",
            f"  initial {' '.join(str(numbering[s]) for s in am.ordered(gnfa.initial))}",
            f"  final {' '.join(str(numbering[s]) for s in am.ordered(gnfa.final))}",
            *rows,
        ]
        if c.accepts_empty:
            lines.append(f"  epsilon {c.epsilon_value[0]}")
        lines.append("}")
        return "\n".join(lines)


def write_chops(outputs: Mapping[str, ch.ChopAutomaton], alphabet: frozenset[str]) -> str:
    """Render named chop automata and their sub-automata as a definition file."""
    writer = _Writer(outputs)
    for c in outputs.values():
        writer.write(c)
    combinators = [
        f"combinator {c.name}({', '.join(c.inputs)}) -> {c.output} {{\n  {c.formula}\n}}" for c in writer.combinators.values()
    ]
    parts = [f"alphabet {' '.join(sorted(alphabet))}", *combinators, *writer.blocks]
    return "\n\n".join(parts) + "\n"
