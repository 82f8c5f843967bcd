"""
Quantitative expressions over unambiguous weighted automata.

An expression is a tree of three node kinds:

* ``Atom``: an unambiguous scalar weighted automaton;
* ``Combine``: a functional combinator applied to child expressions, defined
  on the intersection of the child domains;
* ``Star``: the iterated sum of its child, defined on the words with exactly
  one factorisation into nonempty words of the child domain (and on the empty
  word, with value 0); the value is the sum of the child values on the factors.

Star-free expressions with deterministic atoms and only max, min, addition and
subtraction are Lipschitz continuous; ``lipschitz_bound`` computes a constant.
Expressions with stars are only decidable when synchronised: star nodes at the
same star depth must have children with equal domains.
"""

from __future__ import annotations

from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from functools import cached_property

import src.automata as am
import src.logging_utils as lu
import src.piecewise as pw
import src.presburger as pb
import src.weighted as wa
from src.errors import AmbiguityError, InputError, UnsupportedCombinatorError

logger = lu.setup_logger(__name__)

Position = tuple[int, ...]


@dataclass(frozen=True, eq=False)
class Atom:
    """Leaf expression: an unambiguous scalar weighted automaton.

    Raises
    ------
    AmbiguityError
        With a witness word when the automaton is ambiguous.
    """

    automaton: wa.WeightedAutomaton
    name: str = "A"

    def __post_init__(self) -> None:
        if self.automaton.dimension != 1:
            msg = f"Atom {self.name} must be scalar, got dimension {self.automaton.dimension}"
            raise InputError(msg)
        report = self.automaton.ambiguity
        if not report.unambiguous:
            msg = f"Atom {self.name} is ambiguous: {am.format_word(report.word or ())} has two accepting runs"
            raise AmbiguityError(msg, report.word)

    @property
    def alphabet(self) -> frozenset[str]:
        """Alphabet of the automaton."""
        return self.automaton.alphabet

    @property
    def deterministic(self) -> bool:
        """Whether the automaton is deterministic (required in s-expressions)."""
        return self.automaton.underlying.is_deterministic

    @cached_property
    def domain(self) -> am.Nfa:
        """Automaton for dom(e)."""
        return domain(self)

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, eq=False)
class Combine:
    """Combinator applied to child expressions over a shared alphabet."""

    combinator: pb.FunctionalCombinator
    children: tuple[Expression, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "children", tuple(self.children))
        if len(self.children) != self.combinator.arity:
            msg = f"Combinator {self.combinator.name} has arity {self.combinator.arity} but {len(self.children)} children"
            raise InputError(msg)
        alphabets = {child.alphabet for child in self.children}
        if len(alphabets) > 1:
            msg = f"Children of {self.combinator.name} use different alphabets"
            raise InputError(msg)

    @property
    def alphabet(self) -> frozenset[str]:
        """Shared alphabet of the children."""
        return self.children[0].alphabet

    @cached_property
    def domain(self) -> am.Nfa:
        """Automaton for dom(e)."""
        return domain(self)

    def __str__(self) -> str:
        return f"{self.combinator.name}({', '.join(str(child) for child in self.children)})"


@dataclass(frozen=True, eq=False)
class Star:
    """Iterated sum of the child expression."""

    child: Expression

    @property
    def alphabet(self) -> frozenset[str]:
        """Alphabet of the child."""
        return self.child.alphabet

    @cached_property
    def domain(self) -> am.Nfa:
        """Automaton for dom(e)."""
        return domain(self)

    def __str__(self) -> str:
        return f"({self.child})*#"


Expression = Atom | Combine | Star


@dataclass(frozen=True)
class MonolithicForm:
    """A star-free expression as one piecewise-linear combinator over distinct atoms."""

    combinator: pb.FunctionalCombinator
    atoms: tuple[Atom, ...]


@dataclass(frozen=True)
class SyncReport:
    """Outcome of a synchronisation check.

    Attributes
    ----------
    synchronised : bool
        True when all star nodes of equal depth have children with equal domains.
    first, second : str or None
        The first offending pair of star nodes.
    word : tuple[str, ...] or None
        A word in exactly one of the two child domains.
    """

    synchronised: bool
    first: str | None = None
    second: str | None = None
    word: tuple[str, ...] | None = None


def _factorisations(child_domain: am.Nfa, word: am.Word) -> list[int] | None:
    """Return the factor end positions of the unique factorisation, None when there are 0 or 2+."""
    a = am.remove_epsilon(child_domain)
    n = len(word)
    count = [0] * (n + 1)
    previous: list[int | None] = [None] * (n + 1)
    count[0] = 1
    for start in range(n):
        if count[start] == 0:
            continue
        current = a.epsilon_closure(a.initial)
        for end in range(start + 1, n + 1):
            current = a.step(current, word[end - 1])
            if not current:
                break
            if current & a.final:
                count[end] = min(2, count[end] + count[start])
                previous[end] = start
    if count[n] != 1:
        return None
    ends = []
    position = n
    while position > 0:
        ends.append(position)
        position = previous[position]
    return list(reversed(ends))


def eval(e: Expression, u: Sequence[str]) -> int | None:  # noqa: A001
    """Return the value of ``e`` on ``u``, or None outside the domain.

    Raises
    ------
    InputError
        If ``u`` uses a symbol outside the alphabet.
    """
    word = tuple(u)
    match e:
        case Atom():
            return wa.evaluate_scalar(e.automaton, word)
        case Combine():
            values = []
            for child in e.children:
                value = eval(child, word)
                if value is None:
                    return None
                values.append(value)
            return pb.apply_combinator(e.combinator, values)
        case Star():
            if not word:
                return 0
            ends = _factorisations(e.child.domain, word)
            if ends is None:
                return None
            total, start = 0, 0
            for end in ends:
                value = eval(e.child, word[start:end])
                if value is None:
                    return None
                total += value
                start = end
            return total
    msg = f"Unknown expression node {e!r}"
    raise TypeError(msg)


def domain(e: Expression) -> am.Nfa:
    """Return an automaton for the domain of ``e``."""
    match e:
        case Atom():
            return am.trim(e.automaton.underlying)
        case Combine():
            result = e.children[0].domain
            for child in e.children[1:]:
                result = am.trim(am.intersect(result, child.domain))
            return result
        case Star():
            return am.unique_star_language(e.child.domain)
    msg = f"Unknown expression node {e!r}"
    raise TypeError(msg)


def atoms(e: Expression) -> list[Atom]:
    """Distinct atoms of ``e`` in order of first occurrence."""
    found: dict[int, Atom] = {}

    def visit(node: Expression) -> None:
        match node:
            case Atom():
                found.setdefault(id(node), node)
            case Combine():
                for child in node.children:
                    visit(child)
            case Star():
                visit(node.child)

    visit(e)
    return list(found.values())


def is_star_free(e: Expression) -> bool:
    """Whether ``e`` contains no iterated sum."""
    match e:
        case Atom():
            return True
        case Combine():
            return all(is_star_free(child) for child in e.children)
    return False


def normalize_monolithic(e: Expression) -> MonolithicForm:
    """Flatten a star-free expression into one combinator over its atoms.

    Raises
    ------
    InputError
        If ``e`` contains an iterated sum.
    UnsupportedCombinatorError
        If a combinator has no piecewise-linear description.
    """
    leaves = atoms(e)
    index = {id(atom): i for i, atom in enumerate(leaves)}

    def flatten(node: Expression) -> pw.Pwl:
        match node:
            case Atom():
                return pw.Arg(index[id(node)])
            case Combine():
                if node.combinator.pwl is None:
                    msg = f"Combinator {node.combinator.name} has no piecewise-linear structure"
                    raise UnsupportedCombinatorError(msg)
                return pw.substitute(node.combinator.pwl, [flatten(child) for child in node.children])
            case Star():
                msg = f"Monolithic normal form needs a star-free expression, found {node}"
                raise InputError(msg)
        msg = f"Unknown expression node {node!r}"
        raise TypeError(msg)

    body = flatten(e)
    if isinstance(e, Atom):
        return MonolithicForm(pb.identity(), (e,))
    combinator = pb.from_pwl(body, len(leaves), name=pw.to_text(body, [atom.name for atom in leaves]))
    return MonolithicForm(combinator, tuple(leaves))


def lipschitz_bound(e: Expression) -> int:
    """Lipschitz constant of an s-expression for the distance of ``word_distance``.

    Atoms contribute their largest absolute weight, max and min the largest
    constant of their arguments, sums and differences the sum.

    Raises
    ------
    InputError
        If ``e`` is not an s-expression.
    """
    match e:
        case Atom():
            if not e.deterministic:
                msg = f"Atom {e.name} is not deterministic; Lipschitz bounds need an s-expression"
                raise InputError(msg)
            return max((abs(w[0]) for w in e.automaton.weights.values()), default=0)
        case Combine():
            p = e.combinator.pwl
            if p is None or not pw.is_simple(p):
                msg = f"Combinator {e.combinator.name} is not built from max, min, + and -"
                raise InputError(msg)
            return pw.lipschitz(p, [lipschitz_bound(child) for child in e.children])
        case Star():
            msg = f"Lipschitz bounds need a star-free expression, found {e}"
            raise InputError(msg)
    msg = f"Unknown expression node {e!r}"
    raise TypeError(msg)


def _walk(e: Expression, position: Position = (), depth: int = 0) -> Iterator[tuple[Position, int, Expression]]:
    yield position, depth, e
    match e:
        case Combine():
            for i, child in enumerate(e.children):
                yield from _walk(child, (*position, i), depth)
        case Star():
            yield from _walk(e.child, (*position, 0), depth + 1)


def star_depth_map(e: Expression) -> dict[Position, int]:
    """Map each node position (child indices from the root) to its star depth."""
    return {position: depth for position, depth, _ in _walk(e)}


def node_at(e: Expression, position: Position) -> Expression:
    """Return the node at ``position``."""
    node = e
    for index in position:
        match node:
            case Combine():
                node = node.children[index]
            case Star():
                node = node.child
            case _:
                msg = f"No node at position {position}"
                raise InputError(msg)
    return node


def star_nodes(es: Sequence[Expression]) -> list[tuple[Position, int, Star]]:
    """Star nodes of the virtual tree combining ``es``, with positions and depths."""
    return [
        ((k, *position), depth, node)
        for k, e in enumerate(es)
        for position, depth, node in _walk(e)
        if isinstance(node, Star)
    ]


def is_synchronised(es: Sequence[Expression]) -> SyncReport:
    """Check that star nodes of equal depth have children with equal domains."""
    by_depth: dict[int, list[Star]] = {}
    for _, depth, node in star_nodes(es):
        by_depth.setdefault(depth, []).append(node)
    for depth in sorted(by_depth):
        first, *others = by_depth[depth]
        for other in others:
            if other.child is first.child:
                continue
            same, word = am.equivalent(first.child.domain, other.child.domain)
            if not same:
                msg = f"Star nodes {first} and {other} at depth {depth} differ on {am.format_word(word or ())}"
                logger.debug(msg)
                return SyncReport(False, str(first), str(other), word)
    return SyncReport(True)
