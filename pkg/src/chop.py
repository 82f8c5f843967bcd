"""
Generalised automata and weighted chop automata.

A generalised automaton labels each pair of states with a regular language of
nonempty words; a run chops the input into factors, one per traversed edge.
A weighted chop automaton of level n > 0 labels the edges of an unambiguous
generalised automaton with tuples of expressions ``φ(C_1, ..., C_m)`` over
chop automata of level < n (at least one of level n - 1); the value of a word
is the sum over its factors of the label values. Level 0 chop automata are
unambiguous weighted automata.

Chop points are tracked on a letter-level flattening of the generalised
automaton: ``("at", p)`` states mark factor boundaries and ``("in", p, q, s)``
states follow the deterministic automaton of the edge language Δ(p, q).
Ambiguity, synchronisation, domains and decompositions are all read off this
flattening.

Values are integer tuples; vector chop automata arise from products.
"""

from __future__ import annotations

import dataclasses
import itertools
from collections import deque
from collections.abc import Callable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property, reduce

import src.automata as am
import src.logging_utils as lu
import src.piecewise as pw
import src.presburger as pb
import src.regex as rx
import src.semilinear as sl
import src.weighted as wa
from src.errors import AmbiguityError, ChopError, InputError, NotSynchronisedError, UnsupportedCombinatorError
from src.expressions import SyncReport
from src.queries import DecisionOptions, Emptiness, Equivalence, Inclusion, Query, QueryResult, Universality, Verdict, negated

logger = lu.setup_logger(__name__)

Edge = tuple  # (source, target)
Value = tuple[int, ...]


def _edge_dfa(language: am.Nfa) -> am.Nfa:
    """Trimmed deterministic automaton of an edge language (no sink state)."""
    return am.trim(am.determinize(language))


@dataclass(frozen=True, eq=False)
class GeneralizedNfa:
    """Automaton whose edges carry regular languages of nonempty words.

    Edges with an empty language are dropped on construction.

    Raises
    ------
    ChopError
        If an edge language contains the empty word, uses another alphabet, or
        an edge leaves the state set.
    """

    states: frozenset
    alphabet: frozenset[str]
    initial: frozenset
    final: frozenset
    edges: Mapping[Edge, am.Nfa] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for name in ("states", "alphabet", "initial", "final"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        if not self.initial <= self.states or not self.final <= self.states:
            msg = "Initial and final states must belong to the state set"
            raise ChopError(msg)
        edges = {}
        for (p, q), language in self.edges.items():
            if p not in self.states or q not in self.states:
                msg = f"Edge {p!r} -> {q!r} leaves the state set"
                raise ChopError(msg)
            if language.alphabet != self.alphabet:
                msg = f"Edge {p!r} -> {q!r} uses another alphabet"
                raise ChopError(msg)
            if language.accepts(()):
                msg = f"Edge {p!r} -> {q!r} contains the empty word; factors must be nonempty"
                raise ChopError(msg)
            if not am.is_empty(language):
                edges[p, q] = language
        object.__setattr__(self, "edges", edges)

    @cached_property
    def flat(self) -> am.Nfa:
        """Letter-level automaton with chop points, trimmed; runs match (run, decomposition) pairs."""
        states = {("at", p) for p in self.states}
        transitions = set()
        for (p, q), language in self.edges.items():
            d = _edge_dfa(language)
            start = next(iter(d.initial))
            for s, symbol, t in d.transitions:
                sources = [("in", p, q, s)] + ([("at", p)] if s == start else [])
                targets = [("in", p, q, t)] + ([("at", q)] if t in d.final else [])
                for source, target in itertools.product(sources, targets):
                    states.update((source, target))
                    transitions.add((source, symbol, target))
        automaton = am.Nfa(
            frozenset(states),
            self.alphabet,
            frozenset(("at", p) for p in self.initial),
            frozenset(("at", q) for q in self.final),
            frozenset(transitions),
        )
        return am.trim(automaton)


@dataclass(frozen=True, eq=False)
class ChopExpression:
    """Combinator over scalar chop automata labelling one edge."""

    combinator: pb.FunctionalCombinator
    children: tuple[ChopAutomaton, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "children", tuple(self.children))
        if len(self.children) != self.combinator.arity:
            msg = f"Combinator {self.combinator.name} has arity {self.combinator.arity} but {len(self.children)} children"
            raise ChopError(msg)
        for child in self.children:
            if child.dimension != 1:
                msg = f"Children of {self.combinator.name} must be scalar chop automata"
                raise ChopError(msg)

    @cached_property
    def domain(self) -> am.Nfa:
        """Intersection of the child domains."""
        return reduce(lambda a, b: am.trim(am.intersect(a, b)), (wca_domain(child) for child in self.children))

    def __str__(self) -> str:
        return f"{self.combinator.name}({', '.join(f'L{child.level}' for child in self.children)})"


@dataclass(frozen=True, eq=False)
class ChopAutomaton:
    """Weighted chop automaton.

    Attributes
    ----------
    level : int
        0 for a weighted automaton, n > 0 for a chop automaton over level < n children.
    base : WeightedAutomaton or None
        The unambiguous weighted automaton of a level 0 chop automaton.
    gnfa : GeneralizedNfa or None
        The unambiguous generalised automaton of a level n > 0 chop automaton.
    labels : Mapping[Edge, tuple[ChopExpression, ...]]
        One expression per output component for each edge of ``gnfa``.
    epsilon_value : tuple[int, ...] or None
        Value of the empty word when some initial state is final (zero by default).
    """

    level: int
    base: wa.WeightedAutomaton | None = None
    gnfa: GeneralizedNfa | None = None
    labels: Mapping[Edge, tuple[ChopExpression, ...]] = field(default_factory=dict)
    epsilon_value: Value | None = None
    dimension: int = 1

    def __post_init__(self) -> None:
        if self.level == 0:
            if self.base is None:
                msg = "A level 0 chop automaton needs a weighted automaton"
                raise ChopError(msg)
            object.__setattr__(self, "dimension", self.base.dimension)
            return
        if self.level < 0 or self.gnfa is None:
            msg = f"A level {self.level} chop automaton needs a generalised automaton"
            raise ChopError(msg)
        labels = {edge: tuple(label) for edge, label in self.labels.items() if edge in self.gnfa.edges}
        missing = self.gnfa.edges.keys() - labels.keys()
        if missing:
            msg = f"Edges without labels: {', '.join(repr(e) for e in am.ordered(missing))}"
            raise ChopError(msg)
        dimensions = {len(label) for label in labels.values()}
        if len(dimensions) > 1:
            msg = f"Edge labels have different lengths {sorted(dimensions)}"
            raise ChopError(msg)
        dimension = dimensions.pop() if dimensions else len(self.epsilon_value) if self.epsilon_value is not None else self.dimension
        for edge, label in labels.items():
            for expression in label:
                levels = [child.level for child in expression.children]
                if max(levels) != self.level - 1:
                    msg = f"Edge {edge!r} of a level {self.level} chop automaton needs a level {self.level - 1} child, got levels {levels}"
                    raise ChopError(msg)
        epsilon_value = (0,) * dimension if self.epsilon_value is None else tuple(self.epsilon_value)
        if len(epsilon_value) != dimension:
            msg = f"Empty word value {epsilon_value} does not have dimension {dimension}"
            raise ChopError(msg)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "epsilon_value", epsilon_value)
        object.__setattr__(self, "dimension", dimension)

    @property
    def alphabet(self) -> frozenset[str]:
        """Alphabet of the words read."""
        return self.base.alphabet if self.level == 0 else self.gnfa.alphabet

    @cached_property
    def domain_gnfa(self) -> GeneralizedNfa:
        """Generalised automaton with Δ(p, q) cut down to the domain of its label."""
        edges = {}
        for edge, language in self.gnfa.edges.items():
            restricted = language
            for expression in self.labels[edge]:
                restricted = am.trim(am.intersect(restricted, expression.domain))
            edges[edge] = restricted
        return GeneralizedNfa(self.gnfa.states, self.gnfa.alphabet, self.gnfa.initial, self.gnfa.final, edges)

    @cached_property
    def accepts_empty(self) -> bool:
        """Whether the empty word is in the domain."""
        if self.level == 0:
            return self.base.underlying.accepts(())
        return bool(self.gnfa.initial & self.gnfa.final)

    def check_unambiguous(self) -> None:
        """Raise ``AmbiguityError`` when the underlying automaton is ambiguous."""
        report = self.base.ambiguity if self.level == 0 else gnfa_is_unambiguous(self.gnfa)
        if not report.unambiguous:
            msg = f"Level {self.level} chop automaton is ambiguous on {am.format_word(report.word or ())}"
            raise AmbiguityError(msg, report.word)


@dataclass(frozen=True)
class Decomposition:
    """Factors of a word with the edges that read them."""

    factors: tuple[tuple[am.Word, Edge], ...]

    @property
    def word(self) -> am.Word:
        """The decomposed word."""
        return tuple(symbol for factor, _ in self.factors for symbol in factor)


def level_zero(m: wa.WeightedAutomaton) -> ChopAutomaton:
    """Wrap an unambiguous weighted automaton as a level 0 chop automaton."""
    wa.require_unambiguous(m)
    return ChopAutomaton(0, base=m)


def make_chop(level: int, gnfa: GeneralizedNfa, labels: Mapping[Edge, tuple[ChopExpression, ...]], epsilon_value: Value | None = None, dimension: int = 1) -> ChopAutomaton:
    """Build a chop automaton, ignoring labels of edges dropped by the generalised automaton."""
    kept = {edge: label for edge, label in labels.items() if edge in gnfa.edges}
    return ChopAutomaton(level, gnfa=gnfa, labels=kept, epsilon_value=epsilon_value, dimension=dimension)


def gnfa_is_unambiguous(a: GeneralizedNfa) -> am.AmbiguityReport:
    """Check that every word has at most one run, factor boundaries included."""
    return am.is_unambiguous(a.flat)


def wca_domain(c: ChopAutomaton) -> am.Nfa:
    """Return a letter automaton for the domain of ``c``."""
    if c.level == 0:
        return am.trim(c.base.underlying)
    return _domain_flat(c).renumber()


def _domain_flat(c: ChopAutomaton) -> am.Nfa:
    return c.domain_gnfa.flat


def wca_decompose(c: ChopAutomaton, u: Sequence[str]) -> Decomposition | None:
    """Return the unique decomposition of ``u``, or None when ``u`` is outside the domain."""
    if c.level == 0:
        msg = "Level 0 chop automata have no decompositions"
        raise ChopError(msg)
    a = _domain_flat(c)
    word = tuple(u)
    for symbol in word:
        if symbol not in c.alphabet:
            msg = f"Symbol {symbol!r} is not in the alphabet"
            raise InputError(msg, word)
    layers = [frozenset(a.initial)]
    for symbol in word:
        layers.append(a.step(layers[-1], symbol))
        if not layers[-1]:
            return None
    alive = layers[-1] & a.final
    if not alive:
        return None
    path = [am.ordered(alive)[0]]
    for position in range(len(word) - 1, -1, -1):
        target = path[-1]
        options = [s for s in layers[position] if target in a.successors[s].get(word[position], ())]
        path.append(am.ordered(options)[0])
    path.reverse()
    factors = []
    start, source = 0, path[0][1]
    for position in range(1, len(path)):
        state = path[position]
        if state[0] == "at":
            factors.append((word[start:position], (source, state[1])))
            start, source = position, state[1]
    return Decomposition(tuple(factors))


def _sum(u: Value, v: Value) -> Value:
    return tuple(a + b for a, b in zip(u, v, strict=True))


def label_value(label: Sequence[ChopExpression], factor: am.Word) -> Value | None:
    """Value of one edge label on a factor, None outside the label domain."""
    values = []
    for expression in label:
        args = []
        for child in expression.children:
            value = wca_eval(child, factor)
            if value is None:
                return None
            args.append(value[0])
        values.append(pb.apply_combinator(expression.combinator, args))
    return tuple(values)


def wca_eval(c: ChopAutomaton, u: Sequence[str]) -> Value | None:
    """Return the value of ``u``, or None outside the domain."""
    word = tuple(u)
    if c.level == 0:
        return wa.evaluate(c.base, word)
    decomposition = wca_decompose(c, word)
    if decomposition is None:
        return None
    total = c.epsilon_value if not word else (0,) * c.dimension
    for factor, edge in decomposition.factors:
        value = label_value(c.labels[edge], factor)
        if value is None:
            return None
        total = _sum(total, value)
    return total


def _pair_product(a: am.Nfa, b: am.Nfa) -> am.Nfa:
    """Trimmed product keeping the state pairs."""
    start = [(p, q) for p in am.ordered(a.initial) for q in am.ordered(b.initial)]
    seen = set(start)
    queue = deque(start)
    transitions = set()
    while queue:
        p, q = queue.popleft()
        row_a, row_b = a.successors[p], b.successors[q]
        for symbol in row_a.keys() & row_b.keys():
            for p2 in row_a[symbol]:
                for q2 in row_b[symbol]:
                    transitions.add(((p, q), symbol, (p2, q2)))
                    if (p2, q2) not in seen:
                        seen.add((p2, q2))
                        queue.append((p2, q2))
    final = frozenset(s for s in seen if s[0] in a.final and s[1] in b.final)
    return am.trim(am.Nfa(frozenset(seen), a.alphabet, frozenset(start), final, frozenset(transitions)))


def _edge_of(source: tuple, target: tuple) -> Edge:
    """Edge of a flat transition ending a factor."""
    return (source[1], target[1]) if source[0] == "at" else (source[1], source[2])


def _through(a: am.Nfa, state: tuple) -> am.Word:
    left = am.shortest_word(am.left_language(a, state)) or ()
    right = am.shortest_word(am.right_language(a, state)) or ()
    return (*left, *right)


def _describe(c: ChopAutomaton) -> str:
    return f"level-{c.level} chop automaton of dimension {c.dimension}"


def _sync_pair(c1: ChopAutomaton, c2: ChopAutomaton, memo: dict) -> SyncReport:
    key = (id(c1), id(c2))
    if key in memo:
        return memo[key]
    memo[key] = SyncReport(True)
    if c1.level != c2.level:
        report = SyncReport(False, _describe(c1), _describe(c2))
    elif c1.level == 0:
        report = SyncReport(True)
    else:
        report = _sync_levels(c1, c2, memo)
    memo[key] = report
    return report


def _sync_levels(c1: ChopAutomaton, c2: ChopAutomaton, memo: dict) -> SyncReport:
    product = _pair_product(_domain_flat(c1), _domain_flat(c2))
    for state in am.ordered(product.states):
        if (state[0][0] == "at") != (state[1][0] == "at"):
            word = _through(product, state)
            msg = f"Chop points differ on {am.format_word(word)}"
            logger.debug(msg)
            return SyncReport(False, _describe(c1), _describe(c2), word)
    pairs = set()
    for source, _, target in product.transitions:
        if target[0][0] == "at":
            pairs.add((_edge_of(source[0], target[0]), _edge_of(source[1], target[1])))
    for e1, e2 in am.ordered(pairs):
        for left in c1.labels[e1]:
            for right in c2.labels[e2]:
                for x, y in itertools.product(left.children, right.children):
                    report = _sync_pair(x, y, memo)
                    if not report.synchronised:
                        return report
    return SyncReport(True)


def wca_is_synchronised(cs: Sequence[ChopAutomaton]) -> SyncReport:
    """Check that chop automata pairwise agree on levels, chop points and co-occurring children."""
    memo: dict = {}
    for i, j in itertools.combinations_with_replacement(range(len(cs)), 2):
        report = _sync_pair(cs[i], cs[j], memo)
        if not report.synchronised:
            return report
    return SyncReport(True)


def require_synchronised(cs: Sequence[ChopAutomaton]) -> None:
    """Raise ``NotSynchronisedError`` with the offending pair."""
    report = wca_is_synchronised(cs)
    if not report.synchronised:
        msg = f"Chop automata are not synchronised: {report.first} vs {report.second}"
        raise NotSynchronisedError(msg, report.first or "", report.second or "", report.word)


def _single_factor(
    level: int,
    language: am.Nfa,
    label: tuple[ChopExpression, ...],
    epsilon_value: Value | None,
) -> ChopAutomaton:
    """Two-state chop automaton reading the whole word as one factor of ``language``."""
    gnfa = GeneralizedNfa(
        frozenset({0, 1}),
        language.alphabet,
        frozenset({0}),
        frozenset({1}) | (frozenset({0}) if epsilon_value is not None else frozenset()),
        {(0, 1): am.nonempty_part(language)},
    )
    return make_chop(level, gnfa, {(0, 1): label}, epsilon_value, dimension=len(label))


def wca_combine(combinator: pb.FunctionalCombinator, cs: Sequence[ChopAutomaton], *, check: bool = True) -> ChopAutomaton:
    """Chop automaton for ``φ(C_1, ..., C_n)`` on the intersection of the domains.

    Raises
    ------
    NotSynchronisedError
        If ``check`` is set and the children are not synchronised.
    """
    cs = tuple(cs)
    if check:
        require_synchronised(cs)
    expression = ChopExpression(combinator, cs)
    language = expression.domain
    epsilon_value = None
    if all(c.accepts_empty for c in cs):
        values = [wca_eval(c, ())[0] for c in cs]
        epsilon_value = (pb.apply_combinator(combinator, values),)
    return _single_factor(max(c.level for c in cs) + 1, language, (expression,), epsilon_value)


def lift(c: ChopAutomaton, level: int) -> ChopAutomaton:
    """Wrap ``c`` in identities until it reaches ``level``."""
    while c.level < level:
        c = wca_combine(pb.identity(), [c], check=False)
    return c


def block_nfa(a: am.Nfa, special: frozenset, source: am.State, target: am.State) -> am.Nfa:
    """Nonempty paths of ``a`` from ``source`` to ``target`` without intermediate special states."""
    fresh = ("block-start",)
    transitions = {(p, x, q) for p, x, q in a.transitions if p not in special}
    transitions |= {(fresh, x, q) for p, x, q in a.transitions if p == source}
    automaton = am.Nfa(a.states | {fresh}, a.alphabet, frozenset({fresh}), frozenset({target}), frozenset(transitions))
    return am.trim(automaton)


def block_weighted(m: wa.WeightedAutomaton, special: frozenset, source: am.State, target: am.State) -> wa.WeightedAutomaton:
    """``block_nfa`` on the underlying automaton of ``m``, keeping weights."""
    fresh = ("block-start",)
    weights = {(p, x, q): w for (p, x, q), w in m.weights.items() if p not in special}
    weights |= {(fresh, x, q): w for (p, x, q), w in m.weights.items() if p == source}
    underlying = am.Nfa(m.underlying.states | {fresh}, m.alphabet, frozenset({fresh}), frozenset({target}), frozenset(weights))
    return wa.renumber(wa.trim(wa.WeightedAutomaton(underlying, weights, m.dimension)))


def wca_star(c: ChopAutomaton, unique_star: am.UniqueStar | None = None) -> ChopAutomaton:
    """Chop automaton for the iterated sum of ``c``.

    Parameters
    ----------
    c : ChopAutomaton
        Scalar chop automaton.
    unique_star : UniqueStar, optional
        Precomputed automaton of the uniquely factorisable words of dom(c).
    """
    if c.dimension != 1:
        msg = "Iterated sums apply to scalar chop automata"
        raise ChopError(msg)
    if unique_star is None:
        unique_star = am.unique_star_automaton(wca_domain(c))
    b, special = unique_star.automaton, unique_star.special
    edges = {(s, t): block_nfa(b, special, s, t) for s in am.ordered(special) for t in am.ordered(special)}
    gnfa = GeneralizedNfa(special, b.alphabet, b.initial & special, b.final & special, edges)
    label = (ChopExpression(pb.identity(), (c,)),)
    return make_chop(c.level + 1, gnfa, dict.fromkeys(gnfa.edges, label), (0,))


def wca_restrict(c: ChopAutomaton, language: am.Nfa) -> ChopAutomaton:
    """Restrict the domain of ``c`` to ``L(language)``."""
    if c.level == 0:
        return ChopAutomaton(0, base=wa.restrict(c.base, language))
    d = am.determinize(language)
    start = [(p, d.start) for p in am.ordered(c.gnfa.initial)]
    seen = set(start)
    queue = deque(start)
    edges: dict = {}
    labels: dict = {}
    outgoing: dict = {}
    for (p, q), edge_language in c.gnfa.edges.items():
        outgoing.setdefault(p, []).append((q, edge_language))
    while queue:
        p, s = queue.popleft()
        for q, edge_language in outgoing.get(p, []):
            for t in am.ordered(d.states):
                restricted = am.trim(am.intersect(edge_language, d.with_ends([s], [t])))
                if am.is_empty(restricted):
                    continue
                edges[(p, s), (q, t)] = restricted
                labels[(p, s), (q, t)] = c.labels[p, q]
                if (q, t) not in seen:
                    seen.add((q, t))
                    queue.append((q, t))
    final = {(q, t) for q, t in seen if q in c.gnfa.final and t in d.final}
    gnfa = GeneralizedNfa(frozenset(seen), c.alphabet, frozenset(start), frozenset(final), edges)
    return make_chop(c.level, gnfa, labels, c.epsilon_value, c.dimension)


def wca_disjoint_union(c: ChopAutomaton, d: ChopAutomaton) -> ChopAutomaton:
    """Union of two chop automata of the same level with disjoint domains."""
    if c.level != d.level or c.dimension != d.dimension:
        msg = f"Disjoint union needs equal levels and dimensions, got {c.level}/{c.dimension} and {d.level}/{d.dimension}"
        raise ChopError(msg)
    if c.level == 0:
        return ChopAutomaton(0, base=wa.disjoint_union(c.base, d.base))
    edges = {((0, p), (0, q)): language for (p, q), language in c.gnfa.edges.items()}
    edges |= {((1, p), (1, q)): language for (p, q), language in d.gnfa.edges.items()}
    labels = {((0, p), (0, q)): label for (p, q), label in c.labels.items()}
    labels |= {((1, p), (1, q)): label for (p, q), label in d.labels.items()}
    gnfa = GeneralizedNfa(
        frozenset({(0, s) for s in c.gnfa.states} | {(1, s) for s in d.gnfa.states}),
        c.alphabet,
        frozenset({(0, s) for s in c.gnfa.initial} | {(1, s) for s in d.gnfa.initial}),
        frozenset({(0, s) for s in c.gnfa.final} | {(1, s) for s in d.gnfa.final}),
        edges,
    )
    epsilon_value = c.epsilon_value if c.accepts_empty else d.epsilon_value
    return make_chop(c.level, gnfa, labels, epsilon_value, c.dimension)


def wca_cond_choice(c: ChopAutomaton, d: ChopAutomaton) -> ChopAutomaton:
    """Chop automaton for ``c`` on dom(c) and ``d`` on dom(d) minus dom(c)."""
    return wca_disjoint_union(c, wca_restrict(d, am.complement(wca_domain(c))))


def _empty_chop(level: int, alphabet: frozenset[str]) -> ChopAutomaton:
    if level == 0:
        underlying = am.empty_language(alphabet)
        return ChopAutomaton(0, base=wa.WeightedAutomaton(underlying, {}, 1))
    return make_chop(level, GeneralizedNfa(frozenset({0}), alphabet, frozenset({0}), frozenset(), {}), {})


def wca_split_sum(c: ChopAutomaton, d: ChopAutomaton) -> ChopAutomaton:
    """Chop automaton for ``u1 u2 -> c(u1) + d(u2)`` on words with exactly one such split."""
    if c.dimension != 1 or d.dimension != 1:
        msg = "Split sums apply to scalar chop automata"
        raise ChopError(msg)
    level = max(c.level, d.level)
    left, right = lift(c, level), lift(d, level)
    result = _empty_chop(level + 1, c.alphabet)
    for n, m in am.unambiguous_concat(wca_domain(c), wca_domain(d)):
        n_empty, m_empty = n.accepts(()), m.accepts(())
        edges = {(0, 1): am.nonempty_part(n), (1, 2): am.nonempty_part(m)}
        labels = {(0, 1): (ChopExpression(pb.identity(), (left,)),), (1, 2): (ChopExpression(pb.identity(), (right,)),)}
        final = {2}
        epsilon_value = None
        if n_empty:
            shift = wca_eval(c, ())[0]
            edges[0, 3] = am.nonempty_part(m)
            labels[0, 3] = (ChopExpression(pb.shift(shift), (right,)),)
            final.add(3)
        if m_empty:
            shift = wca_eval(d, ())[0]
            edges[0, 4] = am.nonempty_part(n)
            labels[0, 4] = (ChopExpression(pb.shift(shift), (left,)),)
            final.add(4)
        if n_empty and m_empty:
            final.add(0)
            epsilon_value = (wca_eval(c, ())[0] + wca_eval(d, ())[0],)
        gnfa = GeneralizedNfa(frozenset(range(5)), c.alphabet, frozenset({0}), frozenset(final), edges)
        result = wca_disjoint_union(result, make_chop(level + 1, gnfa, labels, epsilon_value))
    return result


def wca_product(c1: ChopAutomaton, c2: ChopAutomaton, *, check: bool = True) -> ChopAutomaton:
    """Vector chop automaton ``u -> (c1(u), c2(u))`` on the intersection of the domains."""
    if check:
        require_synchronised([c1, c2])
    if c1.level != c2.level:
        msg = f"Products need equal levels, got {c1.level} and {c2.level}"
        raise ChopError(msg)
    if c1.level == 0:
        return ChopAutomaton(0, base=wa.product([c1.base, c2.base]))
    g1, g2 = c1.gnfa, c2.gnfa
    edges: dict = {}
    labels: dict = {}
    for (p1, q1), l1 in g1.edges.items():
        for (p2, q2), l2 in g2.edges.items():
            language = am.trim(am.intersect(l1, l2))
            if not am.is_empty(language):
                edges[(p1, p2), (q1, q2)] = language
                labels[(p1, p2), (q1, q2)] = c1.labels[p1, q1] + c2.labels[p2, q2]
    gnfa = GeneralizedNfa(
        frozenset(itertools.product(g1.states, g2.states)),
        c1.alphabet,
        frozenset(itertools.product(g1.initial, g2.initial)),
        frozenset(itertools.product(g1.final, g2.final)),
        edges,
    )
    return make_chop(c1.level, gnfa, labels, c1.epsilon_value + c2.epsilon_value, c1.dimension + c2.dimension)


def _product_all(cs: Sequence[ChopAutomaton]) -> ChopAutomaton:
    levels = {c.level for c in cs}
    if len(levels) > 1:
        msg = f"Chop automata of levels {sorted(levels)} cannot be synchronised"
        raise ChopError(msg)
    if levels == {0}:
        return ChopAutomaton(0, base=wa.product([c.base for c in cs]))
    return reduce(lambda a, b: wca_product(a, b, check=False), cs)


def _range(c: ChopAutomaton, memo: dict) -> sl.SemiLinearSet:
    key = id(c)
    if key in memo:
        return memo[key][1]
    if c.level == 0:
        result = wa.parikh_range(c.base)
        memo[key] = (c, result)
        return result
    g = c.domain_gnfa
    edge_ranges = {}
    for edge, language in g.edges.items():
        label = c.labels[edge]
        children = [wca_restrict(child, language) for expression in label for child in expression.children]
        child_range = _range(_product_all(children), memo)
        functions, offset = [], 0
        for expression in label:
            arguments = [pw.Arg(offset + i) for i in range(expression.combinator.arity)]
            functions.append(pw.substitute(_pwl(expression.combinator), arguments))
            offset += expression.combinator.arity
        edge_ranges[edge] = sl.pwl_tuple_image(child_range, functions)
    fresh = ("range-start",)
    letters = [(p, rx.Letter((p, q)), q) for p, q in am.ordered(g.edges)]
    letters += [(fresh, rx.Letter((p, q)), q) for p, q in am.ordered(g.edges) if p in g.initial]
    expression = rx.state_elimination([*am.ordered(g.states), fresh], [fresh], g.final, letters)
    result = sl.commutative_kleene_eval(expression, edge_ranges, c.dimension)
    if c.accepts_empty:
        result = sl.sls_union(result, sl.singleton(c.epsilon_value))
    memo[key] = (c, result)
    msg = f"Range of a level {c.level} chop automaton has {len(result.components)} linear component(s)"
    logger.debug(msg)
    return result


def _pwl(combinator: pb.FunctionalCombinator) -> pw.Pwl:
    if combinator.pwl is None:
        msg = f"Combinator {combinator.name} has no piecewise-linear structure"
        raise UnsupportedCombinatorError(msg)
    return combinator.pwl


def wca_range(cs: Sequence[ChopAutomaton], *, check: bool = False) -> sl.SemiLinearSet:
    """Set of value tuples ``(c_1(u), ..., c_n(u))`` over the common domain.

    Edge ranges are computed recursively from the restricted children and the
    label combinators, then combined along the paths of the generalised
    automaton by evaluating its state-elimination expression in the monoid of
    semi-linear sets.
    """
    if not cs:
        msg = "Range of an empty list of chop automata"
        raise InputError(msg)
    if check:
        require_synchronised(cs)
    return _range(_product_all(cs), {})


def shortlex_words(a: am.Nfa, max_len: int, max_words: int) -> Iterator[am.Word]:
    """Accepted words in shortlex order, at most ``max_words`` of them."""
    a = am.remove_epsilon(a)
    layer = [((), frozenset(a.initial))]
    symbols = sorted(a.alphabet)
    produced = 0
    for length in range(max_len + 1):
        for word, current in layer:
            if current & a.final:
                produced += 1
                yield word
                if produced >= max_words:
                    return
        if length == max_len:
            return
        following = []
        for word, current in layer:
            for symbol in symbols:
                target = a.step(current, symbol)
                if target:
                    following.append(((*word, symbol), target))
            if len(following) > max_words:
                break
        layer = following


def bounded_witness(
    domain: am.Nfa,
    value: Callable[[am.Word], int | None],
    predicate: Callable[[int], bool],
    options: DecisionOptions,
) -> tuple[am.Word, int] | None:
    """Shortest domain word whose value satisfies ``predicate`` within the search limits."""
    for word in shortlex_words(domain, options.witness_max_length, options.witness_max_words):
        v = value(word)
        if v is not None and predicate(v):
            return word, v
    return None


def _scalar(c: ChopAutomaton) -> Callable[[am.Word], int | None]:
    def value(word: am.Word) -> int | None:
        result = wca_eval(c, word)
        return None if result is None else result[0]

    return value


def _emptiness(c: ChopAutomaton, bound: int, options: DecisionOptions) -> QueryResult:
    image = wca_range([c])
    least = sl.threshold_nonempty(image, bound)
    if least is None:
        return QueryResult(Verdict.NO, details={"range": str(image)})
    found = bounded_witness(wca_domain(c), _scalar(c), lambda v: v >= bound, options)
    if found is None:
        return QueryResult(Verdict.YES, witness_value=least, details={"witness_search": "exhausted"})
    return QueryResult(Verdict.YES, witness_word=found[0], witness_value=found[1])


def wca_decide(
    target: ChopAutomaton | tuple[ChopAutomaton, ChopAutomaton],
    query: Query,
    options: DecisionOptions | None = None,
) -> QueryResult:
    """Decide a query on synchronised scalar chop automata.

    Emptiness and universality take one chop automaton, inclusion and
    equivalence a pair ``(first, second)``.

    Raises
    ------
    NotSynchronisedError
        If the input is not synchronised.
    UnsupportedCombinatorError
        If a combinator has no piecewise-linear structure.
    """
    options = options or DecisionOptions()
    match query:
        case Emptiness():
            require_synchronised([target])
            return _emptiness(target, query.bound, options)
        case Universality():
            require_synchronised([target])
            negative = wca_combine(pb.negate(), [target], check=False)
            bound = -query.threshold if query.strict else -query.threshold + 1
            result = negated(_emptiness(negative, bound, options))
            if result.witness_word is not None:
                result = dataclasses.replace(result, witness_value=_scalar(target)(result.witness_word))
            elif result.witness_value is not None:
                result = dataclasses.replace(result, witness_value=-result.witness_value)
            return result
        case Inclusion():
            first, second = target
            return _inclusion(first, second, query.strict, options)
        case Equivalence():
            first, second = target
            forward = _inclusion(first, second, False, options)
            if forward.verdict is not Verdict.YES:
                return dataclasses.replace(forward, details={**forward.details, "direction": "first >= second"})
            backward = _inclusion(second, first, False, options)
            if backward.verdict is not Verdict.YES:
                return dataclasses.replace(backward, details={**backward.details, "direction": "second >= first"})
            return QueryResult(Verdict.YES)
    msg = f"Unknown query {query!r}"
    raise InputError(msg)


def _inclusion(first: ChopAutomaton, second: ChopAutomaton, strict: bool, options: DecisionOptions) -> QueryResult:
    require_synchronised([first, second])
    witness = am.inclusion_witness(wca_domain(second), wca_domain(first))
    if witness is not None:
        return QueryResult(Verdict.NO, witness_word=witness, details={"reason": "domain"})
    pairs = wca_range([first, second])
    difference = sl.pwl_image(pairs, pw.minus(pw.Arg(1), pw.Arg(0)))
    bound = 0 if strict else 1
    if sl.threshold_nonempty(difference, bound) is None:
        return QueryResult(Verdict.YES)
    left, right = _scalar(first), _scalar(second)

    def gap(word: am.Word) -> int | None:
        a, b = left(word), right(word)
        return None if a is None or b is None else b - a

    found = bounded_witness(wca_domain(second), gap, lambda v: v >= bound, options)
    if found is None:
        return QueryResult(Verdict.NO, details={"reason": "value", "witness_search": "exhausted"})
    return QueryResult(Verdict.NO, witness_word=found[0], witness_value=left(found[0]), details={"reason": "value", "second_value": right(found[0])})
