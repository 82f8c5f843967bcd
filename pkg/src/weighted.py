"""
(max,+) weighted automata with integer vector weights.

A weighted automaton is an epsilon-free automaton whose transitions carry
integer vectors of a fixed dimension k (k = 1 for scalar automata). The value
of an accepted word is the maximum over its accepting runs of the sum of the
run's weights; vector automata are only evaluated when unambiguous, where the
run is unique. Words outside the language have no value.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass
from functools import cached_property

import src.automata as am
import src.logging_utils as lu
import src.regex as rx
import src.semilinear as sl
from src.errors import AmbiguityError, InputError

logger = lu.setup_logger(__name__)

WeightVector = tuple[int, ...]


def _weight(value: int | Sequence[int]) -> WeightVector:
    if isinstance(value, int):
        return (value,)
    return tuple(int(v) for v in value)


def _sum(u: WeightVector, v: WeightVector) -> WeightVector:
    return tuple(a + b for a, b in zip(u, v, strict=True))


def _max(u: WeightVector, v: WeightVector) -> WeightVector:
    return tuple(max(a, b) for a, b in zip(u, v, strict=True))


@dataclass(frozen=True, eq=False)
class WeightedAutomaton:
    """Epsilon-free automaton with a weight vector on every transition.

    Attributes
    ----------
    underlying : Nfa
        The unweighted automaton; its language is the domain.
    weights : Mapping[tuple, WeightVector]
        Weight of each transition ``(source, symbol, target)``.
    dimension : int
        Length of every weight vector.
    """

    underlying: am.Nfa
    weights: Mapping[tuple, WeightVector]
    dimension: int = 1

    def __post_init__(self) -> None:
        if self.underlying.has_epsilon:
            msg = "Weighted automata have no epsilon transitions"
            raise InputError(msg)
        if self.dimension < 1:
            msg = f"Weight dimension must be at least 1, got {self.dimension}"
            raise InputError(msg)
        weights = {t: _weight(w) for t, w in self.weights.items()}
        if weights.keys() != set(self.underlying.transitions):
            msg = "Weights must be given for exactly the transitions of the automaton"
            raise InputError(msg)
        for transition, weight in weights.items():
            if len(weight) != self.dimension:
                msg = f"Transition {transition!r} has a weight of dimension {len(weight)}, expected {self.dimension}"
                raise InputError(msg)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def from_edges(
        cls,
        states: Iterable,
        alphabet: Iterable[str],
        initial: Iterable,
        final: Iterable,
        edges: Iterable[tuple],
    ) -> WeightedAutomaton:
        """Build from ``(source, symbol, target, weight)`` edges; weights are ints or tuples."""
        edges = list(edges)
        weights = {(p, a, q): _weight(w) for p, a, q, w in edges}
        if len(weights) != len(edges):
            msg = "Duplicate transition in weighted automaton edges"
            raise InputError(msg)
        dimension = len(next(iter(weights.values()))) if weights else 1
        underlying = am.Nfa(frozenset(states), frozenset(alphabet), frozenset(initial), frozenset(final), frozenset(weights))
        return cls(underlying, weights, dimension)

    @property
    def alphabet(self) -> frozenset[str]:
        """Alphabet of the underlying automaton."""
        return self.underlying.alphabet

    @property
    def zero(self) -> WeightVector:
        """The zero vector of the weight dimension."""
        return (0,) * self.dimension

    @cached_property
    def ambiguity(self) -> am.AmbiguityReport:
        """Ambiguity report of the underlying automaton."""
        return am.is_unambiguous(self.underlying)

    @property
    def is_unambiguous(self) -> bool:
        """Whether every word has at most one accepting run."""
        return self.ambiguity.unambiguous

    @cached_property
    def outgoing(self) -> dict:
        """Map each state and symbol to its ``(target, weight)`` pairs."""
        table: dict = {state: {} for state in self.underlying.states}
        for transition in am.ordered(self.underlying.transitions):
            source, symbol, target = transition
            table[source].setdefault(symbol, []).append((target, self.weights[transition]))
        return table


def require_unambiguous(m: WeightedAutomaton, name: str = "automaton") -> None:
    """Raise ``AmbiguityError`` with a witness when ``m`` is ambiguous."""
    report = m.ambiguity
    if not report.unambiguous:
        msg = f"Weighted {name} is ambiguous: {am.format_word(report.word or ())} has two accepting runs"
        raise AmbiguityError(msg, report.word)


def evaluate(m: WeightedAutomaton, u: Sequence[str]) -> WeightVector | None:
    """Return the value of ``u``, or None when ``u`` is not accepted.

    Runs are aggregated by dynamic programming over states; a scalar automaton
    may be ambiguous (the maximum is taken), a vector automaton may not.

    Raises
    ------
    AmbiguityError
        If a vector-valued automaton is ambiguous.
    InputError
        If ``u`` uses a symbol outside the alphabet.
    """
    word = m.underlying.check_word(u)
    if m.dimension > 1:
        require_unambiguous(m, "vector automaton")
    best: dict = {state: m.zero for state in m.underlying.initial}
    for symbol in word:
        following: dict = {}
        for state, value in best.items():
            for target, weight in m.outgoing[state].get(symbol, ()):
                candidate = _sum(value, weight)
                following[target] = _max(following[target], candidate) if target in following else candidate
        best = following
        if not best:
            return None
    accepted = [value for state, value in best.items() if state in m.underlying.final]
    if not accepted:
        return None
    result = accepted[0]
    for value in accepted[1:]:
        result = _max(result, value)
    return result


def evaluate_scalar(m: WeightedAutomaton, u: Sequence[str]) -> int | None:
    """``evaluate`` for scalar automata, returning an int."""
    value = evaluate(m, u)
    return None if value is None else value[0]


def _relabel(m: WeightedAutomaton, mapping: Mapping) -> WeightedAutomaton:
    a = m.underlying
    weights = {(mapping[p], x, mapping[q]): w for (p, x, q), w in m.weights.items()}
    underlying = am.Nfa(
        frozenset(mapping[s] for s in a.states),
        a.alphabet,
        frozenset(mapping[s] for s in a.initial),
        frozenset(mapping[s] for s in a.final),
        frozenset(weights),
    )
    return WeightedAutomaton(underlying, weights, m.dimension)


def renumber(m: WeightedAutomaton) -> WeightedAutomaton:
    """Isomorphic automaton over states ``0..n-1``."""
    return _relabel(m, am.state_numbering(m.underlying))


def trim(m: WeightedAutomaton) -> WeightedAutomaton:
    """Restrict to useful states."""
    a = am.trim(m.underlying)
    return WeightedAutomaton(a, {t: m.weights[t] for t in a.transitions}, m.dimension)


def product(ms: Sequence[WeightedAutomaton]) -> WeightedAutomaton:
    """Synchronised product; the weight of a product transition concatenates the component weights.

    Raises
    ------
    AmbiguityError
        If some input is ambiguous.
    InputError
        If the list is empty or the alphabets differ.
    """
    if not ms:
        msg = "Product of an empty list of weighted automata"
        raise InputError(msg)
    alphabet = ms[0].alphabet
    for index, m in enumerate(ms):
        if m.alphabet != alphabet:
            msg = f"Alphabet mismatch between product components 0 and {index}"
            raise InputError(msg)
        require_unambiguous(m, f"product component {index}")
    if len(ms) == 1:
        return ms[0]
    start = [tuple(choice) for choice in _choices([am.ordered(m.underlying.initial) for m in ms])]
    seen = set(start)
    queue = deque(start)
    weights: dict = {}
    symbols = sorted(alphabet)
    while queue:
        states = queue.popleft()
        for symbol in symbols:
            options = [m.outgoing[s].get(symbol, []) for m, s in zip(ms, states, strict=True)]
            for choice in _choices(options):
                target = tuple(q for q, _ in choice)
                weights[states, symbol, target] = tuple(x for _, w in choice for x in w)
                if target not in seen:
                    seen.add(target)
                    queue.append(target)
    final = {s for s in seen if all(q in m.underlying.final for m, q in zip(ms, s, strict=True))}
    underlying = am.Nfa(frozenset(seen), alphabet, frozenset(start), frozenset(final), frozenset(weights))
    result = trim(WeightedAutomaton(underlying, weights, sum(m.dimension for m in ms)))
    msg = f"Product of {len(ms)} weighted automata has {len(result.underlying.states)} useful states"
    logger.debug(msg)
    return renumber(result)


def _choices(options: Sequence[Sequence]) -> list[tuple]:
    combos: list[tuple] = [()]
    for option in options:
        combos = [(*combo, item) for combo in combos for item in option]
    return combos


def disjoint_union(m1: WeightedAutomaton, m2: WeightedAutomaton) -> WeightedAutomaton:
    """Side-by-side union; unambiguous when both inputs are and their domains are disjoint."""
    if m1.alphabet != m2.alphabet or m1.dimension != m2.dimension:
        msg = "Disjoint union needs a shared alphabet and weight dimension"
        raise InputError(msg)
    weights = {((0, p), x, (0, q)): w for (p, x, q), w in m1.weights.items()}
    weights |= {((1, p), x, (1, q)): w for (p, x, q), w in m2.weights.items()}
    a1, a2 = m1.underlying, m2.underlying
    underlying = am.Nfa(
        frozenset({(0, s) for s in a1.states} | {(1, s) for s in a2.states}),
        a1.alphabet,
        frozenset({(0, s) for s in a1.initial} | {(1, s) for s in a2.initial}),
        frozenset({(0, s) for s in a1.final} | {(1, s) for s in a2.final}),
        frozenset(weights),
    )
    return renumber(WeightedAutomaton(underlying, weights, m1.dimension))


def complete_to_domain(m: WeightedAutomaton, dom: am.Nfa) -> WeightedAutomaton:
    """Extend ``m`` to the domain ``L(dom)``; new words get the value α·|w|.

    α is the componentwise minimum of the transition weights of ``m`` (the zero
    vector when ``m`` has no transitions).

    Raises
    ------
    InputError
        If L(m) is not included in L(dom), with a counterexample word.
    """
    witness = am.inclusion_witness(m.underlying, dom)
    if witness is not None:
        msg = f"Domain of the automaton is not included in the completion domain: {am.format_word(witness)}"
        raise InputError(msg, witness)
    if m.weights:
        alpha = tuple(min(w[i] for w in m.weights.values()) for i in range(m.dimension))
    else:
        alpha = m.zero
    rest = am.trim(am.intersect(am.determinize(dom), am.complement(m.underlying)))
    filler = WeightedAutomaton(rest, dict.fromkeys(rest.transitions, alpha), m.dimension)
    msg = f"Completing automaton with α={alpha} on {len(rest.states)} extra states"
    logger.debug(msg)
    return disjoint_union(m, filler)


def restrict(m: WeightedAutomaton, language: am.Nfa) -> WeightedAutomaton:
    """Restrict the domain of ``m`` to ``L(language)``, keeping values."""
    d = am.determinize(language)
    if d.alphabet != m.alphabet:
        msg = "Restriction language has another alphabet"
        raise InputError(msg)
    start = [(p, d.start) for p in am.ordered(m.underlying.initial)]
    seen = set(start)
    queue = deque(start)
    weights: dict = {}
    while queue:
        p, s = queue.popleft()
        for symbol, options in m.outgoing[p].items():
            s2 = d.delta[s, symbol]
            for q, w in options:
                weights[(p, s), symbol, (q, s2)] = w
                if (q, s2) not in seen:
                    seen.add((q, s2))
                    queue.append((q, s2))
    final = {(p, s) for p, s in seen if p in m.underlying.final and s in d.final}
    underlying = am.Nfa(frozenset(seen), m.alphabet, frozenset(start), frozenset(final), frozenset(weights))
    return renumber(trim(WeightedAutomaton(underlying, weights, m.dimension)))


def project(m: WeightedAutomaton, index: int) -> WeightedAutomaton:
    """Scalar automaton keeping component ``index`` of every weight."""
    if not 0 <= index < m.dimension:
        msg = f"Component {index} out of range for dimension {m.dimension}"
        raise InputError(msg)
    return map_weights(m, lambda w: (w[index],), 1)


def map_weights(m: WeightedAutomaton, f: Callable[[WeightVector], WeightVector], dimension: int | None = None) -> WeightedAutomaton:
    """Apply ``f`` to every weight vector."""
    weights = {t: _weight(f(w)) for t, w in m.weights.items()}
    return WeightedAutomaton(m.underlying, weights, m.dimension if dimension is None else dimension)


def with_ends(m: WeightedAutomaton, initial: Iterable | None = None, final: Iterable | None = None) -> WeightedAutomaton:
    """Copy with other initial and/or final states, trimmed."""
    return trim(WeightedAutomaton(m.underlying.with_ends(initial, final), m.weights, m.dimension))


def parikh_range(m: WeightedAutomaton) -> sl.SemiLinearSet:
    """Return the set of values of the accepted words.

    The trimmed automaton is turned into a regular expression over its
    transitions by state elimination, which is then evaluated in the
    commutative monoid of semi-linear sets with each transition read as the
    singleton of its weight.

    Raises
    ------
    AmbiguityError
        If ``m`` is ambiguous (values of runs would not be values of words).
    """
    require_unambiguous(m)
    t = trim(m)
    a = t.underlying
    edges = [(p, rx.Letter((p, x, q)), q) for p, x, q in am.ordered(a.transitions)]
    expression = rx.state_elimination(a.states, a.initial, a.final, edges)
    result = sl.commutative_kleene_eval(expression, lambda transition: sl.singleton(t.weights[transition]), m.dimension)
    msg = f"Range of a {len(a.states)}-state automaton has {len(result.components)} linear component(s)"
    logger.debug(msg)
    return result


def find_word(
    m: WeightedAutomaton,
    predicate: Callable[[WeightVector], bool],
    max_len: int = 12,
    max_configurations: int = 20000,
) -> tuple[am.Word, WeightVector] | None:
    """Shortest accepted word whose value satisfies ``predicate``.

    Breadth-first search over (state, accumulated value) configurations, each
    reached by its shortlex-least word; candidates are re-evaluated before
    testing the predicate. Returns None when nothing is found within
    ``max_len`` letters or ``max_configurations`` configurations.
    """
    t = trim(m)
    layer: dict = {}
    for state in am.ordered(t.underlying.initial):
        layer.setdefault((state, t.zero), ())
    seen = set(layer)
    symbols = sorted(t.alphabet)
    tested: set = set()
    for length in range(max_len + 1):
        for word in sorted({w for (s, _), w in layer.items() if s in t.underlying.final}):
            if word in tested:
                continue
            tested.add(word)
            value = evaluate(t, word)
            if value is not None and predicate(value):
                return word, value
        if length == max_len:
            break
        following: dict = {}
        for (state, value), word in sorted(layer.items(), key=lambda item: item[1]):
            for symbol in symbols:
                for target, weight in t.outgoing[state].get(symbol, ()):
                    key = (target, _sum(value, weight))
                    if key not in seen:
                        seen.add(key)
                        following[key] = (*word, symbol)
        layer = following
        if len(seen) > max_configurations or not layer:
            break
    msg = f"No witness word within length {max_len}"
    logger.debug(msg)
    return None
