"""
Finite automata over explicit token alphabets.

This module provides the classical closure kit (epsilon elimination, subset
construction, complement, product, union, emptiness with shortest witness,
equivalence with separating word) together with the two word decomposition
constructions used by iterated sums and split sums:

* ``unique_star_automaton`` recognises the words of L* with exactly one
  factorisation into nonempty L-factors (the empty word included) and marks
  the states at which a factor ends;
* ``unambiguous_concat`` covers the words with exactly one split u1 u2 with
  u1 in L1 and u2 in L2 by a finite union of products N_i M_i.

Both constructions track runs of a deterministic automaton, so distinct runs
of the constructed automaton correspond exactly to distinct decompositions,
and they are made unambiguous by squaring the automaton with a divergence
flag and complementing.

Automata are immutable. Words are tuples of symbols, the empty word is ``()``
and epsilon transitions carry the label ``None``.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Callable, Hashable, Iterable, Sequence
from dataclasses import dataclass, field
from functools import cached_property

import src.logging_utils as lu
from src.errors import InputError

logger = lu.setup_logger(__name__)

EPSILON = None

State = Hashable
Word = tuple[str, ...]
Transition = tuple  # (source, symbol or None, target)


def ordered(items: Iterable) -> list:
    """Return the items sorted by their representation (stable across runs)."""
    return sorted(items, key=repr)


def format_word(word: Sequence[str]) -> str:
    """Render a word for reports, using ``@eps`` for the empty word."""
    if not word:
        return "@eps"
    if all(len(symbol) == 1 for symbol in word):
        return "".join(word)
    return " ".join(word)


@dataclass(frozen=True, eq=False)
class Nfa:
    """Nondeterministic finite automaton with optional epsilon transitions.

    Attributes
    ----------
    states : frozenset
        Finite set of hashable state identifiers.
    alphabet : frozenset[str]
        Explicit set of symbols (arbitrary tokens).
    initial : frozenset
        Initial states.
    final : frozenset
        Accepting states.
    transitions : frozenset[Transition]
        Triples ``(source, symbol, target)``; ``symbol is None`` marks epsilon.
    """

    states: frozenset
    alphabet: frozenset[str]
    initial: frozenset
    final: frozenset
    transitions: frozenset = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        for name in ("states", "alphabet", "initial", "final", "transitions"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        if not self.initial <= self.states or not self.final <= self.states:
            msg = "Initial and final states must belong to the state set"
            raise InputError(msg)
        for source, symbol, target in self.transitions:
            if source not in self.states or target not in self.states:
                msg = f"Transition {source!r} -{symbol}-> {target!r} leaves the state set"
                raise InputError(msg)
            if symbol is not None and symbol not in self.alphabet:
                msg = f"Transition symbol {symbol!r} is not in the alphabet"
                raise InputError(msg)

    @cached_property
    def successors(self) -> dict[State, dict[str | None, tuple]]:
        """Map each state to its outgoing targets grouped by symbol."""
        table: dict[State, dict[str | None, list]] = {state: {} for state in self.states}
        for source, symbol, target in self.transitions:
            table[source].setdefault(symbol, []).append(target)
        return {state: {symbol: tuple(ordered(targets)) for symbol, targets in row.items()} for state, row in table.items()}

    @cached_property
    def has_epsilon(self) -> bool:
        """Whether some transition is labelled by epsilon."""
        return any(symbol is None for _, symbol, _ in self.transitions)

    @cached_property
    def is_deterministic(self) -> bool:
        """Whether there is one initial state, no epsilon and at most one target per (state, symbol)."""
        if len(self.initial) != 1 or self.has_epsilon:
            return False
        return all(len(targets) <= 1 for row in self.successors.values() for targets in row.values())

    def epsilon_closure(self, states: Iterable[State]) -> frozenset:
        """Return the states reachable from ``states`` by epsilon transitions."""
        closure = set(states)
        stack = list(closure)
        while stack:
            state = stack.pop()
            for target in self.successors[state].get(None, ()):
                if target not in closure:
                    closure.add(target)
                    stack.append(target)
        return frozenset(closure)

    def step(self, states: Iterable[State], symbol: str) -> frozenset:
        """Return the closure of the ``symbol``-successors of ``states``."""
        targets = {target for state in states for target in self.successors[state].get(symbol, ())}
        return self.epsilon_closure(targets) if self.has_epsilon else frozenset(targets)

    def check_word(self, word: Sequence[str]) -> Word:
        """Return ``word`` as a tuple, rejecting symbols outside the alphabet.

        Raises
        ------
        InputError
            If a symbol is not part of the alphabet.
        """
        for symbol in word:
            if symbol not in self.alphabet:
                msg = f"Symbol {symbol!r} is not in the alphabet {{{', '.join(sorted(self.alphabet))}}}"
                raise InputError(msg, word)
        return tuple(word)

    def accepts(self, word: Sequence[str]) -> bool:
        """Return whether ``word`` is accepted."""
        current = self.epsilon_closure(self.initial)
        for symbol in self.check_word(word):
            current = self.step(current, symbol)
            if not current:
                return False
        return bool(current & self.final)

    def with_ends(self, initial: Iterable[State] | None = None, final: Iterable[State] | None = None) -> Nfa:
        """Return a copy with other initial and/or final states."""
        return Nfa(
            self.states,
            self.alphabet,
            self.initial if initial is None else frozenset(initial),
            self.final if final is None else frozenset(final),
            self.transitions,
        )

    def renumber(self) -> Nfa:
        """Return an isomorphic automaton over states ``0..n-1`` in breadth-first order."""
        mapping = state_numbering(self)
        return Nfa(
            frozenset(mapping.values()),
            self.alphabet,
            frozenset(mapping[state] for state in self.initial),
            frozenset(mapping[state] for state in self.final),
            frozenset((mapping[p], symbol, mapping[q]) for p, symbol, q in self.transitions),
        )


@dataclass(frozen=True, eq=False)
class Dfa(Nfa):
    """Deterministic and total finite automaton.

    Exactly one initial state and exactly one transition per (state, symbol).
    """

    def __post_init__(self) -> None:
        super().__post_init__()
        if len(self.initial) != 1:
            msg = "A Dfa has exactly one initial state"
            raise InputError(msg)
        if self.has_epsilon:
            msg = "A Dfa has no epsilon transitions"
            raise InputError(msg)
        if len(self.transitions) != len(self.states) * len(self.alphabet) or len(self.delta) != len(self.transitions):
            msg = "A Dfa has exactly one transition per state and symbol"
            raise InputError(msg)

    @cached_property
    def delta(self) -> dict[tuple[State, str], State]:
        """Total transition function."""
        return {(source, symbol): target for source, symbol, target in self.transitions}

    @property
    def start(self) -> State:
        """The initial state."""
        return next(iter(self.initial))

    def run(self, state: State, word: Sequence[str]) -> State:
        """Return the state reached from ``state`` after reading ``word``."""
        for symbol in word:
            state = self.delta[state, symbol]
        return state


@dataclass(frozen=True)
class AmbiguityReport:
    """Outcome of an ambiguity check.

    Attributes
    ----------
    unambiguous : bool
        True iff every word has at most one accepting run.
    word : Word or None
        Shortest word with two accepting runs, when ambiguous.
    runs : tuple of two state sequences, or None
        Two distinct accepting runs on ``word``.
    """

    unambiguous: bool
    word: Word | None = None
    runs: tuple[tuple, tuple] | None = None


@dataclass(frozen=True, eq=False)
class UniqueStar:
    """Unambiguous automaton for L^# with its factor boundary states.

    Every run on a word of L^# visits a state of ``special`` exactly at the
    positions where a factor ends (and at the start).
    """

    automaton: Nfa
    special: frozenset


def state_numbering(a: Nfa) -> dict[State, int]:
    """Number states in breadth-first order from the initial states, then the rest."""
    mapping: dict[State, int] = {}
    queue = deque(ordered(a.initial))
    for state in queue:
        mapping.setdefault(state, len(mapping))
    while queue:
        state = queue.popleft()
        for symbol in ordered(a.successors[state]):
            for target in a.successors[state][symbol]:
                if target not in mapping:
                    mapping[target] = len(mapping)
                    queue.append(target)
    for state in ordered(a.states - mapping.keys()):
        mapping[state] = len(mapping)
    return mapping


def _check_alphabets(a: Nfa, b: Nfa) -> None:
    if a.alphabet != b.alphabet:
        msg = f"Alphabet mismatch: {{{', '.join(sorted(a.alphabet))}}} vs {{{', '.join(sorted(b.alphabet))}}}"
        raise InputError(msg)


def empty_language(alphabet: Iterable[str]) -> Nfa:
    """Return an automaton accepting nothing."""
    return Nfa(frozenset({0}), frozenset(alphabet), frozenset({0}), frozenset(), frozenset())


def universal_language(alphabet: Iterable[str]) -> Dfa:
    """Return the one-state automaton accepting every word."""
    symbols = frozenset(alphabet)
    return Dfa(frozenset({0}), symbols, frozenset({0}), frozenset({0}), frozenset((0, s, 0) for s in symbols))


def nonempty_words(alphabet: Iterable[str]) -> Dfa:
    """Return the automaton accepting every nonempty word."""
    symbols = frozenset(alphabet)
    transitions = frozenset((state, s, 1) for state in (0, 1) for s in symbols)
    return Dfa(frozenset({0, 1}), symbols, frozenset({0}), frozenset({1}), transitions)


def from_words(words: Iterable[Sequence[str]], alphabet: Iterable[str]) -> Nfa:
    """Return a prefix-tree automaton accepting exactly the given finite set of words."""
    states: dict[Word, int] = {(): 0}
    transitions = set()
    final = set()
    for word in words:
        prefix: Word = ()
        for symbol in word:
            extended = (*prefix, symbol)
            if extended not in states:
                states[extended] = len(states)
                transitions.add((states[prefix], symbol, states[extended]))
            prefix = extended
        final.add(states[prefix])
    return Nfa(frozenset(states.values()), frozenset(alphabet), frozenset({0}), frozenset(final), frozenset(transitions))


def remove_epsilon(a: Nfa) -> Nfa:
    """Return an equivalent automaton without epsilon transitions.

    A state becomes final when its closure meets a final state, and it gets
    every letter transition leaving its closure.
    """
    if not a.has_epsilon:
        return a
    transitions = set()
    final = set()
    for state in a.states:
        closure = a.epsilon_closure([state])
        if closure & a.final:
            final.add(state)
        for member in closure:
            for symbol, targets in a.successors[member].items():
                if symbol is not None:
                    transitions.update((state, symbol, target) for target in targets)
    return Nfa(a.states, a.alphabet, a.initial, frozenset(final), frozenset(transitions))


def accessible_states(a: Nfa) -> frozenset:
    """Return the states reachable from an initial state."""
    seen = set(a.initial)
    stack = list(seen)
    while stack:
        state = stack.pop()
        for targets in a.successors[state].values():
            for target in targets:
                if target not in seen:
                    seen.add(target)
                    stack.append(target)
    return frozenset(seen)


def coaccessible_states(a: Nfa) -> frozenset:
    """Return the states from which a final state is reachable."""
    predecessors: dict[State, list[State]] = {state: [] for state in a.states}
    for source, _, target in a.transitions:
        predecessors[target].append(source)
    seen = set(a.final)
    stack = list(seen)
    while stack:
        state = stack.pop()
        for source in predecessors[state]:
            if source not in seen:
                seen.add(source)
                stack.append(source)
    return frozenset(seen)


def trim(a: Nfa) -> Nfa:
    """Return the automaton restricted to its useful (accessible and co-accessible) states."""
    useful = accessible_states(a) & coaccessible_states(a)
    if useful == a.states:
        return a
    return Nfa(
        useful,
        a.alphabet,
        a.initial & useful,
        a.final & useful,
        frozenset(t for t in a.transitions if t[0] in useful and t[2] in useful),
    )


def determinize(a: Nfa) -> Dfa:
    """Return a total deterministic automaton for L(a) by the subset construction.

    States of the result are numbered in discovery order; the empty subset
    becomes the sink state when it is reachable.
    """
    if isinstance(a, Dfa):
        return a
    a = remove_epsilon(a)
    start = frozenset(a.initial)
    index: dict[frozenset, int] = {start: 0}
    queue = deque([start])
    transitions = set()
    final = set()
    symbols = sorted(a.alphabet)
    while queue:
        subset = queue.popleft()
        if subset & a.final:
            final.add(index[subset])
        for symbol in symbols:
            target = a.step(subset, symbol)
            if target not in index:
                index[target] = len(index)
                queue.append(target)
            transitions.add((index[subset], symbol, index[target]))
    msg = f"Subset construction produced {len(index)} states from {len(a.states)}"
    logger.debug(msg)
    return Dfa(frozenset(index.values()), a.alphabet, frozenset({0}), frozenset(final), frozenset(transitions))


def complement(a: Nfa) -> Dfa:
    """Return a deterministic automaton for the complement of L(a) (determinizes first)."""
    d = determinize(a)
    return Dfa(d.states, d.alphabet, d.initial, d.states - d.final, d.transitions)


def intersect(a: Nfa, b: Nfa) -> Nfa:
    """Return the product automaton for L(a) ∩ L(b); a Dfa when both inputs are.

    Raises
    ------
    InputError
        If the alphabets differ.
    """
    _check_alphabets(a, b)
    a, b = remove_epsilon(a), remove_epsilon(b)
    start = [(p, q) for p in ordered(a.initial) for q in ordered(b.initial)]
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
    final = frozenset(pair for pair in seen if pair[0] in a.final and pair[1] in b.final)
    product = Nfa(frozenset(seen), a.alphabet, frozenset(start), final, frozenset(transitions))
    product = product.renumber()
    if isinstance(a, Dfa) and isinstance(b, Dfa):
        return Dfa(product.states, product.alphabet, product.initial, product.final, product.transitions)
    return product


def union(a: Nfa, b: Nfa) -> Nfa:
    """Return the disjoint union automaton for L(a) ∪ L(b)."""
    _check_alphabets(a, b)
    states = {(0, s) for s in a.states} | {(1, s) for s in b.states}
    transitions = {((0, p), x, (0, q)) for p, x, q in a.transitions} | {((1, p), x, (1, q)) for p, x, q in b.transitions}
    result = Nfa(
        frozenset(states),
        a.alphabet,
        frozenset({(0, s) for s in a.initial} | {(1, s) for s in b.initial}),
        frozenset({(0, s) for s in a.final} | {(1, s) for s in b.final}),
        frozenset(transitions),
    )
    return result.renumber()


def difference(a: Nfa, b: Nfa) -> Nfa:
    """Return an automaton for L(a) minus L(b)."""
    return intersect(a, complement(b))


def nonempty_part(a: Nfa) -> Nfa:
    """Return an automaton for L(a) without the empty word."""
    return intersect(a, nonempty_words(a.alphabet))


def _shortest_path(
    a: Nfa,
    sources: Iterable[State],
    is_target: Callable[[State], bool],
) -> tuple[Word, list[State]] | None:
    """Breadth-first search over an epsilon-free automaton; returns word and state path."""
    parents: dict[State, tuple[State, str] | None] = {}
    queue: deque[State] = deque()
    for state in ordered(sources):
        if state not in parents:
            parents[state] = None
            queue.append(state)
    while queue:
        state = queue.popleft()
        if is_target(state):
            word: list[str] = []
            path = [state]
            while parents[state] is not None:
                state, symbol = parents[state]
                word.append(symbol)
                path.append(state)
            return tuple(reversed(word)), list(reversed(path))
        row = a.successors[state]
        for symbol in sorted(x for x in row if x is not None):
            for target in row[symbol]:
                if target not in parents:
                    parents[target] = (state, symbol)
                    queue.append(target)
    return None


def shortest_word(a: Nfa) -> Word | None:
    """Return a shortest accepted word (lexicographically least among those), or None if L(a) is empty."""
    a = remove_epsilon(a)
    found = _shortest_path(a, a.initial, lambda state: state in a.final)
    return None if found is None else found[0]


def is_empty(a: Nfa) -> bool:
    """Return whether L(a) is empty."""
    return shortest_word(a) is None


def inclusion_witness(a: Nfa, b: Nfa) -> Word | None:
    """Return a shortest word of L(a) outside L(b), or None when L(a) ⊆ L(b)."""
    return shortest_word(difference(a, b))


def equivalent(a: Nfa, b: Nfa) -> tuple[bool, Word | None]:
    """Decide L(a) = L(b).

    Returns
    -------
    tuple[bool, Word or None]
        ``(True, None)`` for equal languages, otherwise ``(False, w)`` with a
        shortest word ``w`` in the symmetric difference.
    """
    candidates = [w for w in (inclusion_witness(a, b), inclusion_witness(b, a)) if w is not None]
    if not candidates:
        return True, None
    return False, min(candidates, key=lambda w: (len(w), w))


def language_words(a: Nfa, max_len: int) -> list[Word]:
    """Enumerate the accepted words of length at most ``max_len`` in shortlex order."""
    a = remove_epsilon(a)
    words = []
    layer = [((), frozenset(a.initial))]
    symbols = sorted(a.alphabet)
    for length in range(max_len + 1):
        words.extend(word for word, current in layer if current & a.final)
        if length == max_len:
            break
        next_layer = []
        for word, current in layer:
            for symbol in symbols:
                target = a.step(current, symbol)
                if target:
                    next_layer.append(((*word, symbol), target))
        layer = next_layer
    return words


def all_words(alphabet: Iterable[str], max_len: int) -> list[Word]:
    """Enumerate every word of length at most ``max_len`` in shortlex order."""
    return language_words(universal_language(alphabet), max_len)


def left_language(a: Nfa, state: State) -> Nfa:
    """Return the words leading from an initial state to ``state``."""
    return trim(a.with_ends(final=[state]))


def right_language(a: Nfa, state: State) -> Nfa:
    """Return the words leading from ``state`` to a final state."""
    return trim(a.with_ends(initial=[state]))


def ambiguity_square(a: Nfa) -> Nfa:
    """Square an epsilon-free automaton with a divergence flag.

    States are ``(p, q, diverged)``; accepting states are pairs of final
    states whose two runs differ somewhere. The language is the set of words
    with at least two accepting runs.
    """
    a = trim(a)
    start = [(p, q, p != q) for p in ordered(a.initial) for q in ordered(a.initial)]
    seen = set(start)
    queue = deque(start)
    transitions = set()
    while queue:
        p, q, diverged = queue.popleft()
        row_p, row_q = a.successors[p], a.successors[q]
        for symbol in row_p.keys() & row_q.keys():
            for p2 in row_p[symbol]:
                for q2 in row_q[symbol]:
                    target = (p2, q2, diverged or p2 != q2)
                    transitions.add(((p, q, diverged), symbol, target))
                    if target not in seen:
                        seen.add(target)
                        queue.append(target)
    final = frozenset(s for s in seen if s[2] and s[0] in a.final and s[1] in a.final)
    return Nfa(frozenset(seen), a.alphabet, frozenset(start), final, frozenset(transitions))


def is_unambiguous(a: Nfa) -> AmbiguityReport:
    """Check that every word has at most one accepting run.

    Parameters
    ----------
    a : Nfa
        Epsilon-free automaton.

    Returns
    -------
    AmbiguityReport
        With a shortest witness word and two distinct accepting runs when ambiguous.

    Raises
    ------
    InputError
        If ``a`` has epsilon transitions.
    """
    if a.has_epsilon:
        msg = "Ambiguity is checked on epsilon-free automata; eliminate epsilon transitions first"
        raise InputError(msg)
    square = ambiguity_square(a)
    found = _shortest_path(square, square.initial, lambda state: state in square.final)
    if found is None:
        return AmbiguityReport(unambiguous=True)
    word, path = found
    first = tuple(state[0] for state in path)
    second = tuple(state[1] for state in path)
    msg = f"Automaton is ambiguous on {format_word(word)}"
    logger.debug(msg)
    return AmbiguityReport(unambiguous=False, word=word, runs=(first, second))


def _factorisation_automaton(l: Nfa) -> tuple[Nfa, State]:
    """Automaton whose runs are the factorisations of a word into nonempty L-factors.

    It follows the subset automaton of L and, after a letter ending a factor,
    may jump to a fresh boundary state that plays the start state without
    being enterable otherwise. The boundary state is the only initial and the
    only final state.
    """
    d = determinize(l)
    boundary = -1
    transitions = set()
    for state in (boundary, *d.states):
        source = d.start if state == boundary else state
        for symbol in d.alphabet:
            target = d.delta[source, symbol]
            transitions.add((state, symbol, target))
            if target in d.final:
                transitions.add((state, symbol, boundary))
    automaton = Nfa(frozenset({boundary, *d.states}), d.alphabet, frozenset({boundary}), frozenset({boundary}), frozenset(transitions))
    return trim(automaton), boundary


def _restrict_to_single_runs(a: Nfa) -> Nfa:
    """Product of ``a`` with the complement of its ambiguous words; the result is unambiguous."""
    unique = complement(ambiguity_square(a))
    start = [(p, unique.start) for p in ordered(a.initial)]
    seen = set(start)
    queue = deque(start)
    transitions = set()
    while queue:
        p, c = queue.popleft()
        for symbol, targets in a.successors[p].items():
            c2 = unique.delta[c, symbol]
            for p2 in targets:
                transitions.add(((p, c), symbol, (p2, c2)))
                if (p2, c2) not in seen:
                    seen.add((p2, c2))
                    queue.append((p2, c2))
    final = frozenset(s for s in seen if s[0] in a.final and s[1] in unique.final)
    return trim(Nfa(frozenset(seen), a.alphabet, frozenset(start), final, frozenset(transitions)))


def unique_star_automaton(l: Nfa) -> UniqueStar:
    """Build the unambiguous automaton for L^# together with its factor boundary states.

    Parameters
    ----------
    l : Nfa
        Automaton for the factor language L (the empty word is ignored).

    Returns
    -------
    UniqueStar
        Automaton accepting the empty word and the words of L* with exactly one
        factorisation into nonempty L-factors. Runs visit ``special`` states
        exactly at factor boundaries.
    """
    factorisations, boundary = _factorisation_automaton(l)
    automaton = _restrict_to_single_runs(factorisations)
    special = frozenset(state for state in automaton.states if state[0] == boundary)
    msg = f"L^# automaton has {len(automaton.states)} states, {len(special)} of them boundaries"
    logger.debug(msg)
    return UniqueStar(automaton=automaton, special=special)


def unique_star_language(l: Nfa) -> Nfa:
    """Return an automaton for L^#: words of L* with exactly one factorisation, plus the empty word."""
    return unique_star_automaton(l).automaton.renumber()


def unambiguous_concat(l1: Nfa, l2: Nfa) -> list[tuple[Nfa, Nfa]]:
    """Cover the uniquely split words of L1·L2 by products of sublanguages.

    A run of the split automaton follows L1 deterministically, switches to L2
    exactly once (through a marked switch state) and follows L2
    deterministically, so runs correspond to splits. Restricting to words with
    a single run and reading the left and right languages of each marked
    switch state yields the pairs.

    Returns
    -------
    list[tuple[Nfa, Nfa]]
        Pairs (N_i, M_i) with N_i ⊆ L1, M_i ⊆ L2 and the union of N_i M_i equal
        to the set of words with exactly one split u1 u2, u1 ∈ L1, u2 ∈ L2.
    """
    _check_alphabets(l1, l2)
    d1, d2 = determinize(l1), determinize(l2)
    switch = ("switch",)
    transitions = set()
    for state in d1.states:
        for symbol in d1.alphabet:
            target = d1.delta[state, symbol]
            transitions.add((("left", state), symbol, ("left", target)))
            if target in d1.final:
                transitions.add((("left", state), symbol, switch))
    for state in d2.states:
        for symbol in d2.alphabet:
            transitions.add((("right", state), symbol, ("right", d2.delta[state, symbol])))
    for symbol in d2.alphabet:
        transitions.add((switch, symbol, ("right", d2.delta[d2.start, symbol])))
    states = {("left", s) for s in d1.states} | {("right", s) for s in d2.states} | {switch}
    initial = {("left", d1.start)} | ({switch} if d1.start in d1.final else set())
    final = {("right", s) for s in d2.final} | ({switch} if d2.start in d2.final else set())
    splits = trim(Nfa(frozenset(states), d1.alphabet, frozenset(initial), frozenset(final), frozenset(transitions)))
    unique = _restrict_to_single_runs(splits)
    pairs = []
    for state in ordered(unique.states):
        if state[0] == switch:
            pairs.append((left_language(unique, state).renumber(), right_language(unique, state).renumber()))
    msg = f"Unambiguous concatenation split into {len(pairs)} products"
    logger.debug(msg)
    return pairs


def word_distance(u: Sequence[str], v: Sequence[str]) -> int:
    """Return |u| + |v| - 2 |longest common prefix of u and v|."""
    common = 0
    for x, y in zip(u, v, strict=False):
        if x != y:
            break
        common += 1
    return len(u) + len(v) - 2 * common
