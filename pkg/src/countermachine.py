"""
Reversal-bounded counter machines.

A counter machine reads letters or moves on epsilon; each transition tests
every counter against ``=0``, ``>0`` or nothing and increments, decrements or
keeps it. Counter values stay natural: a decrement below zero blocks the
transition. A reversal is a switch of a counter between increasing and
decreasing phases.

The module encodes the objects of the decision procedures as machines:

* ``wa_to_cm``: a weighted automaton as an increasing-only two-counter
  machine, the value being ``x+ - x-``;
* ``term_to_cm``: a Presburger term as a deterministic epsilon machine with one
  counter pair per term position, summing children into parents;
* ``formula_to_cm``: a formula as a one-reversal epsilon machine accepting
  exactly when the formula holds.

``cm_emptiness_backend`` combines them into a bounded breadth-first emptiness
check for star-free expressions, used to cross-check the semi-linear back end.
"""

from __future__ import annotations

import heapq
import itertools
from collections import deque
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass, field
from enum import StrEnum
from functools import cached_property

import src.automata as am
import src.expressions as ex
import src.logging_utils as lu
import src.presburger as pb
import src.weighted as wa
from src.errors import CounterMachineError, InputError
from src.queries import DecisionOptions, QueryResult, Verdict

logger = lu.setup_logger(__name__)


class Guard(StrEnum):
    """Test of one counter."""

    ZERO = "=0"
    POSITIVE = ">0"
    ANY = "true"


INCR, NOP, DECR = 1, 0, -1


@dataclass(frozen=True, eq=False)
class CmTransition:
    """Transition reading ``letter`` (None for epsilon) under guards, applying updates.

    Counters missing from ``guards`` are untested; counters missing from
    ``updates`` are kept.
    """

    source: am.State
    target: am.State
    letter: str | None = None
    guards: Mapping[str, Guard] = field(default_factory=dict)
    updates: Mapping[str, int] = field(default_factory=dict)


@dataclass(frozen=True, eq=False)
class CounterMachine:
    """Counter machine with one initial state.

    Raises
    ------
    CounterMachineError
        If a transition mentions an unknown state, counter or letter, or an
        update outside {-1, 0, 1}.
    """

    alphabet: frozenset[str]
    counters: tuple[str, ...]
    states: frozenset
    initial: am.State
    final: frozenset
    transitions: tuple[CmTransition, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "transitions", tuple(self.transitions))
        if self.initial not in self.states or not self.final <= self.states:
            msg = "Initial and final states must belong to the state set"
            raise CounterMachineError(msg)
        known = set(self.counters)
        for t in self.transitions:
            if t.source not in self.states or t.target not in self.states:
                msg = f"Transition {t.source!r} -> {t.target!r} leaves the state set"
                raise CounterMachineError(msg)
            if t.letter is not None and t.letter not in self.alphabet:
                msg = f"Transition letter {t.letter!r} is not in the alphabet"
                raise CounterMachineError(msg)
            if not set(t.guards) <= known or not set(t.updates) <= known:
                msg = f"Transition {t.source!r} -> {t.target!r} uses unknown counters"
                raise CounterMachineError(msg)
            if any(u not in {INCR, NOP, DECR} for u in t.updates.values()):
                msg = f"Transition {t.source!r} -> {t.target!r} has an update outside -1, 0, 1"
                raise CounterMachineError(msg)

    @cached_property
    def index(self) -> dict[str, int]:
        """Position of each counter in valuation tuples."""
        return {name: i for i, name in enumerate(self.counters)}

    @cached_property
    def outgoing(self) -> dict[am.State, list[CmTransition]]:
        """Transitions grouped by source state."""
        table: dict = {state: [] for state in self.states}
        for t in self.transitions:
            table[t.source].append(t)
        return table


@dataclass(frozen=True)
class Configuration:
    """State, counter values, current phase and reversals of every counter.

    Phases are ``INCR`` or ``DECR``; every counter starts increasing.
    """

    state: am.State
    values: tuple[int, ...]
    phases: tuple[int, ...]
    reversals: tuple[int, ...]


def initial_configuration(m: CounterMachine, valuation: Mapping[str, int] | None = None) -> Configuration:
    """Configuration at the initial state with the given counter values (zero elsewhere)."""
    valuation = valuation or {}
    unknown = set(valuation) - set(m.counters)
    if unknown:
        msg = f"Unknown counter(s) {', '.join(sorted(unknown))}"
        raise CounterMachineError(msg)
    values = tuple(int(valuation.get(name, 0)) for name in m.counters)
    if any(v < 0 for v in values):
        msg = "Counter values are natural numbers"
        raise CounterMachineError(msg)
    size = len(m.counters)
    return Configuration(m.initial, values, (INCR,) * size, (0,) * size)


def valuation_of(m: CounterMachine, config: Configuration) -> dict[str, int]:
    """Counter values of a configuration by name."""
    return dict(zip(m.counters, config.values, strict=True))


def format_configuration(m: CounterMachine, config: Configuration) -> str:
    """Render ``state | counter=value,... | reversals`` for trace dumps."""
    values = ",".join(f"{name}={value}" for name, value in zip(m.counters, config.values, strict=True))
    return f"{config.state} | {values} | {sum(config.reversals)}"


def _fire(m: CounterMachine, config: Configuration, t: CmTransition) -> Configuration | None:
    values = list(config.values)
    for name, guard in t.guards.items():
        v = values[m.index[name]]
        if (guard is Guard.ZERO and v != 0) or (guard is Guard.POSITIVE and v <= 0):
            return None
    phases, reversals = list(config.phases), list(config.reversals)
    for name, update in t.updates.items():
        if update == NOP:
            continue
        i = m.index[name]
        values[i] += update
        if values[i] < 0:
            return None
        if update != phases[i]:
            phases[i] = update
            reversals[i] += 1
    return Configuration(t.target, tuple(values), tuple(phases), tuple(reversals))


def cm_step(m: CounterMachine, config: Configuration, letter: str | None) -> list[Configuration]:
    """Successors of ``config`` through transitions reading ``letter`` (None for epsilon)."""
    successors = []
    for t in m.outgoing[config.state]:
        if t.letter == letter:
            following = _fire(m, config, t)
            if following is not None:
                successors.append(following)
    return successors


def cm_run(m: CounterMachine, config: Configuration, word: Sequence[str], step_bound: int) -> set[Configuration]:
    """Accepting configurations reachable on ``word`` in at most ``step_bound`` transitions."""
    word = tuple(word)
    for symbol in word:
        if symbol not in m.alphabet:
            msg = f"Symbol {symbol!r} is not in the alphabet"
            raise InputError(msg, word)
    start = (config, 0)
    seen = {start}
    queue = deque([(config, 0, 0)])
    accepting = set()
    while queue:
        current, position, steps = queue.popleft()
        if position == len(word) and current.state in m.final:
            accepting.add(current)
        if steps == step_bound:
            continue
        moves = [(c, position) for c in cm_step(m, current, None)]
        if position < len(word):
            moves += [(c, position + 1) for c in cm_step(m, current, word[position])]
        for following in moves:
            if following not in seen:
                seen.add(following)
                queue.append((*following, steps + 1))
    return accepting


def wa_to_cm(a: wa.WeightedAutomaton) -> CounterMachine:
    """Increasing-only machine over ``x+`` and ``x-`` accepting L(a).

    A weight w > 0 becomes a chain of w increments of ``x+`` (the first one
    reads the letter, the others are epsilon moves), a negative weight a chain
    on ``x-``; a fresh initial state moves to the initial states of ``a``.
    """
    if a.dimension != 1:
        msg = "Only scalar weighted automata are encoded as counter machines"
        raise InputError(msg)
    init = ("init",)
    states = set(a.underlying.states) | {init}
    transitions = [CmTransition(init, q) for q in am.ordered(a.underlying.initial)]
    for index, (transition, (weight,)) in enumerate(sorted(a.weights.items(), key=lambda item: repr(item[0]))):
        p, symbol, q = transition
        counter = "x+" if weight > 0 else "x-"
        steps = abs(weight)
        if steps == 0:
            transitions.append(CmTransition(p, q, symbol))
            continue
        chain = [p, *(("chain", index, k) for k in range(1, steps)), q]
        states.update(chain)
        for k, (source, target) in enumerate(itertools.pairwise(chain)):
            transitions.append(CmTransition(source, target, symbol if k == 0 else None, updates={counter: INCR}))
    return CounterMachine(a.alphabet, ("x+", "x-"), frozenset(states), init, frozenset(a.underlying.final), tuple(transitions))


class _Builder:
    """Incremental construction of epsilon machines."""

    def __init__(self, alphabet: frozenset[str] = frozenset()) -> None:
        self.alphabet = alphabet
        self.counters: list[str] = []
        self.transitions: list[CmTransition] = []
        self.valuation: dict[str, int] = {}
        self.count = itertools.count()

    def state(self) -> int:
        return next(self.count)

    def counter(self, name: str) -> str:
        if name not in self.counters:
            self.counters.append(name)
        return name

    def move(self, source: int, target: int, guards: Mapping[str, Guard] | None = None, updates: Mapping[str, int] | None = None) -> None:
        self.transitions.append(CmTransition(source, target, None, dict(guards or {}), dict(updates or {})))

    def transfer(self, source: int, counter: str, into: Sequence[str]) -> int:
        """Empty ``counter`` into every counter of ``into``; return the exit state."""
        exit_state = self.state()
        updates = {counter: DECR} | dict.fromkeys(into, INCR)
        self.move(source, source, {counter: Guard.POSITIVE}, updates)
        self.move(source, exit_state, {counter: Guard.ZERO})
        return exit_state

    def machine(self, initial: int, final: Sequence[int]) -> CounterMachine:
        states = frozenset({initial, *final} | {t.source for t in self.transitions} | {t.target for t in self.transitions})
        return CounterMachine(self.alphabet, tuple(self.counters), states, initial, frozenset(final), tuple(self.transitions))


def _term(builder: _Builder, term: pb.Term, prefix: str, position: str, entry: int, leaf: Callable[[pb.Term, str, str], None]) -> tuple[int, str, str]:
    """Append the gadget of ``term``; return the exit state and the counter pair of its root."""
    plus = builder.counter(f"{prefix}x+_p{position}")
    minus = builder.counter(f"{prefix}x-_p{position}")
    match term:
        case pb.Plus(left, right):
            state = entry
            for i, child in enumerate((left, right)):
                state, child_plus, child_minus = _term(builder, child, prefix, f"{position}{i}", state, leaf)
                state = builder.transfer(state, child_plus, [plus])
                state = builder.transfer(state, child_minus, [minus])
            return state, plus, minus
        case _:
            leaf(term, plus, minus)
            return entry, plus, minus


def _set_leaf(builder: _Builder, valuation: Mapping[str, int], scope: Mapping[str, list]) -> Callable[[pb.Term, str, str], None]:
    def leaf(term: pb.Term, plus: str, minus: str) -> None:
        match term:
            case pb.One():
                builder.valuation[plus] = 1
            case pb.Var(name) if name in scope:
                scope[name].append((plus, minus))
            case pb.Var(name):
                if name not in valuation:
                    msg = f"No value for variable {name}"
                    raise InputError(msg)
                value = valuation[name]
                builder.valuation[plus if value >= 0 else minus] = abs(value)

    return leaf


def term_to_cm(t: pb.Term, valuation: Mapping[str, int]) -> tuple[CounterMachine, Configuration, tuple[str, str]]:
    """Deterministic epsilon machine computing ``t`` at its root counter pair.

    Returns
    -------
    tuple[CounterMachine, Configuration, tuple[str, str]]
        The machine, its initial configuration (leaves loaded from
        ``valuation``) and the root counters ``(x+, x-)``.
    """
    builder = _Builder()
    entry = builder.state()
    exit_state, plus, minus = _term(builder, t, "", "0", entry, _set_leaf(builder, valuation, {}))
    machine = builder.machine(entry, [exit_state])
    return machine, initial_configuration(machine, builder.valuation), (plus, minus)


def _formula(builder: _Builder, formula: pb.Formula, entry: int, valuation: Mapping[str, int], scope: dict[str, list], atoms: itertools.count) -> int:
    match formula:
        case pb.Eq(left, right) | pb.Gt(left, right):
            prefix = f"a{next(atoms)}"
            leaf = _set_leaf(builder, valuation, scope)
            state, lp, ln = _term(builder, left, f"{prefix}L", "0", entry, leaf)
            state, rp, rn = _term(builder, right, f"{prefix}R", "0", state, leaf)
            positive, negative = builder.counter(f"{prefix}P"), builder.counter(f"{prefix}N")
            for counter, into in ((lp, positive), (rn, positive), (ln, negative), (rp, negative)):
                state = builder.transfer(state, counter, [into])
            builder.move(state, state, {positive: Guard.POSITIVE, negative: Guard.POSITIVE}, {positive: DECR, negative: DECR})
            exit_state = builder.state()
            tests = {positive: Guard.ZERO} if isinstance(formula, pb.Eq) else {positive: Guard.POSITIVE}
            builder.move(state, exit_state, tests | {negative: Guard.ZERO})
            return exit_state
        case pb.And(left, right):
            middle = _formula(builder, left, entry, valuation, scope, atoms)
            return _formula(builder, right, middle, valuation, scope, atoms)
        case pb.Or(left, right):
            exit_state = builder.state()
            for branch in (left, right):
                start = builder.state()
                builder.move(entry, start)
                builder.move(_formula(builder, branch, start, valuation, scope, atoms), exit_state)
            return exit_state
        case pb.Exists(var, body):
            occurrences: list = []
            inner = {**scope, var: occurrences}
            start = builder.state()
            exit_state = _formula(builder, body, start, valuation, inner, atoms)
            for side in (0, 1):
                loop = builder.state()
                builder.move(entry, loop)
                builder.move(loop, loop, updates={pair[side]: INCR for pair in occurrences})
                builder.move(loop, start)
            return exit_state
    msg = f"Unknown formula node {formula!r}"
    raise TypeError(msg)


def formula_to_cm(formula: pb.Formula, valuation: Mapping[str, int]) -> tuple[CounterMachine, Configuration]:
    """One-reversal epsilon machine accepting iff ``valuation`` satisfies ``formula``.

    Atoms compare their sides by simultaneous decrements, conjunctions run in
    sequence, disjunctions branch and an existential quantifier guesses the
    sign and then the magnitude of its variable by an increment loop over all
    occurrence counters.

    Raises
    ------
    InputError
        If a free variable has no value.
    """
    builder = _Builder()
    entry = builder.state()
    exit_state = _formula(builder, formula, entry, valuation, {}, itertools.count())
    machine = builder.machine(entry, [exit_state])
    return machine, initial_configuration(machine, builder.valuation)


def ibarra_bound(k: int, m: int, nu: int, c: int) -> int:
    """Length bound ``k (m + nu)^(k c)`` for accepting computations of reversal-bounded machines.

    Raises
    ------
    InputError
        If ``c`` is not positive.
    """
    if c <= 0:
        msg = f"The constant of the bound must be positive, got {c}"
        raise InputError(msg)
    return k * (m + nu) ** (k * c)


class _Search:
    """Bounded breadth-first acceptance of epsilon machines, with a configuration guard."""

    def __init__(self, max_configurations: int, trace: bool) -> None:
        self.max_configurations = max_configurations
        self.trace_logger = lu.setup_trace_logger(trace) if trace else None
        self.exhausted = False

    def accepts(self, m: CounterMachine, config: Configuration, budget: int) -> bool:
        parents: dict[Configuration, Configuration | None] = {config: None}
        queue = deque([(config, 0)])
        while queue:
            current, steps = queue.popleft()
            if current.state in m.final:
                self._dump(m, parents, current)
                return True
            if steps >= budget:
                continue
            for following in cm_step(m, current, None):
                if following not in parents:
                    if len(parents) >= self.max_configurations:
                        self.exhausted = True
                        return False
                    parents[following] = current
                    queue.append((following, steps + 1))
        return False

    def _dump(self, m: CounterMachine, parents: Mapping, last: Configuration) -> None:
        """Replay the accepting computation on the trace logger."""
        if self.trace_logger is None:
            return
        computation = []
        current = last
        while current is not None:
            computation.append(current)
            current = parents[current]
        for config in reversed(computation):
            self.trace_logger.info(format_configuration(m, config))


def _advance(m: CounterMachine, config: Configuration, letter: str) -> list[tuple[Configuration, int]]:
    """Read ``letter`` then follow the increment chain; return configurations with their step costs."""
    results = []
    for start in cm_step(m, config, letter):
        current, steps = start, 1
        while isinstance(current.state, tuple) and current.state[:1] == ("chain",):
            (current,) = cm_step(m, current, None)
            steps += 1
        results.append((current, steps))
    return results


def cm_emptiness_backend(e: ex.Expression, options: DecisionOptions | None = None, step_bound_override: int | None = None) -> QueryResult:
    """Decide whether some domain word of a star-free expression has value >= 0 by bounded search.

    The atoms run as counter machines in a synchronised product over the
    letters; whenever all of them accept, the machine of
    ``∃y. y >= 0 ∧ φ(x_1, ..., x_n, y)`` is run from their values. The step
    bound defaults to the reversal-bounded length bound, capped by the
    configured ceiling.

    Returns
    -------
    QueryResult
        ``YES`` with a witness word, ``NO_WITHIN_BOUND`` when the bounded
        search is complete, ``INCONCLUSIVE`` when the ceiling or the
        configuration guard cut it short.
    """
    options = options or DecisionOptions()
    if not ex.is_star_free(e):
        msg = "The counter machine back end handles star-free expressions only"
        raise InputError(msg)
    form = ex.normalize_monolithic(e)
    c = form.combinator
    psi = pb.exists([c.output], pb.conj(pb.ge(pb.Var(c.output), pb.Zero()), c.formula))
    machines = [wa_to_cm(atom.automaton) for atom in form.atoms]
    zero_valuation = dict.fromkeys(c.inputs, 0)
    psi_machine, _ = formula_to_cm(psi, zero_valuation)
    counters = 2 * len(machines) + len(psi_machine.counters)
    transitions = sum(len(m.transitions) for m in machines) + len(psi_machine.transitions)
    computed = ibarra_bound(counters, transitions, 0, options.ibarra_constant)
    requested = step_bound_override if step_bound_override is not None else options.step_bound
    bound = requested if requested is not None else computed
    capped = bound > options.step_ceiling
    bound = min(bound, options.step_ceiling)
    msg = f"Counter machine search: {counters} counters, {transitions} transitions, step bound {bound}"
    logger.info(msg)

    search = _Search(options.max_configurations, options.trace)
    initials = [[(c0, 1) for c0 in cm_step(m, initial_configuration(m), None)] for m in machines]
    heap: list = []
    seen: set = set()
    tie = itertools.count()
    for combo in itertools.product(*initials):
        configs = tuple(cfg for cfg, _ in combo)
        steps = sum(cost for _, cost in combo)
        heapq.heappush(heap, (steps, next(tie), (), configs))
    cache: dict[tuple[int, ...], tuple[bool, int]] = {}
    cut = False
    alphabet = sorted(e.alphabet)
    while heap:
        steps, _, word, configs = heapq.heappop(heap)
        key = tuple((cfg.state, cfg.values) for cfg in configs)
        if key in seen:
            continue
        seen.add(key)
        if len(seen) > options.max_configurations:
            search.exhausted = True
            break
        if all(cfg.state in m.final for m, cfg in zip(machines, configs, strict=True)):
            values = tuple(cfg.values[0] - cfg.values[1] for cfg in configs)
            budget = bound - steps
            known = cache.get(values)
            if known is not None and (known[0] or known[1] >= budget):
                found = known[0]
            else:
                valuation = dict(zip(c.inputs, values, strict=True))
                machine, config = formula_to_cm(psi, valuation)
                found = search.accepts(machine, config, budget)
                cache[values] = (found, budget)
            if found:
                msg = f"Counter machine back end found {am.format_word(word)} after {steps} steps"
                logger.info(msg)
                return QueryResult(Verdict.YES, witness_word=word, details={"step_bound": bound, "atom_values": values})
        for symbol in alphabet:
            options_per_atom = [_advance(m, cfg, symbol) for m, cfg in zip(machines, configs, strict=True)]
            for combo in itertools.product(*options_per_atom):
                cost = sum(s for _, s in combo)
                if steps + cost > bound:
                    cut = True
                    continue
                heapq.heappush(heap, (steps + cost, next(tie), (*word, symbol), tuple(cfg for cfg, _ in combo)))
    if search.exhausted or (cut and capped):
        reason = "configuration guard" if search.exhausted else "step ceiling"
        return QueryResult(Verdict.INCONCLUSIVE, details={"step_bound": bound, "reason": reason})
    return QueryResult(Verdict.NO_WITHIN_BOUND, details={"step_bound": bound})
