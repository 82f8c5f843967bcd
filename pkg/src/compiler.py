"""
Compilation of synchronised expressions into synchronised chop automata.

``compile`` turns a tuple of mutually synchronised expressions into a tuple of
mutually synchronised chop automata, all with the intersection of the input
domains as domain and each computing its expression there. The translation is
an induction on the tuple:

1. some expression is a ``Combine``: the leftmost one is replaced by its
   children, the tuple is compiled, the children are recombined with the
   combinator and the other outputs are wrapped in the identity so that all
   levels stay equal;
2. all expressions are iterated sums: the children are compiled and each
   output is iterated over the shared factorisation automaton of the depth;
3. atoms and iterated sums are mixed: the atoms are chopped along the blocks
   of the factorisation automaton; on each block the block restrictions of the
   atoms are compiled together with the children of the iterated sums.

Tuples of atoms are the base case: each atom is restricted to the common
domain.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Sequence
from dataclasses import dataclass, field

import src.automata as am
import src.chop as ch
import src.expressions as ex
import src.logging_utils as lu
import src.presburger as pb
import src.weighted as wa
from src.errors import InputError, NotSynchronisedError

logger = lu.setup_logger(__name__)


@dataclass
class CompileReport:
    """Outcome of a compilation.

    Attributes
    ----------
    inputs : list[str]
        The compiled expressions, rendered.
    outputs : list[ChopAutomaton]
        One chop automaton per input.
    domain : Nfa or None
        Common domain of the outputs.
    trace : list[str]
        Induction cases applied, in order.
    """

    inputs: list[str] = field(default_factory=list)
    outputs: list[ch.ChopAutomaton] = field(default_factory=list)
    domain: am.Nfa | None = None
    trace: list[str] = field(default_factory=list)


@dataclass(frozen=True)
class ChoppedAtom:
    """An atom cut along the blocks of a factorisation automaton.

    Attributes
    ----------
    family : dict
        Block automaton of the atom for each pair of boundary states.
    merged : ChopAutomaton
        Level 1 chop automaton reading one block per edge.
    """

    family: dict
    merged: ch.ChopAutomaton


class _Context:
    """Per-compilation state: trace lines and one factorisation automaton per star depth."""

    def __init__(self) -> None:
        self.trace: list[str] = []
        self.unique_stars: dict[int, am.UniqueStar] = {}

    def unique_star(self, depth: int, language: am.Nfa) -> am.UniqueStar:
        if depth not in self.unique_stars:
            self.unique_stars[depth] = am.unique_star_automaton(language)
            msg = f"Factorisation automaton of depth {depth} has {len(self.unique_stars[depth].special)} boundary states"
            logger.debug(msg)
        return self.unique_stars[depth]

    def note(self, depth: int, message: str) -> None:
        self.trace.append(f"depth {depth}: {message}")


def _common_domain(es: Sequence[ex.Expression]) -> am.Nfa:
    result = es[0].domain
    for e in es[1:]:
        result = am.trim(am.intersect(result, e.domain))
    return result


def _block_product(automata: Sequence[wa.WeightedAutomaton], unique_star: am.UniqueStar) -> tuple[ch.GeneralizedNfa, dict]:
    """Product of the atoms with the factorisation automaton, cut at its boundary states.

    Returns the generalised automaton over the boundary states of the product
    and, for each of its edges, the vector weighted automaton of the atoms on
    the blocks of that edge.
    """
    product = wa.trim(wa.product(list(automata)))
    b, special = unique_star.automaton, unique_star.special
    start = [(p, s) for p in am.ordered(product.underlying.initial) for s in am.ordered(b.initial)]
    seen = set(start)
    queue = deque(start)
    weights: dict = {}
    while queue:
        p, s = queue.popleft()
        for symbol, options in product.outgoing[p].items():
            for s2 in b.successors[s].get(symbol, ()):
                for q, w in options:
                    weights[(p, s), symbol, (q, s2)] = w
                    if (q, s2) not in seen:
                        seen.add((q, s2))
                        queue.append((q, s2))
    final = {(p, s) for p, s in seen if p in product.underlying.final and s in b.final}
    underlying = am.Nfa(frozenset(seen), b.alphabet, frozenset(start), frozenset(final), frozenset(weights))
    combined = wa.trim(wa.WeightedAutomaton(underlying, weights, product.dimension))
    boundaries = frozenset(state for state in combined.underlying.states if state[1] in special)
    edges, blocks = {}, {}
    for source in am.ordered(boundaries):
        for target in am.ordered(boundaries):
            block = ch.block_weighted(combined, boundaries, source, target)
            if am.is_empty(block.underlying):
                continue
            edges[source, target] = block.underlying
            blocks[source, target] = block
    gnfa = ch.GeneralizedNfa(
        boundaries,
        b.alphabet,
        combined.underlying.initial & boundaries,
        combined.underlying.final & boundaries,
        edges,
    )
    return gnfa, blocks


def chop_atom(a: wa.WeightedAutomaton, blocks: am.UniqueStar | am.Nfa) -> ChoppedAtom:
    """Cut an unambiguous atom along the blocks of a factorisation automaton.

    Parameters
    ----------
    a : WeightedAutomaton
        Unambiguous scalar automaton.
    blocks : UniqueStar or Nfa
        The factorisation automaton, or the factor language to build it from.

    Returns
    -------
    ChoppedAtom
        The block automata and the level 1 chop automaton with domain
        dom(a) ∩ L^# computing ``a`` there.
    """
    unique_star = blocks if isinstance(blocks, am.UniqueStar) else am.unique_star_automaton(blocks)
    gnfa, family = _block_product([a], unique_star)
    labels = {edge: (ch.ChopExpression(pb.identity(), (ch.level_zero(block),)),) for edge, block in family.items()}
    return ChoppedAtom(family=family, merged=ch.make_chop(1, gnfa, labels, (0,)))


def _compile(es: list[ex.Expression], depth: int, context: _Context) -> list[ch.ChopAutomaton]:
    combine_index = next((i for i, e in enumerate(es) if isinstance(e, ex.Combine)), None)
    if combine_index is not None:
        return _compile_combine(es, combine_index, depth, context)
    if all(isinstance(e, ex.Star) for e in es):
        return _compile_stars(es, depth, context)
    if all(isinstance(e, ex.Atom) for e in es):
        domain = _common_domain(es)
        context.note(depth, f"base case, {len(es)} atom(s) restricted to the common domain")
        return [ch.level_zero(wa.restrict(e.automaton, domain)) for e in es]
    return _compile_mixed(es, depth, context)


def _compile_combine(es: list[ex.Expression], index: int, depth: int, context: _Context) -> list[ch.ChopAutomaton]:
    node = es[index]
    arity = len(node.children)
    context.note(depth, f"split {node.combinator.name} at position {index}, wrapping {len(es) - 1} sibling(s) in id")
    inner = _compile([*es[:index], *node.children, *es[index + 1 :]], depth, context)
    combined = ch.wca_combine(node.combinator, inner[index : index + arity], check=False)
    siblings = [ch.wca_combine(pb.identity(), [c], check=False) for c in (*inner[:index], *inner[index + arity :])]
    return [*siblings[:index], combined, *siblings[index:]]


def _compile_stars(es: list[ex.Expression], depth: int, context: _Context) -> list[ch.ChopAutomaton]:
    context.note(depth, f"{len(es)} iterated sum(s) over a shared factorisation automaton")
    children = _compile([e.child for e in es], depth + 1, context)
    unique_star = context.unique_star(depth + 1, es[0].child.domain)
    return [ch.wca_star(child, unique_star) for child in children]


def _compile_mixed(es: list[ex.Expression], depth: int, context: _Context) -> list[ch.ChopAutomaton]:
    atom_positions = [i for i, e in enumerate(es) if isinstance(e, ex.Atom)]
    star_positions = [i for i, e in enumerate(es) if isinstance(e, ex.Star)]
    context.note(depth, f"chop {len(atom_positions)} atom(s) along the blocks of {len(star_positions)} iterated sum(s)")
    unique_star = context.unique_star(depth + 1, es[star_positions[0]].child.domain)
    gnfa, blocks = _block_product([es[i].automaton for i in atom_positions], unique_star)
    per_edge: dict = {}
    for edge in am.ordered(gnfa.edges):
        block = blocks[edge]
        tuple_e: list[ex.Expression] = []
        for k, i in enumerate(atom_positions):
            tuple_e.append(ex.Atom(wa.project(block, k), f"{es[i].name}[{len(per_edge)}]"))
        tuple_e.extend(es[i].child for i in star_positions)
        per_edge[edge] = _compile(tuple_e, depth + 1, context)
    top = max((c.level for outputs in per_edge.values() for c in outputs), default=0)
    outputs = []
    order = atom_positions + star_positions
    for position in range(len(es)):
        slot = order.index(position)
        labels = {edge: (ch.ChopExpression(pb.identity(), (ch.lift(compiled[slot], top),)),) for edge, compiled in per_edge.items()}
        outputs.append(ch.make_chop(top + 1, gnfa, labels, (0,)))
    return outputs


def compile(es: Sequence[ex.Expression]) -> tuple[list[ch.ChopAutomaton], CompileReport]:  # noqa: A001
    """Compile synchronised expressions into synchronised chop automata.

    Returns
    -------
    tuple[list[ChopAutomaton], CompileReport]
        One chop automaton per expression, with the common domain and the
        trace of induction cases.

    Raises
    ------
    NotSynchronisedError
        If the expressions are not synchronised.
    InputError
        If the list is empty or the alphabets differ.
    """
    es = list(es)
    if not es:
        msg = "Nothing to compile"
        raise InputError(msg)
    if len({e.alphabet for e in es}) > 1:
        msg = "Compiled expressions must share their alphabet"
        raise InputError(msg)
    report = ex.is_synchronised(es)
    if not report.synchronised:
        msg = f"Expressions are not synchronised: {report.first} vs {report.second}"
        raise NotSynchronisedError(msg, report.first or "", report.second or "", report.word)
    context = _Context()
    outputs = _compile(es, 0, context)
    msg = f"Compiled {len(es)} expression(s) into level {outputs[0].level} chop automata"
    logger.info(msg)
    result = CompileReport(
        inputs=[str(e) for e in es],
        outputs=outputs,
        domain=_common_domain(es),
        trace=context.trace,
    )
    return outputs, result
