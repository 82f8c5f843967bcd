"""Tests of chop automaton synchronisation against word decompositions."""

import itertools
from collections.abc import Callable

import numpy as np
import pytest

import src.chop as ch
import src.compiler as co
import src.definitions as df
import src.expressions as ex

STAR_LANGUAGES = ["a", "aa", "a|aa", "ab", "a*b", "b|ab"]


def _children(label: tuple[ch.ChopExpression, ...]) -> list[ch.ChopAutomaton]:
    return [child for expression in label for child in expression.children]


def _agree_on(c1: ch.ChopAutomaton, c2: ch.ChopAutomaton, word: tuple[str, ...]) -> bool:
    """Whether both cut ``word`` at the same points, recursively on the factors."""
    if c1.level != c2.level:
        return False
    if c1.level == 0:
        return True
    d1, d2 = ch.wca_decompose(c1, word), ch.wca_decompose(c2, word)
    if d1 is None or d2 is None:
        return True
    if [len(factor) for factor, _ in d1.factors] != [len(factor) for factor, _ in d2.factors]:
        return False
    for (factor, e1), (_, e2) in zip(d1.factors, d2.factors, strict=True):
        for x, y in itertools.product(_children(c1.labels[e1]), _children(c2.labels[e2])):
            if not _agree_on(x, y, factor):
                return False
    return True


def _agree(cs: list[ch.ChopAutomaton], max_len: int) -> bool:
    for c1, c2 in itertools.combinations_with_replacement(cs, 2):
        if c1.level != c2.level:
            return False
        if c1.level and not all(_agree_on(c1, c2, word) for word in ch.shortlex_words(ch.wca_domain(c1), max_len, 20000)):
            return False
    return True


def _star(atom: ex.Atom) -> ch.ChopAutomaton:
    (c,), _ = co.compile([ex.Star(atom)])
    return c


@pytest.mark.slow
def test_synchronisation_matches_decompositions(
    synchronised_corpus: list[list[ex.Expression]],
    language_atom: Callable[[str, str], ex.Atom],
    corpus_rng: np.random.Generator,
    wca_text: str,
) -> None:
    """Test synchronisation of chop automata against their decompositions of words of length at most 6."""
    instances = [co.compile(es)[0] for es in synchronised_corpus[:12]]
    for _ in range(15):
        first = str(corpus_rng.choice(STAR_LANGUAGES))
        second = first if corpus_rng.random() < 0.5 else str(corpus_rng.choice(STAR_LANGUAGES))
        instances.append([_star(language_atom(first, "F")), _star(language_atom(second, "G"))])
    instances.append([_star(language_atom("a", "One")), _star(language_atom("aa", "Two"))])
    one = language_atom("a*b", "Block")
    instances.append([ch.level_zero(one.automaton), _star(one)])
    defs = df.parse_definitions(wca_text)
    instances += [[defs.chops["Main"], defs.chops["Main"]], [defs.chops["Main"], defs.chops["C1"]]]
    outcomes = set()
    for cs in instances:
        expected = _agree(cs, 6)
        assert ch.wca_is_synchronised(cs).synchronised == expected
        outcomes.add(expected)
    assert outcomes == {True, False}
