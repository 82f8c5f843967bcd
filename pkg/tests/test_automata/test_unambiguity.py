"""Tests for ambiguity checks and unambiguous constructions."""

import itertools
from collections.abc import Callable

import numpy as np
import pytest

import src.automata as am
from src.errors import InputError


@pytest.mark.fast
def test_ambiguous_automaton_reports_word(alphabet_ab: frozenset[str]) -> None:
    """Test that two accepting runs on a are found."""
    a = am.Nfa({0, 1, 2}, alphabet_ab, {0}, {1, 2}, {(0, "a", 1), (0, "a", 2)})
    report = am.is_unambiguous(a)
    assert not report.unambiguous
    assert report.word == ("a",)
    assert report.runs is not None
    assert report.runs[0] != report.runs[1]


@pytest.mark.fast
def test_deterministic_automaton_is_unambiguous(regex_nfa: Callable[..., am.Nfa]) -> None:
    """Test that a determinized automaton is unambiguous."""
    assert am.is_unambiguous(am.determinize(regex_nfa("(a|ab)(b|())"))).unambiguous


@pytest.mark.fast
def test_ambiguity_needs_epsilon_free_input(alphabet_ab: frozenset[str]) -> None:
    """Test that epsilon transitions are rejected."""
    a = am.Nfa({0, 1}, alphabet_ab, {0}, {1}, {(0, None, 1)})
    with pytest.raises(InputError, match="epsilon"):
        am.is_unambiguous(a)


@pytest.mark.fast
def test_unique_star_language_keeps_single_factorisations(regex_nfa: Callable[..., am.Nfa]) -> None:
    """Test that {a, aa}^# keeps a and drops aa, which factors twice."""
    star = am.unique_star_language(regex_nfa("a|aa"))
    assert star.accepts(())
    assert star.accepts(("a",))
    assert not star.accepts(("a", "a"))


@pytest.mark.fast
def test_unique_star_automaton_is_unambiguous(regex_nfa: Callable[..., am.Nfa]) -> None:
    """Test that the L^# automaton is unambiguous and marks factor boundaries."""
    star = am.unique_star_automaton(regex_nfa("ab"))
    assert am.is_unambiguous(star.automaton).unambiguous
    assert star.automaton.accepts(("a", "b", "a", "b"))
    assert not star.automaton.accepts(("a", "b", "a"))
    assert star.special
    assert star.automaton.initial <= star.special


@pytest.mark.fast
def test_unambiguous_concat_covers_unique_splits(regex_nfa: Callable[..., am.Nfa], alphabet_ab: frozenset[str]) -> None:
    """Test that {a}·{b, ab} is covered by products of sublanguages."""
    pairs = am.unambiguous_concat(regex_nfa("a"), regex_nfa("b|ab"))

    def covered(word: tuple[str, ...]) -> bool:
        return any(n.accepts(word[:i]) and m.accepts(word[i:]) for n, m in pairs for i in range(len(word) + 1))

    accepted = [w for w in am.all_words(alphabet_ab, 3) if covered(w)]
    assert accepted == [("a", "b"), ("a", "a", "b")]


def _random_nfa(rng: np.random.Generator) -> am.Nfa:
    size = int(rng.integers(1, 4))
    edges = {(p, symbol, q) for p, symbol, q in itertools.product(range(size), "ab", range(size)) if rng.random() < 0.4}
    initial = {int(q) for q in rng.choice(size, size=int(rng.integers(1, size + 1)), replace=False)}
    final = {int(q) for q in rng.choice(size, size=int(rng.integers(1, size + 1)), replace=False)}
    return am.Nfa(range(size), frozenset({"a", "b"}), initial, final, edges)


def _accepting_runs(a: am.Nfa, word: tuple[str, ...]) -> int:
    counts = dict.fromkeys(a.initial, 1)
    for symbol in word:
        following: dict = {}
        for p, letter, q in a.transitions:
            if letter == symbol and p in counts:
                following[q] = following.get(q, 0) + counts[p]
        counts = following
    return sum(n for q, n in counts.items() if q in a.final)


@pytest.mark.slow
def test_ambiguity_matches_run_counts(corpus_rng: np.random.Generator) -> None:
    """Test the ambiguity check of 60 random automata against run counts on words of length at most 5."""
    words = am.all_words(frozenset({"a", "b"}), 5)
    outcomes = set()
    for _ in range(60):
        a = _random_nfa(corpus_rng)
        report = am.is_unambiguous(a)
        ambiguous = [w for w in words if _accepting_runs(a, w) >= 2]
        if report.unambiguous:
            assert ambiguous == [], sorted(a.transitions)
        else:
            assert report.word is not None
            assert _accepting_runs(a, report.word) >= 2
            if ambiguous:
                assert len(report.word) <= len(ambiguous[0])
        outcomes.add(report.unambiguous)
    assert outcomes == {True, False}
