"""Tests for the regular expression parser and conversions."""

from collections.abc import Callable

import pytest

import src.automata as am
import src.regex as rx


@pytest.mark.fast
def test_union_and_star(regex_nfa: Callable[..., am.Nfa]) -> None:
    """Test that a|b* accepts a and any number of b."""
    a = regex_nfa("a|b*")
    assert a.accepts(())
    assert a.accepts(("a",))
    assert a.accepts(("b", "b", "b"))
    assert not a.accepts(("a", "b"))


@pytest.mark.fast
def test_postfix_operators(regex_nfa: Callable[..., am.Nfa]) -> None:
    """Test plus and optional operators."""
    plus = regex_nfa("a+")
    assert not plus.accepts(())
    assert plus.accepts(("a", "a"))
    optional = regex_nfa("ab?")
    assert optional.accepts(("a",))
    assert optional.accepts(("a", "b"))
    assert not optional.accepts(("a", "b", "b"))


@pytest.mark.fast
def test_classes_and_any_symbol(regex_nfa: Callable[..., am.Nfa]) -> None:
    """Test symbol classes and the any-symbol dot."""
    assert regex_nfa("[ab]+").accepts(("b", "a"))
    assert regex_nfa(".a").accepts(("b", "a"))
    assert not regex_nfa(".a").accepts(("a",))


@pytest.mark.fast
def test_multi_character_tokens() -> None:
    """Test that <tok> reads one multi-character symbol."""
    alphabet = frozenset({"ab", "c"})
    a = rx.to_nfa(rx.parse_regex("<ab>c*", alphabet), alphabet)
    assert a.accepts(("ab", "c", "c"))
    assert not a.accepts(("c",))


@pytest.mark.fast
def test_whitespace_is_ignored(regex_nfa: Callable[..., am.Nfa]) -> None:
    """Test that spaces do not change the language."""
    assert am.equivalent(regex_nfa("a b | b"), regex_nfa("ab|b"))[0]


@pytest.mark.fast
@pytest.mark.parametrize("text", ["(a", "a)", "*a", "c", "[ab", "<ab"])
def test_syntax_errors(text: str) -> None:
    """Test that malformed expressions raise positioned errors."""
    with pytest.raises(rx.RegexSyntaxError):
        rx.parse_regex(text, frozenset({"a", "b"}))


@pytest.mark.fast
@pytest.mark.parametrize("text", ["(ab|b)*a", "a*b*", "(a|b)*abb", "()"])
def test_nfa_to_regex_keeps_language(regex_nfa: Callable[..., am.Nfa], text: str) -> None:
    """Test that state elimination gives an expression for the same language."""
    a = regex_nfa(text)
    back = rx.to_nfa(rx.nfa_to_regex(a), a.alphabet)
    assert am.equivalent(a, back) == (True, None)


@pytest.mark.fast
def test_empty_language_regex(alphabet_ab: frozenset[str]) -> None:
    """Test that an empty automaton gives the empty set expression."""
    assert isinstance(rx.nfa_to_regex(am.empty_language(alphabet_ab)), rx.EmptySet)
