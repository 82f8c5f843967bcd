"""Tests for the brute-force oracle."""

import pytest

import src.chop as ch
import src.definitions as df
import src.expressions as ex
import src.oracle as orc
import src.presburger as pb
from src.errors import InputError
from src.queries import Emptiness, Equivalence, Inclusion, Universality, Verdict


@pytest.mark.fast
def test_values_and_witnesses(atom_a: ex.Atom) -> None:
    """Test the values of count_a on words of length at most 3."""
    result = orc.oracle(atom_a, 3)
    assert result.values == {0, 1, 2, 3}
    assert result.witnesses[0] == ()
    assert result.witnesses[2] == ("a", "a")
    assert result.answer is None
    assert len(result.table) == 15


@pytest.mark.fast
def test_table_columns(atom_a: ex.Atom, difference: ex.Expression) -> None:
    """Test one value column per target and missing values outside the domain."""
    assert list(orc.value_table([atom_a], 1).columns) == ["word", "length", "value"]
    table = orc.value_table([atom_a, difference], 2)
    assert list(table.columns) == ["word", "length", "value_0", "value_1"]
    assert table["word"].iloc[0] == "@eps"
    assert table["value_1"].iloc[2] == -1


@pytest.mark.fast
def test_emptiness_answers(counting_defs: df.DefinitionFile) -> None:
    """Test bounded and witnessed emptiness answers."""
    m = counting_defs.expression("M")
    bounded = orc.oracle(m, 4, Emptiness(5)).answer
    assert bounded.verdict is Verdict.NO_WITHIN_BOUND
    assert bounded.details["status"] == "oracle-bounded"
    found = orc.oracle(m, 4, Emptiness(2)).answer
    assert found.verdict is Verdict.YES
    assert found.witness_word == ("a", "a", "b", "b")
    assert found.witness_value == 2


@pytest.mark.fast
def test_universality_answers(difference: ex.Expression, atom_a: ex.Atom) -> None:
    """Test a counterexample and a bounded universality answer."""
    counterexample = orc.oracle(difference, 3, Universality(0)).answer
    assert counterexample.verdict is Verdict.NO
    assert counterexample.witness_word == ("b",)
    assert counterexample.witness_value == -1
    assert orc.oracle(atom_a, 3, Universality(0)).answer.verdict is Verdict.YES_WITHIN_BOUND


@pytest.mark.fast
def test_relation_answers(atom_a: ex.Atom, atom_b: ex.Atom) -> None:
    """Test inclusion and equivalence on pairs."""
    minimum = ex.Combine(pb.minimum(), (atom_a, atom_b))
    assert orc.oracle((atom_a, minimum), 3, Inclusion()).answer.verdict is Verdict.YES_WITHIN_BOUND
    reverse = orc.oracle((minimum, atom_a), 3, Inclusion()).answer
    assert reverse.verdict is Verdict.NO
    assert reverse.witness_word == ("a",)
    different = orc.oracle((atom_a, atom_b), 3, Equivalence()).answer
    assert different.verdict is Verdict.NO
    assert different.witness_word == ("a",)


@pytest.mark.fast
def test_chop_automata_are_evaluated(wca_text: str) -> None:
    """Test that the oracle evaluates chop automata."""
    defs = df.parse_definitions(wca_text)
    value = orc.evaluator(defs.chops["Main"])
    assert value(tuple("aab$b$•cdd$")) == 5
    assert value(tuple("a$c$")) is None
    assert orc.evaluator(ch.level_zero(defs.automata["Aa"]))(tuple("aa$")) == 2


@pytest.mark.fast
@pytest.mark.parametrize("max_len", [-1, 11])
def test_length_ceiling(atom_a: ex.Atom, max_len: int) -> None:
    """Test that the searched length is bounded."""
    with pytest.raises(InputError, match="outside"):
        orc.oracle(atom_a, max_len)
