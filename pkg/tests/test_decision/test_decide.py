"""Tests for the decision procedures of expressions."""

import pytest

import src.decision as dec
import src.expressions as ex
import src.presburger as pb
import src.semilinear as sl
import src.weighted as wa
from src.errors import InputError, NotSynchronisedError, UnsupportedCombinatorError
from src.queries import Backend, DecisionOptions, Emptiness, Equivalence, Inclusion, Universality, Verdict


def _word(text: str) -> tuple[str, ...]:
    return tuple(text)


@pytest.fixture
def minimum(atom_a: ex.Atom, atom_b: ex.Atom) -> ex.Expression:
    """Fixture for min(count_a, count_b)."""
    return ex.Combine(pb.minimum(), (atom_a, atom_b))


@pytest.fixture
def maximum(atom_a: ex.Atom, atom_b: ex.Atom) -> ex.Expression:
    """Fixture for max(count_a, count_b)."""
    return ex.Combine(pb.maximum(), (atom_a, atom_b))


@pytest.mark.fast
def test_emptiness_with_witness(difference: ex.Expression, minimum: ex.Expression) -> None:
    """Test threshold emptiness with the shortest witness word."""
    result = dec.decide(difference, Emptiness(2))
    assert result.verdict is Verdict.YES
    assert result.witness_word == _word("aa")
    assert result.witness_value == 2
    assert dec.decide(minimum, Emptiness(1)).witness_word == _word("ab")


@pytest.mark.fast
def test_emptiness_no(atom_a: ex.Atom) -> None:
    """Test that a constant -1 never reaches 0."""
    negative = ex.Combine(pb.constant(-1, 1), (atom_a,))
    assert dec.decide(negative, Emptiness(0)).verdict is Verdict.NO
    assert dec.decide(negative, Emptiness(-1)).verdict is Verdict.YES
    assert dec.decide(negative, Emptiness(-1, strict=True)).verdict is Verdict.NO


@pytest.mark.fast
def test_universality(maximum: ex.Expression) -> None:
    """Test that max(#a, #b) >= 0 holds everywhere and >= 1 fails on the empty word."""
    assert dec.decide(maximum, Universality(0)).verdict is Verdict.YES
    result = dec.decide(maximum, Universality(1))
    assert result.verdict is Verdict.NO
    assert result.witness_word == ()
    assert result.witness_value == 0
    assert dec.decide(maximum, Universality(0, strict=True)).verdict is Verdict.NO


@pytest.mark.fast
def test_inclusion(atom_a: ex.Atom, minimum: ex.Expression) -> None:
    """Test that count_a dominates min(count_a, count_b) and not conversely."""
    assert dec.decide((atom_a, minimum), Inclusion()).verdict is Verdict.YES
    result = dec.decide((minimum, atom_a), Inclusion())
    assert result.verdict is Verdict.NO
    assert result.witness_word == _word("a")
    assert result.witness_value == 0
    assert result.details["second_value"] == 1


@pytest.mark.fast
def test_inclusion_domain_counterexample(atom_a: ex.Atom) -> None:
    """Test that a smaller first domain fails on a word of the second."""
    only_b = ex.Atom(wa.WeightedAutomaton.from_edges({0}, {"a", "b"}, {0}, {0}, [(0, "b", 0, 1)]), "only_b")
    result = dec.decide((only_b, atom_a), Inclusion())
    assert result.verdict is Verdict.NO
    assert result.witness_word == _word("a")
    assert result.details["reason"] == "domain"


@pytest.mark.fast
def test_equivalence(atom_a: ex.Atom, atom_b: ex.Atom) -> None:
    """Test that #a + #b is the word length and that #a differs from #b."""
    length = ex.Atom(wa.WeightedAutomaton.from_edges({0}, {"a", "b"}, {0}, {0}, [(0, "a", 0, 1), (0, "b", 0, 1)]), "length")
    assert dec.decide((ex.Combine(pb.plus(), (atom_a, atom_b)), length), Equivalence()).verdict is Verdict.YES
    result = dec.decide((atom_a, atom_b), Equivalence())
    assert result.verdict is Verdict.NO
    assert result.details["direction"] == "first >= second"
    assert result.witness_word == _word("b")


@pytest.mark.fast
def test_iterated_sum_emptiness(iterexpr: ex.Expression) -> None:
    """Test that the sum of block maxima reaches 3."""
    result = dec.decide(iterexpr, Emptiness(3))
    assert result.verdict is Verdict.YES
    assert result.witness_word is not None
    assert ex.eval(iterexpr, result.witness_word) >= 3


@pytest.mark.fast
def test_counter_machine_backend(difference: ex.Expression) -> None:
    """Test the bounded back end on count_a - count_b."""
    result = dec.decide(difference, Emptiness(0), Backend.COUNTER_MACHINE)
    assert result.verdict is Verdict.YES
    assert result.witness_word == ()
    shifted = dec.decide(difference, Emptiness(1), Backend.COUNTER_MACHINE, DecisionOptions(max_configurations=5000))
    assert shifted.witness_word == _word("a")
    assert shifted.witness_value == 1


@pytest.mark.fast
def test_counter_machine_backend_agrees_on_no(atom_a: ex.Atom) -> None:
    """Test that the bounded back end finds nothing where the exact one answers no."""
    negative = ex.Combine(pb.constant(-1, 1), (atom_a,))
    result = dec.decide(negative, Emptiness(0), Backend.COUNTER_MACHINE, DecisionOptions(step_bound=8))
    assert result.verdict is Verdict.NO_WITHIN_BOUND


@pytest.mark.fast
def test_counter_machine_rejects_iterated_sums(iterexpr: ex.Expression) -> None:
    """Test that iterated sums need the semi-linear back end."""
    with pytest.raises(InputError, match="star-free"):
        dec.decide(iterexpr, Emptiness(0), Backend.COUNTER_MACHINE)


@pytest.mark.fast
def test_value_range(difference: ex.Expression, minimum: ex.Expression, iterexpr: ex.Expression) -> None:
    """Test ranges of star-free and iterated expressions."""
    assert sl.is_member(dec.value_range(difference), (-2,))
    assert sl.is_member(dec.value_range(difference), (5,))
    assert not sl.is_member(dec.value_range(minimum), (-1,))
    assert sl.is_member(dec.value_range(iterexpr), (3,))
    assert not sl.is_member(dec.value_range(iterexpr), (-1,))


@pytest.mark.fast
def test_require_synchronised() -> None:
    """Test the error raised for {a}^# beside {aa}^#."""

    def star_of(length: int, name: str) -> ex.Star:
        edges = [(i, "a", i + 1, 1) for i in range(length)]
        return ex.Star(ex.Atom(wa.WeightedAutomaton.from_edges(range(length + 1), {"a"}, {0}, {length}, edges), name))

    with pytest.raises(NotSynchronisedError) as info:
        dec.require_synchronised([star_of(1, "One"), star_of(2, "Two")])
    assert info.value.first == "(One)*#"
    assert info.value.second == "(Two)*#"


@pytest.mark.fast
def test_formula_combinators_are_unsupported(atom_a: ex.Atom) -> None:
    """Test that decisions need piecewise-linear combinators."""
    double = pb.from_formula(pb.Eq(pb.Var("z"), pb.Plus(pb.Var("x"), pb.Var("x"))), ["x"], "z", "double")
    with pytest.raises(UnsupportedCombinatorError):
        dec.decide(ex.Combine(double, (atom_a,)), Emptiness(0))
