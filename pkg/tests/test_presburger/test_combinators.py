"""Tests for Presburger formulas and functional combinators."""

import itertools

import pytest

import src.piecewise as pw
import src.presburger as pb
from src.errors import FunctionalityError, InputError


@pytest.mark.fast
def test_builtins_apply() -> None:
    """Test the builtin combinators on sample arguments."""
    assert pb.apply_combinator(pb.maximum(), [3, -1]) == 3
    assert pb.apply_combinator(pb.minimum(3), [3, -1, 0]) == -1
    assert pb.apply_combinator(pb.plus(3), [1, 2, 3]) == 6
    assert pb.apply_combinator(pb.minus(), [1, 4]) == -3
    assert pb.apply_combinator(pb.negate(), [5]) == -5
    assert pb.apply_combinator(pb.abs_diff(), [1, 4]) == 3
    assert pb.apply_combinator(pb.constant(7, 2), [1, 4]) == 7
    assert pb.apply_combinator(pb.identity(), [7]) == 7


@pytest.mark.fast
def test_arity_mismatch() -> None:
    """Test that the number of arguments is checked."""
    with pytest.raises(InputError, match="expects 2"):
        pb.apply_combinator(pb.maximum(), [1])


@pytest.mark.fast
@pytest.mark.parametrize("combinator", [pb.maximum(), pb.minimum(), pb.minus(), pb.abs_diff()])
def test_generated_formula_defines_the_function(combinator: pb.FunctionalCombinator) -> None:
    """Test that the formula of a builtin holds exactly for its graph."""
    for x1, x2 in itertools.product(range(-2, 3), repeat=2):
        value = pb.apply_combinator(combinator, [x1, x2])
        assert pb.evaluate_formula(combinator.formula, {"x1": x1, "x2": x2, "y": value})
        assert not pb.evaluate_formula(combinator.formula, {"x1": x1, "x2": x2, "y": value + 1})


@pytest.mark.fast
def test_formula_combinator_is_solved() -> None:
    """Test that a user formula is evaluated by solving for the output."""
    # z + y = x
    formula = pb.Eq(pb.Plus(pb.Var("z"), pb.Var("y")), pb.Var("x"))
    c = pb.from_formula(formula, ["x", "y"], "z", "diff")
    assert pb.apply_combinator(c, [5, 2]) == 3
    assert pb.apply_combinator(c, [-1, 2]) == -3


@pytest.mark.fast
def test_non_functional_formula() -> None:
    """Test that a relation with two outputs is rejected with its argument tuple."""
    # z > x
    c = pb.from_formula(pb.Gt(pb.Var("z"), pb.Var("x")), ["x"], "z", "above")
    with pytest.raises(FunctionalityError) as info:
        pb.apply_combinator(c, [0])
    assert info.value.args_tuple == (0,)
    check = pb.check_functional_on_box(c, [(0, 1)])
    assert not check.verified
    assert check.args == (0,)


@pytest.mark.fast
def test_verified_sets_status() -> None:
    """Test that a functional formula is verified on a box."""
    c = pb.from_formula(pb.Eq(pb.Var("z"), pb.Plus(pb.Var("x"), pb.One())), ["x"], "z")
    assert pb.verified(c, [(-2, 2)]).status is pb.FunctionalityStatus.VERIFIED_ON_BOX
    assert pb.verified(pb.maximum(), [(0, 0), (0, 0)]).status is pb.FunctionalityStatus.BUILTIN


@pytest.mark.fast
def test_unexpected_free_variable() -> None:
    """Test that a combinator formula may only mention its inputs and output."""
    with pytest.raises(InputError, match="unexpected free variable"):
        pb.from_formula(pb.Eq(pb.Var("z"), pb.Var("w")), ["x"], "z")


@pytest.mark.fast
def test_exists_sat() -> None:
    """Test satisfiability with and without a model."""
    # exists y. x = y + y and x > 2
    even = pb.exists(["y"], pb.conj(pb.Eq(pb.Var("x"), pb.Plus(pb.Var("y"), pb.Var("y"))), pb.Gt(pb.Var("x"), pb.nat(2))))
    model = pb.exists_sat(even)
    assert model is not None
    assert model["x"] > 2
    assert model["x"] % 2 == 0
    assert pb.exists_sat(pb.Gt(pb.Var("x"), pb.Plus(pb.Var("x"), pb.Zero()))) is None


@pytest.mark.fast
def test_free_vars_and_terms() -> None:
    """Test free variables and term evaluation."""
    formula = pb.exists(["y"], pb.Eq(pb.Var("x"), pb.Plus(pb.Var("y"), pb.One())))
    assert pb.free_vars(formula) == frozenset({"x"})
    assert pb.term_value(pb.nat(4), {}) == 4
    assert pb.term_value(pb.scaled(pb.Var("x"), 3), {"x": 2}) == 6
    with pytest.raises(InputError, match="has no value"):
        pb.term_value(pb.Var("x"), {})


@pytest.mark.fast
def test_linear_atom() -> None:
    """Test the normalised atom 2x - y - 1 >= 0."""
    atom = pb.linear_atom({"x": 2, "y": -1}, -1)
    assert pb.evaluate_formula(atom, {"x": 1, "y": 1})
    assert not pb.evaluate_formula(atom, {"x": 1, "y": 2})
    strict = pb.linear_atom({"x": 1}, 0, strict=True)
    assert not pb.evaluate_formula(strict, {"x": 0})


@pytest.mark.fast
def test_pwl_formula_with_constants() -> None:
    """Test the formula of a function with negative constants."""
    p = pw.Max((pw.Add(pw.Arg(0), pw.Const(-3)), pw.Const(-1)))
    formula = pb.pwl_formula(p, ["a"], "out")
    for a in range(-3, 6):
        assert pb.evaluate_formula(formula, {"a": a, "out": pw.evaluate(p, [a])})
