"""
Existential Presburger arithmetic and functional combinators.

Terms are built over 0, 1, variables and +; formulas over ``t = t``,
``t > t``, conjunction, disjunction and existential quantification (there is
no negation). Satisfiability is decided by z3 over the integers: since the
fragment is positive, every existential variable becomes a fresh integer
constant of the solver.

A functional combinator is a formula with n input variables and one output
variable defining a total function Z^n -> Z. Builtins carry a
piecewise-linear description (module ``src.piecewise``) from which their
formula is generated; decision procedures only accept combinators that have
one. Combinators given as bare formulas are evaluation-only.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from enum import StrEnum

import z3

import src.logging_utils as lu
import src.piecewise as pw
from src.errors import FunctionalityError, InputError

logger = lu.setup_logger(__name__)


@dataclass(frozen=True)
class Zero:
    """The constant 0."""

    def __str__(self) -> str:
        return "0"


@dataclass(frozen=True)
class One:
    """The constant 1."""

    def __str__(self) -> str:
        return "1"


@dataclass(frozen=True)
class Var:
    """An integer variable."""

    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Plus:
    """Sum of two terms."""

    left: Term
    right: Term

    def __str__(self) -> str:
        return f"{self.left} + {self.right}"


Term = Zero | One | Var | Plus


@dataclass(frozen=True)
class Eq:
    """Atom ``left = right``."""

    left: Term
    right: Term

    def __str__(self) -> str:
        return f"{self.left} = {self.right}"


@dataclass(frozen=True)
class Gt:
    """Atom ``left > right``."""

    left: Term
    right: Term

    def __str__(self) -> str:
        return f"{self.left} > {self.right}"


@dataclass(frozen=True)
class And:
    """Conjunction."""

    left: Formula
    right: Formula

    def __str__(self) -> str:
        return f"({self.left} and {self.right})"


@dataclass(frozen=True)
class Or:
    """Disjunction."""

    left: Formula
    right: Formula

    def __str__(self) -> str:
        return f"({self.left} or {self.right})"


@dataclass(frozen=True)
class Exists:
    """Existential quantification of ``var`` over Z."""

    var: str
    body: Formula

    def __str__(self) -> str:
        return f"(exists {self.var}. {self.body})"


Formula = Eq | Gt | And | Or | Exists


def nat(n: int) -> Term:
    """Return the term 1 + ... + 1 (``n`` ones) for ``n >= 0``."""
    if n < 0:
        msg = f"Terms denote natural constants only, got {n}"
        raise InputError(msg)
    term: Term = Zero()
    for _ in range(n):
        term = One() if isinstance(term, Zero) else Plus(term, One())
    return term


def add(*terms: Term) -> Term:
    """Sum terms, skipping zeros."""
    result: Term = Zero()
    for term in terms:
        if isinstance(term, Zero):
            continue
        result = term if isinstance(result, Zero) else Plus(result, term)
    return result


def scaled(term: Term, k: int) -> Term:
    """Return ``term + ... + term`` (``k`` copies) for ``k >= 0``."""
    return add(*([term] * k))


def conj(*formulas: Formula) -> Formula:
    """Conjunction of at least one formula."""
    result = formulas[0]
    for formula in formulas[1:]:
        result = And(result, formula)
    return result


def disj(*formulas: Formula) -> Formula:
    """Disjunction of at least one formula."""
    result = formulas[0]
    for formula in formulas[1:]:
        result = Or(result, formula)
    return result


def ge(left: Term, right: Term) -> Formula:
    """Return ``left >= right`` written as ``left + 1 > right``."""
    return Gt(Plus(left, One()), right)


def exists(variables: Iterable[str], body: Formula) -> Formula:
    """Quantify several variables existentially."""
    for var in reversed(list(variables)):
        body = Exists(var, body)
    return body


def term_vars(term: Term) -> frozenset[str]:
    """Return the variables of a term."""
    match term:
        case Var(name):
            return frozenset({name})
        case Plus(left, right):
            return term_vars(left) | term_vars(right)
    return frozenset()


def free_vars(formula: Formula) -> frozenset[str]:
    """Return the free variables of a formula."""
    match formula:
        case Eq(left, right) | Gt(left, right):
            return term_vars(left) | term_vars(right)
        case And(left, right) | Or(left, right):
            return free_vars(left) | free_vars(right)
        case Exists(var, body):
            return free_vars(body) - {var}
    msg = f"Unknown formula node {formula!r}"
    raise TypeError(msg)


def term_value(term: Term, valuation: Mapping[str, int]) -> int:
    """Evaluate a term under a valuation."""
    match term:
        case Zero():
            return 0
        case One():
            return 1
        case Var(name):
            if name not in valuation:
                msg = f"Variable {name!r} has no value"
                raise InputError(msg)
            return valuation[name]
        case Plus(left, right):
            return term_value(left, valuation) + term_value(right, valuation)
    msg = f"Unknown term node {term!r}"
    raise TypeError(msg)


def linear_atom(coefficients: Mapping[str, int], constant: int, *, strict: bool = False, equality: bool = False) -> Formula:
    """Build ``Σ c_x x + constant (= | > | >=) 0`` with terms moved across the relation."""
    positive = [scaled(Var(x), c) for x, c in sorted(coefficients.items()) if c > 0]
    negative = [scaled(Var(x), -c) for x, c in sorted(coefficients.items()) if c < 0]
    left = add(*positive, nat(max(constant, 0)))
    right = add(*negative, nat(max(-constant, 0)))
    if equality:
        return Eq(left, right)
    return Gt(left, right) if strict else ge(left, right)


def pwl_formula(p: pw.Pwl, inputs: Sequence[str], output: str) -> Formula:
    """Return an existential formula for ``output = p(inputs)``.

    Every subterm is kept as a pair (positive part, negative part) of terms, so
    subtraction and negative constants are expressed by moving terms across
    the relation. Each max/min introduces one quantified variable.
    """
    constraints: list[Formula] = []
    fresh: list[str] = []

    def encode(node: pw.Pwl) -> tuple[Term, Term]:
        match node:
            case pw.Arg(index):
                return Var(inputs[index]), Zero()
            case pw.Const(value):
                return nat(max(value, 0)), nat(max(-value, 0))
            case pw.Add(left, right):
                lp, ln = encode(left)
                rp, rn = encode(right)
                return add(lp, rp), add(ln, rn)
            case pw.Scale(factor, inner):
                positive, negative = encode(inner)
                if factor < 0:
                    positive, negative = negative, positive
                return scaled(positive, abs(factor)), scaled(negative, abs(factor))
            case pw.Max(items) | pw.Min(items):
                var = f"${len(fresh) + 1}"
                fresh.append(var)
                parts = [encode(item) for item in items]
                v = Var(var)
                if isinstance(node, pw.Max):
                    bounds = [ge(add(v, negative), positive) for positive, negative in parts]
                else:
                    bounds = [ge(positive, add(v, negative)) for positive, negative in parts]
                constraints.append(conj(conj(*bounds), disj(*(Eq(add(v, negative), positive) for positive, negative in parts))))
                return v, Zero()
        msg = f"Unknown piecewise-linear node {node!r}"
        raise TypeError(msg)

    positive, negative = encode(p)
    body = conj(Eq(add(Var(output), negative), positive), *constraints)
    return exists(fresh, body)


def _term_to_z3(term: Term, env: Mapping[str, z3.ArithRef]) -> z3.ArithRef:
    match term:
        case Zero():
            return z3.IntVal(0)
        case One():
            return z3.IntVal(1)
        case Var(name):
            return env[name]
        case Plus(left, right):
            return _term_to_z3(left, env) + _term_to_z3(right, env)
    msg = f"Unknown term node {term!r}"
    raise TypeError(msg)


def _to_z3(formula: Formula, env: dict[str, z3.ArithRef], counter: itertools.count) -> z3.BoolRef:
    """Translate a positive existential formula; quantified variables become fresh constants."""
    match formula:
        case Eq(left, right):
            return _term_to_z3(left, env) == _term_to_z3(right, env)
        case Gt(left, right):
            return _term_to_z3(left, env) > _term_to_z3(right, env)
        case And(left, right):
            return z3.And(_to_z3(left, env, counter), _to_z3(right, env, counter))
        case Or(left, right):
            return z3.Or(_to_z3(left, env, counter), _to_z3(right, env, counter))
        case Exists(var, body):
            inner = dict(env)
            inner[var] = z3.Int(f"{var}!{next(counter)}")
            return _to_z3(body, inner, counter)
    msg = f"Unknown formula node {formula!r}"
    raise TypeError(msg)


def exists_sat(formula: Formula) -> dict[str, int] | None:
    """Return a satisfying integer valuation of the free variables, or None if unsatisfiable."""
    variables = sorted(free_vars(formula))
    env: dict[str, z3.ArithRef] = {name: z3.Int(name) for name in variables}
    solver = z3.Solver()
    solver.add(_to_z3(formula, env, itertools.count()))
    if solver.check() != z3.sat:
        return None
    model = solver.model()
    return {name: model.eval(env[name], model_completion=True).as_long() for name in variables}


def evaluate_formula(formula: Formula, valuation: Mapping[str, int]) -> bool:
    """Decide whether ``formula`` holds under ``valuation``.

    Raises
    ------
    InputError
        If a free variable has no value.
    """
    missing = sorted(free_vars(formula) - valuation.keys())
    if missing:
        msg = f"Valuation misses variable(s) {', '.join(missing)}"
        raise InputError(msg)
    match formula:
        case Eq(left, right):
            return term_value(left, valuation) == term_value(right, valuation)
        case Gt(left, right):
            return term_value(left, valuation) > term_value(right, valuation)
        case And(left, right):
            return evaluate_formula(left, valuation) and evaluate_formula(right, valuation)
        case Or(left, right):
            return evaluate_formula(left, valuation) or evaluate_formula(right, valuation)
        case Exists():
            env = {name: z3.IntVal(value) for name, value in valuation.items()}
            solver = z3.Solver()
            solver.add(_to_z3(formula, env, itertools.count()))
            return solver.check() == z3.sat
    msg = f"Unknown formula node {formula!r}"
    raise TypeError(msg)


class Builtin(StrEnum):
    """Tags of the builtin combinators."""

    MAX = "max"
    MIN = "min"
    PLUS = "plus"
    MINUS = "minus"
    NEGATE = "negate"
    ABS_DIFF = "abs-diff"
    CONST = "const"
    IDENTITY = "identity"


class FunctionalityStatus(StrEnum):
    """How the functionality of a combinator is known."""

    BUILTIN = "builtin"
    VERIFIED_ON_BOX = "verified-on-box"
    ASSUMED = "assumed"


@dataclass(frozen=True, eq=False)
class FunctionalCombinator:
    """Formula defining a total function from Z^arity to Z.

    Attributes
    ----------
    arity : int
        Number of inputs.
    formula : Formula
        Free variables among ``inputs`` and ``output``.
    inputs : tuple[str, ...]
        Input variable names, in argument order.
    output : str
        Output variable name.
    builtin : Builtin or None
        Tag of a builtin combinator.
    pwl : Pwl or None
        Piecewise-linear description; required by decision procedures.
    status : FunctionalityStatus
        Builtin, verified on a box, or assumed.
    name : str
        Display name.
    """

    arity: int
    formula: Formula
    inputs: tuple[str, ...]
    output: str
    builtin: Builtin | None = None
    pwl: pw.Pwl | None = None
    status: FunctionalityStatus = FunctionalityStatus.ASSUMED
    name: str = "phi"

    def __post_init__(self) -> None:
        if len(self.inputs) != self.arity:
            msg = f"Combinator {self.name} declares {len(self.inputs)} inputs for arity {self.arity}"
            raise InputError(msg)
        unknown = free_vars(self.formula) - {*self.inputs, self.output}
        if unknown:
            msg = f"Combinator {self.name} has unexpected free variable(s) {', '.join(sorted(unknown))}"
            raise InputError(msg)

    def __str__(self) -> str:
        return self.name


def _input_names(arity: int) -> tuple[str, ...]:
    return tuple(f"x{i + 1}" for i in range(arity))


def from_pwl(p: pw.Pwl, arity: int, name: str | None = None, builtin: Builtin | None = None) -> FunctionalCombinator:
    """Wrap a piecewise-linear function as a combinator with a generated formula."""
    inputs = _input_names(arity)
    if name is None:
        name = pw.to_text(p, inputs)
    return FunctionalCombinator(
        arity=arity,
        formula=pwl_formula(p, inputs, "y"),
        inputs=inputs,
        output="y",
        builtin=builtin,
        pwl=p,
        status=FunctionalityStatus.BUILTIN,
        name=name,
    )


def from_formula(formula: Formula, inputs: Sequence[str], output: str, name: str = "phi") -> FunctionalCombinator:
    """Wrap a user formula; its functionality is assumed until checked on a box."""
    return FunctionalCombinator(arity=len(inputs), formula=formula, inputs=tuple(inputs), output=output, name=name)


def maximum(arity: int = 2) -> FunctionalCombinator:
    """Builtin max."""
    return from_pwl(pw.Max(tuple(pw.Arg(i) for i in range(arity))), arity, "max", Builtin.MAX)


def minimum(arity: int = 2) -> FunctionalCombinator:
    """Builtin min."""
    return from_pwl(pw.Min(tuple(pw.Arg(i) for i in range(arity))), arity, "min", Builtin.MIN)


def plus(arity: int = 2) -> FunctionalCombinator:
    """Builtin sum."""
    p: pw.Pwl = pw.Arg(0)
    for i in range(1, arity):
        p = pw.Add(p, pw.Arg(i))
    return from_pwl(p, arity, "plus", Builtin.PLUS)


def minus() -> FunctionalCombinator:
    """Builtin difference x1 - x2."""
    return from_pwl(pw.minus(pw.Arg(0), pw.Arg(1)), 2, "minus", Builtin.MINUS)


def negate() -> FunctionalCombinator:
    """Builtin negation."""
    return from_pwl(pw.Scale(-1, pw.Arg(0)), 1, "neg", Builtin.NEGATE)


def abs_diff() -> FunctionalCombinator:
    """Builtin |x1 - x2|, i.e. max(x1 - x2, x2 - x1)."""
    p = pw.Max((pw.minus(pw.Arg(0), pw.Arg(1)), pw.minus(pw.Arg(1), pw.Arg(0))))
    return from_pwl(p, 2, "abs", Builtin.ABS_DIFF)


def constant(value: int, arity: int = 1) -> FunctionalCombinator:
    """Builtin constant function ignoring its arguments."""
    return from_pwl(pw.Const(value), arity, f"const[{value}]", Builtin.CONST)


def identity() -> FunctionalCombinator:
    """Builtin identity."""
    return from_pwl(pw.Arg(0), 1, "id", Builtin.IDENTITY)


def shift(offset: int) -> FunctionalCombinator:
    """x + offset."""
    return from_pwl(pw.Add(pw.Arg(0), pw.Const(offset)), 1, f"shift[{offset}]")


def scale(factor: int) -> FunctionalCombinator:
    """factor * x."""
    return from_pwl(pw.Scale(factor, pw.Arg(0)), 1, f"scale[{factor}]")


def apply_combinator(c: FunctionalCombinator, args: Sequence[int]) -> int:
    """Return the unique output of ``c`` on ``args``.

    Raises
    ------
    InputError
        If the number of arguments differs from the arity.
    FunctionalityError
        If a formula-only combinator has no output or several outputs.
    """
    if len(args) != c.arity:
        msg = f"Combinator {c.name} expects {c.arity} argument(s), got {len(args)}"
        raise InputError(msg)
    if c.pwl is not None:
        return pw.evaluate(c.pwl, args)
    env: dict[str, z3.ArithRef] = {name: z3.IntVal(value) for name, value in zip(c.inputs, args, strict=True)}
    y = z3.Int(c.output)
    env[c.output] = y
    solver = z3.Solver()
    solver.add(_to_z3(c.formula, env, itertools.count()))
    if solver.check() != z3.sat:
        msg = f"Combinator {c.name} has no output on {tuple(args)}"
        raise FunctionalityError(msg, args)
    value = solver.model().eval(y, model_completion=True).as_long()
    solver.add(y != value)
    if solver.check() == z3.sat:
        other = solver.model().eval(y, model_completion=True).as_long()
        msg = f"Combinator {c.name} has several outputs on {tuple(args)}: {value} and {other}"
        raise FunctionalityError(msg, args)
    return value


@dataclass(frozen=True)
class FunctionalityCheck:
    """Outcome of a functionality check on a box.

    Attributes
    ----------
    verified : bool
        True when every argument tuple of the box has exactly one output.
    args : tuple[int, ...] or None
        First violating argument tuple.
    reason : str
        Description of the violation, empty when verified.
    """

    verified: bool
    args: tuple[int, ...] | None = None
    reason: str = field(default="")


def check_functional_on_box(c: FunctionalCombinator, box: Sequence[tuple[int, int]]) -> FunctionalityCheck:
    """Check exhaustively that ``c`` has exactly one output on every tuple of ``box``.

    Parameters
    ----------
    c : FunctionalCombinator
        Combinator to check; builtins are verified by their tag.
    box : Sequence[tuple[int, int]]
        Inclusive interval per argument.
    """
    if c.status is FunctionalityStatus.BUILTIN:
        return FunctionalityCheck(verified=True)
    if len(box) != c.arity:
        msg = f"Box has {len(box)} intervals for arity {c.arity}"
        raise InputError(msg)
    for args in itertools.product(*(range(low, high + 1) for low, high in box)):
        try:
            apply_combinator(c, args)
        except FunctionalityError as e:
            msg = f"Combinator {c.name} is not functional: {e}"
            logger.debug(msg)
            return FunctionalityCheck(verified=False, args=tuple(args), reason=str(e))
    msg = f"Combinator {c.name} verified on box {list(box)}"
    logger.debug(msg)
    return FunctionalityCheck(verified=True)


def verified(c: FunctionalCombinator, box: Sequence[tuple[int, int]]) -> FunctionalCombinator:
    """Return ``c`` with status verified-on-box, or raise on the first violation.

    Raises
    ------
    FunctionalityError
        Naming the violating argument tuple.
    """
    check = check_functional_on_box(c, box)
    if not check.verified:
        raise FunctionalityError(check.reason, check.args or ())
    if c.status is FunctionalityStatus.BUILTIN:
        return c
    return FunctionalCombinator(c.arity, c.formula, c.inputs, c.output, c.builtin, c.pwl, FunctionalityStatus.VERIFIED_ON_BOX, c.name)
