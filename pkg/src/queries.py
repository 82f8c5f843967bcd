"""
Decision queries and their results.

Shared by the expression, chop automaton and counter machine back ends and by
the command line layer.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import StrEnum

import src.constants as const


class Verdict(StrEnum):
    """Answer of a query; the bounded verdicts come from bounded searches."""

    YES = "yes"
    NO = "no"
    YES_WITHIN_BOUND = "yes-within-bound"
    NO_WITHIN_BOUND = "no-within-bound"
    INCONCLUSIVE = "inconclusive"

    @property
    def exit_code(self) -> int:
        """Process exit status of the verdict."""
        if self in {Verdict.YES, Verdict.YES_WITHIN_BOUND}:
            return const.EXIT_YES
        if self in {Verdict.NO, Verdict.NO_WITHIN_BOUND}:
            return const.EXIT_NO
        return const.EXIT_ERROR


class Backend(StrEnum):
    """Decision back ends."""

    SEMILINEAR = "semilinear"
    COUNTER_MACHINE = "cm"


@dataclass(frozen=True)
class Emptiness:
    """Is there a domain word with value >= threshold (> when strict)?"""

    threshold: int = 0
    strict: bool = False

    @property
    def bound(self) -> int:
        """Smallest integer satisfying the threshold."""
        return self.threshold + 1 if self.strict else self.threshold


@dataclass(frozen=True)
class Universality:
    """Do all domain words have value >= threshold (> when strict)?"""

    threshold: int = 0
    strict: bool = False


@dataclass(frozen=True)
class Inclusion:
    """Is dom(second) ⊆ dom(first) with first >= second (> when strict) on dom(second)?"""

    strict: bool = False


@dataclass(frozen=True)
class Equivalence:
    """Same domain and same values."""


Query = Emptiness | Universality | Inclusion | Equivalence


@dataclass(frozen=True)
class QueryResult:
    """Verdict of a query with optional witness.

    Attributes
    ----------
    verdict : Verdict
        The answer.
    witness_word : tuple[str, ...] or None
        A word supporting the verdict (threshold witness or counterexample).
    witness_value : int or None
        Value attached to the witness.
    details : dict
        Further report entries (reason, bound, separating words).
    """

    verdict: Verdict
    witness_word: tuple[str, ...] | None = None
    witness_value: int | None = None
    details: dict = field(default_factory=dict)


@dataclass(frozen=True)
class DecisionOptions:
    """Search limits of the decision procedures.

    Attributes
    ----------
    witness_max_length : int
        Longest word tried when looking for a witness word.
    witness_max_words : int
        Cap on the number of words tried by the witness search.
    membership_bound : int
        Coefficient bound of bounded semi-linear membership.
    ibarra_constant : int
        Constant C of the reversal-bounded counter machine bound.
    step_ceiling : int
        Hard ceiling on counter machine search steps.
    max_configurations : int
        Memory guard of the counter machine breadth-first search.
    step_bound : int or None
        Explicit step bound replacing the computed one.
    trace : bool
        Dump explored counter machine configurations.
    """

    witness_max_length: int = 12
    witness_max_words: int = 20000
    membership_bound: int = 50
    ibarra_constant: int = 1
    step_ceiling: int = 1_000_000
    max_configurations: int = 200_000
    step_bound: int | None = None
    trace: bool = False


_NEGATION = {
    Verdict.YES: Verdict.NO,
    Verdict.NO: Verdict.YES,
    Verdict.YES_WITHIN_BOUND: Verdict.NO_WITHIN_BOUND,
    Verdict.NO_WITHIN_BOUND: Verdict.YES_WITHIN_BOUND,
    Verdict.INCONCLUSIVE: Verdict.INCONCLUSIVE,
}


def negated(result: QueryResult, **details: object) -> QueryResult:
    """Turn the answer of "is there a counterexample?" into the answer of the universal query.

    The witness of the existential query becomes the counterexample.
    """
    return QueryResult(
        verdict=_NEGATION[result.verdict],
        witness_word=result.witness_word,
        witness_value=result.witness_value,
        details={**result.details, **details},
    )
