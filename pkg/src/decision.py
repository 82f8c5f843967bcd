"""
Decision procedures for quantitative expressions.

``decide`` answers emptiness, universality, inclusion and equivalence queries:

* star-free expressions are normalised into one piecewise-linear combinator
  over the product of their atoms; the Parikh image of the product gives the
  semi-linear set of atom value tuples, whose image under the combinator is
  tested against the threshold;
* expressions with iterated sums must be synchronised; they are compiled into
  chop automata and decided there;
* the counter machine back end handles star-free emptiness by bounded search
  and is used to cross-check the semi-linear one.

Universality, inclusion and equivalence reduce to emptiness: a counterexample
to ``e >= t`` is a word with ``-e >= -t + 1``, a counterexample to
``first >= second`` a word with ``second - first >= 1``.
"""

from __future__ import annotations

import dataclasses

import src.automata as am
import src.chop as ch
import src.compiler as co
import src.countermachine as cm
import src.expressions as ex
import src.logging_utils as lu
import src.piecewise as pw
import src.presburger as pb
import src.semilinear as sl
import src.weighted as wa
from src.errors import InputError, NotSynchronisedError
from src.queries import (
    Backend,
    DecisionOptions,
    Emptiness,
    Equivalence,
    Inclusion,
    Query,
    QueryResult,
    Universality,
    Verdict,
    negated,
)

logger = lu.setup_logger(__name__)


def require_synchronised(es: list[ex.Expression]) -> None:
    """Raise NotSynchronisedError with the offending star pair unless ``es`` is synchronised."""
    report = ex.is_synchronised(es)
    if not report.synchronised:
        msg = f"Expressions are not synchronised: {report.first} vs {report.second}"
        raise NotSynchronisedError(msg, report.first or "", report.second or "", report.word)


def _star_free_emptiness(e: ex.Expression, bound: int, options: DecisionOptions) -> QueryResult:
    form = ex.normalize_monolithic(e)
    product = wa.product([atom.automaton for atom in form.atoms])
    image = sl.pwl_image(wa.parikh_range(product), form.combinator)
    least = sl.threshold_nonempty(image, bound)
    msg = f"Range of {e} over {len(form.atoms)} atom(s): {len(image.components)} component(s)"
    logger.debug(msg)
    if least is None:
        return QueryResult(Verdict.NO, details={"range": str(image)})
    p = form.combinator.pwl
    found = wa.find_word(
        product,
        lambda values: pw.evaluate(p, values) >= bound,
        options.witness_max_length,
        options.witness_max_words,
    )
    if found is None:
        return QueryResult(Verdict.YES, witness_value=least, details={"witness_search": "exhausted"})
    word, _ = found
    return QueryResult(Verdict.YES, witness_word=word, witness_value=ex.eval(e, word))


def _counter_machine_emptiness(e: ex.Expression, bound: int, options: DecisionOptions) -> QueryResult:
    shifted = ex.Combine(pb.shift(-bound), (e,)) if bound else e
    result = cm.cm_emptiness_backend(shifted, options)
    if result.witness_word is None:
        return result
    return dataclasses.replace(result, witness_value=ex.eval(e, result.witness_word))


def _emptiness(e: ex.Expression, bound: int, backend: Backend, options: DecisionOptions) -> QueryResult:
    if ex.is_star_free(e):
        if backend is Backend.COUNTER_MACHINE:
            return _counter_machine_emptiness(e, bound, options)
        return _star_free_emptiness(e, bound, options)
    if backend is Backend.COUNTER_MACHINE:
        msg = f"The counter machine back end handles star-free expressions only, got {e}"
        raise InputError(msg)
    require_synchronised([e])
    (compiled,), _ = co.compile([e])
    return ch.wca_decide(compiled, Emptiness(bound), options)


def _universality(e: ex.Expression, query: Universality, backend: Backend, options: DecisionOptions) -> QueryResult:
    bound = -query.threshold if query.strict else -query.threshold + 1
    result = negated(_emptiness(ex.Combine(pb.negate(), (e,)), bound, backend, options))
    if result.witness_word is not None:
        return dataclasses.replace(result, witness_value=ex.eval(e, result.witness_word))
    if result.witness_value is not None:
        return dataclasses.replace(result, witness_value=-result.witness_value)
    return result


def _inclusion(first: ex.Expression, second: ex.Expression, strict: bool, backend: Backend, options: DecisionOptions) -> QueryResult:
    witness = am.inclusion_witness(second.domain, first.domain)
    if witness is not None:
        return QueryResult(Verdict.NO, witness_word=witness, details={"reason": "domain"})
    if ex.is_star_free(first) and ex.is_star_free(second):
        gap = ex.Combine(pb.minus(), (second, first))
        result = negated(_emptiness(gap, 0 if strict else 1, backend, options), reason="value")
        if result.witness_word is None:
            return dataclasses.replace(result, witness_value=None)
        word = result.witness_word
        return dataclasses.replace(
            result,
            witness_value=ex.eval(first, word),
            details={**result.details, "second_value": ex.eval(second, word)},
        )
    if backend is Backend.COUNTER_MACHINE:
        msg = "The counter machine back end handles star-free expressions only"
        raise InputError(msg)
    require_synchronised([first, second])
    compiled, _ = co.compile([first, second])
    return ch.wca_decide((compiled[0], compiled[1]), Inclusion(strict), options)


def decide(
    target: ex.Expression | tuple[ex.Expression, ex.Expression],
    query: Query,
    backend: Backend = Backend.SEMILINEAR,
    options: DecisionOptions | None = None,
) -> QueryResult:
    """Decide ``query`` on an expression, or on a pair for inclusion and equivalence.

    Parameters
    ----------
    target : Expression or tuple[Expression, Expression]
        The expression of emptiness and universality queries, the pair
        ``(first, second)`` of inclusion and equivalence queries.
    query : Query
        The query.
    backend : Backend
        ``SEMILINEAR`` (exact) or ``COUNTER_MACHINE`` (bounded, star-free only).
    options : DecisionOptions, optional
        Search limits.

    Returns
    -------
    QueryResult
        The verdict with a witness word where one was found.

    Raises
    ------
    NotSynchronisedError
        If an expression with iterated sums is not synchronised.
    UnsupportedCombinatorError
        If a combinator has no piecewise-linear structure.
    InputError
        On an ill-formed target or a back end that cannot handle it.
    """
    options = options or DecisionOptions()
    msg = f"Deciding {type(query).__name__} with the {backend} back end"
    logger.debug(msg)
    match query:
        case Emptiness():
            return _emptiness(target, query.bound, backend, options)
        case Universality():
            return _universality(target, query, backend, options)
        case Inclusion():
            first, second = target
            return _inclusion(first, second, query.strict, backend, options)
        case Equivalence():
            first, second = target
            forward = _inclusion(first, second, False, backend, options)
            if forward.verdict is not Verdict.YES:
                return dataclasses.replace(forward, details={**forward.details, "direction": "first >= second"})
            backward = _inclusion(second, first, False, backend, options)
            if backward.verdict is not Verdict.YES:
                return dataclasses.replace(backward, details={**backward.details, "direction": "second >= first"})
            return QueryResult(Verdict.YES)
    msg = f"Unknown query {query!r}"
    raise InputError(msg)


def value_range(e: ex.Expression) -> sl.SemiLinearSet:
    """Semi-linear set of the values of ``e`` on its domain.

    Raises
    ------
    NotSynchronisedError
        If ``e`` has iterated sums and is not synchronised.
    """
    if ex.is_star_free(e):
        form = ex.normalize_monolithic(e)
        product = wa.product([atom.automaton for atom in form.atoms])
        return sl.pwl_image(wa.parikh_range(product), form.combinator)
    require_synchronised([e])
    (compiled,), _ = co.compile([e])
    return ch.wca_range([compiled])
