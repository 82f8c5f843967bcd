"""
Brute-force oracle: exhaustive evaluation of all words up to a length.

The oracle is independent of the symbolic procedures: it only uses the
evaluation of expressions and chop automata, and answers queries from the
table of values. Its verdicts are bounded (``yes-within-bound`` /
``no-within-bound``) unless a witness settles the query.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field

import pandas as pd

import src.automata as am
import src.chop as ch
import src.expressions as ex
import src.logging_utils as lu
from src.errors import InputError
from src.queries import Emptiness, Equivalence, Inclusion, Query, QueryResult, Universality, Verdict

logger = lu.setup_logger(__name__)

Target = ex.Expression | ch.ChopAutomaton


@dataclass
class OracleResult:
    """Values found by enumeration.

    Attributes
    ----------
    values : set[int]
        Every value taken on a word of length at most ``max_len``.
    witnesses : dict[int, tuple[str, ...]]
        Shortlex-least word of each value.
    max_len : int
        Length searched.
    table : pd.DataFrame
        One row per word: ``word``, ``length`` and one value column per target
        (missing outside the domain).
    answer : QueryResult or None
        Answer of the query, when one was asked.
    """

    values: set[int] = field(default_factory=set)
    witnesses: dict[int, tuple[str, ...]] = field(default_factory=dict)
    max_len: int = 0
    table: pd.DataFrame = field(default_factory=pd.DataFrame)
    answer: QueryResult | None = None


def evaluator(target: Target) -> Callable[[am.Word], int | None]:
    """Value function of an expression or a scalar chop automaton."""
    if isinstance(target, ch.ChopAutomaton):

        def chop_value(word: am.Word) -> int | None:
            value = ch.wca_eval(target, word)
            return None if value is None else value[0]

        return chop_value
    return lambda word: ex.eval(target, word)


def value_table(targets: list[Target], max_len: int) -> pd.DataFrame:
    """Evaluate every target on every word of length at most ``max_len``.

    Returns
    -------
    pd.DataFrame
        Columns ``word``, ``length``, ``value`` (or ``value_0``, ``value_1``, ...
        for several targets), values as nullable integers.
    """
    alphabet = targets[0].alphabet
    functions = [evaluator(t) for t in targets]
    words = am.all_words(alphabet, max_len)
    columns = ["value"] if len(targets) == 1 else [f"value_{i}" for i in range(len(targets))]
    rows = {"word": [am.format_word(w) for w in words], "length": [len(w) for w in words]}
    for column, function in zip(columns, functions, strict=True):
        rows[column] = pd.array([function(w) for w in words], dtype="Int64")
    df = pd.DataFrame(rows)
    df.attrs["words"] = words
    return df


def _witness(df: pd.DataFrame, mask: pd.Series) -> tuple[str, ...] | None:
    hits = df.index[mask.fillna(value=False).astype(bool)]
    return df.attrs["words"][hits[0]] if len(hits) else None


def oracle(
    target: Target | tuple[Target, Target],
    max_len: int,
    query: Query | None = None,
    ceiling: int = 10,
) -> OracleResult:
    """Enumerate all words up to ``max_len`` and answer ``query`` from the table.

    Parameters
    ----------
    target : Expression, ChopAutomaton or a pair of them
        A pair for inclusion and equivalence queries.
    max_len : int
        Longest word evaluated.
    query : Query, optional
        Emptiness, universality, inclusion or equivalence.
    ceiling : int
        Largest accepted ``max_len``.

    Raises
    ------
    InputError
        If ``max_len`` exceeds the ceiling or is negative.
    """
    if not 0 <= max_len <= ceiling:
        msg = f"Oracle length {max_len} is outside [0, {ceiling}]"
        raise InputError(msg)
    targets = list(target) if isinstance(target, tuple) else [target]
    df = value_table(targets, max_len)
    first = df["value"] if "value" in df else df["value_0"]
    defined = df[first.notna()]
    values = {int(v) for v in defined[first.name]}
    witnesses: dict[int, tuple[str, ...]] = {}
    for index, v in defined[first.name].items():
        witnesses.setdefault(int(v), df.attrs["words"][index])
    msg = f"Oracle evaluated {len(df)} word(s) up to length {max_len}, {len(values)} distinct value(s)"
    logger.debug(msg)
    result = OracleResult(values=values, witnesses=witnesses, max_len=max_len, table=df)
    if query is not None:
        result.answer = _answer(df, query)
    return result


def _answer(df: pd.DataFrame, query: Query) -> QueryResult:
    details = {"status": "oracle-bounded"}
    match query:
        case Emptiness():
            word = _witness(df, df["value"] >= query.bound)
            if word is None:
                return QueryResult(Verdict.NO_WITHIN_BOUND, details=details)
            return QueryResult(Verdict.YES, witness_word=word, witness_value=int(df["value"][df.attrs["words"].index(word)]), details=details)
        case Universality():
            failing = df["value"] <= query.threshold if query.strict else df["value"] < query.threshold
            word = _witness(df, failing)
            if word is None:
                return QueryResult(Verdict.YES_WITHIN_BOUND, details=details)
            return QueryResult(Verdict.NO, witness_word=word, witness_value=int(df["value"][df.attrs["words"].index(word)]), details=details)
        case Inclusion() | Equivalence():
            first, second = df["value_0"], df["value_1"]
            if isinstance(query, Inclusion):
                domain = second.notna() & first.isna()
                value = second.notna() & first.notna() & ((first <= second) if query.strict else (first < second))
            else:
                domain = second.notna() != first.notna()
                value = second.notna() & first.notna() & (first != second)
            word = _witness(df, domain | value)
            if word is None:
                return QueryResult(Verdict.YES_WITHIN_BOUND, details=details)
            return QueryResult(Verdict.NO, witness_word=word, details=details)
    msg = f"Unknown query {query!r}"
    raise InputError(msg)
