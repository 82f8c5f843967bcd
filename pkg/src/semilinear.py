"""
Semi-linear subsets of Z^k.

A linear set is ``base + N·p_1 + ... + N·p_n`` for integer vectors; a
semi-linear set is a finite union of linear sets. The module provides the
operations needed to compute ranges of weighted automata and chop automata:
union, sum, Kleene star, affine and piecewise-linear images, intersection
with one linear guard, threshold queries and the evaluation of regular
expressions in the commutative monoid of semi-linear sets.

Guard intersection reduces to one linear Diophantine relation over the
period coefficients; its minimal solutions are enumerated by the
Contejean-Devie completion, which only increments a coordinate whose
coefficient has the sign opposite to the current defect.

Sets are not kept in a canonical form; equality is only ever tested through
bounded membership.
"""

from __future__ import annotations

import itertools
from collections.abc import Callable, Hashable, Iterable, Mapping, Sequence
from dataclasses import dataclass
from enum import StrEnum

import numpy as np
import z3

import src.logging_utils as lu
import src.piecewise as pw
import src.regex as rx
from src.errors import InputError, UnsupportedCombinatorError
from src.presburger import FunctionalCombinator
from src.queries import Verdict

logger = lu.setup_logger(__name__)

Vector = tuple[int, ...]


class GuardRelation(StrEnum):
    """Relation of a linear guard ``a · x rel c``."""

    GE = ">="
    GT = ">"
    EQ = "="


def _vector(values: Iterable) -> Vector:
    return tuple(int(v) for v in values)


def _fmt(vector: Vector) -> str:
    return f"({','.join(str(v) for v in vector)})"


@dataclass(frozen=True)
class LinearSet:
    """``base + Σ λ_i periods[i]`` with natural coefficients λ.

    Zero periods and duplicate periods are dropped on construction.
    """

    base: Vector
    periods: tuple[Vector, ...] = ()

    def __post_init__(self) -> None:
        base = _vector(self.base)
        periods = sorted({_vector(p) for p in self.periods if any(p)})
        if any(len(p) != len(base) for p in periods):
            msg = f"Periods of a linear set must have the dimension {len(base)} of its base"
            raise InputError(msg)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "periods", tuple(periods))

    @property
    def dimension(self) -> int:
        """Dimension k of the ambient space Z^k."""
        return len(self.base)

    def __str__(self) -> str:
        return f"base={_fmt(self.base)} periods={{{','.join(_fmt(p) for p in self.periods)}}}"


@dataclass(frozen=True)
class SemiLinearSet:
    """Finite union of linear sets of a common dimension (no components: the empty set).

    Duplicate components and components included in another one with the same
    base are removed on construction.
    """

    dimension: int
    components: tuple[LinearSet, ...] = ()

    def __post_init__(self) -> None:
        for component in self.components:
            if component.dimension != self.dimension:
                msg = f"Component of dimension {component.dimension} in a set of dimension {self.dimension}"
                raise InputError(msg)
        unique = sorted(set(self.components), key=lambda c: (c.base, len(c.periods), c.periods))
        kept = [
            c
            for c in unique
            if not any(o is not c and o.base == c.base and set(c.periods) < set(o.periods) for o in unique)
        ]
        object.__setattr__(self, "components", tuple(kept))

    @property
    def is_empty(self) -> bool:
        """Whether the set has no element."""
        return not self.components

    def __str__(self) -> str:
        if not self.components:
            return "empty"
        return "\n".join(str(c) for c in self.components)


def empty(dimension: int) -> SemiLinearSet:
    """The empty subset of Z^dimension."""
    return SemiLinearSet(dimension)


def singleton(vector: Sequence[int]) -> SemiLinearSet:
    """The set containing one vector."""
    return SemiLinearSet(len(vector), (LinearSet(_vector(vector)),))


def zero(dimension: int) -> SemiLinearSet:
    """The set containing the origin."""
    return singleton((0,) * dimension)


def linear(base: Sequence[int], periods: Iterable[Sequence[int]] = ()) -> SemiLinearSet:
    """A semi-linear set with one component."""
    component = LinearSet(_vector(base), tuple(_vector(p) for p in periods))
    return SemiLinearSet(component.dimension, (component,))


def _check_dimensions(s: SemiLinearSet, t: SemiLinearSet) -> None:
    if s.dimension != t.dimension:
        msg = f"Dimension mismatch: {s.dimension} vs {t.dimension}"
        raise InputError(msg)


def _add(u: Vector, v: Vector) -> Vector:
    return tuple(a + b for a, b in zip(u, v, strict=True))


def sls_union(s: SemiLinearSet, t: SemiLinearSet) -> SemiLinearSet:
    """Union of two sets."""
    _check_dimensions(s, t)
    return SemiLinearSet(s.dimension, s.components + t.components)


def sls_sum(s: SemiLinearSet, t: SemiLinearSet) -> SemiLinearSet:
    """Minkowski sum: bases add, period lists are joined."""
    _check_dimensions(s, t)
    components = [LinearSet(_add(a.base, b.base), a.periods + b.periods) for a in s.components for b in t.components]
    return SemiLinearSet(s.dimension, tuple(components))


def _star_component(component: LinearSet) -> SemiLinearSet:
    dimension = component.dimension
    if not any(component.base):
        return SemiLinearSet(dimension, (component,))
    if not component.periods:
        return SemiLinearSet(dimension, (LinearSet((0,) * dimension, (component.base,)),))
    pumped = LinearSet(component.base, (*component.periods, component.base))
    return SemiLinearSet(dimension, (LinearSet((0,) * dimension), pumped))


def sls_star(s: SemiLinearSet) -> SemiLinearSet:
    """Kleene star in (Z^k, +): all finite sums of elements, the empty sum included.

    The star of a union is the sum of the stars of its components.
    """
    result = zero(s.dimension)
    for component in s.components:
        result = sls_sum(result, _star_component(component))
    return result


def affine_image(s: SemiLinearSet, matrix: Sequence[Sequence[int]], offset: Sequence[int]) -> SemiLinearSet:
    """Image under ``x -> matrix · x + offset``.

    Raises
    ------
    InputError
        If the matrix does not have ``s.dimension`` columns or the offset does
        not match its rows.
    """
    m = np.asarray(matrix, dtype=np.int64).reshape(len(matrix), -1) if len(matrix) else np.zeros((0, s.dimension), dtype=np.int64)
    c = np.asarray(offset, dtype=np.int64)
    if m.shape[1] != s.dimension or c.shape != (m.shape[0],):
        msg = f"Affine map of shape {m.shape} with offset {c.shape} does not apply to dimension {s.dimension}"
        raise InputError(msg)
    components = []
    for component in s.components:
        base = m @ np.asarray(component.base, dtype=np.int64) + c
        periods = [m @ np.asarray(p, dtype=np.int64) for p in component.periods]
        components.append(LinearSet(_vector(base), tuple(_vector(p) for p in periods)))
    return SemiLinearSet(m.shape[0], tuple(components))


def _dominated(vector: np.ndarray, minimal: list[np.ndarray]) -> bool:
    if not minimal:
        return False
    return bool(np.any(np.all(np.vstack(minimal) <= vector, axis=1)))


def _complete(
    coefficients: np.ndarray,
    rhs: int,
    starts: list[np.ndarray],
    bound: int,
    prune: list[np.ndarray],
) -> list[np.ndarray]:
    """Breadth-first completion towards ``coefficients · y = rhs``, keeping minimal solutions."""
    found: list[np.ndarray] = []
    frontier = starts
    seen = {tuple(y) for y in frontier}
    while frontier:
        layer = []
        for y in frontier:
            if _dominated(y, prune) or _dominated(y, found):
                continue
            defect = int(coefficients @ y) - rhs
            if defect == 0:
                found.append(y)
                continue
            for j in np.flatnonzero(coefficients * defect < 0):
                if y[j] >= bound:
                    continue
                z = y.copy()
                z[j] += 1
                key = tuple(z)
                if key not in seen:
                    seen.add(key)
                    layer.append(z)
        frontier = layer
    return found


def minimal_solutions(coefficients: Sequence[int], rhs: int) -> tuple[list[Vector], list[Vector]]:
    """Minimal natural solutions of one linear Diophantine equation.

    Returns
    -------
    tuple[list[Vector], list[Vector]]
        ``(particular, homogeneous)``: the minimal solutions of
        ``coefficients · y = rhs`` and the minimal nonzero solutions of
        ``coefficients · y = 0``. Every solution is a particular one plus a
        natural combination of homogeneous ones.
    """
    c = np.asarray(coefficients, dtype=np.int64)
    size = len(c)
    if size == 0:
        return ([()] if rhs == 0 else []), []
    largest = int(np.max(np.abs(c)))
    units = [np.eye(size, dtype=np.int64)[j] for j in range(size)]
    homogeneous = _complete(c, 0, units, max(largest, 1), [])
    particular = _complete(c, rhs, [np.zeros(size, dtype=np.int64)], max(largest, abs(rhs), 1), homogeneous)
    return [_vector(y) for y in particular], [_vector(y) for y in homogeneous]


def guard_intersect(component: LinearSet, a: Sequence[int], c: int, relation: GuardRelation = GuardRelation.GE) -> SemiLinearSet:
    """Return ``{x in component : a · x rel c}``.

    With d_i = a · p_i and e = c - a · base the guard becomes
    ``Σ λ_i d_i rel e`` over the coefficients; ``>`` is ``>= e + 1`` and
    ``>=`` gets a slack variable of coefficient -1.
    """
    if len(a) != component.dimension:
        msg = f"Guard of dimension {len(a)} on a set of dimension {component.dimension}"
        raise InputError(msg)
    d = [int(np.dot(a, p)) for p in component.periods]
    e = c - int(np.dot(a, component.base))
    if relation is GuardRelation.GT:
        e += 1
    coefficients = d if relation is GuardRelation.EQ else [*d, -1]
    particular, homogeneous = minimal_solutions(coefficients, e)
    n = len(component.periods)
    periods_matrix = np.asarray(component.periods, dtype=np.int64).reshape(n, component.dimension)

    def combine(lam: Vector) -> Vector:
        return _vector(np.asarray(lam[:n], dtype=np.int64) @ periods_matrix)

    periods = tuple(combine(h) for h in homogeneous)
    components = tuple(LinearSet(_add(component.base, combine(m)), periods) for m in particular)
    return SemiLinearSet(component.dimension, components)


def guard_intersect_set(s: SemiLinearSet, a: Sequence[int], c: int, relation: GuardRelation = GuardRelation.GE) -> SemiLinearSet:
    """``guard_intersect`` applied to every component of ``s``."""
    result = empty(s.dimension)
    for component in s.components:
        result = sls_union(result, guard_intersect(component, a, c, relation))
    return result


def _pwl_of(c: FunctionalCombinator | pw.Pwl) -> pw.Pwl:
    if isinstance(c, FunctionalCombinator):
        if c.pwl is None:
            msg = f"Combinator {c.name} has no piecewise-linear structure; only builtin-composed combinators are supported here"
            raise UnsupportedCombinatorError(msg)
        return c.pwl
    return c


def pwl_tuple_image(s: SemiLinearSet, functions: Sequence[FunctionalCombinator | pw.Pwl]) -> SemiLinearSet:
    """Image of ``s`` under ``x -> (f_1(x), ..., f_m(x))`` for piecewise-linear f_j.

    Each combination of pieces contributes the affine image of ``s`` cut by
    the pieces' guards.

    Raises
    ------
    UnsupportedCombinatorError
        If some combinator has no piecewise-linear description.
    """
    pwls = [_pwl_of(f) for f in functions]
    result = empty(len(pwls))
    for combination in itertools.product(*(pw.pieces(p, s.dimension) for p in pwls)):
        part = s
        for guard in dict.fromkeys(g for piece in combination for g in piece.guards):
            part = guard_intersect_set(part, guard.coefficients, -guard.constant)
            if part.is_empty:
                break
        if part.is_empty:
            continue
        matrix = [piece.coefficients for piece in combination]
        offset = [piece.constant for piece in combination]
        result = sls_union(result, affine_image(part, matrix, offset))
    return result


def pwl_image(s: SemiLinearSet, c: FunctionalCombinator | pw.Pwl) -> SemiLinearSet:
    """Image of ``s`` under a piecewise-linear combinator, a subset of Z."""
    return pwl_tuple_image(s, [c])


def threshold_nonempty(s: SemiLinearSet, threshold: int, *, strict: bool = False) -> int | None:
    """Return a value of ``s`` meeting the threshold, or None when there is none.

    Per component the candidate is the base if it already meets the threshold,
    otherwise the smallest pumping of the base by a single positive period.
    Components without a positive period never exceed their base. The result
    is the least candidate, which need not be the least member of ``s`` meeting
    the threshold.

    Raises
    ------
    InputError
        If ``s`` is not one-dimensional.
    """
    if s.dimension != 1:
        msg = f"Threshold queries need a one-dimensional set, got dimension {s.dimension}"
        raise InputError(msg)
    bound = threshold + 1 if strict else threshold
    candidates = []
    for component in s.components:
        (base,) = component.base
        if base >= bound:
            candidates.append(base)
            continue
        for (period,) in component.periods:
            if period > 0:
                candidates.append(base + -(-(bound - base) // period) * period)
    return min(candidates) if candidates else None


def commutative_kleene_eval(
    node: rx.Regex,
    interpretation: Mapping[Hashable, SemiLinearSet] | Callable[[Hashable], SemiLinearSet],
    dimension: int,
) -> SemiLinearSet:
    """Evaluate a regular expression in the commutative monoid of semi-linear sets.

    Raises
    ------
    InputError
        If a letter has no interpretation or one of another dimension.
    """

    def letter(symbol: Hashable) -> SemiLinearSet:
        try:
            value = interpretation(symbol) if callable(interpretation) else interpretation[symbol]
        except KeyError as e:
            msg = f"Letter {symbol!r} has no interpretation"
            raise InputError(msg) from e
        if value.dimension != dimension:
            msg = f"Letter {symbol!r} is interpreted in dimension {value.dimension}, expected {dimension}"
            raise InputError(msg)
        return value

    return rx.fold(
        node,
        letter=letter,
        empty=lambda: empty(dimension),
        epsilon=lambda: zero(dimension),
        times=sls_sum,
        plus=sls_union,
        closure=sls_star,
    )


def _membership_solver(s: SemiLinearSet, vector: Sequence[int], bound: int | None) -> z3.Solver:
    solver = z3.Solver()
    options = []
    for index, component in enumerate(s.components):
        coefficients = [z3.Int(f"l_{index}_{i}") for i in range(len(component.periods))]
        constraints = [lam >= 0 for lam in coefficients]
        for axis in range(s.dimension):
            total = component.base[axis] + z3.Sum([lam * p[axis] for lam, p in zip(coefficients, component.periods, strict=True)] or [z3.IntVal(0)])
            constraints.append(total == vector[axis])
        if bound is not None and coefficients:
            constraints.append(z3.Sum(coefficients) <= bound)
        options.append(z3.And(constraints))
    solver.add(z3.Or(options) if options else z3.BoolVal(False))
    return solver


def member_bounded(s: SemiLinearSet, vector: Sequence[int], coefficient_bound: int) -> Verdict:
    """Search coefficients with ``Σ λ_i <= coefficient_bound`` in every component.

    Returns
    -------
    Verdict
        ``YES`` when found, ``NO_WITHIN_BOUND`` otherwise.
    """
    if len(vector) != s.dimension:
        msg = f"Vector of dimension {len(vector)} tested against a set of dimension {s.dimension}"
        raise InputError(msg)
    found = _membership_solver(s, vector, coefficient_bound).check() == z3.sat
    return Verdict.YES if found else Verdict.NO_WITHIN_BOUND


def is_member(s: SemiLinearSet, vector: Sequence[int]) -> bool:
    """Exact membership test."""
    if len(vector) != s.dimension:
        msg = f"Vector of dimension {len(vector)} tested against a set of dimension {s.dimension}"
        raise InputError(msg)
    return _membership_solver(s, vector, None).check() == z3.sat


def enumerate_bounded(s: SemiLinearSet, depth: int) -> set[Vector]:
    """Return every element reachable with at most ``depth`` period additions."""
    values: set[Vector] = set()
    for component in s.components:
        for size in range(depth + 1):
            for chosen in itertools.combinations_with_replacement(component.periods, size):
                vector = component.base
                for period in chosen:
                    vector = _add(vector, period)
                values.add(vector)
    return values
