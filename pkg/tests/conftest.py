"""Fixtures for the unit tests."""

import pathlib
from collections.abc import Callable

import numpy as np
import pytest

import src.automata as am
import src.config_utils as cu
import src.definitions as df
import src.expressions as ex
import src.piecewise as pw
import src.presburger as pb
import src.regex as rx
import src.weighted as wa


def counting_automaton(symbol: str, alphabet: set[str], weight: int = 1) -> wa.WeightedAutomaton:
    """One-state automaton over ``alphabet`` adding ``weight`` for each ``symbol``."""
    return wa.WeightedAutomaton.from_edges(
        {0},
        alphabet,
        {0},
        {0},
        [(0, s, 0, weight if s == symbol else 0) for s in sorted(alphabet)],
    )


def block_counter(symbol: str, alphabet: set[str], separator: str = "$") -> wa.WeightedAutomaton:
    """Count ``symbol`` in one block ending with ``separator``."""
    letters = sorted(alphabet - {separator})
    edges = [(0, s, 0, 1 if s == symbol else 0) for s in letters]
    edges.append((0, separator, 1, 0))
    return wa.WeightedAutomaton.from_edges({0, 1}, alphabet, {0}, {1}, edges)


CORPUS_SEED = 20241018


def random_edges(
    rng: np.random.Generator,
    size: int,
    alphabet: tuple[str, ...],
    *,
    branching: float = 0.3,
    monotone: bool = False,
) -> list[tuple[int, str, int, int]]:
    """Random weighted transitions with weights in [-3, 3]; monotone ones never go to a lower state."""
    edges = []
    for p in range(size):
        for symbol in alphabet:
            if rng.random() < 0.3:
                continue
            targets = np.arange(p if monotone else 0, size)
            count = 2 if len(targets) > 1 and rng.random() < branching else 1
            for q in rng.choice(targets, size=count, replace=False):
                edges.append((p, symbol, int(q), int(rng.integers(-3, 4))))
    return edges


def random_weighted_automaton(
    rng: np.random.Generator,
    max_states: int = 4,
    alphabet: tuple[str, ...] = ("a", "b"),
    *,
    deterministic: bool = False,
    monotone: bool = False,
) -> wa.WeightedAutomaton:
    """Random unambiguous automaton with a nonempty domain, drawn until one is found."""
    while True:
        size = int(rng.integers(1, max_states + 1))
        edges = random_edges(rng, size, alphabet, branching=0.0 if deterministic else 0.3, monotone=monotone)
        final = {int(q) for q in rng.choice(size, size=int(rng.integers(1, size + 1)), replace=False)}
        m = wa.WeightedAutomaton.from_edges(range(size), alphabet, {0}, final, edges)
        if not am.is_empty(m.underlying) and m.is_unambiguous:
            return m


def random_pwl(rng: np.random.Generator, arity: int, depth: int, *, simple: bool = False) -> pw.Pwl:
    """Random piecewise-linear function of nesting depth at most ``depth``; simple ones use max, min, + and - only."""
    if depth == 0 or rng.random() < 0.25:
        if not simple and rng.random() < 0.2:
            return pw.Const(int(rng.integers(-3, 4)))
        return pw.Arg(int(rng.integers(arity)))
    kinds = ["max", "min", "add", "sub"] if simple else ["max", "min", "add", "sub", "scale"]
    kind = str(rng.choice(kinds))
    left = random_pwl(rng, arity, depth - 1, simple=simple)
    if kind == "scale":
        return pw.Scale(int(rng.choice([-2, -1, 2])), left)
    right = random_pwl(rng, arity, depth - 1, simple=simple)
    match kind:
        case "max":
            return pw.Max((left, right))
        case "min":
            return pw.Min((left, right))
        case "add":
            return pw.Add(left, right)
    return pw.minus(left, right)


def random_star_free(
    rng: np.random.Generator,
    max_atoms: int = 3,
    max_states: int = 4,
    *,
    simple: bool = False,
    deterministic: bool = False,
) -> ex.Expression:
    """Random combinator of depth at most 3 over fresh atoms; the more atoms, the fewer states each."""
    count = int(rng.integers(1, max_atoms + 1))
    states = max(1, max_states - count + 1)
    atoms = tuple(
        ex.Atom(random_weighted_automaton(rng, states, deterministic=deterministic, monotone=True), f"A{i}")
        for i in range(count)
    )
    return ex.Combine(pb.from_pwl(random_pwl(rng, count, 3, simple=simple), count), atoms)


def random_binary(rng: np.random.Generator) -> pb.FunctionalCombinator:
    """One of max, min, plus and minus."""
    return [pb.maximum(), pb.minimum(), pb.plus(), pb.minus()][int(rng.integers(4))]


def random_block_atom(rng: np.random.Generator, alphabet: set[str], inner: str, terminators: str, name: str) -> ex.Atom:
    """Deterministic atom on inner* followed by one terminator, with random weights."""
    edges = [(0, s, 0, int(rng.integers(-3, 4))) for s in inner]
    edges += [(0, s, 1, int(rng.integers(-3, 4))) for s in terminators]
    return ex.Atom(wa.WeightedAutomaton.from_edges({0, 1}, alphabet, {0}, {1}, edges), name)


def random_total_atom(rng: np.random.Generator, alphabet: set[str], name: str) -> ex.Atom:
    """One-state atom defined on every word, with a random weight per letter."""
    edges = [(0, s, 0, int(rng.integers(-3, 4))) for s in sorted(alphabet)]
    return ex.Atom(wa.WeightedAutomaton.from_edges({0}, alphabet, {0}, {0}, edges), name)


def random_block_sum(rng: np.random.Generator, shape: int) -> ex.Expression:
    """Star depth 1 expression over {a, b} iterating over the blocks a*b."""
    alphabet = {"a", "b"}
    x = random_block_atom(rng, alphabet, "a", "b", "X")
    match shape % 4:
        case 0:
            return ex.Star(x)
        case 1:
            return ex.Star(ex.Combine(random_binary(rng), (x, random_block_atom(rng, alphabet, "a", "b", "Y"))))
        case 2:
            return ex.Combine(random_binary(rng), (ex.Star(x), random_total_atom(rng, alphabet, "W")))
    return ex.Combine(random_binary(rng), (ex.Star(x), ex.Star(random_block_atom(rng, alphabet, "a", "b", "Y"))))


def random_nested_sum(rng: np.random.Generator, shape: int) -> ex.Expression:
    """Star depth 2 expression over {a, b, c}: blocks a*(b|c) inside blocks {a, b}*c."""
    alphabet = {"a", "b", "c"}
    inner = ex.Star(random_block_atom(rng, alphabet, "a", "bc", "X"))
    outer = ex.Star(ex.Combine(random_binary(rng), (inner, random_block_atom(rng, alphabet, "ab", "c", "Y"))))
    if shape % 2 == 0:
        return outer
    return ex.Combine(random_binary(rng), (outer, random_total_atom(rng, alphabet, "W")))


@pytest.fixture
def alphabet_ab() -> frozenset[str]:
    """Fixture for the two-letter alphabet."""
    return frozenset({"a", "b"})


@pytest.fixture
def count_a() -> wa.WeightedAutomaton:
    """Fixture counting the a's of words over {a, b}."""
    return counting_automaton("a", {"a", "b"})


@pytest.fixture
def count_b() -> wa.WeightedAutomaton:
    """Fixture counting the b's of words over {a, b}."""
    return counting_automaton("b", {"a", "b"})


@pytest.fixture
def atom_a(count_a: wa.WeightedAutomaton) -> ex.Atom:
    """Fixture for the atom of count_a."""
    return ex.Atom(count_a, "count_a")


@pytest.fixture
def atom_b(count_b: wa.WeightedAutomaton) -> ex.Atom:
    """Fixture for the atom of count_b."""
    return ex.Atom(count_b, "count_b")


@pytest.fixture
def difference(atom_a: ex.Atom, atom_b: ex.Atom) -> ex.Expression:
    """Fixture for count_a - count_b."""
    return ex.Combine(pb.minus(), (atom_a, atom_b))


@pytest.fixture
def iterexpr() -> ex.Expression:
    """Fixture for the iterated sum of max(#a, #b) over $-terminated blocks."""
    alphabet = {"a", "b", "$"}
    block_a = ex.Atom(block_counter("a", alphabet), "A_a")
    block_b = ex.Atom(block_counter("b", alphabet), "A_b")
    return ex.Star(ex.Combine(pb.maximum(2), (block_a, block_b)))


@pytest.fixture
def last_block() -> wa.WeightedAutomaton:
    """Fixture for the ambiguous automaton guessing the last block of a's."""
    edges = [
        ("p", "a", "p", 0),
        ("p", "b", "p", 0),
        ("p", "a", "q", 1),
        ("q", "a", "q", 1),
        ("q", "b", "r", 0),
        ("r", "b", "r", 0),
    ]
    return wa.WeightedAutomaton.from_edges({"p", "q", "r"}, {"a", "b"}, {"p"}, {"q", "r"}, edges)


@pytest.fixture
def regex_nfa() -> Callable[..., am.Nfa]:
    """Fixture compiling a regular expression over {a, b}."""

    def build(text: str, alphabet: frozenset[str] = frozenset({"a", "b"})) -> am.Nfa:
        return rx.to_nfa(rx.parse_regex(text, alphabet), alphabet)

    return build


@pytest.fixture
def counting_text() -> str:
    """Fixture for a definition file with the counting automata over {a, b}."""
    return """\
# counting automata
alphabet a b

wa count_a unambiguous {
  initial p; final p
  p a p : 1
  p b p : 0
}

wa count_b deterministic {
  initial p; final p
  p a p : 0; p b p : 1
}

expr D = count_a - count_b
expr M = min(count_a, count_b)
expr X = max(count_a, count_b)
expr Dist = abs(count_a, count_b)
"""


@pytest.fixture
def wca_text() -> str:
    """Fixture for the two-level chop automaton summing block maxima before and after a bullet."""
    return """\
alphabet a b c d $ •

wa Aa {
  initial p; final q
  p a p : 1; p b p : 0; p c p : 0; p d p : 0
  p $ q : 0
}

wa Ab {
  initial p; final q
  p a p : 0; p b p : 1; p c p : 0; p d p : 0
  p $ q : 0
}

wa Ac {
  initial p; final q
  p a p : 0; p b p : 0; p c p : 1; p d p : 0
  p $ q : 0
}

wa Ad {
  initial p; final q
  p a p : 0; p b p : 0; p c p : 0; p d p : 1
  p $ q : 0
}

wa Bullet {
  initial p; final q
  p • q : 0
}

chop C1 {
  initial s; final t
  s -> s : /[abcd]*$/ @ max(Aa, Ab)
  s -> t : /•/ @ Bullet
}

chop C2 {
  initial s; final s
  s -> s : /[abcd]*$/ @ max(Ac, Ad)
}

chop Main {
  initial m0; final m1 m2
  m0 -> m1 : /([abcd]*$)*•/ @ C1
  m1 -> m2 : /([abcd]*$)+/ @ C2
}
"""


@pytest.fixture
def definitions_file(tmp_path: pathlib.Path, counting_text: str) -> pathlib.Path:
    """Fixture writing the counting definitions to an isolated temporary file."""
    path = tmp_path / "defs.txt"
    path.write_text(counting_text, encoding="utf-8")
    return path


@pytest.fixture
def counting_defs(counting_text: str) -> df.DefinitionFile:
    """Fixture for the parsed counting definitions."""
    return df.parse_definitions(counting_text)


@pytest.fixture
def default_config(tmp_path: pathlib.Path) -> dict:
    """Fixture for the default configuration, loaded from an isolated file."""
    config_path = tmp_path / "config.yaml"
    cu.create_default_config(config_path)
    return cu.load_config(config_path)


@pytest.fixture
def sample_report() -> dict[str, object]:
    """Fixture for an ordered report with nested, list and missing values."""
    return {
        "verdict": "yes",
        "witness_word": "aab•",
        "witness_value": 2,
        "status": "exact",
        "bounds": {"step_bound": 18, "exhausted": False},
        "values": [0, 1],
        "shortest_word": None,
    }


@pytest.fixture
def corpus_rng() -> np.random.Generator:
    """Fixture for a seeded random generator, fresh in every test."""
    return np.random.default_rng(CORPUS_SEED)


@pytest.fixture
def automaton_factory(corpus_rng: np.random.Generator) -> Callable[..., wa.WeightedAutomaton]:
    """Fixture drawing random unambiguous weighted automata from the seeded generator."""

    def build(**options: object) -> wa.WeightedAutomaton:
        return random_weighted_automaton(corpus_rng, **options)

    return build


@pytest.fixture(scope="session")
def star_free_corpus() -> list[ex.Expression]:
    """Fixture for 50 star-free expressions: at most 3 atoms of at most 4 states, combinators of depth at most 3."""
    rng = np.random.default_rng(CORPUS_SEED)
    return [random_star_free(rng) for _ in range(50)]


@pytest.fixture(scope="session")
def s_expression_corpus() -> list[ex.Expression]:
    """Fixture for 20 s-expressions over deterministic atoms."""
    rng = np.random.default_rng(CORPUS_SEED + 1)
    return [random_star_free(rng, simple=True, deterministic=True) for _ in range(20)]


@pytest.fixture(scope="session")
def micro_corpus() -> list[ex.Expression]:
    """Fixture for 30 star-free expressions with at most 2 atoms of at most 3 states."""
    rng = np.random.default_rng(CORPUS_SEED + 2)
    return [random_star_free(rng, max_atoms=2, max_states=3) for _ in range(30)]


@pytest.fixture(scope="session")
def synchronised_corpus() -> list[list[ex.Expression]]:
    """Fixture for 20 synchronised tuples of one or two expressions, 12 of star depth 1 and 8 of star depth 2."""
    rng = np.random.default_rng(CORPUS_SEED + 3)
    tuples = []
    for i in range(12):
        group = [random_block_sum(rng, i)]
        if i % 3 == 0:
            group.append(random_block_sum(rng, i + 1))
        tuples.append(group)
    for i in range(8):
        group = [random_nested_sum(rng, i)]
        if i % 4 == 0:
            group.append(random_nested_sum(rng, i + 1))
        tuples.append(group)
    return tuples


@pytest.fixture
def language_atom(regex_nfa: Callable[..., am.Nfa], corpus_rng: np.random.Generator) -> Callable[[str, str], ex.Atom]:
    """Fixture building deterministic atoms on the language of a regular expression, with random weights."""

    def build(text: str, name: str) -> ex.Atom:
        d = am.trim(am.determinize(regex_nfa(text)))
        edges = [(p, s, q, int(corpus_rng.integers(-3, 4))) for p, s, q in am.ordered(d.transitions)]
        return ex.Atom(wa.WeightedAutomaton.from_edges(d.states, d.alphabet, d.initial, d.final, edges), name)

    return build
