"""Brute-force oracles shared by the test modules."""

import itertools
from typing import Callable, FrozenSet, Iterator, List, Sequence, Set, Tuple

import numpy as np

from pysafesynth.dfa import ExplicitDFA, SafetyAutomaton
from pysafesynth.ltl import (
    FALSE,
    TRUE,
    And,
    Atom,
    Finally,
    Formula,
    Globally,
    Implies,
    NegAtom,
    Next,
    Not,
    Or,
    Release,
    Trace,
    Until,
    eval_finite_good_prefix,
    simplify,
)
from pysafesynth.utils import Letter, index_letter

Word = Tuple[Letter, ...]


def all_letters(alphabet: Sequence[str]) -> List[Letter]:
    return [index_letter(alphabet, i) for i in range(1 << len(alphabet))]


def all_words(alphabet: Sequence[str], max_length: int, min_length: int = 0) -> Iterator[Word]:
    letters = all_letters(alphabet)
    for length in range(min_length, max_length + 1):
        yield from itertools.product(letters, repeat=length)


def is_good_prefix(psi: Formula, word: Word) -> bool:
    """Finite-trace oracle, extended to the empty word."""
    if not word:
        return simplify(psi) == TRUE
    return eval_finite_good_prefix(psi, Trace.of(word))


def residual_class_count(
    member: Callable[[Word], bool],
    alphabet: Sequence[str],
    word_length: int,
    suffix_length: int,
) -> int:
    """Number of distinct residual languages, told apart by short suffixes."""
    suffixes = list(all_words(alphabet, suffix_length))
    signatures = {
        tuple(member(word + suffix) for suffix in suffixes)
        for word in all_words(alphabet, word_length)
    }
    return len(signatures)


def losing_states(dsa: SafetyAutomaton, input_bits: int) -> Set[int]:
    """Backward attractor of the stuck positions, environment moving first."""
    table = dsa.table()
    num_inputs = 1 << input_bits
    num_outputs = table.shape[1] // num_inputs
    losing: Set[int] = set()
    changed = True
    while changed:
        changed = False
        for state in range(dsa.num_states):
            if state in losing:
                continue
            for x in range(num_inputs):
                targets = [int(table[state, x | y << input_bits]) for y in range(num_outputs)]
                if all(t < 0 or t in losing for t in targets):
                    losing.add(state)
                    changed = True
                    break
    return losing


def random_safety_formula(
    rng: np.random.Generator, atoms: Sequence[str], depth: int
) -> Formula:
    """Random Until-free NNF formula of at most the given operator depth."""
    if depth == 0 or rng.random() < 0.25:
        choice = int(rng.integers(2 * len(atoms) + 2))
        if choice == 2 * len(atoms):
            return TRUE
        if choice == 2 * len(atoms) + 1:
            return FALSE
        name = atoms[choice // 2]
        return Atom(name) if choice % 2 == 0 else NegAtom(name)
    kind = int(rng.integers(5))
    left = random_safety_formula(rng, atoms, depth - 1)
    if kind == 0:
        return Next(left)
    if kind == 1:
        return Globally(left)
    right = random_safety_formula(rng, atoms, depth - 1)
    if kind == 2:
        return And(left, right)
    if kind == 3:
        return Or(left, right)
    return Release(left, right)


def _random_leaf(rng: np.random.Generator, atoms: Sequence[str]) -> Formula:
    choice = int(rng.integers(2 * len(atoms) + 2))
    if choice == 2 * len(atoms):
        return TRUE
    if choice == 2 * len(atoms) + 1:
        return FALSE
    name = atoms[choice // 2]
    return Atom(name) if choice % 2 == 0 else NegAtom(name)


def random_nnf_formula(
    rng: np.random.Generator, atoms: Sequence[str], depth: int
) -> Formula:
    """Random NNF formula with every temporal operator, eventualities included."""
    if depth == 0 or rng.random() < 0.2:
        return _random_leaf(rng, atoms)
    kind = int(rng.integers(7))
    left = random_nnf_formula(rng, atoms, depth - 1)
    if kind < 3:
        return (Next, Finally, Globally)[kind](left)
    right = random_nnf_formula(rng, atoms, depth - 1)
    return (And, Or, Until, Release)[kind - 3](left, right)


def random_formula(
    rng: np.random.Generator, atoms: Sequence[str], depth: int
) -> Formula:
    """Like :func:`random_nnf_formula`, with negations and implications anywhere."""
    if depth == 0 or rng.random() < 0.2:
        return _random_leaf(rng, atoms)
    kind = int(rng.integers(9))
    left = random_formula(rng, atoms, depth - 1)
    if kind < 4:
        return (Next, Finally, Globally, Not)[kind](left)
    right = random_formula(rng, atoms, depth - 1)
    return (And, Or, Until, Release, Implies)[kind - 4](left, right)


def safety_corpus(
    atoms: Sequence[str], depth: int, count: int, seed: int = 0
) -> List[Formula]:
    """`count` distinct random safety formulas, reproducible from `seed`."""
    rng = np.random.default_rng(seed)
    seen: Set[Formula] = set()
    corpus: List[Formula] = []
    attempts = 0
    while len(corpus) < count and attempts < 100 * count:
        attempts += 1
        formula = random_safety_formula(rng, atoms, depth)
        if formula not in seen:
            seen.add(formula)
            corpus.append(formula)
    return corpus


def letters_of(word: Word) -> FrozenSet[str]:
    return frozenset().union(*word) if word else frozenset()


def is_minimal(d: ExplicitDFA) -> bool:
    """Every state is reachable and no two states are equivalent.

    Table filling over the dense transition table: a pair is marked once it
    disagrees on acceptance or some letter leads to a marked pair.
    """
    table = d.transition_table()
    seen = {d.initial}
    order = [d.initial]
    for state in order:
        for target in table[state]:
            if int(target) not in seen:
                seen.add(int(target))
                order.append(int(target))
    if len(seen) != d.num_states:
        return False
    accepting = np.zeros(d.num_states, dtype=bool)
    accepting[list(d.accepting)] = True
    marked = accepting[:, None] != accepting[None, :]
    while True:
        updated = marked | marked[table[:, None, :], table[None, :, :]].any(axis=2)
        if (updated == marked).all():
            break
        marked = updated
    return bool(marked[~np.eye(d.num_states, dtype=bool)].all())
