# SPDX-FileCopyrightText: 2022-present Artur Drogunow <artur.drogunow@zf.com>
#
# SPDX-License-Identifier: MIT
"""Reference semantics on ultimately periodic and on finite traces.

These evaluators are deliberately direct: they are the oracles the automata
constructions are tested against.
"""

from dataclasses import dataclass
from typing import AbstractSet, Callable, Dict, Iterable, Optional, Tuple

import numpy as np
import numpy.typing as npt

from ..utils import ErrorCode, Letter, SynthesisError
from .formula import (
    And,
    Atom,
    FalseConst,
    Finally,
    Formula,
    Globally,
    Implies,
    NegAtom,
    Next,
    Not,
    Or,
    Release,
    TrueConst,
    Until,
    is_cosafety,
    is_nnf,
    to_text,
)

_Labels = npt.NDArray[np.bool_]


def _as_letters(letters: Iterable[AbstractSet[str]]) -> Tuple[Letter, ...]:
    return tuple(frozenset(item) for item in letters)


def _check_alphabet(letters: Tuple[Letter, ...], alphabet: AbstractSet[str]) -> None:
    for position, item in enumerate(letters):
        unknown = item - alphabet
        if unknown:
            err_msg = (
                f"letter {position} uses propositions outside the alphabet: "
                f"{', '.join(sorted(unknown))}"
            )
            raise SynthesisError(ErrorCode.INVALID_ARGUMENT, err_msg, "Trace")


@dataclass(frozen=True)
class Trace:
    """Nonempty finite trace; ``letters[i]`` holds the atoms true at instant i."""

    letters: Tuple[Letter, ...]

    def __post_init__(self) -> None:
        if not self.letters:
            err_msg = "a trace has at least one letter"
            raise SynthesisError(ErrorCode.INVALID_ARGUMENT, err_msg, "Trace")

    @classmethod
    def of(
        cls,
        letters: Iterable[AbstractSet[str]],
        alphabet: Optional[AbstractSet[str]] = None,
    ) -> "Trace":
        trace = cls(_as_letters(letters))
        if alphabet is not None:
            _check_alphabet(trace.letters, alphabet)
        return trace

    @property
    def last(self) -> int:
        return len(self.letters) - 1

    def __len__(self) -> int:
        return len(self.letters)


@dataclass(frozen=True)
class LassoTrace:
    """The infinite trace ``stem . loop . loop . ...``."""

    stem: Tuple[Letter, ...]
    loop: Tuple[Letter, ...]

    def __post_init__(self) -> None:
        if not self.loop:
            err_msg = "the loop of a lasso trace has at least one letter"
            raise SynthesisError(ErrorCode.INVALID_ARGUMENT, err_msg, "LassoTrace")

    @classmethod
    def of(
        cls,
        stem: Iterable[AbstractSet[str]],
        loop: Iterable[AbstractSet[str]],
        alphabet: Optional[AbstractSet[str]] = None,
    ) -> "LassoTrace":
        trace = cls(_as_letters(stem), _as_letters(loop))
        if alphabet is not None:
            _check_alphabet(trace.stem + trace.loop, alphabet)
        return trace


def _label(
    f: Formula,
    letters: Tuple[Letter, ...],
    cache: Dict[Formula, _Labels],
    temporal: Callable[[Formula, Callable[[Formula], _Labels]], _Labels],
) -> _Labels:
    if f in cache:
        return cache[f]

    def sub(node: Formula) -> _Labels:
        return _label(node, letters, cache, temporal)

    size = len(letters)
    if isinstance(f, TrueConst):
        result = np.ones(size, dtype=bool)
    elif isinstance(f, FalseConst):
        result = np.zeros(size, dtype=bool)
    elif isinstance(f, Atom):
        result = np.array([f.name in item for item in letters], dtype=bool)
    elif isinstance(f, NegAtom):
        result = np.array([f.name not in item for item in letters], dtype=bool)
    elif isinstance(f, Not):
        result = np.logical_not(sub(f.child))
    elif isinstance(f, And):
        result = np.logical_and(sub(f.left), sub(f.right))
    elif isinstance(f, Or):
        result = np.logical_or(sub(f.left), sub(f.right))
    elif isinstance(f, Implies):
        result = np.logical_or(np.logical_not(sub(f.left)), sub(f.right))
    else:
        result = temporal(f, sub)
    cache[f] = result
    return result


def eval_lasso(f: Formula, t: LassoTrace) -> bool:
    """Decide whether ``stem . loop^omega`` satisfies `f` at position 0.

    Every position of the unrolled lasso is labelled bottom-up; the
    successor of the last position is the first loop position. Until and
    Release labels are least and greatest fixpoints, reached after two
    backward passes over the positions.
    """
    letters = t.stem + t.loop
    size = len(letters)
    succ = np.arange(1, size + 1)
    succ[-1] = len(t.stem)

    def fixpoint(left: _Labels, right: _Labels, least: bool) -> _Labels:
        labels = np.full(size, not least, dtype=bool)
        for _ in range(2):
            for i in reversed(range(size)):
                later = labels[succ[i]]
                if least:
                    labels[i] = right[i] or (left[i] and later)
                else:
                    labels[i] = right[i] and (left[i] or later)
        return labels

    def temporal(f: Formula, sub: Callable[[Formula], _Labels]) -> _Labels:
        if isinstance(f, Next):
            return sub(f.child)[succ]
        if isinstance(f, Until):
            return fixpoint(sub(f.left), sub(f.right), least=True)
        if isinstance(f, Release):
            return fixpoint(sub(f.left), sub(f.right), least=False)
        if isinstance(f, Finally):
            return fixpoint(np.ones(size, dtype=bool), sub(f.child), least=True)
        if isinstance(f, Globally):
            return fixpoint(np.zeros(size, dtype=bool), sub(f.child), least=False)
        err_msg = f"unknown formula node {f!r}"
        raise TypeError(err_msg)

    return bool(_label(f, letters, {}, temporal)[0])


def _require_cosafety(psi: Formula, function: str) -> None:
    if not (is_nnf(psi) and is_cosafety(psi)):
        err_msg = f"formula is not co-safety: {to_text(psi)}"
        raise SynthesisError(ErrorCode.FRAGMENT_VIOLATION, err_msg, function)


def eval_finite_good_prefix(psi: Formula, rho: Trace) -> bool:
    """Decide whether `rho` is a good prefix of the co-safety formula `psi`.

    Quantifiers range over the positions of `rho` only: ``X`` fails at the
    last position and the witness of ``U`` must lie within the trace.
    """
    _require_cosafety(psi, "eval_finite_good_prefix")
    letters = rho.letters
    size = len(letters)

    def temporal(f: Formula, sub: Callable[[Formula], _Labels]) -> _Labels:
        if isinstance(f, Next):
            return np.append(sub(f.child)[1:], False)
        if isinstance(f, Until):
            left, right = sub(f.left), sub(f.right)
            labels = np.zeros(size, dtype=bool)
            later = False
            for i in reversed(range(size)):
                later = bool(right[i] or (left[i] and later))
                labels[i] = later
            return labels
        if isinstance(f, Finally):
            reached = np.logical_or.accumulate(sub(f.child)[::-1])
            return reached[::-1].copy()  # type: ignore[no-any-return]
        err_msg = f"unexpected node in co-safety formula: {f!r}"
        raise TypeError(err_msg)

    return bool(_label(psi, letters, {}, temporal)[0])


def holds_at_end(psi: Formula, item: AbstractSet[str]) -> bool:  # noqa: PLR0911
    """Evaluate a co-safety formula at the last position of a trace.

    Only the letter at that position matters: ``X`` has no successor there.
    """
    if isinstance(psi, TrueConst):
        return True
    if isinstance(psi, FalseConst):
        return False
    if isinstance(psi, Atom):
        return psi.name in item
    if isinstance(psi, NegAtom):
        return psi.name not in item
    if isinstance(psi, And):
        return holds_at_end(psi.left, item) and holds_at_end(psi.right, item)
    if isinstance(psi, Or):
        return holds_at_end(psi.left, item) or holds_at_end(psi.right, item)
    if isinstance(psi, Next):
        return False
    if isinstance(psi, Until):
        return holds_at_end(psi.right, item)
    if isinstance(psi, Finally):
        return holds_at_end(psi.child, item)
    err_msg = f"unexpected node in co-safety formula: {psi!r}"
    raise TypeError(err_msg)
