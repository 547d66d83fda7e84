# SPDX-FileCopyrightText: 2022-present Artur Drogunow <artur.drogunow@zf.com>
#
# SPDX-License-Identifier: MIT
"""LTL abstract syntax, normal forms and syntactic fragments."""

import functools
from dataclasses import dataclass
from enum import Enum
from typing import FrozenSet, Iterator, List, Optional, Tuple

from ..utils import ErrorCode, SynthesisError


class Formula:
    """Base class of all LTL syntax tree nodes.

    Nodes are immutable and hashable. Structural equality is formula
    identity, which makes formulas usable as automaton state keys.
    """

    __slots__ = ()

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class TrueConst(Formula):
    pass


@dataclass(frozen=True)
class FalseConst(Formula):
    pass


@dataclass(frozen=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True)
class NegAtom(Formula):
    name: str


@dataclass(frozen=True)
class Not(Formula):
    child: Formula


@dataclass(frozen=True)
class Next(Formula):
    child: Formula


@dataclass(frozen=True)
class Finally(Formula):
    child: Formula


@dataclass(frozen=True)
class Globally(Formula):
    child: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Until(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Release(Formula):
    left: Formula
    right: Formula


TRUE = TrueConst()
FALSE = FalseConst()

_UNARY_TYPES = (Not, Next, Finally, Globally)
_BINARY_TYPES = (And, Or, Implies, Until, Release)


class Fragment(Enum):
    SAFETY = "safety"
    COSAFETY = "cosafety"
    BOTH = "both"
    NEITHER = "neither"


@dataclass(frozen=True)
class Partition:
    """Split of the propositions into environment and controller variables.

    Declaration order is kept: it fixes the letter encoding and the
    decision diagram variable order.
    """

    inputs: Tuple[str, ...]
    outputs: Tuple[str, ...]

    def __post_init__(self) -> None:
        names = self.inputs + self.outputs
        if len(set(names)) != len(names):
            shared = sorted(
                {name for name in names if names.count(name) > 1}
            )
            err_msg = f"propositions declared twice: {', '.join(shared)}"
            raise SynthesisError(ErrorCode.PARTITION_ERROR, err_msg, "Partition")

    @property
    def alphabet(self) -> Tuple[str, ...]:
        """Inputs followed by outputs."""
        return self.inputs + self.outputs

    def check(self, formula: Formula) -> None:
        """Raise if `formula` mentions an undeclared proposition.

        Declared propositions that `formula` does not use are allowed.
        """
        unknown = atoms(formula) - set(self.alphabet)
        if unknown:
            err_msg = f"undeclared propositions: {', '.join(sorted(unknown))}"
            raise SynthesisError(
                ErrorCode.PARTITION_ERROR, err_msg, "Partition.check"
            )


def children(f: Formula) -> Tuple[Formula, ...]:
    if isinstance(f, _UNARY_TYPES):
        return (f.child,)
    if isinstance(f, _BINARY_TYPES):
        return (f.left, f.right)
    return ()


def subformulas(f: Formula) -> Iterator[Formula]:
    """Pre-order traversal."""
    stack: List[Formula] = [f]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(children(node)))


def atoms(f: Formula) -> FrozenSet[str]:
    return frozenset(
        node.name for node in subformulas(f) if isinstance(node, (Atom, NegAtom))
    )


def is_nnf(f: Formula) -> bool:
    return not any(isinstance(node, (Not, Implies)) for node in subformulas(f))


def _require_nnf(f: Formula, function: str) -> None:
    if not is_nnf(f):
        err_msg = f"formula is not in negation normal form: {to_text(f)}"
        raise SynthesisError(ErrorCode.NOT_NNF, err_msg, function)


def _push(f: Formula, negated: bool) -> Formula:  # noqa: PLR0911, PLR0912
    if isinstance(f, TrueConst):
        return FALSE if negated else TRUE
    if isinstance(f, FalseConst):
        return TRUE if negated else FALSE
    if isinstance(f, Atom):
        return NegAtom(f.name) if negated else f
    if isinstance(f, NegAtom):
        return Atom(f.name) if negated else f
    if isinstance(f, Not):
        return _push(f.child, not negated)
    if isinstance(f, Next):
        return Next(_push(f.child, negated))
    if isinstance(f, Finally):
        child = _push(f.child, negated)
        return Globally(child) if negated else Finally(child)
    if isinstance(f, Globally):
        child = _push(f.child, negated)
        return Finally(child) if negated else Globally(child)
    if isinstance(f, Implies):
        # l -> r is !l | r
        left = _push(f.left, not negated)
        right = _push(f.right, negated)
        return And(left, right) if negated else Or(left, right)
    if isinstance(f, (And, Or, Until, Release)):
        left = _push(f.left, negated)
        right = _push(f.right, negated)
        if not negated:
            return type(f)(left, right)
        dual = {And: Or, Or: And, Until: Release, Release: Until}[type(f)]
        return dual(left, right)
    err_msg = f"unknown formula node {f!r}"
    raise TypeError(err_msg)


def to_nnf(f: Formula) -> Formula:
    """Return the negation normal form of `f`.

    Implications are rewritten as disjunctions and negations are pushed to
    the atoms using the U/R, F/G and X dualities.
    """
    return _push(f, negated=False)


def negate_nnf(f: Formula) -> Formula:
    """Return the NNF of ``!f`` for an NNF formula `f`.

    This is an involution: ``negate_nnf(negate_nnf(f)) == f``.
    """
    _require_nnf(f, "negate_nnf")
    return _push(f, negated=True)


def classify(f: Formula) -> Fragment:
    """Return the syntactic fragment of the NNF formula `f`.

    ``F`` counts as an Until and ``G`` as a Release occurrence.
    """
    _require_nnf(f, "classify")
    has_until = has_release = False
    for node in subformulas(f):
        if isinstance(node, (Until, Finally)):
            has_until = True
        elif isinstance(node, (Release, Globally)):
            has_release = True
    if has_until and has_release:
        return Fragment.NEITHER
    if has_until:
        return Fragment.COSAFETY
    if has_release:
        return Fragment.SAFETY
    return Fragment.BOTH


def is_safety(f: Formula) -> bool:
    return classify(f) in (Fragment.SAFETY, Fragment.BOTH)


def is_cosafety(f: Formula) -> bool:
    return classify(f) in (Fragment.COSAFETY, Fragment.BOTH)


def find_violation(f: Formula) -> Optional[Formula]:
    """Return the first subformula that keeps `f` out of the safety fragment."""
    for node in subformulas(f):
        if isinstance(node, (Until, Finally)):
            return node
    return None


def expand_until(f: Formula, length: int) -> Formula:
    """Bound every eventuality of `f` to `length` steps.

    Each ``a U b`` is unfolded ``length - 1`` times to ``b | (a & X (a U b))``
    and the innermost remaining ``a U b`` is replaced by ``b``. ``F b`` is
    treated as ``true U b``, with the ``true`` conjunct dropped. Release
    operators are left in place.
    """
    _require_nnf(f, "expand_until")
    if length < 1:
        err_msg = f"expansion length must be positive, got {length}"
        raise SynthesisError(ErrorCode.INVALID_ARGUMENT, err_msg, "expand_until")

    @functools.lru_cache(maxsize=None)
    def _expand(node: Formula) -> Formula:
        if isinstance(node, Until):
            hold, goal = _expand(node.left), _expand(node.right)
            result = goal
            for _ in range(length - 1):
                result = Or(goal, And(hold, Next(result)))
            return result
        if isinstance(node, Finally):
            goal = _expand(node.child)
            result = goal
            for _ in range(length - 1):
                result = Or(goal, Next(result))
            return result
        if isinstance(node, _UNARY_TYPES):
            return type(node)(_expand(node.child))
        if isinstance(node, _BINARY_TYPES):
            return type(node)(_expand(node.left), _expand(node.right))
        return node

    return _expand(f)


def _flatten(f: Formula, kind: type) -> Iterator[Formula]:
    if isinstance(f, kind):
        yield from _flatten(f.left, kind)  # type: ignore[attr-defined]
        yield from _flatten(f.right, kind)  # type: ignore[attr-defined]
    else:
        yield f


def _junction(kind: type, operands: List[Formula]) -> Formula:
    unit, zero = (TRUE, FALSE) if kind is And else (FALSE, TRUE)
    unique = set()
    for operand in operands:
        for part in _flatten(operand, kind):
            if part == zero:
                return zero
            if part != unit:
                unique.add(part)
    if not unique:
        return unit
    ordered = sorted(unique, key=to_text, reverse=True)
    result = ordered[0]
    for part in ordered[1:]:
        result = kind(part, result)
    return result


def conjunction(*operands: Formula) -> Formula:
    """Simplified, canonically ordered conjunction of `operands`."""
    return _junction(And, list(operands))


def disjunction(*operands: Formula) -> Formula:
    """Simplified, canonically ordered disjunction of `operands`."""
    return _junction(Or, list(operands))


@functools.lru_cache(maxsize=65536)
def simplify(f: Formula) -> Formula:  # noqa: PLR0911
    """Apply true/false absorption and canonical ordering of and/or.

    Tautologies such as ``p | !p`` are deliberately kept, and so is ``X true``:
    on finite traces both need another letter to hold.
    """
    if isinstance(f, (And, Or)):
        return _junction(type(f), [simplify(f.left), simplify(f.right)])
    if isinstance(f, Until):
        left, right = simplify(f.left), simplify(f.right)
        if right in (TRUE, FALSE):
            return right
        if left == FALSE:
            return right
        return Until(left, right)
    if isinstance(f, Release):
        left, right = simplify(f.left), simplify(f.right)
        if right in (TRUE, FALSE):
            return right
        if left == TRUE:
            return right
        return Release(left, right)
    if isinstance(f, (Finally, Globally)):
        child = simplify(f.child)
        if child in (TRUE, FALSE):
            return child
        return type(f)(child)
    if isinstance(f, Not):
        child = simplify(f.child)
        if child == TRUE:
            return FALSE
        if child == FALSE:
            return TRUE
        return Not(child)
    if isinstance(f, Next):
        return Next(simplify(f.child))
    if isinstance(f, Implies):
        return Implies(simplify(f.left), simplify(f.right))
    return f


_BINARY_SYMBOLS = {And: "&", Or: "|", Implies: "->", Until: "U", Release: "R"}
_UNARY_SYMBOLS = {Not: "!", Next: "X ", Finally: "F ", Globally: "G "}


@functools.lru_cache(maxsize=65536)
def to_text(f: Formula) -> str:
    """Print `f` in the input grammar.

    Parsing the text gives `f` back for every parsed or NNF formula
    (``!p`` is read as a negated atom).
    """

    def operand(node: Formula) -> str:
        text = to_text(node)
        return f"({text})" if isinstance(node, _BINARY_TYPES) else text

    if isinstance(f, TrueConst):
        return "true"
    if isinstance(f, FalseConst):
        return "false"
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, NegAtom):
        return f"!{f.name}"
    if isinstance(f, _UNARY_TYPES):
        return _UNARY_SYMBOLS[type(f)] + operand(f.child)
    if isinstance(f, _BINARY_TYPES):
        symbol = _BINARY_SYMBOLS[type(f)]
        return f"{operand(f.left)} {symbol} {operand(f.right)}"
    err_msg = f"unknown formula node {f!r}"
    raise TypeError(err_msg)
