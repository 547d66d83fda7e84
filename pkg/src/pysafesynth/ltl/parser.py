# SPDX-FileCopyrightText: 2022-present Artur Drogunow <artur.drogunow@zf.com>
#
# SPDX-License-Identifier: MIT
"""Concrete syntax of formulas and partition files."""

import functools
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from lark import Lark, Token, Transformer, v_args
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput

from ..config import RC
from ..utils import ErrorCode, ParseError, SynthesisError
from .formula import (
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
    Partition,
    Release,
    Until,
)

# unary > U, R (right associative) > & > | > -> (right associative)
GRAMMAR = r"""
?start: implication

?implication: disjunction
    | disjunction "->" implication      -> implies

?disjunction: conjunction
    | disjunction "|" conjunction       -> or_

?conjunction: temporal
    | conjunction "&" temporal          -> and_

?temporal: unary
    | unary "U" temporal                -> until
    | unary "R" temporal                -> release

?unary: primary
    | "!" unary                         -> not_
    | "X" unary                         -> next_
    | "F" unary                         -> finally_
    | "G" unary                         -> globally

?primary: "true"                        -> true
    | "false"                           -> false
    | NAME                              -> atom
    | "(" implication ")"

NAME: /[a-zA-Z_][a-zA-Z0-9_]*/

%import common.WS
%ignore WS
"""


@v_args(inline=True)
class _FormulaBuilder(Transformer):  # type: ignore[type-arg]
    def true(self) -> Formula:
        return TRUE

    def false(self) -> Formula:
        return FALSE

    def atom(self, name: Token) -> Formula:
        return Atom(str(name))

    def not_(self, child: Formula) -> Formula:
        if isinstance(child, Atom):
            return NegAtom(child.name)
        return Not(child)

    def next_(self, child: Formula) -> Formula:
        return Next(child)

    def finally_(self, child: Formula) -> Formula:
        return Finally(child)

    def globally(self, child: Formula) -> Formula:
        return Globally(child)

    def implies(self, left: Formula, right: Formula) -> Formula:
        return Implies(left, right)

    def or_(self, left: Formula, right: Formula) -> Formula:
        return Or(left, right)

    def and_(self, left: Formula, right: Formula) -> Formula:
        return And(left, right)

    def until(self, left: Formula, right: Formula) -> Formula:
        return Until(left, right)

    def release(self, left: Formula, right: Formula) -> Formula:
        return Release(left, right)


@functools.lru_cache(maxsize=None)
def _get_parser() -> Lark:
    return Lark(GRAMMAR, parser="lalr", transformer=_FormulaBuilder())


def parse_ltl(text: str) -> Formula:
    """Parse a formula.

    Example::

        >>> parse_ltl("G (r -> X g)")
        Globally(child=Implies(left=Atom(name='r'), right=Next(child=Atom(name='g'))))

    :param text:
        formula in the concrete grammar
    :return:
        the syntax tree
    :raises ~pysafesynth.utils.ParseError:
        on unknown tokens or malformed input
    """
    try:
        return _get_parser().parse(text)  # type: ignore[no-any-return]
    except UnexpectedEOF as exc:
        err_msg = f"unexpected end of input, expected one of {sorted(exc.expected)}"
        line, column = _end_position(text)
        raise ParseError(err_msg, "parse_ltl", line, column) from None
    except UnexpectedCharacters as exc:
        err_msg = f"unknown token {exc.char!r}"
        raise ParseError(err_msg, "parse_ltl", exc.line, exc.column) from None
    except UnexpectedInput as exc:
        token = getattr(exc, "token", None)
        if token is not None and token.type == "$END":
            line, column = _end_position(text)
            err_msg = "unexpected end of input"
        else:
            line, column = exc.line, exc.column
            err_msg = f"unexpected token {token!s}"
        raise ParseError(err_msg, "parse_ltl", line, column) from None


def _end_position(text: str) -> Tuple[int, int]:
    lines = text.split("\n")
    return len(lines), len(lines[-1]) + 1


def parse_partition(text: str) -> Partition:
    """Parse a partition file.

    The file has one ``.inputs`` and one ``.outputs`` line, in either order,
    each followed by whitespace separated proposition names.
    """
    sections: Dict[str, Optional[List[str]]] = {".inputs": None, ".outputs": None}
    for number, raw_line in enumerate(text.splitlines(), start=1):
        fields = raw_line.split()
        if not fields:
            continue
        keyword, names = fields[0], fields[1:]
        if keyword not in sections:
            err_msg = f"line {number}: expected .inputs or .outputs, got {keyword!r}"
            raise SynthesisError(
                ErrorCode.PARTITION_ERROR, err_msg, "parse_partition"
            )
        if sections[keyword] is not None:
            err_msg = f"line {number}: duplicate {keyword} line"
            raise SynthesisError(
                ErrorCode.PARTITION_ERROR, err_msg, "parse_partition"
            )
        sections[keyword] = names

    missing = [keyword for keyword, names in sections.items() if names is None]
    if missing:
        err_msg = f"missing {' and '.join(missing)} line"
        raise SynthesisError(ErrorCode.PARTITION_ERROR, err_msg, "parse_partition")
    return Partition(
        inputs=tuple(sections[".inputs"] or ()),
        outputs=tuple(sections[".outputs"] or ()),
    )


def read_formula(path: Union[str, Path]) -> Formula:
    return parse_ltl(Path(path).read_text(encoding=RC["ENCODING"]))


def read_partition(path: Union[str, Path]) -> Partition:
    return parse_partition(Path(path).read_text(encoding=RC["ENCODING"]))
