# SPDX-FileCopyrightText: 2022-present Artur Drogunow <artur.drogunow@zf.com>
#
# SPDX-License-Identifier: MIT

__all__ = [
    "FALSE",
    "TRUE",
    "And",
    "Atom",
    "FalseConst",
    "Finally",
    "Formula",
    "Fragment",
    "Globally",
    "Implies",
    "LassoTrace",
    "NegAtom",
    "Next",
    "Not",
    "Or",
    "Partition",
    "Release",
    "Trace",
    "TrueConst",
    "Until",
    "atoms",
    "classify",
    "conjunction",
    "disjunction",
    "eval_finite_good_prefix",
    "eval_lasso",
    "expand_until",
    "find_violation",
    "formula",
    "holds_at_end",
    "is_cosafety",
    "is_nnf",
    "is_safety",
    "negate_nnf",
    "parse_ltl",
    "parse_partition",
    "parser",
    "read_formula",
    "read_partition",
    "semantics",
    "simplify",
    "to_nnf",
    "to_text",
]

from . import formula, parser, semantics
from .formula import (
    FALSE,
    TRUE,
    And,
    Atom,
    FalseConst,
    Finally,
    Formula,
    Fragment,
    Globally,
    Implies,
    NegAtom,
    Next,
    Not,
    Or,
    Partition,
    Release,
    TrueConst,
    Until,
    atoms,
    classify,
    conjunction,
    disjunction,
    expand_until,
    find_violation,
    is_cosafety,
    is_nnf,
    is_safety,
    negate_nnf,
    simplify,
    to_nnf,
    to_text,
)
from .parser import parse_ltl, parse_partition, read_formula, read_partition
from .semantics import (
    LassoTrace,
    Trace,
    eval_finite_good_prefix,
    eval_lasso,
    holds_at_end,
)
