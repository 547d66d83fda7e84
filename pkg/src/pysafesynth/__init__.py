# SPDX-FileCopyrightText: 2022-present Artur Drogunow <artur.drogunow@zf.com>
#
# SPDX-License-Identifier: MIT

__version__ = "0.1.0"

__all__ = [
    "RC",
    "DFAStatistics",
    "Edge",
    "ErrorCode",
    "ExplicitDFA",
    "ExplicitTransducer",
    "ExportFormat",
    "Formula",
    "Fragment",
    "HornClause",
    "HornInstance",
    "HornLayout",
    "HornResult",
    "HornStatistics",
    "LassoTrace",
    "Manager",
    "Move",
    "Mover",
    "NodeRef",
    "OutputFunctions",
    "ParseError",
    "Partition",
    "RegionSize",
    "SafetyAutomaton",
    "SymbolicDFA",
    "SymbolicTransducer",
    "SynthesisError",
    "Trace",
    "Transducer",
    "ValidationReport",
    "WinningRegion",
    "__version__",
    "bdd",
    "boolsynth",
    "build_bad_prefix_dfa",
    "build_horn",
    "build_transducer",
    "classify",
    "config",
    "dfa",
    "dfa_statistics",
    "dualize_to_dsa",
    "encode_symbolic",
    "eval_finite_good_prefix",
    "eval_lasso",
    "expand_until",
    "export",
    "game",
    "horn",
    "horn_strategy",
    "load_transducer",
    "ltl",
    "minimize_dfa",
    "negate_nnf",
    "parse_dfa_text",
    "parse_ltl",
    "parse_partition",
    "preimage",
    "progress",
    "run_step",
    "solve_horn",
    "strategy_constraint",
    "symbolic_strategy",
    "synthesize_outputs",
    "to_dimacs",
    "to_nnf",
    "to_text",
    "transducer",
    "utils",
    "validate_strategy",
    "winning_region",
]

from . import bdd, boolsynth, config, dfa, game, horn, ltl, transducer, utils
from .bdd import Manager, NodeRef
from .boolsynth import OutputFunctions, synthesize_outputs
from .config import RC
from .dfa import (
    DFAStatistics,
    Edge,
    ExplicitDFA,
    SafetyAutomaton,
    SymbolicDFA,
    build_bad_prefix_dfa,
    dfa_statistics,
    dualize_to_dsa,
    encode_symbolic,
    minimize_dfa,
    parse_dfa_text,
    progress,
)
from .game import (
    Mover,
    RegionSize,
    WinningRegion,
    preimage,
    strategy_constraint,
    winning_region,
)
from .horn import (
    HornClause,
    HornInstance,
    HornLayout,
    HornResult,
    HornStatistics,
    build_horn,
    horn_strategy,
    solve_horn,
    to_dimacs,
)
from .ltl import (
    Formula,
    Fragment,
    LassoTrace,
    Partition,
    Trace,
    classify,
    eval_finite_good_prefix,
    eval_lasso,
    expand_until,
    negate_nnf,
    parse_ltl,
    parse_partition,
    to_nnf,
    to_text,
)
from .transducer import (
    ExplicitTransducer,
    ExportFormat,
    Move,
    SymbolicTransducer,
    Transducer,
    ValidationReport,
    build_transducer,
    export,
    load_transducer,
    run_step,
    symbolic_strategy,
    validate_strategy,
)
from .utils import ErrorCode, ParseError, SynthesisError
