import pickle

import pysafesynth


def test_toplevel_attributes() -> None:
    assert hasattr(pysafesynth, "__version__")
    assert hasattr(pysafesynth, "bdd")
    assert hasattr(pysafesynth, "boolsynth")
    assert hasattr(pysafesynth, "config")
    assert hasattr(pysafesynth, "dfa")
    assert hasattr(pysafesynth, "game")
    assert hasattr(pysafesynth, "horn")
    assert hasattr(pysafesynth, "ltl")
    assert hasattr(pysafesynth, "transducer")
    assert hasattr(pysafesynth, "utils")
    assert hasattr(pysafesynth, "RC")
    assert hasattr(pysafesynth, "ErrorCode")
    assert hasattr(pysafesynth, "ParseError")
    assert hasattr(pysafesynth, "SynthesisError")
    assert hasattr(pysafesynth, "Formula")
    assert hasattr(pysafesynth, "Fragment")
    assert hasattr(pysafesynth, "Partition")
    assert hasattr(pysafesynth, "Trace")
    assert hasattr(pysafesynth, "LassoTrace")
    assert hasattr(pysafesynth, "parse_ltl")
    assert hasattr(pysafesynth, "parse_partition")
    assert hasattr(pysafesynth, "to_nnf")
    assert hasattr(pysafesynth, "to_text")
    assert hasattr(pysafesynth, "negate_nnf")
    assert hasattr(pysafesynth, "classify")
    assert hasattr(pysafesynth, "eval_lasso")
    assert hasattr(pysafesynth, "eval_finite_good_prefix")
    assert hasattr(pysafesynth, "expand_until")
    assert hasattr(pysafesynth, "ExplicitDFA")
    assert hasattr(pysafesynth, "SafetyAutomaton")
    assert hasattr(pysafesynth, "SymbolicDFA")
    assert hasattr(pysafesynth, "progress")
    assert hasattr(pysafesynth, "build_bad_prefix_dfa")
    assert hasattr(pysafesynth, "minimize_dfa")
    assert hasattr(pysafesynth, "dualize_to_dsa")
    assert hasattr(pysafesynth, "encode_symbolic")
    assert hasattr(pysafesynth, "parse_dfa_text")
    assert hasattr(pysafesynth, "Manager")
    assert hasattr(pysafesynth, "HornInstance")
    assert hasattr(pysafesynth, "build_horn")
    assert hasattr(pysafesynth, "solve_horn")
    assert hasattr(pysafesynth, "horn_strategy")
    assert hasattr(pysafesynth, "to_dimacs")
    assert hasattr(pysafesynth, "Mover")
    assert hasattr(pysafesynth, "WinningRegion")
    assert hasattr(pysafesynth, "preimage")
    assert hasattr(pysafesynth, "winning_region")
    assert hasattr(pysafesynth, "strategy_constraint")
    assert hasattr(pysafesynth, "OutputFunctions")
    assert hasattr(pysafesynth, "synthesize_outputs")
    assert hasattr(pysafesynth, "Transducer")
    assert hasattr(pysafesynth, "ExplicitTransducer")
    assert hasattr(pysafesynth, "SymbolicTransducer")
    assert hasattr(pysafesynth, "build_transducer")
    assert hasattr(pysafesynth, "run_step")
    assert hasattr(pysafesynth, "validate_strategy")
    assert hasattr(pysafesynth, "export")
    assert hasattr(pysafesynth, "load_transducer")


def test_all_names_exist() -> None:
    for name in pysafesynth.__all__:
        assert hasattr(pysafesynth, name), name


def test_error_pickling() -> None:
    exc = pysafesynth.SynthesisError(
        pysafesynth.ErrorCode.TIMEOUT, "no result within 1 s", "run_synthesis"
    )
    restored = pickle.loads(pickle.dumps(exc))
    assert isinstance(restored, pysafesynth.SynthesisError)
    assert restored.error_code is pysafesynth.ErrorCode.TIMEOUT
    assert str(restored) == "run_synthesis failed (no result within 1 s)"

    parse_error = pysafesynth.ParseError("unknown token '#'", "parse_ltl", 1, 3)
    restored = pickle.loads(pickle.dumps(parse_error))
    assert isinstance(restored, pysafesynth.ParseError)
    assert (restored.line, restored.column) == (1, 3)
    assert str(restored) == str(parse_error)
