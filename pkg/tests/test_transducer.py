import json

import pytest

import pysafesynth
from pysafesynth.dfa import (
    build_bad_prefix_dfa,
    dualize_to_dsa,
    encode_symbolic,
    minimize_dfa,
)
from pysafesynth.game import winning_region
from pysafesynth.horn import build_horn, horn_strategy, solve_horn
from pysafesynth.ltl import Partition, parse_ltl
from pysafesynth.transducer import (
    ExplicitTransducer,
    ExportFormat,
    Move,
    build_transducer,
    export,
    load_transducer,
    run_step,
    symbolic_strategy,
    validate_strategy,
)

PART = Partition(inputs=("x",), outputs=("y",))
NO_X = frozenset()
X = frozenset({"x"})
Y = frozenset({"y"})


def _symbolic(text: str, part: Partition = PART):
    d = minimize_dfa(build_bad_prefix_dfa(parse_ltl(text), part))
    sdfa = encode_symbolic(d, part)
    return symbolic_strategy(sdfa, winning_region(sdfa))


def _horn(text: str, part: Partition = PART):
    d = minimize_dfa(build_bad_prefix_dfa(parse_ltl(text), part))
    dsa = dualize_to_dsa(d)
    return horn_strategy(solve_horn(build_horn(dsa, part)), dsa, part)


def test_g_y_outputs_y() -> None:
    t = _symbolic("G y")
    assert t.initial == 0
    assert run_step(t, 0, NO_X) == (Y, 0)
    assert run_step(t, 0, X) == (Y, 0)
    assert t.reachable() == [0]


def test_response_strategy() -> None:
    t = _symbolic("G (x -> X y)")
    output, state = t.step(0, X)
    assert output == frozenset()
    assert state == 1
    assert t.step(state, NO_X) == (Y, 0)
    assert t.reachable() == [0, 1]


def test_solvers_choose_the_same_moves() -> None:
    symbolic = _symbolic("G (x -> X y)")
    explicit = _horn("G (x -> X y)")
    assert symbolic.reachable() == explicit.reachable()
    for state in symbolic.reachable():
        for item in (NO_X, X):
            assert symbolic.step(state, item) == explicit.step(state, item)


def test_validation_passes() -> None:
    for text in ("G y", "G (x -> X y)", "G (x -> y) & G (y -> x)"):
        phi = parse_ltl(text)
        for t in (_symbolic(text), _horn(text)):
            report = validate_strategy(
                t, phi, plays=30, horizon=20, seed=3, adversarial_plays=10
            )
            assert report.violations == 0, text
            assert report.first_violation is None
            assert (report.plays, report.adversarial_plays) == (30, 10)


def test_validation_finds_violations() -> None:
    lazy = ExplicitTransducer(
        inputs=("x",),
        outputs=("y",),
        initial=0,
        moves={0: (Move(NO_X, 0), Move(NO_X, 0))},
    )
    report = validate_strategy(
        lazy, parse_ltl("G y"), plays=10, horizon=5, adversarial_plays=5
    )
    assert report.violations == 15
    assert report.first_violation is not None
    assert len(report.first_violation) == 1


def test_state_outside_region() -> None:
    t = _symbolic("G y")
    assert not t.contains(1)
    assert not t.contains(7)
    with pytest.raises(pysafesynth.SynthesisError) as exc_info:
        t.step(1, NO_X)
    assert exc_info.value.error_code is pysafesynth.ErrorCode.STATE_OUTSIDE_REGION


def test_unrealizable_has_no_transducer() -> None:
    d = minimize_dfa(build_bad_prefix_dfa(parse_ltl("G x"), PART))
    sdfa = encode_symbolic(d, PART)
    region = winning_region(sdfa)
    with pytest.raises(pysafesynth.SynthesisError) as exc_info:
        symbolic_strategy(sdfa, region)
    assert exc_info.value.error_code is pysafesynth.ErrorCode.UNREALIZABLE


def test_json_export() -> None:
    t = _symbolic("G y")
    document = json.loads(export(t, ExportFormat.JSON))
    assert document["inputs"] == ["x"]
    assert document["outputs"] == ["y"]
    assert document["initial"] == 0
    assert document["states"] == [0]
    assert document["transitions"] == [
        {"from": 0, "input": {"x": False}, "output": {"y": True}, "to": 0},
        {"from": 0, "input": {"x": True}, "output": {"y": True}, "to": 0},
    ]


def test_load_reproduces_steps() -> None:
    t = _symbolic("G (x -> X y)")
    loaded = load_transducer(export(t, "json"))
    assert loaded.reachable() == t.reachable()
    for state in t.reachable():
        for item in (NO_X, X):
            assert loaded.step(state, item) == t.step(state, item)


def test_load_dont_care_inputs() -> None:
    document = {
        "inputs": ["x"],
        "outputs": ["y"],
        "initial": 0,
        "states": [0],
        "transitions": [{"from": 0, "input": {}, "output": {"y": True}, "to": 0}],
    }
    t = load_transducer(document)
    assert t.step(0, X) == (Y, 0)
    assert t.step(0, NO_X) == (Y, 0)


def test_load_errors() -> None:
    missing_input = {
        "inputs": ["x"],
        "outputs": ["y"],
        "initial": 0,
        "states": [0],
        "transitions": [
            {"from": 0, "input": {"x": False}, "output": {"y": True}, "to": 0}
        ],
    }
    with pytest.raises(pysafesynth.SynthesisError) as exc_info:
        load_transducer(json.dumps(missing_input))
    assert exc_info.value.error_code is pysafesynth.ErrorCode.INVALID_ARGUMENT

    unknown_target = dict(missing_input)
    unknown_target["transitions"] = [
        {"from": 0, "input": {}, "output": {"y": True}, "to": 4}
    ]
    with pytest.raises(pysafesynth.SynthesisError) as exc_info:
        load_transducer(unknown_target)
    assert exc_info.value.error_code is pysafesynth.ErrorCode.INVALID_ARGUMENT


def test_dot_export() -> None:
    source = export(_symbolic("G y"), "dot").decode("utf-8")
    assert source.startswith("digraph strategy")
    assert "start -> 0" in source
    assert 'label="true / y"' in source


def test_unknown_format() -> None:
    with pytest.raises(pysafesynth.SynthesisError) as exc_info:
        export(_symbolic("G y"), "xml")
    assert exc_info.value.error_code is pysafesynth.ErrorCode.UNKNOWN_FORMAT


def test_export_state_cap() -> None:
    t = _symbolic("G (x -> X y)")
    with pytest.raises(pysafesynth.SynthesisError) as exc_info:
        t.reachable(state_cap=1)
    assert exc_info.value.error_code is pysafesynth.ErrorCode.RESOURCE_EXHAUSTED


def test_without_inputs() -> None:
    part = Partition(inputs=(), outputs=("y",))
    t = _symbolic("G y", part)
    assert t.step(0, NO_X) == (Y, 0)
    document = json.loads(export(t))
    assert len(document["transitions"]) == 1
    assert document["transitions"][0]["input"] == {}

    report = validate_strategy(t, parse_ltl("G y"), plays=5, horizon=5)
    assert report.violations == 0


def test_build_transducer_requires_realizable_region() -> None:
    d = minimize_dfa(build_bad_prefix_dfa(parse_ltl("G x"), PART))
    sdfa = encode_symbolic(d, PART)
    region = winning_region(sdfa)
    gamma = pysafesynth.OutputFunctions(("y",), (sdfa.manager.false,))
    with pytest.raises(pysafesynth.SynthesisError) as exc_info:
        build_transducer(sdfa, region, gamma)
    assert exc_info.value.error_code is pysafesynth.ErrorCode.UNREALIZABLE


def test_successors_stay_in_state_space() -> None:
    for text in ("G y", "G (x -> X y)", "G (x -> X X y)", "y R (x | X !y)"):
        for t in (_symbolic(text), _horn(text)):
            for state in t.reachable():
                for item in (NO_X, X):
                    _, target = t.step(state, item)
                    assert t.contains(target), text
