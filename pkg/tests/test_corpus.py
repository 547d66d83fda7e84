"""Cross-checks of the two solvers on hand-written and random formulas."""

import pytest

import pysafesynth
from pysafesynth.config import RC
from pysafesynth.dfa import (
    build_bad_prefix_dfa,
    dualize_to_dsa,
    encode_symbolic,
    minimize_dfa,
)
from pysafesynth.game import winning_region
from pysafesynth.horn import build_horn, horn_strategy, solve_horn
from pysafesynth.ltl import Partition, parse_ltl
from pysafesynth.transducer import symbolic_strategy, validate_strategy

from .helpers import safety_corpus

PART = Partition(inputs=("x", "u"), outputs=("y", "v"))

FAMILIES = [
    "G x",
    "G (x -> y)",
    "G (x -> X y)",
    "G (x -> X X y)",
    "G (x -> X X X y)",
    "G (!y | !v) & G (x -> y | X y) & G (u -> v | X v)",
    "G (!y | !v) & G (x -> y) & G (u -> v)",
    "G (x -> X !x)",
    "G (y & X !y)",
    "(x R y) & G (u -> X v)",
    "G (y -> X (x | v))",
]


def _solve(phi):
    d = minimize_dfa(build_bad_prefix_dfa(phi, PART))
    sdfa = encode_symbolic(d, PART)
    region = winning_region(sdfa)
    dsa = dualize_to_dsa(d)
    if dsa.is_empty():
        return sdfa, region, dsa, None
    return sdfa, region, dsa, solve_horn(build_horn(dsa, PART))


def _formulas():
    formulas = [parse_ltl(text) for text in FAMILIES]
    formulas += safety_corpus(PART.alphabet, depth=3, count=60, seed=0)
    return formulas


def _corpus():
    formulas = [parse_ltl(text) for text in FAMILIES]
    formulas += safety_corpus(PART.alphabet, depth=3, count=200, seed=100)
    return formulas


def _check_agreement(phi) -> bool:
    sdfa, region, dsa, result = _solve(phi)
    horn_verdict = result is not None and result.satisfiable
    assert region.realizable == horn_verdict, phi
    full = winning_region(sdfa, early_termination=False)
    assert full.realizable == region.realizable, phi
    m = sdfa.manager
    for later, earlier in zip(full.history[1:], full.history):
        assert m.implies(later, earlier), phi
    assert full.iterations <= 1 << len(sdfa.state_vars), phi
    return horn_verdict


def test_solvers_agree() -> None:
    verdicts = {_check_agreement(phi) for phi in _formulas()}
    assert verdicts == {True, False}


def test_strategies_are_safe() -> None:
    for phi in _formulas():
        sdfa, region, dsa, result = _solve(phi)
        if not region.realizable:
            continue
        for t in (symbolic_strategy(sdfa, region), horn_strategy(result, dsa, PART)):
            report = validate_strategy(
                t, phi, plays=20, horizon=15, seed=1, adversarial_plays=10
            )
            assert report.violations == 0, (phi, report.first_violation)


@pytest.mark.slow
def test_solvers_agree_on_full_corpus() -> None:
    formulas = _corpus()
    assert len(formulas) >= 200
    verdicts = {_check_agreement(phi) for phi in formulas}
    assert verdicts == {True, False}


@pytest.mark.slow
def test_strategies_are_safe_on_full_corpus() -> None:
    checked = 0
    for phi in _corpus():
        sdfa, region, dsa, result = _solve(phi)
        if not region.realizable:
            continue
        for t in (symbolic_strategy(sdfa, region), horn_strategy(result, dsa, PART)):
            report = validate_strategy(
                t, phi, plays=1000, horizon=50, seed=3, adversarial_plays=100
            )
            assert report.violations == 0, (phi, report.first_violation)
        checked += 1
    assert checked > 0


def test_horn_cap_leaves_symbolic_path_working() -> None:
    part = Partition(
        inputs=("x",), outputs=("y0", "y1", "y2", "y3", "y4", "y5")
    )
    phi = parse_ltl(
        "G (x -> X y0) & G (y1 | y2) & G (y3 -> X y4) & G (!y5 | !y0)"
    )
    d = minimize_dfa(build_bad_prefix_dfa(phi, part))
    with pytest.raises(pysafesynth.SynthesisError) as exc_info:
        build_horn(dualize_to_dsa(d), part, variable_cap=6)
    assert exc_info.value.error_code is pysafesynth.ErrorCode.RESOURCE_EXHAUSTED

    sdfa = encode_symbolic(d, part)
    region = winning_region(sdfa)
    assert region.realizable
    report = validate_strategy(
        symbolic_strategy(sdfa, region),
        phi,
        plays=10,
        horizon=10,
        seed=2,
        adversarial_plays=10,
    )
    assert report.violations == 0


def test_wide_family_beyond_default_horn_cap() -> None:
    outputs = tuple(f"y{i}" for i in range(16))
    part = Partition(inputs=("x",), outputs=outputs)
    phi = parse_ltl(
        "G (x -> X y0) & G (y1 | y2) & G (y3 -> X y4) & G (!y5 | !y0)"
        " & G (y6 | y7 | y8) & G (y9 -> y10) & G (y11 | !y12)"
        " & G (y13 | y14 | y15)"
    )
    assert len(part.alphabet) > RC["HORN_VARIABLE_CAP"]
    d = minimize_dfa(build_bad_prefix_dfa(phi, part))
    with pytest.raises(pysafesynth.SynthesisError) as exc_info:
        build_horn(dualize_to_dsa(d), part)
    assert exc_info.value.error_code is pysafesynth.ErrorCode.RESOURCE_EXHAUSTED

    sdfa = encode_symbolic(d, part)
    region = winning_region(sdfa)
    assert region.realizable
    report = validate_strategy(
        symbolic_strategy(sdfa, region),
        phi,
        plays=20,
        horizon=20,
        seed=4,
        adversarial_plays=0,
    )
    assert report.violations == 0
