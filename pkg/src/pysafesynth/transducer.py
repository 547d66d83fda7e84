# SPDX-FileCopyrightText: 2022-present Artur Drogunow <artur.drogunow@zf.com>
#
# SPDX-License-Identifier: MIT
"""Winning strategies as Mealy machines.

Both solvers produce transducers whose states are indices of the bad-prefix
DFA. A symbolic transducer evaluates the synthesised output functions and
the transition functions on demand; an explicit one looks moves up in a
table.
"""

import abc
import json
from dataclasses import dataclass
from enum import Enum
from typing import (
    AbstractSet,
    Any,
    Dict,
    List,
    Mapping,
    NamedTuple,
    Optional,
    Tuple,
    Union,
)

import graphviz
import numpy as np

from .boolsynth import OutputFunctions, synthesize_outputs
from .config import RC
from .dfa import SymbolicDFA, build_bad_prefix_dfa, minimize_dfa
from .game import WinningRegion, strategy_constraint
from .ltl.formula import Formula, Partition
from .utils import (
    LOG,
    ErrorCode,
    Letter,
    SynthesisError,
    assignment_index,
    cube_cover,
    cube_text,
    index_letter,
    iter_assignments,
    letter_index,
)


class Move(NamedTuple):
    output: Letter
    target: int


class ExportFormat(Enum):
    DOT = "dot"
    JSON = "json"


class Transducer(abc.ABC):
    """Deterministic machine mapping input histories to outputs."""

    inputs: Tuple[str, ...]
    outputs: Tuple[str, ...]
    initial: int

    @abc.abstractmethod
    def contains(self, state: int) -> bool:
        """Whether `state` belongs to the state space of the machine."""

    @abc.abstractmethod
    def move(self, state: int, x: int) -> Move:
        """Move from `state` on the input with letter index `x`."""

    def step(self, state: int, item: AbstractSet[str]) -> Tuple[Letter, int]:
        """Return the output and the successor for input `item` in `state`.

        :raises ~pysafesynth.utils.SynthesisError:
            if `state` is not a state of the machine
        """
        if not self.contains(state):
            err_msg = f"state {state} is not a winning state"
            raise SynthesisError(ErrorCode.STATE_OUTSIDE_REGION, err_msg, "step")
        result = self.move(state, letter_index(self.inputs, item))
        return result.output, result.target

    def reachable(self, state_cap: Optional[int] = None) -> List[int]:
        """States reachable from the initial state, in breadth-first order."""
        cap = RC["EXPORT_STATE_CAP"] if state_cap is None else state_cap
        order = [self.initial]
        seen = {self.initial}
        for state in order:
            for x in range(1 << len(self.inputs)):
                target = self.move(state, x).target
                if target not in seen:
                    if len(seen) >= cap:
                        err_msg = f"more than {cap} reachable states"
                        raise SynthesisError(
                            ErrorCode.RESOURCE_EXHAUSTED, err_msg, "reachable"
                        )
                    seen.add(target)
                    order.append(target)
        return order


@dataclass(frozen=True, eq=False)
class ExplicitTransducer(Transducer):
    inputs: Tuple[str, ...]
    outputs: Tuple[str, ...]
    initial: int
    #: per state, one move per input letter index
    moves: Mapping[int, Tuple[Move, ...]]

    def contains(self, state: int) -> bool:
        return state in self.moves

    def move(self, state: int, x: int) -> Move:
        return self.moves[state][x]


class SymbolicTransducer(Transducer):
    def __init__(
        self, sdfa: SymbolicDFA, region: WinningRegion, gamma: OutputFunctions
    ) -> None:
        self.sdfa = sdfa
        self.region = region
        self.gamma = gamma
        self.inputs = sdfa.inputs
        self.outputs = sdfa.outputs
        self.initial = 0

    def contains(self, state: int) -> bool:
        if not 0 <= state < 1 << len(self.sdfa.state_vars):
            return False
        return self.sdfa.manager.eval_assignment(
            self.region.region, self.sdfa.encode_state(state)
        )

    def move(self, state: int, x: int) -> Move:
        manager = self.sdfa.manager
        item = index_letter(self.inputs, x)
        values = self.sdfa.encode_state(state)
        values.update({name: name in item for name in self.inputs})
        output = frozenset(
            name
            for name, fn in zip(self.gamma.outputs, self.gamma.functions)
            if manager.eval_assignment(fn, values)
        )
        return Move(output, self.sdfa.successor(state, item | output))


def build_transducer(
    sdfa: SymbolicDFA, region: WinningRegion, gamma: OutputFunctions
) -> SymbolicTransducer:
    if not region.realizable:
        err_msg = "the initial state is outside the winning region"
        raise SynthesisError(ErrorCode.UNREALIZABLE, err_msg, "build_transducer")
    return SymbolicTransducer(sdfa, region, gamma)


def symbolic_strategy(sdfa: SymbolicDFA, region: WinningRegion) -> SymbolicTransducer:
    """Synthesise output functions for `region` and wrap them in a transducer."""
    xi = strategy_constraint(sdfa, region)
    gamma = synthesize_outputs(
        sdfa.manager, xi, sdfa.state_vars + sdfa.inputs, sdfa.outputs
    )
    return build_transducer(sdfa, region, gamma)


def run_step(t: Transducer, q: int, x: AbstractSet[str]) -> Tuple[Letter, int]:
    return t.step(q, x)


class ValidationReport(NamedTuple):
    plays: int
    adversarial_plays: int
    horizon: int
    seed: int
    violations: int
    #: letters of the first play that went wrong
    first_violation: Optional[Tuple[Letter, ...]] = None


def validate_strategy(
    t: Transducer,
    phi: Formula,
    plays: int = 1000,
    horizon: int = 50,
    seed: int = 0,
    adversarial_plays: int = 100,
) -> ValidationReport:
    """Play `t` against random and adversarial environments.

    The bad-prefix DFA of `phi` runs alongside every play. A play is a
    violation if the DFA accepts one of its prefixes or the machine leaves
    its state space. The adversary looks one step ahead on the DFA and
    picks an input that leaves the controller the fewest safe outputs.
    """
    part = Partition(t.inputs, t.outputs)
    dfa = minimize_dfa(build_bad_prefix_dfa(phi, part))
    table = dfa.transition_table()
    accepting = np.zeros(dfa.num_states, dtype=bool)
    accepting[list(dfa.accepting)] = True
    input_bits = len(t.inputs)
    num_inputs, num_outputs = 1 << input_bits, 1 << len(t.outputs)
    # safe[s, x] counts the outputs that avoid the accepting states
    letters = np.arange(num_inputs)[:, None] | (
        np.arange(num_outputs)[None, :] << input_bits
    )
    safe = (~accepting[table[:, letters]]).sum(axis=2)

    rng = np.random.default_rng(seed)
    random_inputs = rng.integers(num_inputs, size=(plays, horizon))
    # (state, x) -> (letter read, output index, next state, next state valid)
    moves: Dict[Tuple[int, int], Optional[Tuple[Letter, int, int, bool]]] = {}

    def move(state: int, x: int) -> Optional[Tuple[Letter, int, int, bool]]:
        key = (state, x)
        if key not in moves:
            item = index_letter(t.inputs, x)
            try:
                output, target = t.step(state, item)
            except SynthesisError:
                moves[key] = None
            else:
                y = letter_index(t.outputs, output)
                moves[key] = (item | output, y, target, t.contains(target))
        return moves[key]

    violations = 0
    first_violation: Optional[Tuple[Letter, ...]] = None
    for play in range(plays + adversarial_plays):
        adversarial = play >= plays
        state, dfa_state = t.initial, dfa.initial
        word: List[Letter] = []
        failed = bool(accepting[dfa_state])
        for step in range(horizon):
            if failed:
                break
            if adversarial:
                options = np.flatnonzero(safe[dfa_state] == safe[dfa_state].min())
                x = int(rng.choice(options))
            else:
                x = int(random_inputs[play, step])
            outcome = move(state, x)
            if outcome is None:
                failed = True
                break
            full, y, state, valid = outcome
            word.append(full)
            dfa_state = int(table[dfa_state, x | y << input_bits])
            failed = bool(accepting[dfa_state]) or not valid
        if failed:
            violations += 1
            if first_violation is None:
                first_violation = tuple(word)

    if violations:
        LOG.warning("strategy violated the formula in %d plays", violations)
    return ValidationReport(
        plays=plays,
        adversarial_plays=adversarial_plays,
        horizon=horizon,
        seed=seed,
        violations=violations,
        first_violation=first_violation,
    )


def _assignment_text(names: Tuple[str, ...], item: AbstractSet[str]) -> str:
    return cube_text(tuple((name, name in item) for name in names))


def export(t: Transducer, fmt: Union[ExportFormat, str] = ExportFormat.JSON) -> bytes:
    """Serialise the reachable part of `t`.

    JSON lists one transition per state and full input assignment. DOT
    groups the inputs of each state into cubes labelled ``inputs / outputs``.
    """
    try:
        fmt = ExportFormat(fmt)
    except ValueError:
        err_msg = f"unknown format {fmt!r}"
        raise SynthesisError(ErrorCode.UNKNOWN_FORMAT, err_msg, "export") from None

    states = t.reachable()
    num_inputs = 1 << len(t.inputs)
    if fmt is ExportFormat.JSON:
        transitions = []
        for state in states:
            for x, assignment in enumerate(iter_assignments(t.inputs)):
                move = t.move(state, x)
                transitions.append(
                    {
                        "from": state,
                        "input": assignment,
                        "output": {name: name in move.output for name in t.outputs},
                        "to": move.target,
                    }
                )
        document = {
            "inputs": list(t.inputs),
            "outputs": list(t.outputs),
            "initial": t.initial,
            "states": states,
            "transitions": transitions,
        }
        return json.dumps(document, indent=2).encode(RC["ENCODING"])

    dot = graphviz.Digraph(name="strategy")
    dot.node("start", "", shape="none")
    for state in states:
        dot.node(str(state), str(state), shape="circle")
    dot.edge("start", str(t.initial))
    for state in states:
        moves = [t.move(state, x) for x in range(num_inputs)]
        for cube, move in cube_cover(t.inputs, moves):
            label = f"{cube_text(cube)} / {_assignment_text(t.outputs, move.output)}"
            dot.edge(str(state), str(move.target), label=label)
    return dot.source.encode(RC["ENCODING"])


def load_transducer(data: Union[bytes, str, Mapping[str, Any]]) -> ExplicitTransducer:
    """Rebuild a transducer from its JSON export.

    Input objects may leave variables out; such a transition stands for
    every value of the missing variables.
    """
    if isinstance(data, bytes):
        data = data.decode(RC["ENCODING"])
    document = json.loads(data) if isinstance(data, str) else data
    inputs = tuple(document["inputs"])
    outputs = tuple(document["outputs"])
    num_inputs = 1 << len(inputs)

    table: Dict[int, List[Optional[Move]]] = {
        int(state): [None] * num_inputs for state in document["states"]
    }
    for transition in document["transitions"]:
        partial = {name: bool(v) for name, v in transition["input"].items()}
        move = Move(
            frozenset(n for n, v in transition["output"].items() if v),
            int(transition["to"]),
        )
        row = table.get(int(transition["from"]))
        if row is None or move.target not in table:
            err_msg = f"transition leaves the listed states: {transition}"
            raise SynthesisError(
                ErrorCode.INVALID_ARGUMENT, err_msg, "load_transducer"
            )
        for assignment in iter_assignments(inputs):
            if all(assignment[name] == value for name, value in partial.items()):
                row[assignment_index(inputs, assignment)] = move

    moves: Dict[int, Tuple[Move, ...]] = {}
    for state, row in table.items():
        if any(entry is None for entry in row):
            err_msg = f"state {state} lacks a transition for some input"
            raise SynthesisError(
                ErrorCode.INVALID_ARGUMENT, err_msg, "load_transducer"
            )
        moves[state] = tuple(entry for entry in row if entry is not None)
    return ExplicitTransducer(
        inputs=inputs,
        outputs=outputs,
        initial=int(document["initial"]),
        moves=moves,
    )
