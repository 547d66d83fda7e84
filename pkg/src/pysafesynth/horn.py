# SPDX-FileCopyrightText: 2022-present Artur Drogunow <artur.drogunow@zf.com>
#
# SPDX-License-Identifier: MIT
"""Explicit safety games as Horn satisfiability.

The game on a safety automaton is written with flipped polarity, so that a
variable forced true by propagation marks a losing position:

* ``p(s,X) -> p(s)`` for every state s and input X,
* ``p(s,X,Y1) & ... & p(s,X,Yn) -> p(s,X)`` over all outputs,
* ``p(t) -> p(s,X,Y)`` if the automaton moves from s to t on X and Y,
* ``p(s,X,Y)`` if it has no move,
* ``p(s0) -> false`` for the initial state.

The instance is satisfiable iff the controller wins from the initial state.
"""

import collections
from dataclasses import dataclass
from typing import Deque, FrozenSet, List, NamedTuple, Optional, Tuple

import numpy as np

from .config import RC
from .dfa import SafetyAutomaton
from .ltl.formula import Partition
from .transducer import ExplicitTransducer, Move
from .utils import LOG, ErrorCode, SynthesisError, index_letter


class HornClause(NamedTuple):
    """``body[0] & body[1] & ... -> head``; a missing head means false."""

    body: Tuple[int, ...]
    head: Optional[int]


class HornLayout(NamedTuple):
    """Numbering of the game variables.

    Inputs and outputs are letter indices over the partition inputs and
    outputs, the first name being the least significant bit.
    """

    num_states: int
    input_bits: int
    output_bits: int

    @property
    def num_inputs(self) -> int:
        return 1 << self.input_bits

    @property
    def num_outputs(self) -> int:
        return 1 << self.output_bits

    @property
    def num_variables(self) -> int:
        pairs = self.num_states * self.num_inputs
        return self.num_states + pairs + pairs * self.num_outputs

    def state_var(self, state: int) -> int:
        return state

    def input_var(self, state: int, x: int) -> int:
        return self.num_states + state * self.num_inputs + x

    def output_var(self, state: int, x: int, y: int) -> int:
        offset = self.num_states * (1 + self.num_inputs)
        return offset + (state * self.num_inputs + x) * self.num_outputs + y


class HornStatistics(NamedTuple):
    variables: int
    clauses: int
    literals: int
    units: int


@dataclass(frozen=True)
class HornInstance:
    num_variables: int
    clauses: Tuple[HornClause, ...]
    #: variable numbering, present for instances built from a game
    layout: Optional[HornLayout] = None

    @property
    def statistics(self) -> HornStatistics:
        return HornStatistics(
            variables=self.num_variables,
            clauses=len(self.clauses),
            literals=sum(
                len(c.body) + (c.head is not None) for c in self.clauses
            ),
            units=sum(1 for c in self.clauses if not c.body),
        )


class HornResult(NamedTuple):
    satisfiable: bool
    #: variables forced true by propagation
    model: FrozenSet[int]
    #: counter decrements plus clause firings
    steps: int


def build_horn(
    dsa: SafetyAutomaton,
    part: Partition,
    variable_cap: Optional[int] = None,
) -> HornInstance:
    """Write the safety game on `dsa` as a flipped-polarity Horn instance.

    :param dsa:
        nonempty safety automaton over ``part.alphabet``
    :param part:
        input/output partition; the environment moves first
    :param variable_cap:
        largest admissible number of inputs plus outputs,
        ``RC["HORN_VARIABLE_CAP"]`` if omitted
    """
    if dsa.is_empty() or dsa.initial is None:
        err_msg = "the safety automaton has no initial state"
        raise SynthesisError(ErrorCode.EMPTY_AUTOMATON, err_msg, "build_horn")
    if tuple(dsa.alphabet) != part.alphabet:
        err_msg = "automaton alphabet is not inputs followed by outputs"
        raise SynthesisError(ErrorCode.PARTITION_ERROR, err_msg, "build_horn")
    cap = RC["HORN_VARIABLE_CAP"] if variable_cap is None else variable_cap
    if len(part.alphabet) > cap:
        err_msg = f"{len(part.alphabet)} propositions exceed the cap of {cap}"
        raise SynthesisError(ErrorCode.RESOURCE_EXHAUSTED, err_msg, "build_horn")

    layout = HornLayout(dsa.num_states, len(part.inputs), len(part.outputs))
    table = dsa.table()
    clauses: List[HornClause] = []
    for state in range(layout.num_states):
        p_s = layout.state_var(state)
        for x in range(layout.num_inputs):
            p_sx = layout.input_var(state, x)
            clauses.append(HornClause((p_sx,), p_s))
            clauses.append(
                HornClause(
                    tuple(
                        layout.output_var(state, x, y)
                        for y in range(layout.num_outputs)
                    ),
                    p_sx,
                )
            )
            for y in range(layout.num_outputs):
                p_sxy = layout.output_var(state, x, y)
                target = int(table[state, x | y << layout.input_bits])
                if target < 0:
                    clauses.append(HornClause((), p_sxy))
                else:
                    clauses.append(HornClause((layout.state_var(target),), p_sxy))
    clauses.append(HornClause((layout.state_var(dsa.initial),), None))

    instance = HornInstance(layout.num_variables, tuple(clauses), layout)
    LOG.debug("horn instance: %s", instance.statistics)
    return instance


def solve_horn(h: HornInstance) -> HornResult:
    """Decide `h` by unit propagation in time linear in its size.

    Every clause keeps the number of body variables not yet forced; a clause
    fires when that number drops to zero. The least model is the set of
    forced variables. The instance is unsatisfiable iff a clause without
    head fires.
    """
    counts = np.array([len(clause.body) for clause in h.clauses], dtype=np.int64)
    watches: List[List[int]] = [[] for _ in range(h.num_variables)]
    for index, clause in enumerate(h.clauses):
        for var in clause.body:
            watches[var].append(index)

    forced = np.zeros(h.num_variables, dtype=bool)
    queue: Deque[int] = collections.deque()
    conflict = False
    steps = 0

    def fire(index: int) -> None:
        nonlocal conflict, steps
        steps += 1
        head = h.clauses[index].head
        if head is None:
            conflict = True
        elif not forced[head]:
            forced[head] = True
            queue.append(head)

    for index in np.flatnonzero(counts == 0):
        fire(int(index))
    while queue:
        var = queue.popleft()
        for index in watches[var]:
            counts[index] -= 1
            steps += 1
            if counts[index] == 0:
                fire(index)

    LOG.debug("horn propagation: %d steps, %d forced", steps, int(forced.sum()))
    return HornResult(
        satisfiable=not conflict,
        model=frozenset(int(v) for v in np.flatnonzero(forced)),
        steps=steps,
    )


def horn_strategy(
    result: HornResult, dsa: SafetyAutomaton, part: Partition
) -> ExplicitTransducer:
    """Read a winning strategy off the least model.

    In every reached state and for every input, the controller answers with
    the first output (in letter index order) whose position is not forced.
    Transducer states are the indices of the bad-prefix DFA states.
    """
    if not result.satisfiable or dsa.initial is None:
        err_msg = "the game is lost from the initial state"
        raise SynthesisError(ErrorCode.UNREALIZABLE, err_msg, "horn_strategy")

    layout = HornLayout(dsa.num_states, len(part.inputs), len(part.outputs))
    table = dsa.table()
    moves = {}
    order = [dsa.initial]
    seen = {dsa.initial}
    for state in order:
        state_moves = []
        for x in range(layout.num_inputs):
            y = next(
                y
                for y in range(layout.num_outputs)
                if layout.output_var(state, x, y) not in result.model
            )
            target = int(table[state, x | y << layout.input_bits])
            state_moves.append(
                Move(index_letter(part.outputs, y), dsa.origin[target])
            )
            if target not in seen:
                seen.add(target)
                order.append(target)
        moves[dsa.origin[state]] = tuple(state_moves)

    return ExplicitTransducer(
        inputs=part.inputs,
        outputs=part.outputs,
        initial=dsa.origin[dsa.initial],
        moves=moves,
    )


def to_dimacs(h: HornInstance) -> str:
    """DIMACS CNF text of `h`, variables numbered from 1."""
    lines = [
        "c flipped-polarity horn encoding of a safety game",
        f"p cnf {h.num_variables} {len(h.clauses)}",
    ]
    for clause in h.clauses:
        literals = [f"-{var + 1}" for var in clause.body]
        if clause.head is not None:
            literals.append(str(clause.head + 1))
        lines.append(" ".join([*literals, "0"]))
    return "\n".join(lines) + "\n"
