# SPDX-FileCopyrightText: 2022-present Artur Drogunow <artur.drogunow@zf.com>
#
# SPDX-License-Identifier: MIT
"""Symbolic safety games on a bit-encoded bad-prefix DFA."""

from dataclasses import dataclass, field
from enum import Enum
from typing import List, NamedTuple, Tuple

from .bdd import NodeRef
from .dfa import SymbolicDFA
from .utils import LOG, ErrorCode, SynthesisError


class Mover(Enum):
    """Player that chooses its propositions first in every round."""

    ENVIRONMENT = "env"
    CONTROLLER = "ctrl"


class RegionSize(NamedTuple):
    iteration: int
    nodes: int
    minterms: int


@dataclass(frozen=True)
class WinningRegion:
    #: function over the state bits
    region: NodeRef
    #: index i at which the iteration stopped
    iterations: int
    realizable: bool
    first_mover: Mover
    sizes: Tuple[RegionSize, ...] = ()
    #: the regions w_0, w_1, ... in iteration order
    history: Tuple[NodeRef, ...] = field(default=(), repr=False, compare=False)


def preimage(
    w: NodeRef, sdfa: SymbolicDFA, first_mover: Mover = Mover.ENVIRONMENT
) -> NodeRef:
    """States from which the controller can force the next state into `w`.

    If the environment moves first, this is ``forall X. exists Y. w(eta)``,
    otherwise the controller commits to its outputs before the inputs are
    known and the quantifiers swap.
    """
    manager = sdfa.manager
    outside = manager.support(w) - set(sdfa.state_vars)
    if outside:
        err_msg = f"region mentions {', '.join(sorted(outside))}"
        raise SynthesisError(ErrorCode.NON_STATE_REGION, err_msg, "preimage")
    moved = manager.compose_vector(w, sdfa.substitution())
    if first_mover is Mover.ENVIRONMENT:
        return manager.forall_abstract(
            manager.exists_abstract(moved, sdfa.outputs), sdfa.inputs
        )
    return manager.exists_abstract(
        manager.forall_abstract(moved, sdfa.inputs), sdfa.outputs
    )


def winning_region(
    sdfa: SymbolicDFA,
    first_mover: Mover = Mover.ENVIRONMENT,
    early_termination: bool = True,
) -> WinningRegion:
    """Compute the greatest fixpoint of ``w = w & preimage(w)`` from ``!f``.

    :param sdfa:
        the encoded bad-prefix DFA
    :param first_mover:
        player that moves first in each round
    :param early_termination:
        give up as soon as the initial state leaves the region
    :return:
        the region at the iteration where it became stable, or where the
        initial state dropped out
    """
    manager = sdfa.manager
    initial = sdfa.initial
    w = manager.apply_not(sdfa.accepting)
    sizes: List[RegionSize] = []
    history: List[NodeRef] = []

    def result(iteration: int, realizable: bool) -> WinningRegion:
        LOG.info(
            "winning region after %d iterations: %s",
            iteration,
            "realizable" if realizable else "unrealizable",
        )
        return WinningRegion(
            region=w,
            iterations=iteration,
            realizable=realizable,
            first_mover=first_mover,
            sizes=tuple(sizes),
            history=tuple(history),
        )

    iteration = 0
    while True:
        size = RegionSize(
            iteration,
            manager.node_count(w),
            manager.count_minterms(w, sdfa.state_vars),
        )
        sizes.append(size)
        history.append(w)
        LOG.debug("w_%d: %d nodes, %d states", *size)
        if early_termination and not manager.eval_assignment(w, initial):
            return result(iteration, realizable=False)

        iteration += 1
        shrunk = manager.apply_and(w, preimage(w, sdfa, first_mover))
        if shrunk == w:
            break
        w = shrunk

    return result(iteration, realizable=manager.eval_assignment(w, initial))


def strategy_constraint(sdfa: SymbolicDFA, region: WinningRegion) -> NodeRef:
    """Relation between state, inputs and outputs that keeps play in `region`.

    For controller-first games the inputs are universally abstracted, so
    outputs chosen from it depend on the state only.
    """
    if not region.realizable:
        err_msg = "the initial state is outside the winning region"
        raise SynthesisError(
            ErrorCode.UNREALIZABLE, err_msg, "strategy_constraint"
        )
    manager = sdfa.manager
    moved = manager.compose_vector(region.region, sdfa.substitution())
    if region.first_mover is Mover.ENVIRONMENT:
        return moved
    return manager.forall_abstract(moved, sdfa.inputs)
