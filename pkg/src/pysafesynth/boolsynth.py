# SPDX-FileCopyrightText: 2022-present Artur Drogunow <artur.drogunow@zf.com>
#
# SPDX-License-Identifier: MIT
"""Boolean synthesis of output functions from a relation."""

from dataclasses import dataclass
from typing import Dict, Sequence, Tuple

from .bdd import Manager, NodeRef
from .utils import LOG, ErrorCode, SynthesisError


@dataclass(frozen=True)
class OutputFunctions:
    """One function per output, in output declaration order."""

    outputs: Tuple[str, ...]
    functions: Tuple[NodeRef, ...]

    def __getitem__(self, name: str) -> NodeRef:
        return self.functions[self.outputs.index(name)]

    def as_dict(self) -> Dict[str, NodeRef]:
        return dict(zip(self.outputs, self.functions))


def synthesize_outputs(
    manager: Manager,
    xi: NodeRef,
    inputs: Sequence[str],
    outputs: Sequence[str],
) -> OutputFunctions:
    """Find output functions over `inputs` that satisfy `xi` where possible.

    Outputs are eliminated last first. For each output y the remaining
    relation r decides ``y = !r[y=0] & r[y=1]``, so y is only set when it
    has to be. Then y is abstracted from r. Afterwards every function is
    rewritten over the inputs by substituting the functions of the earlier
    outputs, in declaration order.

    :param manager:
        manager owning `xi`; all names must be declared there
    :param xi:
        relation over `inputs` and `outputs`
    :return:
        functions whose supports lie within `inputs`; for an input with no
        admissible output every function is false
    """
    outside = manager.support(xi) - set(inputs) - set(outputs)
    if outside:
        err_msg = f"relation mentions {', '.join(sorted(outside))}"
        raise SynthesisError(
            ErrorCode.INVALID_ARGUMENT, err_msg, "synthesize_outputs"
        )

    remaining = xi
    local: Dict[str, NodeRef] = {}
    for name in reversed(outputs):
        low = manager.cofactor(remaining, name, polarity=False)
        high = manager.cofactor(remaining, name, polarity=True)
        local[name] = manager.apply_and(manager.apply_not(low), high)
        remaining = manager.apply_or(low, high)

    functions: Dict[str, NodeRef] = {}
    for position, name in enumerate(outputs):
        earlier = outputs[:position]
        functions[name] = manager.compose_vector(
            local[name],
            {prev: functions[prev] for prev in earlier},
            variables=earlier,
        )
    LOG.debug(
        "output functions: %s",
        {name: manager.node_count(fn) for name, fn in functions.items()},
    )
    return OutputFunctions(
        outputs=tuple(outputs),
        functions=tuple(functions[name] for name in outputs),
    )
