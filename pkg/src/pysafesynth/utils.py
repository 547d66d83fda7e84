# SPDX-FileCopyrightText: 2022-present Artur Drogunow <artur.drogunow@zf.com>
#
# SPDX-License-Identifier: MIT
import contextlib
import itertools
import logging
import sys
from enum import IntEnum
from typing import (
    AbstractSet,
    Any,
    Dict,
    FrozenSet,
    Iterator,
    List,
    Mapping,
    Sequence,
    Tuple,
    TypeVar,
    Union,
)

import psutil

if sys.version_info >= (3, 10):
    from typing import TypeAlias
else:
    from typing_extensions import TypeAlias

LOG = logging.getLogger("pysafesynth")

T = TypeVar("T")

#: A letter is the set of propositions that are true at one instant.
Letter: TypeAlias = FrozenSet[str]

#: A cube is a partial assignment, sorted by alphabet position.
Cube: TypeAlias = Tuple[Tuple[str, bool], ...]


class ErrorCode(IntEnum):
    PARSE_ERROR = 1
    PARTITION_ERROR = 2
    NOT_NNF = 3
    FRAGMENT_VIOLATION = 4
    INVALID_ARGUMENT = 5
    RESOURCE_EXHAUSTED = 6
    MIXED_MANAGER = 7
    MISSING_SUBSTITUTION = 8
    INCOMPLETE_ASSIGNMENT = 9
    NON_STATE_REGION = 10
    EMPTY_AUTOMATON = 11
    UNREALIZABLE = 12
    STATE_OUTSIDE_REGION = 13
    UNKNOWN_FORMAT = 14
    TIMEOUT = 15
    INTERNAL_ERROR = 16


class SynthesisError(Exception):
    def __init__(
        self, error_code: ErrorCode, error_string: str, function: str
    ) -> None:
        #: The error code according to :class:`~pysafesynth.utils.ErrorCode`
        self.error_code = error_code
        self.error_string = error_string
        super().__init__(f"{function} failed ({error_string})")

        # keep reference to args for pickling
        self._args: Tuple[Any, ...] = (error_code, error_string, function)

    def __reduce__(self) -> Union[str, Tuple[Any, ...]]:
        return self.__class__, self._args, {}


class ParseError(SynthesisError):
    def __init__(
        self, error_string: str, function: str, line: int = -1, column: int = -1
    ) -> None:
        #: 1-based position of the offending token, -1 if unknown
        self.line = line
        self.column = column
        message = error_string
        if line > 0:
            message = f"line {line}, column {column}: {error_string}"
        super().__init__(ErrorCode.PARSE_ERROR, message, function)
        self._args = (error_string, function, line, column)


def iter_assignments(names: Sequence[str]) -> Iterator[Dict[str, bool]]:
    """Enumerate all assignments to `names`.

    The first name is the least significant bit, so the n-th yielded
    assignment is the binary encoding of n.
    """
    for values in itertools.product((False, True), repeat=len(names)):
        yield dict(zip(names, reversed(values)))


def assignment_index(names: Sequence[str], values: Mapping[str, bool]) -> int:
    """Return the position of `values` in :func:`iter_assignments` order."""
    index = 0
    for bit, name in enumerate(names):
        if values.get(name, False):
            index |= 1 << bit
    return index


def letter_index(names: Sequence[str], true_atoms: AbstractSet[str]) -> int:
    index = 0
    for bit, name in enumerate(names):
        if name in true_atoms:
            index |= 1 << bit
    return index


def index_letter(names: Sequence[str], index: int) -> Letter:
    return frozenset(name for bit, name in enumerate(names) if index >> bit & 1)


def cube_matches(cube: Cube, true_atoms: AbstractSet[str]) -> bool:
    return all((name in true_atoms) == value for name, value in cube)


def kill_process_tree(pid: int) -> None:
    """Kill a process and all of its children."""
    with contextlib.suppress(psutil.NoSuchProcess):
        parent = psutil.Process(pid)
        for child in parent.children(recursive=True):
            with contextlib.suppress(psutil.NoSuchProcess, psutil.AccessDenied):
                child.kill()
        with contextlib.suppress(psutil.AccessDenied):
            parent.kill()


def resident_memory_mib() -> float:
    """Return the resident set size of the current process in MiB."""
    return psutil.Process().memory_info().rss / 2**20


def cube_cover(names: Sequence[str], targets: Sequence[T]) -> List[Tuple[Cube, T]]:
    """Cover the assignments to `names` by cubes that agree on the target.

    ``targets[i]`` belongs to the assignment with index i, bit j being the
    value of ``names[j]``. Cubes are split in `names` order and a split stops
    as soon as every assignment below it has the same target.
    """
    result: List[Tuple[Cube, T]] = []

    def split(depth: int, cube: Cube, members: List[int]) -> None:
        first = targets[members[0]]
        if all(targets[member] == first for member in members):
            result.append((cube, first))
            return
        name = names[depth]
        for value in (False, True):
            split(
                depth + 1,
                (*cube, (name, value)),
                [m for m in members if bool(m >> depth & 1) == value],
            )

    split(0, (), list(range(len(targets))))
    return result


def cube_text(cube: Cube) -> str:
    if not cube:
        return "true"
    return " & ".join(name if value else f"!{name}" for name, value in cube)
