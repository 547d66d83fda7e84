# SPDX-FileCopyrightText: 2022-present Artur Drogunow <artur.drogunow@zf.com>
#
# SPDX-License-Identifier: MIT
"""Bad-prefix automata of safety formulas.

The explicit DFA is built by formula progression of the negated formula,
minimised by partition refinement, dualised into a safety automaton with a
partial transition function and finally bit-encoded over decision diagrams.
"""

import collections
import enum
import functools
from dataclasses import dataclass, field
from typing import (
    AbstractSet,
    Deque,
    Dict,
    FrozenSet,
    Iterable,
    List,
    NamedTuple,
    Optional,
    Sequence,
    Tuple,
    Union,
)

import numpy as np
import numpy.typing as npt

from .bdd import Manager, NodeRef
from .config import RC
from .ltl.formula import (
    TRUE,
    And,
    Atom,
    FalseConst,
    Finally,
    Formula,
    NegAtom,
    Next,
    Or,
    Partition,
    TrueConst,
    Until,
    conjunction,
    disjunction,
    find_violation,
    is_cosafety,
    is_nnf,
    is_safety,
    negate_nnf,
    simplify,
    to_nnf,
    to_text,
)
from .ltl.semantics import holds_at_end
from .utils import (
    LOG,
    Cube,
    ErrorCode,
    ParseError,
    SynthesisError,
    cube_matches,
    cube_text,
)


class Edge(NamedTuple):
    guard: Cube
    target: int


class DFAStatistics(NamedTuple):
    states: int
    edges: int
    accepting: int
    bits: int


def _state_bits(num_states: int) -> int:
    return max(1, (num_states - 1).bit_length())


def _dense_table(
    alphabet: Sequence[str], edges: Sequence[Sequence[Edge]]
) -> npt.NDArray[np.int64]:
    """Successor per (state, letter index); -1 where no edge matches."""
    position = {name: bit for bit, name in enumerate(alphabet)}
    index = np.arange(1 << len(alphabet), dtype=np.int64)
    table = np.full((len(edges), index.size), -1, dtype=np.int64)
    for state, state_edges in enumerate(edges):
        for edge in state_edges:
            care = sum(1 << position[name] for name, _ in edge.guard)
            value = sum(1 << position[name] for name, v in edge.guard if v)
            table[state, (index & care) == value] = edge.target
    return table


def _find_edge(edges: Sequence[Edge], item: AbstractSet[str]) -> Optional[int]:
    for edge in edges:
        if cube_matches(edge.guard, item):
            return edge.target
    return None


@dataclass(frozen=True)
class ExplicitDFA:
    """Total deterministic automaton over the letters of `alphabet`.

    Transitions are stored per state as edges labelled with cubes; the
    cubes of one state partition the letters.
    """

    alphabet: Tuple[str, ...]
    edges: Tuple[Tuple[Edge, ...], ...]
    accepting: FrozenSet[int]
    initial: int = 0
    #: obligation still open in each state; the accepting sink carries true
    state_formulas: Tuple[Formula, ...] = field(default=(), compare=False)

    @property
    def num_states(self) -> int:
        return len(self.edges)

    @property
    def num_edges(self) -> int:
        return sum(len(state_edges) for state_edges in self.edges)

    def step(self, state: int, item: AbstractSet[str]) -> int:
        if not 0 <= state < self.num_states:
            err_msg = f"no state {state} in a DFA with {self.num_states} states"
            raise SynthesisError(ErrorCode.INVALID_ARGUMENT, err_msg, "step")
        target = _find_edge(self.edges[state], item)
        if target is None:
            err_msg = f"state {state} has no edge for {sorted(item)}"
            raise SynthesisError(ErrorCode.INVALID_ARGUMENT, err_msg, "step")
        return target

    def run(self, word: Iterable[AbstractSet[str]]) -> int:
        state = self.initial
        for item in word:
            state = self.step(state, item)
        return state

    def accepts(self, word: Iterable[AbstractSet[str]]) -> bool:
        return self.run(word) in self.accepting

    def transition_table(self) -> npt.NDArray[np.int64]:
        """Dense successor table indexed by state and letter index.

        Bit i of a letter index is the value of ``alphabet[i]``.
        """
        return _dense_table(self.alphabet, self.edges)

    def to_text(self) -> str:
        lines = [
            f"alphabet {' '.join(self.alphabet)}".rstrip(),
            f"states {self.num_states}",
            f"initial {self.initial}",
            f"accepting {' '.join(str(s) for s in sorted(self.accepting))}".rstrip(),
        ]
        for source, state_edges in enumerate(self.edges):
            lines.extend(
                f"{source} {cube_text(edge.guard)} {edge.target}"
                for edge in state_edges
            )
        return "\n".join(lines) + "\n"


def parse_dfa_text(text: str) -> ExplicitDFA:
    """Read the format written by :meth:`ExplicitDFA.to_text`."""
    header: Dict[str, List[str]] = {}
    edge_lines: List[Tuple[int, List[str]]] = []
    for number, raw_line in enumerate(text.splitlines(), start=1):
        fields = raw_line.split()
        if not fields:
            continue
        if fields[0] in ("alphabet", "states", "initial", "accepting"):
            header[fields[0]] = fields[1:]
        else:
            edge_lines.append((number, fields))

    for keyword in ("states", "initial"):
        if len(header.get(keyword, ())) != 1:
            err_msg = f"expected exactly one value after {keyword!r}"
            raise ParseError(err_msg, "parse_dfa_text")

    try:
        num_states = int(header["states"][0])
        initial = int(header["initial"][0])
        accepting = frozenset(int(value) for value in header.get("accepting", ()))
    except ValueError as exc:
        raise ParseError(str(exc), "parse_dfa_text") from None

    alphabet = tuple(header.get("alphabet", ()))
    edges: List[List[Edge]] = [[] for _ in range(num_states)]
    for number, fields in edge_lines:
        if len(fields) < 3:
            err_msg = "expected 'source guard target'"
            raise ParseError(err_msg, "parse_dfa_text", number, 1)
        try:
            source, target = int(fields[0]), int(fields[-1])
        except ValueError:
            err_msg = "state indices must be integers"
            raise ParseError(err_msg, "parse_dfa_text", number, 1) from None
        if not (0 <= source < num_states and 0 <= target < num_states):
            err_msg = f"state index out of range 0..{num_states - 1}"
            raise ParseError(err_msg, "parse_dfa_text", number, 1)
        guard = _parse_guard(" ".join(fields[1:-1]), alphabet, number)
        edges[source].append(Edge(guard, target))

    if not 0 <= initial < num_states or any(
        not 0 <= s < num_states for s in accepting
    ):
        err_msg = "initial or accepting state out of range"
        raise ParseError(err_msg, "parse_dfa_text")
    return ExplicitDFA(
        alphabet=alphabet,
        edges=tuple(tuple(state_edges) for state_edges in edges),
        accepting=accepting,
        initial=initial,
    )


def _parse_guard(text: str, alphabet: Sequence[str], line: int) -> Cube:
    if text == "true":
        return ()
    literals: Dict[str, bool] = {}
    for part in text.split("&"):
        literal = part.strip()
        name = literal.lstrip("!")
        if name not in alphabet or len(literal) - len(name) > 1:
            err_msg = f"bad literal {literal!r}"
            raise ParseError(err_msg, "parse_dfa_text", line, 1)
        literals[name] = not literal.startswith("!")
    return tuple((name, literals[name]) for name in alphabet if name in literals)


@dataclass(frozen=True)
class SafetyAutomaton:
    """Deterministic safety automaton with a partial transition function.

    A trace is accepted iff the run on it never gets stuck. The empty
    automaton has no initial state and accepts nothing.
    """

    alphabet: Tuple[str, ...]
    edges: Tuple[Tuple[Edge, ...], ...]
    initial: Optional[int]
    #: index of each state in the DFA it was dualised from
    origin: Tuple[int, ...] = ()

    @property
    def num_states(self) -> int:
        return len(self.edges)

    def is_empty(self) -> bool:
        return self.initial is None

    def step(self, state: int, item: AbstractSet[str]) -> Optional[int]:
        """Successor of `state` on `item`, or ``None`` where undefined."""
        return _find_edge(self.edges[state], item)

    def run(self, word: Iterable[AbstractSet[str]]) -> Optional[int]:
        state = self.initial
        for item in word:
            if state is None:
                break
            state = self.step(state, item)
        return state

    def table(self) -> npt.NDArray[np.int64]:
        return _dense_table(self.alphabet, self.edges)


# progression
#
# An obligation is a positive boolean combination of elements: literals,
# X-formulas and the Until and Finally subformulas of the initial obligation.
# It is stored as an antichain of clauses, a DNF in which no clause contains
# another. Equal obligations have equal keys, and there are finitely many.


class _Sink(enum.Enum):
    ACCEPTING = "accepting"


_Clause = FrozenSet[Formula]
_Obligation = FrozenSet[_Clause]
_StateKey = Union[_Obligation, _Sink]

_TOP: _Obligation = frozenset({frozenset()})
_BOTTOM: _Obligation = frozenset()


def _contradictory(clause: _Clause) -> bool:
    return any(
        isinstance(element, Atom) and NegAtom(element.name) in clause
        for element in clause
    )


def _antichain(clauses: Iterable[_Clause]) -> _Obligation:
    kept: List[_Clause] = []
    for clause in sorted(
        {c for c in clauses if not _contradictory(c)}, key=len
    ):
        if not any(other <= clause for other in kept):
            kept.append(clause)
    return frozenset(kept)


def _product(left: _Obligation, right: _Obligation) -> _Obligation:
    return _antichain(a | b for a in left for b in right)


def _single(element: Formula) -> _Obligation:
    return frozenset({frozenset({element})})


@functools.lru_cache(maxsize=65536)
def _obligation(f: Formula) -> _Obligation:
    if isinstance(f, TrueConst):
        return _TOP
    if isinstance(f, FalseConst):
        return _BOTTOM
    if isinstance(f, And):
        return _product(_obligation(f.left), _obligation(f.right))
    if isinstance(f, Or):
        return _antichain(_obligation(f.left) | _obligation(f.right))
    return _single(f)


@functools.lru_cache(maxsize=65536)
def _unfold_element(element: Formula) -> _Obligation:
    """One-step unfolding into literals and ``X`` markers."""
    if isinstance(element, (Atom, NegAtom, Next)):
        return _single(element)
    if isinstance(element, Until):
        now = _unfold(_obligation(element.right))
        later = _product(_unfold(_obligation(element.left)), _single(Next(element)))
        return _antichain(now | later)
    if isinstance(element, Finally):
        now = _unfold(_obligation(element.child))
        return _antichain(now | _single(Next(element)))
    err_msg = f"unexpected node in co-safety formula: {element!r}"
    raise TypeError(err_msg)


@functools.lru_cache(maxsize=65536)
def _unfold(obligation: _Obligation) -> _Obligation:
    clauses: List[_Clause] = []
    for clause in obligation:
        part = _TOP
        for element in clause:
            part = _product(part, _unfold_element(element))
        clauses.extend(part)
    return _antichain(clauses)


def _literal_names(obligation: _Obligation) -> FrozenSet[str]:
    return frozenset(
        element.name
        for clause in obligation
        for element in clause
        if isinstance(element, (Atom, NegAtom))
    )


def _assign(obligation: _Obligation, name: str, value: bool) -> _Obligation:
    met, failed = (Atom(name), NegAtom(name))
    if not value:
        met, failed = failed, met
    return _antichain(clause - {met} for clause in obligation if failed not in clause)


def _successor(obligation: _Obligation) -> _Obligation:
    """Obligation left for the next letter once every literal is decided."""
    clauses: List[_Clause] = []
    for clause in obligation:
        part = _TOP
        for marker in clause:
            assert isinstance(marker, Next)
            part = _product(part, _obligation(marker.child))
        clauses.extend(part)
    return _antichain(clauses)


def _formula(obligation: _Obligation) -> Formula:
    return disjunction(*(conjunction(*clause) for clause in obligation))


def _require_cosafety(psi: Formula, function: str) -> None:
    if not (is_nnf(psi) and is_cosafety(psi)):
        err_msg = f"formula is not co-safety: {to_text(psi)}"
        raise SynthesisError(ErrorCode.FRAGMENT_VIOLATION, err_msg, function)


def progress(psi: Formula, item: AbstractSet[str]) -> Formula:
    """Return the obligation left by `psi` after reading the letter `item`.

    The result is ``true`` when `item` alone is a good prefix of `psi`.
    Otherwise a nonempty trace continues a good prefix iff it is a good prefix
    of the returned formula. This can also be ``true``, namely when `psi`
    only asks for one more letter of any kind (``X true``).

    :param psi:
        co-safety formula in negation normal form
    :param item:
        the atoms that are true in the letter
    :raises ~pysafesynth.utils.SynthesisError:
        if `psi` is not a co-safety formula in NNF
    """
    _require_cosafety(psi, "progress")
    if holds_at_end(psi, item):
        return TRUE
    obligation = _unfold(_obligation(psi))
    for name in sorted(_literal_names(obligation)):
        obligation = _assign(obligation, name, name in item)
    return _formula(_successor(obligation))


def _edges_of(
    obligation: _Obligation, alphabet: Sequence[str]
) -> List[Tuple[Cube, _StateKey]]:
    """Guarded successors of an obligation, split in alphabet order.

    A split stops as soon as no literal is left; sibling cubes leading to the
    same successor are merged.
    """

    def split(current: _Obligation, cube: Cube) -> List[Tuple[Cube, _StateKey]]:
        if current == _TOP:
            return [(cube, _Sink.ACCEPTING)]
        present = _literal_names(current)
        if not present:
            return [(cube, _successor(current))]
        name = next(n for n in alphabet if n in present)
        low = split(_assign(current, name, False), (*cube, (name, False)))
        high = split(_assign(current, name, True), (*cube, (name, True)))
        if len(low) == len(high) == 1 and low[0][1] == high[0][1]:
            return [(cube, low[0][1])]
        return low + high

    return split(_unfold(obligation), ())


def _require_safety(phi: Formula, function: str) -> Formula:
    nnf = to_nnf(phi)
    if not is_safety(nnf):
        violation = find_violation(nnf)
        err_msg = (
            f"{to_text(violation) if violation else to_text(phi)} "
            "is not allowed in a safety formula"
        )
        raise SynthesisError(ErrorCode.FRAGMENT_VIOLATION, err_msg, function)
    return nnf


def build_bad_prefix_dfa(
    phi: Formula, part: Partition, state_cap: Optional[int] = None
) -> ExplicitDFA:
    """Build a DFA that accepts exactly the bad prefixes of `phi`.

    States are the progression obligations of the negated formula, explored
    breadth first. All obligations that are met merge into one accepting
    absorbing sink.

    :param phi:
        safety formula over the propositions of `part`
    :param part:
        input/output partition; fixes the alphabet order
    :param state_cap:
        maximal number of states, ``RC["STATE_CAP"]`` if omitted
    :raises ~pysafesynth.utils.SynthesisError:
        with :attr:`~pysafesynth.utils.ErrorCode.FRAGMENT_VIOLATION` if `phi`
        contains an eventuality, or
        :attr:`~pysafesynth.utils.ErrorCode.RESOURCE_EXHAUSTED` if the cap
        is exceeded
    """
    nnf = _require_safety(phi, "build_bad_prefix_dfa")
    part.check(nnf)
    cap = RC["STATE_CAP"] if state_cap is None else state_cap
    alphabet = part.alphabet

    keys: Dict[_StateKey, int] = {}
    formulas: List[Formula] = []
    queue: Deque[_StateKey] = collections.deque()

    def index_of(key: _StateKey) -> int:
        if key not in keys:
            if len(keys) >= cap:
                err_msg = f"more than {cap} states"
                raise SynthesisError(
                    ErrorCode.RESOURCE_EXHAUSTED, err_msg, "build_bad_prefix_dfa"
                )
            keys[key] = len(keys)
            if key is _Sink.ACCEPTING:
                formulas.append(TRUE)
            else:
                formulas.append(_formula(key))
            queue.append(key)
        return keys[key]

    initial = _obligation(simplify(negate_nnf(nnf)))
    index_of(_Sink.ACCEPTING if initial == _TOP else initial)

    edges: List[Tuple[Edge, ...]] = []
    while queue:
        key = queue.popleft()
        if key is _Sink.ACCEPTING:
            edges.append((Edge((), keys[key]),))
            continue
        edges.append(
            tuple(
                Edge(cube, index_of(target))
                for cube, target in _edges_of(key, alphabet)  # type: ignore[arg-type]
            )
        )
        LOG.debug(
            "state %d: %s, %d edges",
            len(edges) - 1,
            to_text(formulas[len(edges) - 1]),
            len(edges[-1]),
        )

    accepting = frozenset(
        index for key, index in keys.items() if key is _Sink.ACCEPTING
    )
    LOG.info("bad-prefix DFA of %s: %d states", to_text(nnf), len(edges))
    return ExplicitDFA(
        alphabet=alphabet,
        edges=tuple(edges),
        accepting=accepting,
        initial=0,
        state_formulas=tuple(formulas),
    )


def _reachable(d: ExplicitDFA) -> List[int]:
    seen = {d.initial}
    order = [d.initial]
    for state in order:
        for edge in d.edges[state]:
            if edge.target not in seen:
                seen.add(edge.target)
                order.append(edge.target)
    return order


def minimize_dfa(d: ExplicitDFA) -> ExplicitDFA:
    """Return the minimal DFA of the language of `d`.

    Unreachable states are dropped, then blocks of equivalent states are
    refined until stable. Two states stay together while they agree on
    acceptance and, per target block, on the letters leading there. Blocks
    are numbered in breadth-first order, so the initial state keeps index 0.
    """
    states = _reachable(d)
    manager = Manager(d.alphabet)
    guards = {
        state: [manager.cube(dict(edge.guard)) for edge in d.edges[state]]
        for state in states
    }
    block = {state: int(state in d.accepting) for state in states}
    num_blocks = len(set(block.values()))
    while True:
        signatures: Dict[Tuple[int, FrozenSet[Tuple[int, int]]], int] = {}
        refined: Dict[int, int] = {}
        alive: List[NodeRef] = []
        for state in states:
            per_block: Dict[int, NodeRef] = {}
            for edge, guard in zip(d.edges[state], guards[state]):
                target_block = block[edge.target]
                merged = per_block.get(target_block, manager.false)
                per_block[target_block] = merged | guard
            alive.extend(per_block.values())
            signature = (
                block[state],
                frozenset((b, int(g.node)) for b, g in per_block.items()),
            )
            refined[state] = signatures.setdefault(signature, len(signatures))
        block = refined
        if len(signatures) == num_blocks:
            break
        num_blocks = len(signatures)

    representative: Dict[int, int] = {}
    for state in states:
        representative.setdefault(block[state], state)
    numbering = {block[d.initial]: 0}
    order = [block[d.initial]]
    for current in order:
        for edge in d.edges[representative[current]]:
            target = block[edge.target]
            if target not in numbering:
                numbering[target] = len(numbering)
                order.append(target)

    edges = tuple(
        tuple(
            Edge(edge.guard, numbering[block[edge.target]])
            for edge in d.edges[representative[current]]
        )
        for current in order
    )
    formulas: Tuple[Formula, ...] = ()
    if d.state_formulas:
        formulas = tuple(d.state_formulas[representative[b]] for b in order)
    LOG.debug("minimised DFA from %d to %d states", d.num_states, len(order))
    return ExplicitDFA(
        alphabet=d.alphabet,
        edges=edges,
        accepting=frozenset(
            numbering[block[s]] for s in states if s in d.accepting
        ),
        initial=0,
        state_formulas=formulas,
    )


def dualize_to_dsa(d: ExplicitDFA) -> SafetyAutomaton:
    """Drop the accepting states of `d` and every transition into them."""
    if d.initial in d.accepting:
        return SafetyAutomaton(alphabet=d.alphabet, edges=(), initial=None)
    kept = [d.initial] + [
        s for s in range(d.num_states) if s != d.initial and s not in d.accepting
    ]
    index = {state: i for i, state in enumerate(kept)}
    edges = tuple(
        tuple(
            Edge(edge.guard, index[edge.target])
            for edge in d.edges[state]
            if edge.target not in d.accepting
        )
        for state in kept
    )
    return SafetyAutomaton(
        alphabet=d.alphabet, edges=edges, initial=0, origin=tuple(kept)
    )


@dataclass(frozen=True)
class SymbolicDFA:
    """Bit-encoded DFA over a game manager.

    State i is encoded by the binary digits of i, ``state_vars[0]`` being the
    least significant bit. ``eta[j]`` gives the next value of ``state_vars[j]``
    and `accepting` marks the bad encodings, including encodings of no state.
    """

    manager: Manager
    inputs: Tuple[str, ...]
    outputs: Tuple[str, ...]
    state_vars: Tuple[str, ...]
    eta: Tuple[NodeRef, ...]
    accepting: NodeRef
    num_states: int

    @property
    def initial(self) -> Dict[str, bool]:
        return self.encode_state(0)

    def encode_state(self, index: int) -> Dict[str, bool]:
        if not 0 <= index < 1 << len(self.state_vars):
            err_msg = f"state {index} does not fit into {len(self.state_vars)} bits"
            raise SynthesisError(ErrorCode.INVALID_ARGUMENT, err_msg, "encode_state")
        return {var: bool(index >> bit & 1) for bit, var in enumerate(self.state_vars)}

    def decode_state(self, assignment: Dict[str, bool]) -> int:
        return sum(
            1 << bit for bit, var in enumerate(self.state_vars) if assignment.get(var)
        )

    def substitution(self) -> Dict[str, NodeRef]:
        return dict(zip(self.state_vars, self.eta))

    def successor(self, index: int, item: AbstractSet[str]) -> int:
        """Evaluate the transition functions on an encoded state and a letter."""
        values = self.encode_state(index)
        values.update({name: name in item for name in self.inputs + self.outputs})
        return sum(
            1 << bit
            for bit, fn in enumerate(self.eta)
            if self.manager.eval_assignment(fn, values)
        )


def _state_var_names(num_bits: int, taken: AbstractSet[str]) -> Tuple[str, ...]:
    prefix = "z"
    while any(f"{prefix}{i}" in taken for i in range(num_bits)):
        prefix = f"_{prefix}"
    return tuple(f"{prefix}{i}" for i in range(num_bits))


def encode_symbolic(d: ExplicitDFA, part: Partition) -> SymbolicDFA:
    """Encode `d` over state bits, inputs and outputs, in this variable order.

    The initial state must have index 0 so that it is encoded by all bits
    false.
    """
    if set(d.alphabet) != set(part.alphabet):
        err_msg = "DFA alphabet and partition differ"
        raise SynthesisError(ErrorCode.PARTITION_ERROR, err_msg, "encode_symbolic")
    if d.initial != 0:
        err_msg = "the initial state must have index 0"
        raise SynthesisError(ErrorCode.INVALID_ARGUMENT, err_msg, "encode_symbolic")

    num_bits = _state_bits(d.num_states)
    state_vars = _state_var_names(num_bits, set(part.alphabet))
    manager = Manager.for_game(state_vars, part.inputs, part.outputs)

    def state_cube(index: int) -> NodeRef:
        return manager.cube(
            {var: bool(index >> bit & 1) for bit, var in enumerate(state_vars)}
        )

    eta = [manager.false] * num_bits
    encodings = manager.false
    for state, state_edges in enumerate(d.edges):
        current = state_cube(state)
        encodings = encodings | current
        for edge in state_edges:
            move = current & manager.cube(dict(edge.guard))
            for bit in range(num_bits):
                if edge.target >> bit & 1:
                    eta[bit] = eta[bit] | move

    bad = manager.false
    for state in d.accepting:
        bad = bad | state_cube(state)
    bad = bad | ~encodings
    LOG.debug("encoded %d states with %d bits", d.num_states, num_bits)
    return SymbolicDFA(
        manager=manager,
        inputs=part.inputs,
        outputs=part.outputs,
        state_vars=state_vars,
        eta=tuple(eta),
        accepting=bad,
        num_states=d.num_states,
    )


def dfa_statistics(d: ExplicitDFA) -> DFAStatistics:
    return DFAStatistics(
        states=d.num_states,
        edges=d.num_edges,
        accepting=len(d.accepting),
        bits=_state_bits(d.num_states),
    )
