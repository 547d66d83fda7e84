# SPDX-FileCopyrightText: 2022-present Artur Drogunow <artur.drogunow@zf.com>
#
# SPDX-License-Identifier: MIT
"""Reduced ordered binary decision diagrams.

:class:`Manager` is a thin facade over :mod:`dd.autoref`. It fixes the
variable order at declaration time, never reorders, and checks that
operands belong to it.
"""

import functools
import importlib.metadata
import sys
from typing import (
    Dict,
    FrozenSet,
    Iterable,
    Iterator,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
)

import graphviz
from dd import autoref
from packaging.version import Version

from .config import RC
from .utils import LOG, ErrorCode, SynthesisError

if sys.version_info >= (3, 10):
    from typing import TypeAlias
else:
    from typing_extensions import TypeAlias

#: Handle to a diagram node; only valid within its :class:`Manager`.
NodeRef: TypeAlias = autoref.Function


@functools.lru_cache(maxsize=None)
def _check_backend_version() -> None:
    try:
        installed = Version(importlib.metadata.version("dd"))
    except importlib.metadata.PackageNotFoundError:
        return
    required = Version(RC["MIN_DD_VERSION"])
    if installed < required:
        LOG.warning(
            "dd %s is older than the tested minimum %s, "
            "some operations may be unavailable",
            installed,
            required,
        )


class Manager:
    def __init__(self, variables: Iterable[str] = ()) -> None:
        """Create a diagram manager.

        :param variables:
            variable order, topmost first. More variables can be appended
            later with :meth:`declare`.
        """
        _check_backend_version()
        self._bdd = autoref.BDD()
        self._bdd.configure(reordering=False)
        self._order: List[str] = []
        self.state_vars: Tuple[str, ...] = ()
        self.inputs: Tuple[str, ...] = ()
        self.outputs: Tuple[str, ...] = ()
        self.declare(*variables)

    @classmethod
    def for_game(
        cls,
        state_vars: Sequence[str],
        inputs: Sequence[str],
        outputs: Sequence[str],
    ) -> "Manager":
        """Create a manager with state bits above inputs above outputs."""
        manager = cls([*state_vars, *inputs, *outputs])
        manager.state_vars = tuple(state_vars)
        manager.inputs = tuple(inputs)
        manager.outputs = tuple(outputs)
        return manager

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(variables={self._order!r})"

    def declare(self, *variables: str) -> None:
        for var in variables:
            if var not in self._order:
                self._bdd.declare(var)
                self._order.append(var)

    @property
    def order(self) -> Tuple[str, ...]:
        return tuple(self._order)

    def level(self, var: str) -> int:
        self._check_vars([var], "level")
        return int(self._bdd.level_of_var(var))

    @property
    def true(self) -> NodeRef:
        return self._bdd.true

    @property
    def false(self) -> NodeRef:
        return self._bdd.false

    def _check(self, function: str, *nodes: NodeRef) -> None:
        for node in nodes:
            if getattr(node, "bdd", None) is not self._bdd:
                err_msg = "operand belongs to a different manager"
                raise SynthesisError(ErrorCode.MIXED_MANAGER, err_msg, function)

    def _check_vars(self, variables: Iterable[str], function: str) -> None:
        unknown = set(variables).difference(self._order)
        if unknown:
            err_msg = f"undeclared variables: {', '.join(sorted(unknown))}"
            raise SynthesisError(ErrorCode.INVALID_ARGUMENT, err_msg, function)

    # boolean algebra

    def mk_var(self, var: str) -> NodeRef:
        self._check_vars([var], "mk_var")
        return self._bdd.var(var)

    def apply_not(self, u: NodeRef) -> NodeRef:
        self._check("apply_not", u)
        return ~u

    def apply_and(self, *nodes: NodeRef) -> NodeRef:
        self._check("apply_and", *nodes)
        result = self.true
        for node in nodes:
            result = result & node
        return result

    def apply_or(self, *nodes: NodeRef) -> NodeRef:
        self._check("apply_or", *nodes)
        result = self.false
        for node in nodes:
            result = result | node
        return result

    def apply_equiv(self, u: NodeRef, v: NodeRef) -> NodeRef:
        self._check("apply_equiv", u, v)
        return self._bdd.ite(u, v, ~v)

    def ite(self, g: NodeRef, h: NodeRef, k: NodeRef) -> NodeRef:
        self._check("ite", g, h, k)
        return self._bdd.ite(g, h, k)

    def cube(self, assignment: Mapping[str, bool]) -> NodeRef:
        """Conjunction of the literals of a (partial) assignment."""
        self._check_vars(assignment, "cube")
        result = self.true
        for var, value in assignment.items():
            literal = self._bdd.var(var)
            result = result & (literal if value else ~literal)
        return result

    # substitution and quantification

    def compose_vector(
        self,
        w: NodeRef,
        subst: Mapping[str, NodeRef],
        variables: Optional[Iterable[str]] = None,
    ) -> NodeRef:
        """Simultaneously replace each variable `v` of `w` by ``subst[v]``.

        :param w:
            the function to substitute into
        :param subst:
            replacement function per variable
        :param variables:
            variables that must be replaced wherever they occur in `w`;
            defaults to the state variables of a game manager, or to the
            keys of `subst`
        """
        self._check("compose_vector", w, *subst.values())
        self._check_vars(subst, "compose_vector")
        if variables is None:
            variables = self.state_vars or tuple(subst)
        missing = (self.support(w) & set(variables)) - set(subst)
        if missing:
            err_msg = f"no substitution for {', '.join(sorted(missing))}"
            raise SynthesisError(
                ErrorCode.MISSING_SUBSTITUTION, err_msg, "compose_vector"
            )
        if not subst:
            return w
        return self._shannon_compose(w, dict(subst), {})

    def _shannon_compose(
        self, u: NodeRef, subst: Dict[str, NodeRef], memo: Dict[NodeRef, NodeRef]
    ) -> NodeRef:
        # Shannon expansion; let only ever sees constant values here
        if u == self._bdd.true or u == self._bdd.false:
            return u
        if u in memo:
            return memo[u]
        var = u.var
        low = self._shannon_compose(self._bdd.let({var: False}, u), subst, memo)
        high = self._shannon_compose(self._bdd.let({var: True}, u), subst, memo)
        g = subst.get(var, self._bdd.var(var))
        memo[u] = result = self._bdd.ite(g, high, low)
        return result

    def exists_abstract(self, g: NodeRef, variables: Iterable[str]) -> NodeRef:
        self._check("exists_abstract", g)
        qvars = set(variables)
        self._check_vars(qvars, "exists_abstract")
        if not qvars:
            return g
        return self._bdd.exist(qvars, g)

    def forall_abstract(self, g: NodeRef, variables: Iterable[str]) -> NodeRef:
        self._check("forall_abstract", g)
        qvars = set(variables)
        self._check_vars(qvars, "forall_abstract")
        if not qvars:
            return g
        return self._bdd.forall(qvars, g)

    def cofactor(self, g: NodeRef, var: str, polarity: bool) -> NodeRef:
        self._check("cofactor", g)
        self._check_vars([var], "cofactor")
        return self._bdd.let({var: bool(polarity)}, g)

    def restrict(self, g: NodeRef, assignment: Mapping[str, bool]) -> NodeRef:
        """Cofactor `g` by every literal of a partial assignment."""
        self._check("restrict", g)
        self._check_vars(assignment, "restrict")
        if not assignment:
            return g
        return self._bdd.let({var: bool(v) for var, v in assignment.items()}, g)

    def eval_assignment(self, g: NodeRef, assignment: Mapping[str, bool]) -> bool:
        """Value of `g` under an assignment covering its support."""
        self._check("eval_assignment", g)
        support = self.support(g)
        missing = support - set(assignment)
        if missing:
            err_msg = f"no value for {', '.join(sorted(missing))}"
            raise SynthesisError(
                ErrorCode.INCOMPLETE_ASSIGNMENT, err_msg, "eval_assignment"
            )
        if not support:
            return bool(g == self.true)
        values = {var: bool(assignment[var]) for var in support}
        return bool(self._bdd.let(values, g) == self.true)

    # inspection

    def support(self, u: NodeRef) -> FrozenSet[str]:
        self._check("support", u)
        return frozenset(self._bdd.support(u))

    def node_count(self, u: NodeRef) -> int:
        self._check("node_count", u)
        return int(u.dag_size)

    def count_minterms(self, u: NodeRef, variables: Sequence[str]) -> int:
        """Number of satisfying assignments over `variables`."""
        self._check("count_minterms", u)
        outside = self.support(u) - set(variables)
        if outside:
            err_msg = f"support exceeds the counted variables: {sorted(outside)}"
            raise SynthesisError(
                ErrorCode.INVALID_ARGUMENT, err_msg, "count_minterms"
            )
        if u == self.false:
            return 0
        return int(self._bdd.count(u, nvars=len(set(variables))))

    def pick_all(
        self, u: NodeRef, variables: Sequence[str]
    ) -> Iterator[Dict[str, bool]]:
        """Enumerate the satisfying assignments of `u` over `variables`."""
        self._check("pick_all", u)
        self._check_vars(variables, "pick_all")
        if u == self.false:
            return
        yield from self._bdd.pick_iter(u, care_vars=set(variables))

    def implies(self, u: NodeRef, v: NodeRef) -> bool:
        self._check("implies", u, v)
        return bool((u & ~v) == self.false)

    def top_var(self, u: NodeRef) -> Optional[str]:
        self._check("top_var", u)
        return u.var  # type: ignore[no-any-return]

    def to_dot(self, u: NodeRef, name: str = "bdd") -> str:
        """DOT text of the diagram rooted at `u`; dashed edges are low edges."""
        self._check("to_dot", u)
        dot = graphviz.Digraph(name=name)
        ids: Dict[int, str] = {}
        edges: List[Tuple[int, int, bool]] = []
        stack = [u]
        while stack:
            node = stack.pop()
            if node.node in ids:
                continue
            ids[node.node] = f"n{len(ids)}"
            if node in (self.true, self.false):
                label = "1" if node == self.true else "0"
                dot.node(ids[node.node], label, shape="box")
                continue
            dot.node(ids[node.node], node.var)
            for polarity in (False, True):
                child = self._bdd.let({node.var: polarity}, node)
                edges.append((node.node, child.node, polarity))
                stack.append(child)
        for parent, child, polarity in edges:
            dot.edge(ids[parent], ids[child], style="solid" if polarity else "dashed")
        return dot.source
