"""Global conditions on one color class, threaded through the DP.

Each constraint contributes an input (passed top-down with a state) and an
output (a summary of the subtree, returned bottom-up with each result).
The engine calls the hooks below; any hook may return REJECT.

    root_input(v, i)                         input at the root for color i
    forget_input(v, i, gin)                  input for the child of a forget
    leaf_output(v, i, gin)
    forget_output(child_bag, child_cols, p, gout)
    introduce_output(bag, cols, p, counted, gout)
    join_right_input(gin, left_gout)
    join_output(bag, cols, counted_pairs, left_gout, right_gout)
    root_accept(gout)
    holds(g, coloring)                       direct check, used by the oracle

Class sizes are counted once per vertex, when it is forgotten or when it is
the root vertex.  Connectivity and acyclicity keep a labeling of the bag's
tracked vertices by component of the subgraph seen so far; every edge is
counted exactly once along a result (at an introduce or a join node), so a
merge of two already-joined vertices is a cycle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Hashable, Iterable, Mapping, Optional, Sequence

from .engine import REJECT, SolveResult, solve
from .graph import LabeledGraph

MAX_CONSTRAINTS = 4


class EmptySet(ValueError):
    pass


class TooManyConstraints(ValueError):
    pass


@dataclass(frozen=True)
class UnaryAutomaton:
    """Automaton over a one-letter alphabet: states 0..size-1."""

    delta: tuple
    start: int
    accepting: frozenset

    @property
    def size(self) -> int:
        return len(self.delta)

    def run(self, length: int, q: Optional[int] = None) -> int:
        q = self.start if q is None else q
        for _ in range(length):
            q = self.delta[q]
        return q

    def accepts(self, length: int) -> bool:
        return self.run(length) in self.accepting


def finite_set_automaton(sizes: Iterable[int]) -> UnaryAutomaton:
    """States s_0..s_{m+1}, m the largest size, s_{m+1} absorbing."""
    sigma = sorted(set(sizes))
    if not sigma:
        raise EmptySet("the set of allowed sizes is empty")
    if sigma[0] < 0:
        raise ValueError(f"sizes must be nonnegative, got {sigma[0]}")
    m = sigma[-1]
    delta = tuple(min(q + 1, m + 1) for q in range(m + 2))
    return UnaryAutomaton(delta, 0, frozenset(sigma))


def residue_automaton(a: int, m: int) -> UnaryAutomaton:
    if m < 1:
        raise ValueError(f"modulus must be positive, got {m}")
    return UnaryAutomaton(tuple((q + 1) % m for q in range(m)), 0, frozenset({a % m}))


def build_size_automaton(spec: Mapping[str, Any]) -> UnaryAutomaton:
    """spec is one of {"in": [sizes]}, {"residue": [a, m]}, {"nonempty": true},
    {"at_most_one": true}."""
    if "in" in spec:
        return finite_set_automaton(spec["in"])
    if "residue" in spec:
        a, m = spec["residue"]
        return residue_automaton(int(a), int(m))
    if spec.get("nonempty"):
        return UnaryAutomaton((1, 1), 0, frozenset({1}))
    if spec.get("at_most_one"):
        return finite_set_automaton((0, 1))
    raise ValueError(f"unrecognized size specification {dict(spec)!r}")


def canonical_components(labeling: Mapping[Hashable, int], order: Sequence[Hashable]) -> dict:
    """Rename component ids to 1, 2, ... by first appearance along `order`."""
    rename: dict[int, int] = {}
    out = {}
    for x in order:
        if x in labeling:
            out[x] = rename.setdefault(labeling[x], len(rename) + 1)
    return out


def _canon(labels: Sequence[int]) -> tuple:
    rename: dict[int, int] = {}
    return tuple(-1 if a < 0 else rename.setdefault(a, len(rename)) for a in labels)


class _UnionFind:
    def __init__(self, k: int):
        self.parent = list(range(k))

    def find(self, a: int) -> int:
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a: int, b: int) -> bool:
        """False when a and b were already joined."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb)] = min(ra, rb)
        return True

    def labels(self, tracked: Sequence[bool]) -> tuple:
        return _canon([self.find(q) if tracked[q] else -1 for q in range(len(tracked))])


class _ClassConstraint:
    """Common parts: the tracked color class."""

    kind = ""

    def __init__(self, colors: Iterable[Any]):
        self.colors = frozenset(colors)
        if not self.colors:
            raise ValueError(f"{self.kind}: the tracked color class is empty")

    def tracked(self, i: Any) -> bool:
        return i in self.colors

    def members(self, coloring: Sequence[Any]) -> list[int]:
        return [v for v, i in enumerate(coloring) if i in self.colors]

    def __repr__(self) -> str:
        return f"{type(self).__name__}({sorted(self.colors, key=repr)})"


class SizeAutomaton(_ClassConstraint):
    """The number of vertices colored from the class is accepted by the automaton."""

    kind = "size"

    def __init__(self, colors: Iterable[Any], automaton: UnaryAutomaton):
        super().__init__(colors)
        self.automaton = automaton

    def _step(self, q: int, i: Any) -> int:
        return self.automaton.delta[q] if i in self.colors else q

    def root_input(self, v, i):
        return self._step(self.automaton.start, i)

    def forget_input(self, v, i, gin):
        return self._step(gin, i)

    def leaf_output(self, v, i, gin):
        return gin

    def forget_output(self, child_bag, child_cols, p, gout):
        return gout

    def introduce_output(self, bag, cols, p, counted, gout):
        return gout

    def join_right_input(self, gin, left_gout):
        return left_gout

    def join_output(self, bag, cols, counted, left, right):
        return right

    def root_accept(self, gout) -> bool:
        return gout in self.automaton.accepting

    def holds(self, g: LabeledGraph, coloring: Sequence[Any]) -> bool:
        return self.automaton.accepts(len(self.members(coloring)))


class _ComponentConstraint(_ClassConstraint):
    """Outputs (labels over bag positions, closed flag); inputs are unused."""

    acyclic = False

    def root_input(self, v, i):
        return None

    def forget_input(self, v, i, gin):
        return None

    def join_right_input(self, gin, left_gout):
        return None

    def leaf_output(self, v, i, gin):
        return ((0 if i in self.colors else -1,), False)

    def introduce_output(self, bag, cols, p, counted, gout):
        labels, closed = gout
        mine = cols[p] in self.colors
        if not mine:
            return (labels[:p] + (-1,) + labels[p:], closed)
        if closed and not self.acyclic:
            return REJECT
        # child labels shifted by one so the new vertex gets a fresh id
        full = labels[:p] + (len(labels) + 1,) + labels[p:]
        uf = _UnionFind(len(full))
        _seed(uf, full)
        for q in counted:
            if full[q] >= 0 and not uf.union(p, q) and self.acyclic:
                return REJECT
        return (uf.labels([a >= 0 for a in full]), closed)

    def forget_output(self, child_bag, child_cols, p, gout):
        labels, closed = gout
        rest = labels[:p] + labels[p + 1:]
        if labels[p] >= 0 and not self.acyclic and labels[p] not in rest:
            if any(a >= 0 for a in rest):
                return REJECT
            closed = True
        return (_canon(rest), closed)

    def join_output(self, bag, cols, counted, left, right):
        (la, ca), (lb, cb) = left, right
        if ca and cb and not self.acyclic:
            return REJECT
        uf = _UnionFind(len(bag))
        _seed(uf, la)
        for q in _chain_pairs(lb):
            if not uf.union(*q) and self.acyclic:
                return REJECT
        for a, b in counted:
            if la[a] >= 0 and la[b] >= 0 and not uf.union(a, b) and self.acyclic:
                return REJECT
        return (uf.labels([a >= 0 for a in la]), ca or cb)

    def root_accept(self, gout) -> bool:
        return True


def _chain_pairs(labels: Sequence[int]) -> list[tuple[int, int]]:
    """Pairs joining consecutive members of every block."""
    last: dict[int, int] = {}
    pairs = []
    for q, a in enumerate(labels):
        if a < 0:
            continue
        if a in last:
            pairs.append((last[a], q))
        last[a] = q
    return pairs


def _seed(uf: _UnionFind, labels: Sequence[int]) -> None:
    for a, b in _chain_pairs(labels):
        uf.union(a, b)


class Connected(_ComponentConstraint):
    """The subgraph induced by the class is connected (the empty class counts)."""

    kind = "connected"

    def holds(self, g: LabeledGraph, coloring: Sequence[Any]) -> bool:
        members = self.members(coloring)
        if not members:
            return True
        inside = set(members)
        seen = {members[0]}
        stack = [members[0]]
        while stack:
            v = stack.pop()
            for u in g.adj[v]:
                if u in inside and u not in seen:
                    seen.add(u)
                    stack.append(u)
        return len(seen) == len(inside)


class Acyclic(_ComponentConstraint):
    """The subgraph induced by the class is a forest."""

    kind = "acyclic"
    acyclic = True

    def holds(self, g: LabeledGraph, coloring: Sequence[Any]) -> bool:
        inside = set(self.members(coloring))
        uf = _UnionFind(g.n)
        for u, v in g.edges:
            if u in inside and v in inside and not uf.union(u, v):
                return False
        return True


def parse_constraints(spec: Mapping[str, Any]) -> list:
    """Constraints from a JSON object such as
    {"connected": [1], "acyclic": [1], "size": {"colors": [1], "in": [3]}}.
    "size" may also be a list of such objects."""
    out: list = []
    for key in sorted(spec):
        val = spec[key]
        if key == "connected":
            out.append(Connected(val))
        elif key == "acyclic":
            out.append(Acyclic(val))
        elif key == "size":
            for item in val if isinstance(val, list) else [val]:
                rest = {k: v for k, v in item.items() if k != "colors"}
                out.append(SizeAutomaton(item["colors"], build_size_automaton(rest)))
        else:
            raise ValueError(f"unknown constraint {key!r}")
    return out


def solve_with_globals(inst, pns, etd=None, constraints: Sequence[Any] = (), *,
                       td=None, witness: bool = False,
                       max_constraints: int = MAX_CONSTRAINTS) -> SolveResult:
    """Optimum over proper colorings that also satisfy every constraint."""
    if len(constraints) > max_constraints:
        raise TooManyConstraints(f"{len(constraints)} constraints given, at most {max_constraints} allowed")
    return solve(inst, pns, etd, td=td, witness=witness, constraints=constraints)
