"""Locally checkable problem instances and partial neighborhood systems.

A partial neighborhood system (PNS) replaces direct inspection of a
vertex's neighborhood by an accumulator: each neighbor u with color j
contributes `new(v, i, u, j)`, contributions are merged with `combine`, and
`accept(v, i, n)` decides the vertex's check from the merged value.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Iterable, Mapping, Optional, Sequence

from .algebra import Weight, WeightAlgebra
from .graph import LabeledGraph, closed_ball

Color = Hashable
CheckFn = Callable[[int, Mapping[int, Color]], bool]
CostFn = Callable[[int, Color], Weight]


class InvalidColor(ValueError):
    pass


@dataclass
class ProblemInstance:
    """One r-locally checkable problem on one graph.

    `check(v, c)` receives the coloring restricted to the radius-r ball of v
    as a mapping vertex -> color."""

    graph: LabeledGraph
    algebra: WeightAlgebra
    lists: Sequence[Sequence[Color]]
    cost: CostFn
    check: CheckFn
    radius: int = 1
    name: str = "custom"
    params: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if len(self.lists) != self.graph.n:
            raise ValueError("one color list per vertex is required")
        for v, lst in enumerate(self.lists):
            if len(lst) == 0:
                raise ValueError(f"empty color list at vertex {v}")
        if self.radius < 1:
            raise ValueError("radius must be positive")

    def validate_costs(self) -> None:
        for v, lst in enumerate(self.lists):
            for i in lst:
                w = self.cost(v, i)
                if self.algebra.is_error(w):
                    raise ValueError(f"cost of color {i!r} at vertex {v} is Error")

    def with_costs(self, overrides: Mapping[int, Mapping[Color, Weight]]) -> "ProblemInstance":
        """Copy with per-vertex cost overrides (weighted variants)."""
        base = self.cost

        def cost(v: int, i: Color) -> Weight:
            table = overrides.get(v)
            if table is not None and i in table:
                return table[i]
            return base(v, i)

        return ProblemInstance(self.graph, self.algebra, self.lists, cost, self.check,
                               self.radius, self.name, dict(self.params))


def _ball(inst: ProblemInstance, v: int) -> Iterable[int]:
    if inst.radius == 1:
        return inst.graph.closed_neighborhood(v)
    return sorted(closed_ball(inst.graph, v, inst.radius))


def _color_at(c: Any, v: int) -> Color:
    return c[v]


def _check_colors(inst: ProblemInstance, c: Any) -> None:
    for v in range(inst.graph.n):
        try:
            x = _color_at(c, v)
        except (KeyError, IndexError):
            raise InvalidColor(f"vertex {v} has no color") from None
        if x not in inst.lists[v]:
            raise InvalidColor(f"color {x!r} not in the list of vertex {v}")


def is_proper(inst: ProblemInstance, c: Any) -> bool:
    """True iff check holds at every vertex (c indexable by vertex)."""
    _check_colors(inst, c)
    for v in range(inst.graph.n):
        local = {u: _color_at(c, u) for u in _ball(inst, v)}
        if not inst.check(v, local):
            return False
    return True


def coloring_weight(inst: ProblemInstance, c: Any) -> Weight:
    _check_colors(inst, c)
    return inst.algebra.fold(inst.cost(v, _color_at(c, v)) for v in range(inst.graph.n))


# -- partial neighborhood systems -------------------------------------------


class PartialNeighborhoodSystem:
    """Interface; values must be hashable and compare by equality."""

    name = "pns"

    def neutral(self, v: int, i: Color) -> Hashable:
        raise NotImplementedError

    def combine(self, v: int, i: Color, a: Hashable, b: Hashable) -> Hashable:
        raise NotImplementedError

    def new(self, v: int, i: Color, u: int, j: Color) -> Hashable:
        raise NotImplementedError

    def accept(self, v: int, i: Color, n: Hashable) -> bool:
        raise NotImplementedError

    def domain(self, v: int, i: Color) -> Optional[Iterable[Hashable]]:
        """The set N_{v,i} when small enough to enumerate, else None."""
        return None

    def accumulate(self, v: int, i: Color, contributions: Iterable[tuple[int, Color]]) -> Hashable:
        acc = self.neutral(v, i)
        for u, j in contributions:
            acc = self.combine(v, i, acc, self.new(v, i, u, j))
        return acc


class FunctionPNS(PartialNeighborhoodSystem):
    """A PNS assembled from plain functions taking (v, i, ...).

    The functions are bound as instance attributes so the engine calls them
    without an extra layer of indirection."""

    def __init__(self, name: str, neutral: Callable, combine: Callable, new: Callable,
                 accept: Callable, domain: Optional[Callable] = None) -> None:
        self.name = name
        self.neutral = neutral
        self.combine = combine
        self.new = new
        self.accept = accept
        if domain is not None:
            self.domain = domain


class _Marker:
    """Distinguished tuple entries of the generic system."""

    def __init__(self, text: str) -> None:
        self.text = text

    def __repr__(self) -> str:
        return self.text

    def __hash__(self) -> int:
        return hash(("marker", self.text))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, _Marker) and other.text == self.text


UNSET = _Marker("⊥")
CONFLICT = _Marker("×")


class GenericPNS(PartialNeighborhoodSystem):
    """Stores the colors of all neighbors in a tuple indexed by neighbor
    position; UNSET marks a neighbor not seen yet, CONFLICT two different
    colors for the same neighbor."""

    name = "generic"

    def __init__(self, inst: ProblemInstance) -> None:
        if inst.radius != 1:
            raise ValueError("the generic system needs a radius-1 instance")
        self.inst = inst
        g = inst.graph
        self._pos = [{u: h for h, u in enumerate(g.adj[v])} for v in range(g.n)]

    def neutral(self, v, i):
        return (UNSET,) * len(self.inst.graph.adj[v])

    def combine(self, v, i, a, b):
        out = []
        for x, y in zip(a, b):
            if x == y or y == UNSET:
                out.append(x)
            elif x == UNSET:
                out.append(y)
            else:
                out.append(CONFLICT)
        return tuple(out)

    def new(self, v, i, u, j):
        out = [UNSET] * len(self.inst.graph.adj[v])
        out[self._pos[v][u]] = j
        return tuple(out)

    def accept(self, v, i, n):
        if any(x == UNSET or x == CONFLICT for x in n):
            return False
        local = dict(zip(self.inst.graph.adj[v], n))
        local[v] = i
        return bool(self.inst.check(v, local))


def generic_pns(inst: ProblemInstance) -> GenericPNS:
    return GenericPNS(inst)


class CountingPNS(PartialNeighborhoodSystem):
    """Per-color neighbor counts saturating at min(cap_j, d(v)).

    Valid for checks that only depend on v, c(v) and the multiset of
    neighbor colors.  All vertices must share one color list."""

    name = "counting"
    DOMAIN_LIMIT = 4096

    def __init__(self, inst: ProblemInstance, caps: Optional[Mapping[Color, int]] = None) -> None:
        if inst.radius != 1:
            raise ValueError("the counting system needs a radius-1 instance")
        g = inst.graph
        universe: list[Color] = []
        for lst in inst.lists:
            for x in lst:
                if x not in universe:
                    universe.append(x)
        uset = set(universe)
        for v, lst in enumerate(inst.lists):
            if set(lst) != uset:
                raise ValueError(f"counting system needs identical color lists (vertex {v} differs)")
        self.inst = inst
        self.colors = tuple(universe)
        self.index = {x: k for k, x in enumerate(universe)}
        caps = dict(caps or {})
        self.caps = [tuple(min(caps.get(x, g.degree(v)), g.degree(v)) for x in universe)
                     for v in range(g.n)]
        self._zero = (0,) * len(universe)
        self._units = {}

    def neutral(self, v, i):
        return self._zero

    def combine(self, v, i, a, b):
        cap = self.caps[v]
        return tuple(x + y if x + y <= c else c for x, y, c in zip(a, b, cap))

    def new(self, v, i, u, j):
        key = (v, j)
        unit = self._units.get(key)
        if unit is None:
            k = self.index[j]
            unit = tuple(min(1, self.caps[v][k]) if t == k else 0 for t in range(len(self.colors)))
            self._units[key] = unit
        return unit

    def witness_neighbors(self, v: int, n: Sequence[int]) -> Optional[list[Color]]:
        """Colors for v's neighbors (in id order) whose capped counts are n."""
        d = self.inst.graph.degree(v)
        cap = self.caps[v]
        if len(n) != len(self.colors) or any(x < 0 or x > c for x, c in zip(n, cap)):
            return None
        out: list[Color] = []
        for k, x in enumerate(n):
            out.extend([self.colors[k]] * x)
        rest = d - len(out)
        if rest < 0:
            return None
        if rest:
            spare = next((k for k, x in enumerate(n) if x == cap[k]), None)
            if spare is None:
                return None
            out.extend([self.colors[spare]] * rest)
        return out

    def accept(self, v, i, n):
        cols = self.witness_neighbors(v, n)
        if cols is None:
            return False
        local = dict(zip(self.inst.graph.adj[v], cols))
        local[v] = i
        return bool(self.inst.check(v, local))

    def domain(self, v, i):
        size = 1
        for c in self.caps[v]:
            size *= c + 1
        if size > self.DOMAIN_LIMIT:
            return None
        return itertools.product(*(range(c + 1) for c in self.caps[v]))


def counting_pns(inst: ProblemInstance, caps: Optional[Mapping[Color, int]] = None) -> CountingPNS:
    return CountingPNS(inst, caps)


# -- consistency check ---------------------------------------------------------


@dataclass
class SelfCheckResult:
    ok: bool
    counterexample: Optional[tuple] = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def pns_selfcheck(inst: ProblemInstance, pns: PartialNeighborhoodSystem,
                  sample_budget: int = 20000, seed: int = 0) -> SelfCheckResult:
    """Verify accept(accumulated newN) == check on local colorings, plus the
    commutative-monoid laws of combine on the values that arise.

    Neighborhoods with at most `sample_budget` local colorings are checked
    exhaustively, larger ones on a deterministic random sample."""
    g = inst.graph
    rng = random.Random(seed)
    for v in range(g.n):
        nb = g.adj[v]
        lists = [list(inst.lists[v])] + [list(inst.lists[u]) for u in nb]
        total = 1
        for lst in lists:
            total *= len(lst)
        if total <= sample_budget:
            combos: Iterable[tuple] = itertools.product(*lists)
        else:
            combos = (tuple(rng.choice(lst) for lst in lists) for _ in range(sample_budget))
        seen: dict[Color, list] = {}
        for combo in combos:
            i = combo[0]
            local = dict(zip(nb, combo[1:]))
            local[v] = i
            parts = [pns.new(v, i, u, j) for u, j in zip(nb, combo[1:])]
            acc = pns.neutral(v, i)
            for p in parts:
                acc = pns.combine(v, i, acc, p)
            if bool(pns.accept(v, i, acc)) != bool(inst.check(v, local)):
                return SelfCheckResult(False, (v, local), "accept disagrees with check")
            dom = pns.domain(v, i)
            if dom is not None and acc not in set(dom):
                return SelfCheckResult(False, (v, local), "value outside declared domain")
            bucket = seen.setdefault(i, [])
            if len(bucket) < 12:
                bucket.extend(parts[:2])
                bucket.append(acc)
        for i, values in seen.items():
            values = values[:12]
            e = pns.neutral(v, i)
            for a in values:
                if pns.combine(v, i, a, e) != a:
                    return SelfCheckResult(False, (v, i, a), "neutral law fails")
                for b in values:
                    if pns.combine(v, i, a, b) != pns.combine(v, i, b, a):
                        return SelfCheckResult(False, (v, i, a, b), "combine not commutative")
                    for c in values[:6]:
                        left = pns.combine(v, i, pns.combine(v, i, a, b), c)
                        right = pns.combine(v, i, a, pns.combine(v, i, b, c))
                        if left != right:
                            return SelfCheckResult(False, (v, i, a, b, c), "combine not associative")
    return SelfCheckResult(True)
