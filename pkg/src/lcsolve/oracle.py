"""Brute-force solvers used as ground truth.

`brute_force_solve` enumerates colorings straight from the problem
definition (checks on true radius-r balls).  The enumeration assigns
vertices in id order and evaluates a vertex's check as soon as its whole
ball is colored, so a partial coloring is abandoned only when some check
has already failed.  The remaining functions solve individual problems from
their textbook definitions, independent of any coloring encoding.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Iterable, Optional, Sequence

from .algebra import INF, NEG_INF, Weight
from .framework import ProblemInstance
from .graph import LabeledGraph, closed_ball, distances_from

DEFAULT_BUDGET = 10 ** 7


class BudgetExceeded(RuntimeError):
    pass


@dataclass
class OracleResult:
    optimum: Weight
    colorings: list = field(default_factory=list)


def _space(lists: Sequence[Sequence]) -> int:
    size = 1
    for lst in lists:
        size *= len(lst)
    return size


def brute_force_solve(inst: ProblemInstance, constraints: Sequence[Any] = (),
                      budget: Optional[int] = DEFAULT_BUDGET, collect: int = 0) -> OracleResult:
    """Minimum weight over all proper colorings satisfying every constraint.

    `collect` > 0 keeps up to that many co-optimal colorings."""
    g = inst.graph
    n = g.n
    if budget is not None and _space(inst.lists) > budget:
        raise BudgetExceeded(f"{_space(inst.lists)} colorings exceed the budget of {budget}")
    alg = inst.algebra
    balls = [sorted(closed_ball(g, v, inst.radius)) for v in range(n)]
    ready: list[list[int]] = [[] for _ in range(n)]
    for v in range(n):
        ready[max(balls[v])].append(v)
    color: list = [None] * n
    best = alg.error
    found: list = []

    def complete(weight: Weight) -> None:
        nonlocal best, found
        full = tuple(color)
        if not all(con.holds(g, full) for con in constraints):
            return
        if alg.better(weight, best):
            best = weight
            found = [full] if collect else []
        elif weight == best and collect and len(found) < collect and not alg.is_error(weight):
            found.append(full)

    # explicit stack of (vertex, next list index, weight before vertex)
    if n == 0:
        complete(alg.neutral)
        return OracleResult(best, found)
    stack = [(0, 0, alg.neutral)]
    while stack:
        v, k, w = stack.pop()
        lst = inst.lists[v]
        if k >= len(lst):
            continue
        stack.append((v, k + 1, w))
        color[v] = lst[k]
        if not all(inst.check(x, {u: color[u] for u in balls[x]}) for x in ready[v]):
            continue
        w2 = alg.combine(w, inst.cost(v, lst[k]))
        if v == n - 1:
            complete(w2)
        else:
            stack.append((v + 1, 0, w2))
    return OracleResult(best, found)


# -- problem-specific oracles ----------------------------------------------------------


def _subsets(items: Sequence, size: Optional[int] = None) -> Iterable[tuple]:
    sizes = range(len(items) + 1) if size is None else (size,)
    for k in sizes:
        yield from itertools.combinations(items, k)


def brute_force_grundy(g: LabeledGraph, total: bool = False, max_n: int = 8) -> Weight:
    """Longest legal dominating sequence; -inf when none exists.

    A sequence is legal when every element footprints (first covers) some
    vertex; closed neighborhoods are used, or open ones for the total
    variant."""
    if g.n > max_n:
        raise BudgetExceeded(f"sequence enumeration limited to {max_n} vertices")
    hood = [frozenset(g.adj[v]) if total else frozenset((v,) + g.adj[v]) for v in range(g.n)]
    everything = frozenset(range(g.n))
    best = NEG_INF

    def extend(covered: frozenset, used: frozenset, length: int) -> None:
        nonlocal best
        if covered == everything and length > best:
            best = length
        for v in range(g.n):
            if v not in used and not hood[v] <= covered:
                extend(covered | hood[v], used | {v}, length + 1)

    extend(frozenset(), frozenset(), 0)
    return best


def dominates(g: LabeledGraph, chosen: Iterable[int], radius: int = 1) -> bool:
    seen: set[int] = set()
    for v in chosen:
        seen |= set(distances_from(g, v, radius))
    return len(seen) == g.n


def native_distance_domination(g: LabeledGraph, k: int) -> Weight:
    for s in _subsets(range(g.n)):
        if dominates(g, s, k):
            return len(s)
    return INF


def native_semitotal(g: LabeledGraph) -> Weight:
    """Smallest dominating set in which every member has another member
    within distance 2."""
    for s in _subsets(range(g.n)):
        chosen = set(s)
        if not dominates(g, s):
            continue
        if all(any(u in chosen and u != v for u in distances_from(g, v, 2)) for v in s):
            return len(s)
    return INF


def native_connected_domination(g: LabeledGraph) -> Weight:
    from .graph import induced_subgraph

    for s in _subsets(range(g.n)):
        if dominates(g, s) and induced_subgraph(g, list(s))[0].is_connected():
            return len(s)
    return INF


def native_additive(g: LabeledGraph, eta: int) -> Weight:
    """Smallest largest label over labelings 1..eta in which adjacent
    vertices have different neighbor sums."""
    best = INF
    for lab in itertools.product(range(1, eta + 1), repeat=g.n):
        sums = [sum(lab[u] for u in g.adj[v]) for v in range(g.n)]
        if all(sums[u] != sums[v] for u, v in g.edges):
            best = min(best, max(lab, default=0))
    return best


def native_chromatic_violation(g: LabeledGraph, weak: Iterable, k: int) -> Weight:
    weak_set = {(min(u, v), max(u, v)) for u, v in weak}
    best = INF
    for col in itertools.product(range(k), repeat=g.n):
        bad = 0
        ok = True
        for u, v in g.edges:
            if col[u] == col[v]:
                if (u, v) in weak_set:
                    bad += 1
                else:
                    ok = False
                    break
        if ok:
            best = min(best, bad)
    return best


def native_edge_problem(g: LabeledGraph, kind: str) -> Weight:
    edges = list(g.edges)
    if kind == "vertex-cover":
        for s in _subsets(range(g.n)):
            chosen = set(s)
            if all(u in chosen or v in chosen for u, v in edges):
                return len(s)
        return INF
    if kind == "matching":
        best = 0
        for s in _subsets(edges):
            ends = [x for e in s for x in e]
            if len(ends) == len(set(ends)):
                best = max(best, len(s))
        return best
    if kind == "edge-cover":
        for s in _subsets(edges):
            if {x for e in s for x in e} == set(range(g.n)):
                return len(s)
        return INF
    if kind == "edge-domination":
        for s in _subsets(edges):
            ends = {x for e in s for x in e}
            if all(u in ends or v in ends for u, v in edges):
                return len(s)
        return INF
    raise ValueError(f"unknown edge problem {kind!r}")


def native_k_independent(g: LabeledGraph, k: int) -> Weight:
    dist = [distances_from(g, v, k) for v in range(g.n)]
    best = 0
    for s in _subsets(range(g.n)):
        if all(b not in dist[a] for a, b in itertools.combinations(s, 2)):
            best = max(best, len(s))
    return best


def native_packing_chromatic(g: LabeledGraph, k: int) -> Weight:
    """Smallest m <= k such that V splits into classes X_1..X_m with the
    vertices of X_i pairwise at distance > i."""
    dist = [distances_from(g, v) for v in range(g.n)]
    for m in range(1, k + 1):
        for col in itertools.product(range(1, m + 1), repeat=g.n):
            if all(col[a] != col[b] or dist[a].get(b, INF) > col[a]
                   for a, b in itertools.combinations(range(g.n), 2)):
                return m
    return INF


def native_lhk(g: LabeledGraph, h: int, k: int, span: int) -> Weight:
    dist = [distances_from(g, v, 2) for v in range(g.n)]
    for top in range(span + 1):
        for lab in itertools.product(range(top + 1), repeat=g.n):
            ok = True
            for a, b in itertools.combinations(range(g.n), 2):
                d = dist[a].get(b)
                if d == 1 and abs(lab[a] - lab[b]) < h or d == 2 and abs(lab[a] - lab[b]) < k:
                    ok = False
                    break
            if ok:
                return top
    return INF
