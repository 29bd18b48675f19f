"""Complete graphs with unit labels and few colors: enumerate the color
distributions and solve each one as a minimum-cost maximum flow.

On K_n a symmetric check only sees c(v) and how many vertices carry each
color, so a distribution (k_1, ..., k_C) fixes every check.  For a fixed
distribution the network

    s -> color i            capacity k_i
    color i -> (v, i)       capacity 1, when k_i >= 1 and the check passes
    (v, i) -> v             capacity 1, cost w(v, i)
    v -> t                  capacity 1

carries n units exactly when the distribution is achievable, and a
minimum-cost maximum flow is a cheapest coloring realizing it.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, Optional

from .algebra import INF, MIN_PLUS, Weight
from .framework import ProblemInstance
from .graph import DEFAULT_LABEL, LabeledGraph, build_graph, complete_graph

DEFAULT_MAX_COLORS = 8


class NotComplete(ValueError):
    pass


class TooManyColors(ValueError):
    pass


@dataclass
class Arc:
    tail: int
    head: int
    cap: int
    cost: Weight
    flow: int = 0


class FlowNetwork:
    """Directed network on nodes 0..size-1 with a source and a sink."""

    def __init__(self, size: int, source: int, sink: int):
        self.size = size
        self.source = source
        self.sink = sink
        self.arcs: list[Arc] = []

    def add_arc(self, tail: int, head: int, cap: int, cost: Weight = 0) -> int:
        if cap < 0:
            raise ValueError(f"negative capacity {cap}")
        if head == self.source or tail == self.sink:
            raise ValueError("arcs may not enter the source or leave the sink")
        self.arcs.append(Arc(tail, head, cap, cost))
        return len(self.arcs) - 1

    def excess(self, node: int) -> int:
        """Inflow minus outflow."""
        return (sum(a.flow for a in self.arcs if a.head == node)
                - sum(a.flow for a in self.arcs if a.tail == node))


def min_cost_max_flow(net: FlowNetwork) -> tuple[int, Weight]:
    """Successive shortest augmenting paths with Johnson potentials.

    Arc flows are written back to `net.arcs`.  Negative arc costs are
    allowed as long as there is no negative cycle."""
    size = net.size
    # residual graph: edge 2k is arc k, edge 2k+1 its reverse
    to: list[int] = []
    cap: list[int] = []
    cost: list[Weight] = []
    out: list[list[int]] = [[] for _ in range(size)]
    for a in net.arcs:
        a.flow = 0
        for x, y, c, w in ((a.tail, a.head, a.cap, a.cost), (a.head, a.tail, 0, -a.cost)):
            out[x].append(len(to))
            to.append(y)
            cap.append(c)
            cost.append(w)

    # Bellman-Ford for the first potentials
    pot: list[Weight] = [INF] * size
    pot[net.source] = 0
    for _ in range(size):
        changed = False
        for e in range(len(to)):
            x = to[e ^ 1]
            if cap[e] > 0 and pot[x] < INF and pot[x] + cost[e] < pot[to[e]]:
                pot[to[e]] = pot[x] + cost[e]
                changed = True
        if not changed:
            break
    pot = [p if p < INF else 0 for p in pot]

    flow = 0
    total: Weight = 0
    while True:
        dist: list[Weight] = [INF] * size
        via = [-1] * size
        dist[net.source] = 0
        heap = [(0, net.source)]
        while heap:
            d, x = heapq.heappop(heap)
            if d > dist[x]:
                continue
            for e in out[x]:
                if cap[e] <= 0:
                    continue
                y = to[e]
                nd = d + cost[e] + pot[x] - pot[y]
                if nd < dist[y]:
                    dist[y] = nd
                    via[y] = e
                    heapq.heappush(heap, (nd, y))
        if dist[net.sink] == INF:
            break
        for x in range(size):
            if dist[x] < INF:
                pot[x] += dist[x]
        push = None
        x = net.sink
        while x != net.source:
            e = via[x]
            push = cap[e] if push is None else min(push, cap[e])
            x = to[e ^ 1]
        x = net.sink
        while x != net.source:
            e = via[x]
            cap[e] -= push
            cap[e ^ 1] += push
            total += push * cost[e]
            x = to[e ^ 1]
        flow += push
    for k, a in enumerate(net.arcs):
        a.flow = cap[2 * k + 1]
    return flow, total


def distributions(n: int, parts: int):
    """All (k_1, ..., k_parts) of nonnegative integers summing to n, in
    lexicographic order."""
    if parts == 0:
        if n == 0:
            yield ()
        return
    if parts == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in distributions(n - first, parts - 1):
            yield (first,) + rest


DistributionCheck = Callable[[int, Any, Mapping[Any, int]], bool]


def check_from_instance(inst: ProblemInstance) -> DistributionCheck:
    """Distribution check built by handing the instance's check one
    coloring with the given counts.  Only meaningful for checks that see
    nothing but c(v) and the neighbor color counts."""
    n = inst.graph.n

    def check(v: int, i: Any, counts: Mapping[Any, int]) -> bool:
        pool = []
        for color, k in counts.items():
            pool.extend([color] * (k - (1 if color == i else 0)))
        others = [u for u in range(n) if u != v]
        coloring = dict(zip(others, pool))
        coloring[v] = i
        return bool(inst.check(v, coloring))

    return check


@dataclass
class FlowResult:
    optimum: Weight
    distributions: int
    counts: Optional[dict] = None
    witness: Optional[dict] = None
    colors: list = field(default_factory=list)


def _require_complete(g: LabeledGraph) -> None:
    if not g.is_complete():
        raise NotComplete("the graph is not complete")
    bad = [e for e, lab in g.labels.items() if lab != DEFAULT_LABEL]
    if bad:
        raise NotComplete(f"edge {bad[0]} has label {g.labels[bad[0]]!r}; only unit labels are supported")


def solve_complete_graph(inst: ProblemInstance, check: Optional[DistributionCheck] = None,
                         max_colors: int = DEFAULT_MAX_COLORS) -> FlowResult:
    """Cheapest proper coloring of a complete graph, or Error (inf)."""
    if inst.algebra is not MIN_PLUS:
        raise ValueError(f"the flow solver needs the min-plus algebra, not {inst.algebra.name}")
    g = inst.graph
    _require_complete(g)
    colors: list = []
    for lst in inst.lists:
        for i in lst:
            if i not in colors:
                colors.append(i)
    if len(colors) > max_colors:
        raise TooManyColors(f"{len(colors)} colors exceed the limit of {max_colors}")
    if check is None:
        check = check_from_instance(inst)
    n = g.n
    C = len(colors)
    pairs = [(v, i) for v in range(n) for i in inst.lists[v]]
    costs = {(v, i): inst.cost(v, i) for v, i in pairs}
    # nodes: 0 source, 1 sink, colors, (v, i) pairs, vertices
    source, sink = 0, 1
    color_node = {c: 2 + k for k, c in enumerate(colors)}
    pair_node = {p: 2 + C + k for k, p in enumerate(pairs)}
    vertex_node = [2 + C + len(pairs) + v for v in range(n)]
    size = 2 + C + len(pairs) + n

    best: Weight = INF
    best_counts = None
    best_witness = None
    examined = 0
    for dist in distributions(n, C):
        examined += 1
        counts = dict(zip(colors, dist))
        net = FlowNetwork(size, source, sink)
        for c in colors:
            if counts[c]:
                net.add_arc(source, color_node[c], counts[c])
        chosen = []
        for v, i in pairs:
            w = costs[(v, i)]
            if counts[i] >= 1 and w < INF and check(v, i, counts):
                net.add_arc(color_node[i], pair_node[(v, i)], 1)
                chosen.append((net.add_arc(pair_node[(v, i)], vertex_node[v], 1, w), v, i))
        if len({v for _, v, _ in chosen}) < n:
            continue
        for v in range(n):
            net.add_arc(vertex_node[v], sink, 1)
        value, total = min_cost_max_flow(net)
        if value == n and total < best:
            best = total
            best_counts = counts
            best_witness = dict(sorted((v, i) for k, v, i in chosen if net.arcs[k].flow))
    return FlowResult(best, examined, best_counts, best_witness, colors)


# -- domination reductions to complete graphs (test fixtures) ----------------------


def domination_labels_reduction(g: LabeledGraph) -> ProblemInstance:
    """K_n with label 1 on the edges of g and 0 elsewhere; colors {0, 1},
    w(v, i) = i, and v needs c(v) plus its label-weighted neighbor colors
    to reach 1.  The optimum is the domination number of g."""
    n = g.n
    edges = [(u, v, "1" if g.has_edge(u, v) else "0") for u in range(n) for v in range(u + 1, n)]
    kn = build_graph(n, edges)

    def check(v, c):
        return c[v] + sum(c[u] * int(kn.label(v, u)) for u in kn.adj[v]) >= 1

    return ProblemInstance(kn, MIN_PLUS, [[0, 1] for _ in range(n)], lambda v, i: i, check,
                           name="domination-labels-reduction")


def domination_sets_reduction(g: LabeledGraph) -> ProblemInstance:
    """K_n with unit labels; vertex v picks () or its closed neighborhood in
    g (cost 0 or 1) and needs to lie in some picked set.  The optimum is the
    domination number of g."""
    n = g.n
    kn = complete_graph(n)
    lists = [[(), tuple(sorted(g.closed_neighborhood(v)))] for v in range(n)]

    def check(v, c):
        return any(v in c[u] for u in c)

    return ProblemInstance(kn, MIN_PLUS, lists, lambda v, i: 1 if i else 0, check,
                           name="domination-sets-reduction")


def domination_sets_check(v: int, i: Any, counts: Mapping[Any, int]) -> bool:
    """Distribution form of the check in `domination_sets_reduction`."""
    return any(k and v in color for color, k in counts.items())
