"""Simple undirected graphs with edge labels, plus the transforms used by the
reductions: powers, subdivision and jagged graphs."""

from __future__ import annotations

import itertools
import random
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence, Union

DEFAULT_LABEL = "1"


class GraphError(ValueError):
    """Base class for malformed graph input."""


class DuplicateEdge(GraphError):
    pass


class SelfLoop(GraphError):
    pass


class VertexOutOfRange(GraphError):
    pass


def _key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class LabeledGraph:
    n: int
    adj: tuple[tuple[int, ...], ...]
    labels: dict[tuple[int, int], str] = field(hash=False, compare=False)
    # edges in the order they were supplied, each normalized to (min, max)
    edges: tuple[tuple[int, int], ...] = ()

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adj[v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return _key(u, v) in self.labels

    def label(self, u: int, v: int) -> str:
        return self.labels[_key(u, v)]

    @property
    def m(self) -> int:
        return len(self.edges)

    def vertices(self) -> range:
        return range(self.n)

    def closed_neighborhood(self, v: int) -> tuple[int, ...]:
        return tuple(sorted((v,) + self.adj[v]))

    def components(self) -> list[list[int]]:
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            comp, queue = [], deque([s])
            while queue:
                x = queue.popleft()
                comp.append(x)
                for y in self.adj[x]:
                    if not seen[y]:
                        seen[y] = True
                        queue.append(y)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def is_complete(self) -> bool:
        return all(len(a) == self.n - 1 for a in self.adj)

    def __repr__(self) -> str:
        return f"LabeledGraph(n={self.n}, edges={list(self.edges)})"


EdgeSpec = Union[tuple[int, int], tuple[int, int, str]]


def build_graph(n: int, edges: Iterable[EdgeSpec]) -> LabeledGraph:
    """Build a graph on vertices 0..n-1.  Edges are (u, v) or (u, v, label)."""
    if n < 0:
        raise VertexOutOfRange(f"negative vertex count {n}")
    adj: list[list[int]] = [[] for _ in range(n)]
    labels: dict[tuple[int, int], str] = {}
    order = []
    for e in edges:
        u, v = int(e[0]), int(e[1])
        label = str(e[2]) if len(e) > 2 else DEFAULT_LABEL
        if not (0 <= u < n and 0 <= v < n):
            raise VertexOutOfRange(f"edge ({u}, {v}) outside 0..{n - 1}")
        if u == v:
            raise SelfLoop(f"self-loop at {u}")
        k = _key(u, v)
        if k in labels:
            raise DuplicateEdge(f"duplicate edge {k}")
        labels[k] = label
        order.append(k)
        adj[u].append(v)
        adj[v].append(u)
    return LabeledGraph(n, tuple(tuple(sorted(a)) for a in adj), labels, tuple(order))


def path_graph(n: int) -> LabeledGraph:
    return build_graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> LabeledGraph:
    if n < 3:
        raise GraphError("a cycle needs at least 3 vertices")
    return build_graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> LabeledGraph:
    return build_graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def distances_from(g: LabeledGraph, source: int, limit: int | None = None) -> dict[int, int]:
    """BFS distances from source, optionally truncated at `limit`."""
    dist = {source: 0}
    queue = deque([source])
    while queue:
        x = queue.popleft()
        d = dist[x]
        if limit is not None and d >= limit:
            continue
        for y in g.adj[x]:
            if y not in dist:
                dist[y] = d + 1
                queue.append(y)
    return dist


def closed_ball(g: LabeledGraph, v: int, r: int) -> frozenset[int]:
    """Vertices at distance at most r from v."""
    if not 0 <= v < g.n:
        raise VertexOutOfRange(v)
    return frozenset(distances_from(g, v, r))


def graph_power(g: LabeledGraph, p: int) -> LabeledGraph:
    """G^p: u and v adjacent iff their distance in g is at most p.

    Original edges keep their labels, new edges get the default label."""
    if p < 1:
        raise ValueError("power must be at least 1")
    if p == 1:
        return g
    edges: list[EdgeSpec] = [(u, v, g.labels[(u, v)]) for u, v in g.edges]
    for u in range(g.n):
        for v, d in sorted(distances_from(g, u, p).items()):
            if v > u and d >= 2:
                edges.append((u, v))
    return build_graph(g.n, edges)


@dataclass(frozen=True)
class VertexMap:
    """Origin of every vertex of a transformed graph.

    Entry x is an int for a copy of an original vertex, or a (u, v) pair
    for the vertex standing in for original edge uv."""

    origin: tuple[Union[int, tuple[int, int]], ...]

    def is_edge_vertex(self, x: int) -> bool:
        return isinstance(self.origin[x], tuple)

    def edge_vertex(self, u: int, v: int) -> int:
        return self.origin.index(_key(u, v))

    def __len__(self) -> int:
        return len(self.origin)


def _edge_vertices(g: LabeledGraph) -> VertexMap:
    return VertexMap(tuple(range(g.n)) + tuple(g.edges))


def transform_subdivision(g: LabeledGraph) -> tuple[LabeledGraph, VertexMap]:
    """S(g): every edge uv becomes a path u - x_uv - v."""
    vmap = _edge_vertices(g)
    edges: list[EdgeSpec] = []
    for idx, (u, v) in enumerate(g.edges):
        x = g.n + idx
        edges.append((u, x))
        edges.append((x, v))
    return build_graph(g.n + g.m, edges), vmap


def transform_jagged(g: LabeledGraph) -> tuple[LabeledGraph, VertexMap]:
    """J(g): g plus a vertex x_uv per edge, adjacent to u and v."""
    vmap = _edge_vertices(g)
    edges: list[EdgeSpec] = [(u, v, g.labels[(u, v)]) for u, v in g.edges]
    for idx, (u, v) in enumerate(g.edges):
        x = g.n + idx
        edges.append((u, x))
        edges.append((v, x))
    return build_graph(g.n + g.m, edges), vmap


def clique_number(g: LabeledGraph) -> int:
    """Size of a largest clique (exponential; meant for small graphs)."""
    best = 1 if g.n else 0
    nbrs = [set(a) for a in g.adj]

    def extend(clique: list[int], candidates: list[int]) -> None:
        nonlocal best
        best = max(best, len(clique))
        for i, v in enumerate(candidates):
            if len(clique) + len(candidates) - i <= best:
                return
            extend(clique + [v], [u for u in candidates[i + 1:] if u in nbrs[v]])

    extend([], list(range(g.n)))
    return best


# -- PACE .gr files ---------------------------------------------------------


def parse_gr(text: str) -> LabeledGraph:
    """Parse `p tw n m` followed by 1-indexed edge lines (optional label)."""
    n = None
    edges: list[EdgeSpec] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if len(parts) != 4 or parts[1] != "tw":
                raise GraphError(f"line {lineno}: bad header {line!r}")
            n = int(parts[2])
            continue
        if n is None:
            raise GraphError(f"line {lineno}: edge before header")
        if len(parts) not in (2, 3):
            raise GraphError(f"line {lineno}: bad edge line {line!r}")
        try:
            u, v = int(parts[0]) - 1, int(parts[1]) - 1
        except ValueError:
            raise GraphError(f"line {lineno}: bad edge line {line!r}") from None
        edges.append((u, v, parts[2]) if len(parts) == 3 else (u, v))
    if n is None:
        raise GraphError("missing 'p tw' header")
    return build_graph(n, edges)


def read_gr(path: Union[str, Path]) -> LabeledGraph:
    return parse_gr(Path(path).read_text())


def format_gr(g: LabeledGraph) -> str:
    lines = [f"p tw {g.n} {g.m}"]
    for u, v in g.edges:
        label = g.labels[(u, v)]
        suffix = "" if label == DEFAULT_LABEL else f" {label}"
        lines.append(f"{u + 1} {v + 1}{suffix}")
    return "\n".join(lines) + "\n"


def induced_subgraph(g: LabeledGraph, vertices: Sequence[int]) -> tuple[LabeledGraph, list[int]]:
    """Subgraph induced by `vertices`, relabelled 0..k-1 in the given order."""
    index = {v: i for i, v in enumerate(vertices)}
    edges = [(index[u], index[v], g.labels[(u, v)]) for u, v in g.edges
             if u in index and v in index]
    return build_graph(len(vertices), edges), list(vertices)


def _certificate(n: int, edges: Sequence[tuple[int, int]]) -> tuple:
    """Lexicographically smallest sorted edge list over all relabellings."""
    best = None
    for perm in itertools.permutations(range(n)):
        cand = tuple(sorted(_key(perm[u], perm[v]) for u, v in edges))
        if best is None or cand < best:
            best = cand
    return best


def connected_graphs(n: int) -> list[LabeledGraph]:
    """One representative per isomorphism class of connected graphs on n
    vertices (n <= 7).  Every connected graph has a vertex whose removal
    keeps it connected, so each class arises by attaching a new vertex to a
    connected graph on n - 1 vertices."""
    if n < 1:
        return []
    if n > 7:
        raise ValueError("isomorphism-class enumeration is limited to 7 vertices")
    classes: list[tuple] = [()]
    for k in range(1, n):
        seen: set[tuple] = set()
        for edges in classes:
            for r in range(1, k + 1):
                for nbrs in itertools.combinations(range(k), r):
                    seen.add(_certificate(k + 1, list(edges) + [(u, k) for u in nbrs]))
        classes = sorted(seen, key=lambda e: (len(e), e))
    return [build_graph(n, edges) for edges in classes]


def random_graph(n: int, max_degree: int, rng: random.Random, connected: bool = True,
                 density: float = 0.5) -> LabeledGraph:
    """Random graph with maximum degree at most `max_degree`.  When
    `connected`, a random spanning tree comes first (needs max_degree >= 2
    for n > 2)."""
    deg = [0] * n
    edges: set[tuple[int, int]] = set()
    if connected and n > 1:
        order = list(range(n))
        rng.shuffle(order)
        for idx in range(1, n):
            choices = [u for u in order[:idx] if deg[u] < max_degree]
            u = rng.choice(choices)
            v = order[idx]
            edges.add(_key(u, v))
            deg[u] += 1
            deg[v] += 1
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in edges]
    rng.shuffle(pairs)
    for u, v in pairs:
        if deg[u] < max_degree and deg[v] < max_degree and rng.random() < density:
            edges.add((u, v))
            deg[u] += 1
            deg[v] += 1
    return build_graph(n, sorted(edges))
