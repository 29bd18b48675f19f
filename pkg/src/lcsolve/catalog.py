"""Built-in problem encodings, each paired with a compact partial
neighborhood system."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Mapping, Optional

from .algebra import MAX_PLUS, MIN_MAX, MIN_PLUS
from .framework import FunctionPNS, PartialNeighborhoodSystem, ProblemInstance
from .graph import (LabeledGraph, VertexMap, distances_from, graph_power,
                    transform_jagged, transform_subdivision)
from .treedec import (EasyTreeDecomposition, TreeDecomposition, heuristic_decomposition,
                      lift_edge_transform, lift_power, to_easy)


class UnknownProblem(KeyError):
    pass


class MissingParameter(ValueError):
    pass


class InvalidParameter(ValueError):
    pass


class IsolatedVertex(ValueError):
    pass


class EdgeNotInGraph(ValueError):
    pass


@dataclass
class Bundle:
    """Everything needed to solve one catalog problem on one input graph.

    `instance` lives on `instance.graph`, which is the input graph or a
    transform of it.  `reference`, when present, is the same problem stated
    directly on the input graph (possibly with radius > 1); the oracle uses
    it to test the reduction against the original definition."""

    name: str
    params: dict
    graph: LabeledGraph
    instance: ProblemInstance
    pns: PartialNeighborhoodSystem
    transform: Optional[str] = None
    power: int = 1
    vertex_map: Optional[VertexMap] = None
    reference: Optional[ProblemInstance] = None
    constraints: tuple = ()

    def lift(self, td: Optional[TreeDecomposition] = None) -> TreeDecomposition:
        """Decomposition of the instance graph built from one of the input graph."""
        if td is None:
            if self.transform is None:
                return heuristic_decomposition(self.instance.graph)
            td = heuristic_decomposition(self.graph)
        if self.transform == "power":
            return lift_power(self.graph, td, self.power)
        if self.transform in ("subdivision", "jagged"):
            return lift_edge_transform(self.graph, td, self.transform)
        return td

    def decomposition(self, td: Optional[TreeDecomposition] = None) -> EasyTreeDecomposition:
        return to_easy(self.instance.graph, self.lift(td))

    def original_witness(self, coloring: Mapping[int, Any]) -> dict:
        """Witness keyed by input-graph vertices and, for edge transforms,
        by 'u-v' strings for edges."""
        if self.vertex_map is None:
            return {str(v): coloring[v] for v in sorted(coloring)}
        out = {}
        for x in sorted(coloring):
            o = self.vertex_map.origin[x]
            out[f"{o[0]}-{o[1]}" if isinstance(o, tuple) else str(o)] = coloring[x]
        return out


# -- small PNS building blocks ---------------------------------------------------


def _bool_and(name: str, new: Callable) -> FunctionPNS:
    return FunctionPNS(name, lambda v, i: True, lambda v, i, a, b: a and b, new,
                       lambda v, i, n: n, lambda v, i: (False, True))


def _capped_count(name: str, cap: Callable[[int, Any], int], new: Callable,
                  accept: Callable) -> FunctionPNS:
    def combine(v, i, a, b):
        s = a + b
        c = cap(v, i)
        return s if s < c else c

    return FunctionPNS(name, lambda v, i: 0, combine, new, accept,
                       lambda v, i: range(cap(v, i) + 1))


def _instance(g: LabeledGraph, algebra, lists, cost, check, name: str, params: dict,
              radius: int = 1) -> ProblemInstance:
    return ProblemInstance(g, algebra, lists, cost, check, radius, name, dict(params))


def _closed_sum(g: LabeledGraph, v: int, c: Mapping) -> int:
    return c[v] + sum(c[u] for u in g.adj[v])


def _open_sum(g: LabeledGraph, v: int, c: Mapping) -> int:
    return sum(c[u] for u in g.adj[v])


# -- parameter helpers ------------------------------------------------------------


def _int_param(params: Mapping, key: str, low: int = 1, default: Optional[int] = None) -> int:
    if key not in params:
        if default is None:
            raise MissingParameter(f"parameter {key!r} is required")
        return default
    value = params[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise InvalidParameter(f"parameter {key!r} must be an integer, got {value!r}")
    if value < low:
        raise InvalidParameter(f"parameter {key!r} must be at least {low}")
    return value


# -- Table-1 style problems --------------------------------------------------------


def k_coloring(g: LabeledGraph, k: int, summed: bool = False) -> Bundle:
    name = "k-chromatic-sum" if summed else "k-coloring"
    alg = MIN_PLUS if summed else MIN_MAX
    colors = list(range(1, k + 1))

    def check(v, c):
        return all(c[u] != c[v] for u in g.adj[v])

    inst = _instance(g, alg, [colors] * g.n, lambda v, i: i, check, name, {"k": k})
    return Bundle(name, {"k": k}, g, inst, _bool_and(name, lambda v, i, u, j: j != i))


def list_coloring(g: LabeledGraph, lists) -> Bundle:
    if not isinstance(lists, (list, tuple)) or len(lists) != g.n:
        raise InvalidParameter("'lists' must hold one color list per vertex")
    lists = [list(x) for x in lists]
    if any(len(x) == 0 for x in lists):
        raise InvalidParameter("color lists must be nonempty")

    def check(v, c):
        return all(c[u] != c[v] for u in g.adj[v])

    inst = _instance(g, MIN_PLUS, lists, lambda v, i: 0, check, "list-coloring", {"lists": lists})
    return Bundle("list-coloring", {"lists": lists}, g, inst,
                  _bool_and("list-coloring", lambda v, i, u, j: j != i))


def h_coloring(g: LabeledGraph, H) -> Bundle:
    if isinstance(H, Mapping):
        hn, hedges = H.get("n"), H.get("edges", [])
    else:
        hedges = H
        hn = None
    try:
        hedges = [(int(a), int(b)) for a, b in hedges]
    except (TypeError, ValueError):
        raise InvalidParameter("'H' edges must be integer pairs") from None
    if hn is None:
        hn = 1 + max((max(e) for e in hedges), default=-1)
    if hn < 1:
        raise InvalidParameter("'H' needs at least one vertex")
    hadj = {a: set() for a in range(hn)}
    for a, b in hedges:
        if not (0 <= a < hn and 0 <= b < hn):
            raise InvalidParameter(f"H edge {(a, b)} out of range")
        hadj[a].add(b)
        hadj[b].add(a)

    def check(v, c):
        return all(c[u] in hadj[c[v]] for u in g.adj[v])

    params = {"H": {"n": hn, "edges": [list(e) for e in hedges]}}
    inst = _instance(g, MIN_PLUS, [list(range(hn))] * g.n, lambda v, i: 0, check, "H-coloring", params)
    return Bundle("H-coloring", params, g, inst,
                  _bool_and("H-coloring", lambda v, i, u, j: j in hadj[i]))


def _count_bundle(g, name, params, alg, colors, check, cap, new, accept, cost=lambda v, i: i) -> Bundle:
    inst = _instance(g, alg, [colors] * g.n, cost, check, name, params)
    return Bundle(name, params, g, inst, _capped_count(name, cap, new, accept))


def k_tuple_domination(g: LabeledGraph, k: int, total: bool = False) -> Bundle:
    name = "total-k-tuple-domination" if total else "k-tuple-domination"
    if total:
        check = lambda v, c: _open_sum(g, v, c) >= k
        accept = lambda v, i, n: n >= k
    else:
        check = lambda v, c: _closed_sum(g, v, c) >= k
        accept = lambda v, i, n: n + i >= k
    return _count_bundle(g, name, {"k": k}, MIN_PLUS, [0, 1], check,
                         lambda v, i: k, lambda v, i, u, j: j, accept)


def dominating_set(g: LabeledGraph, total: bool = False) -> Bundle:
    b = k_tuple_domination(g, 1, total)
    b.name = "total-domination" if total else "dominating-set"
    b.params = {}
    b.instance.name = b.name
    return b


def k_domination(g: LabeledGraph, k: int) -> Bundle:
    return _count_bundle(g, "k-domination", {"k": k}, MIN_PLUS, [0, 1],
                         lambda v, c: c[v] != 0 or _open_sum(g, v, c) >= k,
                         lambda v, i: k, lambda v, i, u, j: j,
                         lambda v, i, n: i != 0 or n >= k)


def k_set_domination(g: LabeledGraph, k: int) -> Bundle:
    """{k}-domination: integer labels 0..k, closed-neighborhood sums >= k."""
    return _count_bundle(g, "{k}-domination", {"k": k}, MIN_PLUS, list(range(k + 1)),
                         lambda v, c: _closed_sum(g, v, c) >= k,
                         lambda v, i: k, lambda v, i, u, j: j,
                         lambda v, i, n: n + i >= k)


def rainbow_domination(g: LabeledGraph, k: int) -> Bundle:
    full = (1 << k) - 1

    # only vertices labelled with the empty set need the full union
    def check(v, c):
        if c[v]:
            return True
        acc = 0
        for u in g.adj[v]:
            acc |= c[u]
        return acc == full

    name = "k-rainbow-domination"
    inst = _instance(g, MIN_PLUS, [list(range(full + 1))] * g.n, lambda v, i: bin(i).count("1"),
                     check, name, {"k": k})
    pns = FunctionPNS(name, lambda v, i: 0, lambda v, i, a, b: a | b, lambda v, i, u, j: j,
                      lambda v, i, n: i != 0 or n == full, lambda v, i: range(full + 1))
    return Bundle(name, {"k": k}, g, inst, pns)


def roman_domination(g: LabeledGraph) -> Bundle:
    name = "roman-domination"

    def check(v, c):
        return c[v] != 0 or any(c[u] == 2 for u in g.adj[v])

    inst = _instance(g, MIN_PLUS, [[0, 1, 2]] * g.n, lambda v, i: i, check, name, {})
    pns = FunctionPNS(name, lambda v, i: False, lambda v, i, a, b: a or b,
                      lambda v, i, u, j: j == 2, lambda v, i, n: i != 0 or n,
                      lambda v, i: (False, True))
    return Bundle(name, {}, g, inst, pns)


def independent_set(g: LabeledGraph) -> Bundle:
    return _count_bundle(g, "independent-set", {}, MAX_PLUS, [0, 1],
                         lambda v, c: c[v] != 1 or _open_sum(g, v, c) == 0,
                         lambda v, i: 1, lambda v, i, u, j: j,
                         lambda v, i, n: i != 1 or n == 0)


def packing_function(g: LabeledGraph, k: int, limited: bool = False) -> Bundle:
    name = "{k}-limited-packing" if limited else "{k}-packing-function"
    colors = [0, 1] if limited else list(range(k + 1))
    return _count_bundle(g, name, {"k": k}, MAX_PLUS, colors,
                         lambda v, c: _closed_sum(g, v, c) <= k,
                         lambda v, i: k + 1, lambda v, i, u, j: j,
                         lambda v, i, n: n + i <= k)


# -- problems with bespoke encodings ---------------------------------------------------


def double_roman(g: LabeledGraph) -> Bundle:
    name = "double-roman-domination"

    def check(v, c):
        nb = [c[u] for u in g.adj[v]]
        if c[v] == 0 and not (nb.count(2) >= 2 or 3 in nb):
            return False
        if c[v] == 1 and not any(x >= 2 for x in nb):
            return False
        return True

    units = {0: (0, 0), 1: (0, 0), 2: (1, 0), 3: (0, 1)}

    def combine(v, i, a, b):
        return (min(a[0] + b[0], 2), min(a[1] + b[1], 1))

    def accept(v, i, n):
        return (i != 0 or n[0] >= 2 or n[1] >= 1) and (i != 1 or n[0] + n[1] >= 1)

    inst = _instance(g, MIN_PLUS, [[0, 1, 2, 3]] * g.n, lambda v, i: i, check, name, {})
    pns = FunctionPNS(name, lambda v, i: (0, 0), combine, lambda v, i, u, j: units[j], accept,
                      lambda v, i: [(a, b) for a in range(3) for b in range(2)])
    return Bundle(name, {}, g, inst, pns)


def grundy_domination(g: LabeledGraph, total: bool = False) -> Bundle:
    """Colors (p, f): p is the position in the sequence (n + 1 when absent),
    f the position of the vertex's footprinter."""
    n = g.n
    bottom = n + 1
    name = "grundy-total-domination" if total else "grundy-domination"
    colors = [(p, f) for p in range(1, n + 2) for f in range(1, n + 1)]

    def check(v, c):
        p, f = c[v]
        around = list(g.adj[v]) if total else [v, *g.adj[v]]
        if sum(1 for u in around if c[u][0] == f) != 1:
            return False
        if any(f > c[u][0] for u in around):
            return False
        if p != bottom:
            if not any(c[u][1] == p for u in around):
                return False
            if any(c[u][0] == p for u in g.adj[v]):
                return False
        return True

    def new(v, i, u, j):
        p, f = i
        pu, fu = j
        return (1 if f == pu else 0, f <= pu, p == fu, p != pu)

    def combine(v, i, a, b):
        return (min(a[0] + b[0], 2), a[1] and b[1], a[2] or b[2], a[3] and b[3])

    if total:
        def accept(v, i, m):
            p, f = i
            return m[0] == 1 and m[1] and (p == bottom or (m[2] and m[3]))
    else:
        def accept(v, i, m):
            p, f = i
            if m[0] >= 2 or (m[0] == 1 and f == p) or (m[0] == 0 and f != p):
                return False
            if not (m[1] and f <= p):
                return False
            return p == bottom or ((m[2] or p == f) and m[3])

    domain = [(a, b, c, d) for a in range(3) for b in (False, True)
              for c in (False, True) for d in (False, True)]
    inst = _instance(g, MAX_PLUS, [colors] * n, lambda v, i: 0 if i[0] == bottom else 1,
                     check, name, {})
    pns = FunctionPNS(name, lambda v, i: (0, True, False, True), combine, new, accept,
                      lambda v, i: domain)
    return Bundle(name, {}, g, inst, pns)


def chromatic_violation(g: LabeledGraph, weak, k: int) -> Bundle:
    weak_set = set()
    for e in weak:
        try:
            u, v = int(e[0]), int(e[1])
        except (TypeError, ValueError, IndexError):
            raise InvalidParameter(f"bad weak edge {e!r}") from None
        if not (0 <= u < g.n and 0 <= v < g.n) or not g.has_edge(u, v):
            raise EdgeNotInGraph(f"weak edge {(u, v)} is not an edge of the graph")
        weak_set.add((min(u, v), max(u, v)))
    s, vmap = transform_subdivision(g)
    name = "chromatic-violation"
    base = list(range(1, k + 1))
    pairs = [(a, b) for a in base for b in base]
    lists = [base if v < g.n else pairs for v in range(s.n)]
    ends = {x: vmap.origin[x] for x in range(g.n, s.n)}

    def cost(x, i):
        return 1 if x >= g.n and i[0] == i[1] else 0

    def check(x, c):
        if x < g.n:
            return True
        u, v = ends[x]
        if c[x] != (c[u], c[v]):
            return False
        return ends[x] in weak_set or c[u] != c[v]

    def new(x, i, y, j):
        if x < g.n:
            return True
        u, v = ends[x]
        return j == (i[0] if y == u else i[1])

    def accept(x, i, n):
        if x < g.n:
            return True
        return n and (ends[x] in weak_set or i[0] != i[1])

    params = {"k": k, "weak": sorted([list(e) for e in weak_set])}
    inst = _instance(s, MIN_PLUS, lists, cost, check, name, params)
    pns = FunctionPNS(name, lambda x, i: True, lambda x, i, a, b: a and b, new, accept,
                      lambda x, i: (False, True))
    return Bundle(name, params, g, inst, pns, transform="subdivision", vertex_map=vmap)


def additive_coloring(g: LabeledGraph, eta: Optional[int] = None) -> Bundle:
    """Colors (n, s): the vertex's number and the sum over its neighbors.

    The sum component is restricted to d(v)..d(v)*eta, the only values a
    proper coloring can give it."""
    delta = g.max_degree()
    if eta is None:
        eta = max(1, delta * delta - delta + 1)
    top = delta * eta + 1
    name = "additive-coloring"
    lists = [[(a, s) for a in range(1, eta + 1) for s in range(g.degree(v), g.degree(v) * eta + 1)]
             for v in range(g.n)]

    def check(v, c):
        sv = c[v][1]
        return all(c[u][1] != sv for u in g.adj[v]) and sv == sum(c[u][0] for u in g.adj[v])

    def combine(v, i, a, b):
        return (a[0] and b[0], min(a[1] + b[1], top))

    inst = _instance(g, MIN_MAX, lists, lambda v, i: i[0], check, name, {"eta": eta})
    pns = FunctionPNS(name, lambda v, i: (True, 0), combine,
                      lambda v, i, u, j: (i[1] != j[1], j[0]),
                      lambda v, i, n: n[0] and i[1] == n[1])
    return Bundle(name, {"eta": eta}, g, inst, pns)


def _ball_instance(g: LabeledGraph, r: int, name: str, params: dict, alg, lists, cost,
                   check) -> ProblemInstance:
    return _instance(g, alg, lists, cost, check, name, params, radius=r)


def distance_domination(g: LabeledGraph, k: int) -> Bundle:
    """Labels 0..k: a vertex labelled i > 0 needs a neighbor labelled i - 1."""
    name = "distance-domination"

    def check(v, c):
        return c[v] == 0 or any(c[u] == c[v] - 1 for u in g.adj[v])

    inst = _instance(g, MIN_PLUS, [list(range(k + 1))] * g.n, lambda v, i: 1 if i == 0 else 0,
                     check, name, {"k": k})
    pns = FunctionPNS(name, lambda v, i: False, lambda v, i, a, b: a or b,
                      lambda v, i, u, j: j == i - 1, lambda v, i, n: i == 0 or n,
                      lambda v, i: (False, True))
    return Bundle(name, {"k": k}, g, inst, pns, reference=_distance_domination_ball(g, k))


def _distance_domination_ball(g: LabeledGraph, k: int) -> ProblemInstance:
    def check(v, c):
        return any(x == 1 for x in c.values())

    return _ball_instance(g, k, "distance-domination", {"k": k}, MIN_PLUS, [[0, 1]] * g.n,
                          lambda v, i: i, check)


def distance_domination_power(g: LabeledGraph, k: int) -> Bundle:
    """The same problem as a dominating set of the k-th power."""
    gp = graph_power(g, k)
    b = dominating_set(gp)
    b.name = "distance-domination-power"
    b.params = {"k": k}
    b.graph = g
    b.transform = "power"
    b.power = k
    b.reference = _distance_domination_ball(g, k)
    return b


def semitotal_domination(g: LabeledGraph) -> Bundle:
    iso = [v for v in range(g.n) if g.degree(v) == 0]
    if iso:
        raise IsolatedVertex(f"vertex {iso[0]} is isolated")
    name = "semitotal-domination"
    D1, D2, ND, NDS = "D1", "D2", "N", "N*"
    in_d = (D1, D2)

    def check(v, c):
        nb = [c[u] for u in g.adj[v]]
        cv = c[v]
        if cv in (ND, D1) and not any(x in in_d for x in nb):
            return False
        if cv == D2 and NDS not in nb:
            return False
        if cv == NDS and sum(1 for x in nb if x in in_d) < 2:
            return False
        return True

    def new(v, i, u, j):
        if i == D2:
            return 1 if j == NDS else 0
        return 1 if j in in_d else 0

    def combine(v, i, a, b):
        return min(a + b, 2)

    inst = _instance(g, MIN_PLUS, [[D1, D2, ND, NDS]] * g.n, lambda v, i: 1 if i in in_d else 0,
                     check, name, {})
    pns = FunctionPNS(name, lambda v, i: 0, combine, new,
                      lambda v, i, n: n >= (2 if i == NDS else 1), lambda v, i: (0, 1, 2))
    return Bundle(name, {}, g, inst, pns)


EDGE_KINDS = ("vertex-cover", "edge-cover", "matching", "edge-domination")


def edge_problem(g: LabeledGraph, kind: str) -> Bundle:
    """Vertex and edge problems on the jagged graph: vertex x >= n stands for
    an edge of g and is adjacent to exactly its two endpoints."""
    if kind not in EDGE_KINDS:
        raise InvalidParameter(f"unknown edge problem {kind!r}")
    if kind == "edge-cover":
        iso = [v for v in range(g.n) if g.degree(v) == 0]
        if iso:
            raise IsolatedVertex(f"vertex {iso[0]} is isolated")
    jg, vmap = transform_jagged(g)
    n = g.n
    is_edge = lambda x: x >= n

    if kind == "vertex-cover":
        lists = [[0, 1] if x < n else [0] for x in range(jg.n)]
        alg = MIN_PLUS

        def check(x, c):
            return not is_edge(x) or any(c[u] == 1 for u in jg.adj[x])

        new = lambda x, i, u, j: j
        accept = lambda x, i, m: not is_edge(x) or m >= 1
        cap = 1
    elif kind in ("edge-cover", "matching"):
        lists = [[0] if x < n else [0, 1] for x in range(jg.n)]
        alg = MAX_PLUS if kind == "matching" else MIN_PLUS

        def check(x, c):
            if is_edge(x):
                return True
            s = sum(c[u] for u in jg.adj[x] if is_edge(u))
            return s <= 1 if kind == "matching" else s >= 1

        new = lambda x, i, u, j: j if is_edge(u) else 0
        if kind == "matching":
            accept = lambda x, i, m: is_edge(x) or m <= 1
        else:
            accept = lambda x, i, m: is_edge(x) or m >= 1
        cap = 2 if kind == "matching" else 1
    else:
        # original vertices: 1 iff incident to a chosen edge
        lists = [[0, 1] for _ in range(jg.n)]
        alg = MIN_PLUS

        def check(x, c):
            if is_edge(x):
                return any(c[u] == 1 for u in jg.adj[x])
            touched = any(c[u] == 1 for u in jg.adj[x] if is_edge(u))
            return c[x] == (1 if touched else 0)

        def new(x, i, u, j):
            if is_edge(x):
                return j
            return j if is_edge(u) else 0

        accept = lambda x, i, m: m >= 1 if is_edge(x) else (m >= 1) == (i == 1)
        cap = 1

    def cost(x, i):
        # vertex cover pays for original vertices, the rest for edges
        return i if (x < n) == (kind == "vertex-cover") else 0

    def combine(x, i, a, b):
        return min(a + b, cap)

    inst = _instance(jg, alg, lists, cost, check, kind, {})
    pns = FunctionPNS(kind, lambda x, i: 0, combine, new, accept, lambda x, i: range(cap + 1))
    return Bundle(kind, {}, g, inst, pns, transform="jagged", vertex_map=vmap)


def connected_domination(g: LabeledGraph) -> Bundle:
    from .constraints import Connected

    b = dominating_set(g)
    b.name = "connected-domination"
    b.instance.name = b.name
    b.constraints = (Connected([1]),)
    return b


def _distances(g: LabeledGraph, r: int) -> list[dict[int, int]]:
    return [distances_from(g, v, r) for v in range(g.n)]


def k_independent_set(g: LabeledGraph, k: int) -> Bundle:
    """Vertices pairwise at distance greater than k; solved as an
    independent set of the k-th power."""
    name = "k-independent-set"

    def ball_check(v, c):
        return c[v] != 1 or all(c[u] == 0 for u in c if u != v)

    ref = _ball_instance(g, k, name, {"k": k}, MAX_PLUS, [[0, 1]] * g.n, lambda v, i: i, ball_check)
    b = independent_set(graph_power(g, k))
    b.name, b.params, b.graph = name, {"k": k}, g
    b.instance.name = name
    b.transform, b.power, b.reference = "power", k, ref
    return b


def packing_chromatic(g: LabeledGraph, k: int) -> Bundle:
    """Colors 1..k where vertices sharing color i are at distance > i."""
    name = "packing-chromatic"
    dist = _distances(g, k)

    def ball_check(v, c):
        i = c[v]
        return all(c[u] != i for u, d in dist[v].items() if 0 < d <= i)

    colors = list(range(1, k + 1))
    ref = _ball_instance(g, k, name, {"k": k}, MIN_MAX, [colors] * g.n, lambda v, i: i, ball_check)
    gp = graph_power(g, k)

    def check(v, c):
        return all(c[u] != c[v] or dist[v][u] > c[v] for u in gp.adj[v])

    inst = _instance(gp, MIN_MAX, [colors] * g.n, lambda v, i: i, check, name, {"k": k})
    pns = _bool_and(name, lambda v, i, u, j: j != i or dist[v][u] > i)
    return Bundle(name, {"k": k}, g, inst, pns, transform="power", power=k, reference=ref)


def lhk_labeling(g: LabeledGraph, h: int, k: int, span: int) -> Bundle:
    """Labels 0..span, |f(u)-f(v)| >= h on edges and >= k at distance 2;
    the optimum is the smallest achievable largest label."""
    name = "L(h,k)-labeling"
    dist = _distances(g, 2)

    def ok(i, j, d):
        return abs(i - j) >= (h if d == 1 else k)

    def ball_check(v, c):
        return all(ok(c[v], c[u], d) for u, d in dist[v].items() if d > 0)

    labels = list(range(span + 1))
    params = {"h": h, "k": k, "span": span}
    ref = _ball_instance(g, 2, name, params, MIN_MAX, [labels] * g.n, lambda v, i: i, ball_check)
    gp = graph_power(g, 2)

    def check(v, c):
        return all(ok(c[v], c[u], dist[v][u]) for u in gp.adj[v])

    inst = _instance(gp, MIN_MAX, [labels] * g.n, lambda v, i: i, check, name, params)
    pns = _bool_and(name, lambda v, i, u, j: ok(i, j, dist[v][u]))
    return Bundle(name, params, g, inst, pns, transform="power", power=2, reference=ref)


# -- registry ------------------------------------------------------------------------


def _k(params, default=None, low=1):
    return _int_param(params, "k", low, default)


REGISTRY: dict[str, Callable[[LabeledGraph, Mapping], Bundle]] = {
    "k-coloring": lambda g, p: k_coloring(g, _k(p)),
    "k-chromatic-sum": lambda g, p: k_coloring(g, _k(p), summed=True),
    "list-coloring": lambda g, p: list_coloring(g, _require(p, "lists")),
    "H-coloring": lambda g, p: h_coloring(g, _require(p, "H")),
    "k-tuple-domination": lambda g, p: k_tuple_domination(g, _k(p)),
    "total-k-tuple-domination": lambda g, p: k_tuple_domination(g, _k(p), total=True),
    "k-domination": lambda g, p: k_domination(g, _k(p)),
    "{k}-domination": lambda g, p: k_set_domination(g, _k(p)),
    "k-rainbow-domination": lambda g, p: rainbow_domination(g, _k(p)),
    "roman-domination": lambda g, p: roman_domination(g),
    "independent-set": lambda g, p: independent_set(g),
    "{k}-packing-function": lambda g, p: packing_function(g, _k(p)),
    "{k}-limited-packing": lambda g, p: packing_function(g, _k(p), limited=True),
    "dominating-set": lambda g, p: dominating_set(g),
    "total-domination": lambda g, p: dominating_set(g, total=True),
    "double-roman-domination": lambda g, p: double_roman(g),
    "grundy-domination": lambda g, p: grundy_domination(g),
    "grundy-total-domination": lambda g, p: grundy_domination(g, total=True),
    "chromatic-violation": lambda g, p: chromatic_violation(g, p.get("weak", []), _k(p)),
    "additive-coloring": lambda g, p: additive_coloring(g, _int_param(p, "eta") if "eta" in p else None),
    "distance-domination": lambda g, p: distance_domination(g, _k(p)),
    "distance-domination-power": lambda g, p: distance_domination_power(g, _k(p)),
    "semitotal-domination": lambda g, p: semitotal_domination(g),
    "vertex-cover": lambda g, p: edge_problem(g, "vertex-cover"),
    "edge-cover": lambda g, p: edge_problem(g, "edge-cover"),
    "matching": lambda g, p: edge_problem(g, "matching"),
    "edge-domination": lambda g, p: edge_problem(g, "edge-domination"),
    "connected-domination": lambda g, p: connected_domination(g),
    "k-independent-set": lambda g, p: k_independent_set(g, _k(p)),
    "packing-chromatic": lambda g, p: packing_chromatic(g, _k(p)),
    "L(h,k)-labeling": lambda g, p: lhk_labeling(g, _int_param(p, "h"), _int_param(p, "k"),
                                                 _int_param(p, "span", 0)),
}


def _require(params: Mapping, key: str):
    if key not in params:
        raise MissingParameter(f"parameter {key!r} is required")
    return params[key]


def problem_names() -> list[str]:
    return sorted(REGISTRY)


def instantiate(name: str, params: Optional[Mapping], g: LabeledGraph) -> Bundle:
    try:
        builder = REGISTRY[name]
    except KeyError:
        raise UnknownProblem(f"unknown problem {name!r}; known: {', '.join(problem_names())}") from None
    params = dict(params or {})
    bundle = builder(g, params)
    return bundle
