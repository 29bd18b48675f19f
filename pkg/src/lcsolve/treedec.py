"""Tree decompositions: validation, a min-fill heuristic, conversion to the
easy (nice, singleton-rooted) form used by the DP, and lifting a
decomposition of G to decompositions of G^p, S(G) and J(G)."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Union

from .graph import LabeledGraph, distances_from


class InvalidInput(ValueError):
    pass


@dataclass(frozen=True)
class TreeDecomposition:
    """Rooted tree of bags; parent[root] == -1."""

    bags: tuple[tuple[int, ...], ...]
    parent: tuple[int, ...]

    @classmethod
    def from_edges(cls, bags: Sequence[Sequence[int]], edges: Sequence[tuple[int, int]],
                   root: int = 0) -> "TreeDecomposition":
        bags_t = tuple(tuple(sorted(set(b))) for b in bags)
        k = len(bags_t)
        nbrs: list[list[int]] = [[] for _ in range(k)]
        for a, b in edges:
            nbrs[a].append(b)
            nbrs[b].append(a)
        parent = [-2] * k
        if k:
            parent[root] = -1
            stack = [root]
            while stack:
                x = stack.pop()
                for y in sorted(nbrs[x]):
                    if parent[y] == -2:
                        parent[y] = x
                        stack.append(y)
        if any(p == -2 for p in parent) or len(edges) != max(k - 1, 0):
            raise InvalidInput("decomposition tree is not a tree")
        return cls(bags_t, tuple(parent))

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def edges(self) -> list[tuple[int, int]]:
        return [(p, x) for x, p in enumerate(self.parent) if p >= 0]

    def children(self) -> list[list[int]]:
        ch: list[list[int]] = [[] for _ in self.bags]
        for x, p in enumerate(self.parent):
            if p >= 0:
                ch[p].append(x)
        return ch

    def root(self) -> int:
        return self.parent.index(-1) if self.bags else -1


@dataclass(frozen=True)
class ValidationResult:
    ok: bool
    width: Optional[int] = None
    kind: Optional[str] = None  # "W1", "W2", "W3" or "TREE"
    witness: object = None

    def __bool__(self) -> bool:
        return self.ok

    @property
    def reason(self) -> str:
        if self.ok:
            return f"valid, width {self.width}"
        what = {"W1": "vertex {} is in no bag", "W2": "edge {} is in no bag",
                "W3": "the bags holding vertex {} are not connected",
                "TREE": "the decomposition is not a tree ({})"}
        return what.get(self.kind, "{}").format(self.witness)


def validate_decomposition(g: LabeledGraph, td: TreeDecomposition) -> ValidationResult:
    """Width of `td` if it is a tree decomposition of g, else the first
    violated property with a witness vertex or edge."""
    k = len(td.bags)
    roots = [x for x, p in enumerate(td.parent) if p == -1]
    if k and len(roots) != 1:
        return ValidationResult(False, kind="TREE", witness=tuple(roots))
    # parent links must reach the root without cycles
    depth = [-1] * k
    for x in range(k):
        path = []
        y = x
        while y != -1 and depth[y] == -1 and len(path) <= k:
            path.append(y)
            y = td.parent[y]
        if len(path) > k:
            return ValidationResult(False, kind="TREE", witness=x)
        base = 0 if y == -1 else depth[y] + 1
        for z in reversed(path):
            depth[z] = base
            base += 1
    for b in td.bags:
        for v in b:
            if not 0 <= v < g.n:
                return ValidationResult(False, kind="W1", witness=v)
    covered = set()
    for b in td.bags:
        covered.update(b)
    for v in range(g.n):
        if v not in covered:
            return ValidationResult(False, kind="W1", witness=v)
    bag_sets = [set(b) for b in td.bags]
    occurrences: list[list[int]] = [[] for _ in range(g.n)]
    for x, b in enumerate(td.bags):
        for v in b:
            occurrences[v].append(x)
    for u, v in g.edges:
        if not any(v in bag_sets[x] for x in occurrences[u]):
            return ValidationResult(False, kind="W2", witness=(u, v))
    for v in range(g.n):
        tops = [x for x in occurrences[v]
                if td.parent[x] == -1 or v not in bag_sets[td.parent[x]]]
        if len(tops) != 1:
            return ValidationResult(False, kind="W3", witness=v)
    return ValidationResult(True, width=td.width)


# -- heuristic construction --------------------------------------------------


def elimination_ordering(g: LabeledGraph) -> list[int]:
    """Greedy min-fill ordering, ties broken by lowest vertex id."""
    nbrs = [set(a) for a in g.adj]
    alive = [True] * g.n

    def fill(v: int) -> int:
        ns = sorted(nbrs[v])
        missing = 0
        for i, a in enumerate(ns):
            na = nbrs[a]
            for b in ns[i + 1:]:
                if b not in na:
                    missing += 1
        return missing

    current = [fill(v) for v in range(g.n)]
    heap = [(current[v], v) for v in range(g.n)]
    heapq.heapify(heap)
    order = []
    while heap:
        f, v = heapq.heappop(heap)
        if not alive[v] or f != current[v]:
            continue
        order.append(v)
        alive[v] = False
        ns = sorted(nbrs[v])
        for i, a in enumerate(ns):
            for b in ns[i + 1:]:
                if b not in nbrs[a]:
                    nbrs[a].add(b)
                    nbrs[b].add(a)
        for a in ns:
            nbrs[a].discard(v)
        touched = set(ns)
        for a in ns:
            touched.update(nbrs[a])
        for w in touched:
            if alive[w]:
                f2 = fill(w)
                if f2 != current[w]:
                    current[w] = f2
                    heapq.heappush(heap, (f2, w))
    return order


def decomposition_from_ordering(g: LabeledGraph, order: Sequence[int]) -> TreeDecomposition:
    """Standard elimination-tree decomposition; component trees are chained
    together so that the result is a single tree."""
    if g.n == 0:
        return TreeDecomposition((), ())
    pos = {v: i for i, v in enumerate(order)}
    nbrs = [set(a) for a in g.adj]
    bags = []
    for v in order:
        later = sorted(nbrs[v])
        bags.append(tuple(sorted([v] + later)))
        for i, a in enumerate(later):
            for b in later[i + 1:]:
                nbrs[a].add(b)
                nbrs[b].add(a)
        for a in later:
            nbrs[a].discard(v)
    edges = []
    last = len(order) - 1
    for i, v in enumerate(order):
        others = [pos[u] for u in bags[i] if u != v]
        if others:
            edges.append((i, min(others)))
        elif i != last:
            edges.append((i, last))
    return compress(TreeDecomposition.from_edges(bags, edges, root=last))


def compress(td: TreeDecomposition) -> TreeDecomposition:
    """Merge away bags contained in an adjacent bag."""
    k = len(td.bags)
    if k <= 1:
        return td
    bags = [set(b) for b in td.bags]
    nbrs: list[set[int]] = [set() for _ in range(k)]
    for a, b in td.edges():
        nbrs[a].add(b)
        nbrs[b].add(a)
    alive = [True] * k
    changed = True
    while changed:
        changed = False
        for x in range(k):
            if not alive[x]:
                continue
            for y in sorted(nbrs[x]):
                if bags[x] <= bags[y]:
                    for z in nbrs[x]:
                        if z != y:
                            nbrs[z].discard(x)
                            nbrs[z].add(y)
                            nbrs[y].add(z)
                    nbrs[y].discard(x)
                    nbrs[x] = set()
                    alive[x] = False
                    changed = True
                    break
    keep = [x for x in range(k) if alive[x]]
    index = {x: i for i, x in enumerate(keep)}
    new_bags = [bags[x] for x in keep]
    edges = sorted({(min(index[x], index[y]), max(index[x], index[y]))
                    for x in keep for y in nbrs[x]})
    root = td.root()
    return TreeDecomposition.from_edges(new_bags, edges, root=index[root] if alive[root] else 0)


def heuristic_decomposition(g: LabeledGraph) -> TreeDecomposition:
    """A valid decomposition from the min-fill elimination ordering."""
    return decomposition_from_ordering(g, elimination_ordering(g))


def path_decomposition(n: int) -> TreeDecomposition:
    """Canonical width-1 decomposition of the path 0-1-...-(n-1)."""
    if n <= 1:
        return TreeDecomposition(((0,),) if n == 1 else (), (-1,) if n == 1 else ())
    bags = [(i, i + 1) for i in range(n - 1)]
    return TreeDecomposition(tuple(bags), tuple([-1] + list(range(n - 2))))


# -- easy decompositions -----------------------------------------------------

LEAF, INTRODUCE, FORGET, JOIN = "leaf", "introduce", "forget", "join"


@dataclass(frozen=True)
class EasyTreeDecomposition:
    """Binary decomposition with singleton root and leaves.

    Node ids are assigned children-first, so iterating ids in increasing
    order is a valid bottom-up order; the root has the largest id."""

    kind: tuple[str, ...]
    bag: tuple[tuple[int, ...], ...]
    children: tuple[tuple[int, ...], ...]
    vertex: tuple[int, ...]  # introduced / forgotten vertex, -1 otherwise
    root: int

    def __len__(self) -> int:
        return len(self.kind)

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bag), default=0) - 1

    def parents(self) -> list[int]:
        par = [-1] * len(self.kind)
        for t, ch in enumerate(self.children):
            for c in ch:
                par[c] = t
        return par

    def to_td(self) -> TreeDecomposition:
        return TreeDecomposition(self.bag, tuple(self.parents()))

    def check_kinds(self) -> Optional[str]:
        """None if every node satisfies its kind's bag equation."""
        for t in range(len(self.kind)):
            k, b, ch = self.kind[t], set(self.bag[t]), self.children[t]
            v = self.vertex[t]
            if k == LEAF:
                if ch or len(b) != 1:
                    return f"node {t}: bad leaf"
            elif k == INTRODUCE:
                if len(ch) != 1 or v not in b or set(self.bag[ch[0]]) != b - {v}:
                    return f"node {t}: bad introduce"
            elif k == FORGET:
                if len(ch) != 1 or v in b or set(self.bag[ch[0]]) != b | {v}:
                    return f"node {t}: bad forget"
            elif k == JOIN:
                if len(ch) != 2 or any(set(self.bag[c]) != b for c in ch):
                    return f"node {t}: bad join"
            else:
                return f"node {t}: unknown kind {k}"
        if self.kind and len(self.bag[self.root]) != 1:
            return "root bag is not a singleton"
        return None


class _Builder:
    def __init__(self) -> None:
        self.kind: list[str] = []
        self.bag: list[tuple[int, ...]] = []
        self.children: list[tuple[int, ...]] = []
        self.vertex: list[int] = []

    def add(self, kind: str, bag: Sequence[int], children: tuple[int, ...], v: int = -1) -> int:
        self.kind.append(kind)
        self.bag.append(tuple(sorted(bag)))
        self.children.append(children)
        self.vertex.append(v)
        return len(self.kind) - 1

    def move(self, node: int, target: Sequence[int]) -> int:
        """Forget/introduce chain from node's bag up to `target`."""
        current = set(self.bag[node])
        goal = set(target)
        for v in sorted(current - goal):
            current.discard(v)
            node = self.add(FORGET, current, (node,), v)
        for v in sorted(goal - current):
            current.add(v)
            node = self.add(INTRODUCE, current, (node,), v)
        return node

    def leaf_chain(self, target: Sequence[int]) -> int:
        first = min(target)
        node = self.add(LEAF, (first,), ())
        return self.move(node, target)


def to_easy(g: LabeledGraph, td: TreeDecomposition) -> EasyTreeDecomposition:
    """Convert a valid decomposition into easy form of the same width."""
    check = validate_decomposition(g, td)
    if not check.ok:
        raise InvalidInput(f"decomposition invalid: {check.kind} at {check.witness}")
    if g.n == 0:
        return EasyTreeDecomposition((), (), (), (), -1)
    td = compress(td)
    children = td.children()
    build = _Builder()
    top: dict[int, int] = {}
    # iterative post-order over the decomposition tree
    stack = [(td.root(), False)]
    while stack:
        x, done = stack.pop()
        if not done:
            stack.append((x, True))
            for y in reversed(children[x]):
                stack.append((y, False))
            continue
        bag = td.bags[x]
        if not children[x]:
            top[x] = build.leaf_chain(bag)
            continue
        subs = [build.move(top.pop(y), bag) for y in children[x]]
        acc = subs[0]
        for s in subs[1:]:
            acc = build.add(JOIN, bag, (acc, s))
        top[x] = acc
    root_node = top[td.root()]
    root_bag = build.bag[root_node]
    root_node = build.move(root_node, (min(root_bag),))
    return EasyTreeDecomposition(tuple(build.kind), tuple(build.bag),
                                 tuple(build.children), tuple(build.vertex), root_node)


# -- lifting decompositions --------------------------------------------------


def lift_power(g: LabeledGraph, td: TreeDecomposition, p: int) -> TreeDecomposition:
    """Decomposition of g^p whose bags are the ceil(p/2)-balls around the
    bags of td."""
    if p < 1:
        raise InvalidInput("power must be positive")
    check = validate_decomposition(g, td)
    if not check.ok:
        raise InvalidInput(f"decomposition invalid: {check.kind} at {check.witness}")
    radius = (p + 1) // 2
    balls: dict[int, frozenset[int]] = {}
    bags = []
    for b in td.bags:
        out: set[int] = set()
        for v in b:
            if v not in balls:
                balls[v] = frozenset(distances_from(g, v, radius))
            out |= balls[v]
        bags.append(tuple(sorted(out)))
    return TreeDecomposition(tuple(bags), td.parent)


def power_width_bound(width: int, max_degree: int, p: int) -> int:
    return (width + 1) * (max_degree + 1) ** ((p + 1) // 2) - 1


def lift_edge_transform(g: LabeledGraph, td: TreeDecomposition, kind: str) -> TreeDecomposition:
    """Decomposition of S(g) or J(g): for every edge uv, a new leaf bag
    X + {x_uv} hangs off the lowest-id bag X containing u and v."""
    if kind not in ("subdivision", "jagged"):
        raise InvalidInput(f"unknown transform {kind!r}")
    check = validate_decomposition(g, td)
    if not check.ok:
        raise InvalidInput(f"decomposition invalid: {check.kind} at {check.witness}")
    bag_sets = [set(b) for b in td.bags]
    bags = list(td.bags)
    parent = list(td.parent)
    for idx, (u, v) in enumerate(g.edges):
        host = next(x for x in range(len(td.bags)) if u in bag_sets[x] and v in bag_sets[x])
        bags.append(tuple(sorted(td.bags[host] + (g.n + idx,))))
        parent.append(host)
    return TreeDecomposition(tuple(bags), tuple(parent))


# -- PACE .td files ------------------------------------------------------------


def parse_td(text: str) -> TreeDecomposition:
    """Parse `s td <bags> <width+1> <n>`, `b <id> <v...>` lines and tree edges."""
    bags: dict[int, tuple[int, ...]] = {}
    edges = []
    count = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        try:
            if parts[0] == "s":
                if len(parts) != 5 or parts[1] != "td":
                    raise InvalidInput(f"line {lineno}: bad header")
                count = int(parts[2])
            elif parts[0] == "b":
                bags[int(parts[1]) - 1] = tuple(int(x) - 1 for x in parts[2:])
            else:
                if len(parts) != 2:
                    raise InvalidInput(f"line {lineno}: bad tree edge")
                edges.append((int(parts[0]) - 1, int(parts[1]) - 1))
        except ValueError:
            raise InvalidInput(f"line {lineno}: not an integer") from None
    if count is None:
        raise InvalidInput("missing 's td' header")
    if sorted(bags) != list(range(count)):
        raise InvalidInput("bag ids must be 1..#bags")
    return TreeDecomposition.from_edges([bags[i] for i in range(count)], edges)


def read_td(path: Union[str, Path]) -> TreeDecomposition:
    return parse_td(Path(path).read_text())


def format_td(td: TreeDecomposition, n: int) -> str:
    lines = [f"s td {len(td.bags)} {td.width + 1} {n}"]
    for i, b in enumerate(td.bags):
        lines.append(" ".join(["b", str(i + 1)] + [str(v + 1) for v in b]))
    for a, b in td.edges():
        lines.append(f"{a + 1} {b + 1}")
    return "\n".join(lines) + "\n"
