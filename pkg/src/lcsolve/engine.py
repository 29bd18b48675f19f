"""Dynamic program over an easy tree decomposition.

A state at node t fixes, for every bag vertex, a color, a charge flag, an
accumulated partial-neighborhood value and a check mode, plus the set S of
bag vertices whose mutual edges were already accounted for higher up.

Check modes are Final (the vertex's accumulated value must be accepted) or
Open.  An Open vertex is not checked; instead the evaluation reports, per
reachable final value, the best weight.  A state's result is therefore a
dict mapping an output key to a weight, where the key holds the final
values of the Open vertices (in bag order) and the outputs of any global
constraints.  The classic "must equal n" mode is a lookup in that dict.

Evaluation runs top-down from the root over an explicit stack of
generators, each yielding (child node, child state) requests.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Any, Callable, Hashable, Optional, Sequence

from .algebra import Weight
from .framework import PartialNeighborhoodSystem, ProblemInstance
from .treedec import (FORGET, INTRODUCE, JOIN, LEAF, EasyTreeDecomposition,
                      heuristic_decomposition, to_easy)

FINAL = 0
OPEN = 1

# returned by global-constraint hooks to discard a branch
REJECT = object()


class WitnessUnavailable(RuntimeError):
    pass


@dataclass(frozen=True)
class MustEqual:
    target: Hashable


@dataclass(frozen=True)
class DPState:
    """Public view of a state; `modes` entries are FINAL or MustEqual(n)."""

    node: int
    removed: int
    colors: tuple
    charged: int
    eta: tuple
    modes: tuple


@dataclass
class SolveResult:
    optimum: Weight
    witness: Optional[dict[int, Any]]
    width: int
    nodes: int
    states: int = 0
    millis: float = 0.0


def _insert_bit(mask: int, p: int, bit: int) -> int:
    low = mask & ((1 << p) - 1)
    return low | ((mask >> p) << (p + 1)) | (bit << p)


def _remove_bit(mask: int, p: int) -> int:
    low = mask & ((1 << p) - 1)
    return low | ((mask >> (p + 1)) << p)


def _outputs(cons: Sequence[Any], hook: str, gout: tuple, *args) -> Optional[tuple]:
    """Apply one hook of every constraint to its own output; None on reject."""
    out = []
    for k, con in enumerate(cons):
        o = getattr(con, hook)(*args, gout[k])
        if o is REJECT:
            return None
        out.append(o)
    return tuple(out)


def _join_outputs(cons: Sequence[Any], bag, cols, counted, left: tuple, right: tuple) -> Optional[tuple]:
    out = []
    for k, con in enumerate(cons):
        o = con.join_output(bag, cols, counted, left[k], right[k])
        if o is REJECT:
            return None
        out.append(o)
    return tuple(out)


class DPEngine:
    """Evaluates the table function on one instance and one decomposition."""

    def __init__(self, inst: ProblemInstance, pns: PartialNeighborhoodSystem,
                 etd: EasyTreeDecomposition, constraints: Sequence[Any] = (),
                 witness: bool = False, memoize: bool = True,
                 prune_colors: bool = True,
                 trace: Optional[Callable[[int, str, tuple], None]] = None) -> None:
        if inst.radius != 1:
            raise ValueError("the engine needs a radius-1 instance; reduce with a graph power first")
        problem = etd.check_kinds()
        if problem is not None:
            raise ValueError(f"not an easy decomposition: {problem}")
        self.inst = inst
        self.pns = pns
        self.etd = etd
        self.alg = inst.algebra
        self.constraints = tuple(constraints)
        self.witness = witness
        self.memoize = memoize
        self.trace = trace
        self.prune_colors = prune_colors
        g = inst.graph
        self.lists = [tuple(lst) for lst in inst.lists]
        if prune_colors:
            self._prune_lists(g)
        self.costs = [{i: inst.cost(v, i) for i in inst.lists[v]} for v in range(g.n)]
        self.states = 0
        self._prepare(g)
        self.memo: list[dict] = [dict() for _ in range(len(etd))]
        self._chains: dict[int, list] = {}
        self._allowed: dict = {}
        self._forget_nbrs: dict[int, tuple] = {}
        self._supports: dict = {}
        self._pairs: dict = {}

    REACH_LIMIT = 2048

    def _reachable_accept(self, v: int, i, g) -> bool:
        """Whether some choice of neighbor colors (from the current lists)
        makes v's check pass with color i.  Gives up (answers True) when the
        set of reachable accumulated values grows past REACH_LIMIT."""
        pns = self.pns
        reach = {pns.neutral(v, i)}
        for u in g.adj[v]:
            parts = {pns.new(v, i, u, j) for j in self.lists[u]}
            reach = {pns.combine(v, i, a, b) for a in reach for b in parts}
            if len(reach) > self.REACH_LIMIT:
                return True
        return any(pns.accept(v, i, n) for n in reach)

    def _prune_lists(self, g) -> None:
        """Remove colors that no neighbor coloring can make acceptable,
        repeating while removals propagate to neighbors.  Proper colorings
        never use a removed color, so the optimum is unchanged."""
        dirty = set(range(g.n))
        while dirty:
            v = min(dirty)
            dirty.discard(v)
            keep = tuple(i for i in self.lists[v] if self._reachable_accept(v, i, g))
            if len(keep) < len(self.lists[v]):
                self.lists[v] = keep
                dirty.update(g.adj[v])

    def _prepare(self, g) -> None:
        etd = self.etd
        size = len(etd)
        self.pos = [-1] * size
        self.nbr_pos: list[tuple[int, ...]] = [()] * size
        self.pairs: list[tuple[tuple[int, int], ...]] = [()] * size
        self.store = [True] * size
        for t in range(size):
            kind, bag, v = etd.kind[t], etd.bag[t], etd.vertex[t]
            if kind == FORGET:
                child = etd.children[t][0]
                self.pos[t] = etd.bag[child].index(v)
                # a forget child's states are never reached twice
                self.store[child] = self.witness
            elif kind == INTRODUCE:
                self.pos[t] = bag.index(v)
                self.nbr_pos[t] = tuple(q for q, u in enumerate(bag) if g.has_edge(u, v))
            elif kind == JOIN:
                self.pairs[t] = tuple((a, b) for a in range(len(bag)) for b in range(a + 1, len(bag))
                                      if g.has_edge(bag[a], bag[b]))
        if not self.memoize:
            self.store = [False] * size

    # -- driver -----------------------------------------------------------------

    def evaluate(self, t: int, st: tuple) -> dict:
        """Result dict of state `st` at node t (internal tuple form)."""
        hit = self.memo[t].get(st)
        if hit is not None:
            return hit[0]
        kind = self.etd.kind
        memo = self.memo
        store = self.store
        if kind[t] == LEAF:
            out = self._leaf(t, st)
            if store[t]:
                memo[t][st] = out
            return out[0]
        stack = [(t, st, self._generator(t, st))]
        sent = None
        while stack:
            node, state, gen = stack[-1]
            try:
                ct, cs = gen.send(sent)
            except StopIteration as stop:
                stack.pop()
                out = stop.value
                if store[node]:
                    memo[node][state] = out
                sent = out[0]
                continue
            hit = memo[ct].get(cs)
            if hit is not None:
                sent = hit[0]
            elif kind[ct] == LEAF:
                out = self._leaf(ct, cs)
                if store[ct]:
                    memo[ct][cs] = out
                sent = out[0]
            else:
                stack.append((ct, cs, self._generator(ct, cs)))
                sent = None
        return sent

    def _generator(self, t: int, st: tuple):
        self.states += 1
        kind = self.etd.kind[t]
        if self.trace is not None:
            self.trace(t, kind, st)
        if kind == FORGET:
            return self._forget(t, st)
        if kind == INTRODUCE:
            return self._introduce(t, st)
        return self._join(t, st)

    def _charge(self, v: int, i, charged: bool) -> Weight:
        return self.costs[v][i] if charged else self.alg.neutral

    # -- node rules ---------------------------------------------------------------

    def _leaf(self, t: int, st: tuple) -> tuple[dict, Optional[dict]]:
        self.states += 1
        if self.trace is not None:
            self.trace(t, LEAF, st)
        S, cols, om, eta, modes, gin = st
        v = self.etd.bag[t][0]
        i = cols[0]
        if modes[0] == FINAL:
            if not self.pns.accept(v, i, eta[0]):
                return {}, {}
            ek: tuple = ()
        else:
            ek = (eta[0],)
        gout = []
        for k, con in enumerate(self.constraints):
            o = con.leaf_output(v, i, gin[k])
            if o is REJECT:
                return {}, {}
            gout.append(o)
        key = (ek, tuple(gout))
        return {key: self._charge(v, i, om & 1)}, ({key: None} if self.witness else None)

    def forget_child(self, t: int, st: tuple, i) -> Optional[tuple]:
        S, cols, om, eta, modes, gin = st
        v = self.etd.vertex[t]
        p = self.pos[t]
        if self.constraints:
            gin2 = []
            for k, con in enumerate(self.constraints):
                x = con.forget_input(v, i, gin[k])
                if x is REJECT:
                    return None
                gin2.append(x)
            gin = tuple(gin2)
        return (_insert_bit(S, p, 0), cols[:p] + (i,) + cols[p:], _insert_bit(om, p, 1),
                eta[:p] + (self.pns.neutral(v, i),) + eta[p:], modes[:p] + (FINAL,) + modes[p:], gin)

    def _forget(self, t: int, st: tuple):
        v = self.etd.vertex[t]
        child = self.etd.children[t][0]
        better = self.alg.better
        cons = self.constraints
        best: dict = {}
        back: Optional[dict] = {} if self.witness else None
        if cons:
            cbag = self.etd.bag[child]
            p = self.pos[t]
        survivors = self._introduce_filter(t, st)
        for i in self.lists[v] if survivors is None else survivors:
            cs = self.forget_child(t, st, i)
            if cs is None:
                continue
            res = yield child, cs
            for key, w in res.items():
                pkey = key
                if cons:
                    gout = _outputs(cons, "forget_output", key[1], cbag, cs[1], p)
                    if gout is None:
                        continue
                    pkey = (key[0], gout)
                old = best.get(pkey)
                if old is None or better(w, old):
                    best[pkey] = w
                    if back is not None:
                        back[pkey] = (i, key)
        return best, back

    def _bag_nbrs(self, t: int) -> tuple[int, ...]:
        """Positions in forget node t's bag adjacent to the forgotten vertex."""
        got = self._forget_nbrs.get(t)
        if got is None:
            v = self.etd.vertex[t]
            g = self.inst.graph
            got = tuple(q for q, u in enumerate(self.etd.bag[t]) if g.has_edge(u, v))
            self._forget_nbrs[t] = got
        return got

    def _support(self, x: int, xi, y: int) -> Optional[frozenset]:
        """Colors j of neighbor y for which some choice of x's other
        neighbors (from the current lists) lets x's check accept; None when
        the reachable values grow past REACH_LIMIT (no restriction)."""
        key = (x, xi, y)
        if key in self._supports:
            return self._supports[key]
        pns = self.pns
        g = self.inst.graph
        reach = {pns.neutral(x, xi)}
        out: Optional[frozenset] = None
        for u in g.adj[x]:
            if u == y:
                continue
            parts = {pns.new(x, xi, u, j) for j in self.lists[u]}
            reach = {pns.combine(x, xi, a, b) for a in reach for b in parts}
            if len(reach) > self.REACH_LIMIT:
                break
        else:
            out = frozenset(j for j in self.lists[y]
                            if any(pns.accept(x, xi, pns.combine(x, xi, pns.new(x, xi, y, j), r))
                                   for r in reach))
        self._supports[key] = out
        return out

    def _pair_allowed(self, v: int, y: int, yj) -> Optional[frozenset]:
        """Colors i of v compatible with neighbor y colored yj from both
        sides, or None when nothing can be ruled out."""
        key = (v, y, yj)
        if key in self._pairs:
            return self._pairs[key]
        from_y = self._support(y, yj, v)
        out = set(self.lists[v]) if from_y is None else set(from_y)
        for i in list(out):
            sup = self._support(v, i, y)
            if sup is not None and yj not in sup:
                out.discard(i)
        res = None if len(out) == len(self.lists[v]) else frozenset(out)
        self._pairs[key] = res
        return res

    def _chain(self, t: int) -> list[tuple[int, int, tuple[int, ...]]]:
        """Vertices checked by the run of introduce nodes (and a closing
        leaf) directly below forget node t, as (vertex, position in the
        forget child's bag, neighbor positions in that bag)."""
        got = self._chains.get(t)
        if got is not None:
            return got
        etd = self.etd
        c = etd.children[t][0]
        cbag = etd.bag[c]
        g = self.inst.graph
        out = []
        node = c
        while etd.kind[node] in (INTRODUCE, LEAF):
            x = etd.vertex[node] if etd.kind[node] == INTRODUCE else etd.bag[node][0]
            out.append((x, cbag.index(x), tuple(q for q, u in enumerate(cbag) if g.has_edge(u, x))))
            if etd.kind[node] == LEAF:
                break
            node = etd.children[node][0]
        self._chains[t] = out
        return out

    def _introduce_filter(self, t: int, st: tuple) -> Optional[list]:
        """Colors of the forgotten vertex v that survive the Final checks
        the introduce nodes right below will run, or None for all colors.
        Every edge between two bag vertices is counted at one of those
        nodes, so each predicted value is exactly the one the child tests.
        The surviving colors of one check only depend on (vertex, color,
        value so far) and are cached across states."""
        chain = self._chain(t)
        S, cols, om, eta, modes, gin = st
        v = self.etd.vertex[t]
        p = self.pos[t]
        cbag = self.etd.bag[self.etd.children[t][0]]
        pns = self.pns
        comb, new, accept = pns.combine, pns.new, pns.accept
        colors = self.lists[v]
        cache = self._allowed
        allowed: Optional[set] = None
        if self.prune_colors:
            bag = self.etd.bag[t]
            for q in self._bag_nbrs(t):
                ok = self._pair_allowed(v, bag[q], cols[q])
                if ok is not None:
                    allowed = set(ok) if allowed is None else allowed & ok
            if allowed is not None and not allowed:
                return []
        for x, qx, nq in chain:
            if x == v:
                own = tuple((cbag[q], cols[q if q < p else q - 1]) for q in nq)
                key = (v, own)
                ok = cache.get(key)
                if ok is None:
                    ok = set()
                    for i in colors:
                        n = pns.neutral(v, i)
                        for u, j in own:
                            n = comb(v, i, n, new(v, i, u, j))
                        if accept(v, i, n):
                            ok.add(i)
                    cache[key] = ok
            else:
                px = qx if qx < p else qx - 1
                if modes[px] != FINAL:
                    continue
                xi = cols[px]
                xin = (S >> px) & 1
                base = eta[px]
                adjacent = False
                for q in nq:
                    u = cbag[q]
                    if u == v:
                        adjacent = True
                        continue
                    pq = q if q < p else q - 1
                    if xin and (S >> pq) & 1:
                        continue
                    base = comb(x, xi, base, new(x, xi, u, cols[pq]))
                if not adjacent:
                    if not accept(x, xi, base):
                        return []
                    continue
                key = (x, xi, base, v)
                ok = cache.get(key)
                if ok is None:
                    ok = {i for i in colors if accept(x, xi, comb(x, xi, base, new(x, xi, v, i)))}
                    cache[key] = ok
            allowed = ok if allowed is None else allowed & ok
            if not allowed:
                return []
        if allowed is None:
            return None
        return [i for i in colors if i in allowed]

    def introduce_child(self, t: int, st: tuple, check: bool = False) -> tuple[Any, Optional[tuple], tuple[int, ...]]:
        """(n_v, child state, positions of the bag neighbors whose edge to v
        is counted here).  With `check`, a Final v failing its check gives
        no child state."""
        S, cols, om, eta, modes, gin = st
        pns = self.pns
        comb, new = pns.combine, pns.new
        bag = self.etd.bag[t]
        p = self.pos[t]
        v = bag[p]
        i = cols[p]
        vin = (S >> p) & 1
        counted = [q for q in self.nbr_pos[t] if not (vin and (S >> q) & 1)]
        n = eta[p]
        for q in counted:
            n = comb(v, i, n, new(v, i, bag[q], cols[q]))
        if check and modes[p] == FINAL and not pns.accept(v, i, n):
            return n, None, ()
        eta2 = list(eta)
        for q in counted:
            u = bag[q]
            j = cols[q]
            eta2[q] = comb(u, j, eta2[q], new(u, j, v, i))
        del eta2[p]
        cs = (_remove_bit(S, p), cols[:p] + cols[p + 1:], _remove_bit(om, p), tuple(eta2),
              modes[:p] + modes[p + 1:], gin)
        return n, cs, tuple(counted)

    def _introduce(self, t: int, st: tuple):
        S, cols, om, eta, modes, gin = st
        p = self.pos[t]
        v = self.etd.vertex[t]
        i = cols[p]
        n, cs, counted = self.introduce_child(t, st, check=True)
        if cs is None:
            return {}, {}
        is_open = modes[p] != FINAL
        slot = sum(1 for m in modes[:p] if m != FINAL)
        wv = self._charge(v, i, (om >> p) & 1)
        comb = self.alg.combine
        err = self.alg.error
        better = self.alg.better
        cons = self.constraints
        bag = self.etd.bag[t]
        res = yield self.etd.children[t][0], cs
        best: dict = {}
        back: Optional[dict] = {} if self.witness else None
        for key, w in res.items():
            w2 = comb(wv, w)
            if w2 == err:
                continue
            ek, gout = key
            if is_open:
                ek = ek[:slot] + (n,) + ek[slot:]
            if cons:
                gout = _outputs(cons, "introduce_output", gout, bag, cols, p, counted)
                if gout is None:
                    continue
            pkey = (ek, gout)
            old = best.get(pkey)
            if old is None or better(w2, old):
                best[pkey] = w2
                if back is not None:
                    back[pkey] = key
        return best, back

    def join_children(self, t: int, st: tuple, left_gout: Optional[tuple] = None) -> tuple:
        """Left child state, or the right one when `left_gout` is given."""
        S, cols, om, eta, modes, gin = st
        bag = self.etd.bag[t]
        if left_gout is not None and self.constraints:
            gin = tuple(con.join_right_input(gin[k], left_gout[k])
                        for k, con in enumerate(self.constraints))
        neutral = self.pns.neutral
        return ((1 << len(bag)) - 1, cols, 0, tuple(neutral(bag[q], cols[q]) for q in range(len(bag))),
                (OPEN,) * len(bag), gin)

    def bag_values(self, t: int, st: tuple) -> list:
        """eta(v) combined with v's bag neighborhood in (G - S)[X_t], per position."""
        S, cols, om, eta, modes, gin = st
        bag = self.etd.bag[t]
        comb, new = self.pns.combine, self.pns.new
        base = list(eta)
        for a, b in self.pairs[t]:
            if (S >> a) & 1 and (S >> b) & 1:
                continue
            u, w = bag[a], bag[b]
            base[a] = comb(u, cols[a], base[a], new(u, cols[a], w, cols[b]))
            base[b] = comb(w, cols[b], base[b], new(w, cols[b], u, cols[a]))
        return base

    def _join(self, t: int, st: tuple):
        S, cols, om, eta, modes, gin = st
        alg = self.alg
        bag = self.etd.bag[t]
        k = len(bag)
        W = alg.fold(self._charge(bag[q], cols[q], (om >> q) & 1) for q in range(k))
        best: dict = {}
        back: Optional[dict] = {} if self.witness else None
        if alg.is_error(W):
            return best, back
        left, right = self.etd.children[t]
        cons = self.constraints
        counted = tuple((a, b) for a, b in self.pairs[t] if not ((S >> a) & 1 and (S >> b) & 1))
        base = self.bag_values(t, st)
        pns = self.pns
        comb, accept = pns.combine, pns.accept
        final = [modes[q] == FINAL for q in range(k)]
        # per-position cache (a, b) -> combined value, or REJECT for a failed Final check
        caches = [dict() for _ in range(k)]

        def total(q: int, a, b):
            c = caches[q]
            key = (a, b)
            r = c.get(key)
            if r is None:
                v, i = bag[q], cols[q]
                r = comb(v, i, comb(v, i, base[q], a), b)
                if final[q] and not accept(v, i, r):
                    r = REJECT
                c[key] = r
            return r

        lres = yield left, self.join_children(t, st)
        groups: dict = {}
        for key, w in lres.items():
            groups.setdefault(key[1], []).append((key, w))
        acomb, err, better = alg.combine, alg.error, alg.better
        for gl, entries in groups.items():
            rres = yield right, self.join_children(t, st, gl)
            if not rres:
                continue
            for lkey, wl in entries:
                wa = acomb(W, wl)
                if wa == err:
                    continue
                el = lkey[0]
                for rkey, wr in rres.items():
                    er = rkey[0]
                    opened = []
                    for q in range(k):
                        r = total(q, el[q], er[q])
                        if r is REJECT:
                            break
                        if not final[q]:
                            opened.append(r)
                    else:
                        w = acomb(wa, wr)
                        if w == err:
                            continue
                        gout = ()
                        if cons:
                            gout = _join_outputs(cons, bag, cols, counted, gl, rkey[1])
                            if gout is None:
                                continue
                        pkey = (tuple(opened), gout)
                        old = best.get(pkey)
                        if old is None or better(w, old):
                            best[pkey] = w
                            if back is not None:
                                back[pkey] = (lkey, rkey)
        return best, back

    # -- root and witness ----------------------------------------------------------

    def root_states(self):
        t = self.etd.root
        r = self.etd.bag[t][0]
        for i in self.lists[r]:
            gin = tuple(con.root_input(r, i) for con in self.constraints)
            if any(x is REJECT for x in gin):
                continue
            yield i, (0, (i,), 1, (self.pns.neutral(r, i),), (FINAL,), gin)

    def solve(self) -> tuple[Weight, Optional[tuple]]:
        """Optimum and the (root state, key) attaining it."""
        alg = self.alg
        if self.inst.graph.n == 0:
            return alg.neutral, None
        best, where = alg.error, None
        t = self.etd.root
        for i, st in self.root_states():
            for key, w in self.evaluate(t, st).items():
                if not all(con.root_accept(key[1][k]) for k, con in enumerate(self.constraints)):
                    continue
                if alg.better(w, best):
                    best, where = w, (st, key)
        return best, where

    def _backrefs(self, t: int, st: tuple) -> dict:
        hit = self.memo[t].get(st)
        if hit is None:
            # not stored (memoization off): evaluate once more with storage
            saved = self.store[t]
            self.store[t] = True
            self.evaluate(t, st)
            self.store[t] = saved
            hit = self.memo[t][st]
        return hit[1]

    def extract_witness(self, where: Optional[tuple]) -> dict[int, Any]:
        if not self.witness:
            raise WitnessUnavailable("engine was built without back-references")
        if self.inst.graph.n == 0:
            return {}
        if where is None:
            raise WitnessUnavailable("no proper coloring exists")
        etd = self.etd
        root_state, root_key = where
        coloring = {etd.bag[etd.root][0]: root_state[1][0]}
        stack = [(etd.root, root_state, root_key)]
        while stack:
            t, st, key = stack.pop()
            kind = etd.kind[t]
            if kind == LEAF:
                continue
            ref = self._backrefs(t, st)[key]
            if kind == FORGET:
                i, ckey = ref
                coloring[etd.vertex[t]] = i
                stack.append((etd.children[t][0], self.forget_child(t, st, i), ckey))
            elif kind == INTRODUCE:
                stack.append((etd.children[t][0], self.introduce_child(t, st)[1], ref))
            else:
                lkey, rkey = ref
                left, right = etd.children[t]
                stack.append((left, self.join_children(t, st), lkey))
                stack.append((right, self.join_children(t, st, lkey[1]), rkey))
        return coloring

    # -- public single-state evaluation ---------------------------------------------

    def internal_state(self, state: DPState) -> tuple:
        modes = tuple(FINAL if m == FINAL else OPEN for m in state.modes)
        return (state.removed, tuple(state.colors), state.charged, tuple(state.eta), modes, ())

    def evaluate_state(self, state: DPState) -> Weight:
        """lambda_t of a public state; MustEqual(n) entries select the output key."""
        if self.constraints:
            raise ValueError("single-state evaluation is only offered without global constraints")
        st = self.internal_state(state)
        res = self.evaluate(state.node, st)
        key = (tuple(m.target for m in state.modes if m != FINAL), ())
        return res.get(key, self.alg.error)

    def bag_ns(self, state: DPState, v: int):
        """Accumulated value of v's neighbors in the bag graph minus edges inside S."""
        t = state.node
        bag = self.etd.bag[t]
        p = bag.index(v)
        S, cols = state.removed, state.colors
        acc = self.pns.neutral(v, cols[p])
        for q, u in enumerate(bag):
            if q == p or not self.inst.graph.has_edge(u, v):
                continue
            if (S >> p) & 1 and (S >> q) & 1:
                continue
            acc = self.pns.combine(v, cols[p], acc, self.pns.new(v, cols[p], u, cols[q]))
        return acc


def _eval_kind(engine: DPEngine, state: DPState, kind: str) -> Weight:
    if engine.etd.kind[state.node] != kind:
        raise ValueError(f"node {state.node} is a {engine.etd.kind[state.node]} node, not {kind}")
    return engine.evaluate_state(state)


def eval_leaf(engine: DPEngine, state: DPState) -> Weight:
    return _eval_kind(engine, state, LEAF)


def eval_forget(engine: DPEngine, state: DPState) -> Weight:
    return _eval_kind(engine, state, FORGET)


def eval_introduce(engine: DPEngine, state: DPState) -> Weight:
    return _eval_kind(engine, state, INTRODUCE)


def eval_join(engine: DPEngine, state: DPState) -> Weight:
    return _eval_kind(engine, state, JOIN)


def easy_decomposition(inst: ProblemInstance, etd: Optional[EasyTreeDecomposition] = None,
                       td=None) -> EasyTreeDecomposition:
    if etd is not None:
        return etd
    g = inst.graph
    if td is None:
        td = heuristic_decomposition(g)
    return to_easy(g, td)


def solve(inst: ProblemInstance, pns: PartialNeighborhoodSystem,
          etd: Optional[EasyTreeDecomposition] = None, *, td=None, witness: bool = False,
          constraints: Sequence[Any] = (), memoize: bool = True, prune_colors: bool = True,
          trace: Optional[Callable] = None) -> SolveResult:
    """Minimum weight of a proper coloring (Error if none), optionally with
    a witness coloring as a dict vertex -> color."""
    start = time.perf_counter()
    etd = easy_decomposition(inst, etd, td)
    engine = DPEngine(inst, pns, etd, constraints, witness=witness, memoize=memoize,
                      prune_colors=prune_colors, trace=trace)
    optimum, where = engine.solve()
    wit = None
    if witness and not inst.algebra.is_error(optimum):
        wit = engine.extract_witness(where)
    return SolveResult(optimum, wit, max(etd.width, 0), len(etd), engine.states,
                       (time.perf_counter() - start) * 1000.0)
