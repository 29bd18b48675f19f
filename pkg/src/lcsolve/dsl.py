"""A small language for 1-locally checkable problems whose check sees only
c(v) and the multiset of neighbor colors.

    colors: 0..2;
    algebra: min-plus;
    cost: c(v);
    check: c(v) = 0 -> count(u in N(v) | c(u) = 2) >= 1;
    cap 1 at 2;

Neighbors are reachable only through count(...) and sum(...), so every
check is symmetric in the neighbors by construction.  exists(u in N(v) | p)
and forall(u in N(v) | p) are shorthand for count(...) >= 1 and
count(u in N(v) | not p) = 0.  `cap K at j` saturates the counter of color
j at K.  Problems compile to the counting neighborhood system.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional, Union

from .algebra import get_algebra
from .framework import CountingPNS, ProblemInstance, counting_pns
from .graph import LabeledGraph


class DSLSyntaxError(SyntaxError):
    """Parse failure at (line, column), both 1-based."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


class SymmetryViolation(DSLSyntaxError):
    pass


class CapTooSmall(ValueError):
    pass


# -- AST ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class ColorV:
    pass


@dataclass(frozen=True)
class Arith:
    op: str
    left: Any
    right: Any


@dataclass(frozen=True)
class Neg:
    arg: Any


@dataclass(frozen=True)
class PredCmp:
    """c(u) <op> value"""
    op: str
    value: int


@dataclass(frozen=True)
class PredBool:
    op: str
    left: Any
    right: Any


@dataclass(frozen=True)
class PredNot:
    arg: Any


@dataclass(frozen=True)
class Count:
    closed: bool
    pred: Any


@dataclass(frozen=True)
class Sum:
    closed: bool


@dataclass(frozen=True)
class Cmp:
    op: str
    left: Any
    right: Any


@dataclass(frozen=True)
class BoolOp:
    op: str  # "and", "or", "implies"
    left: Any
    right: Any


@dataclass(frozen=True)
class Not:
    arg: Any


@dataclass(frozen=True)
class Truth:
    value: bool


@dataclass(frozen=True)
class ProblemSpec:
    lo: int
    hi: int
    algebra: str
    cost: Any
    check: Any
    caps: tuple = ()  # (cap, color) pairs in source order

    @property
    def colors(self) -> list[int]:
        return list(range(self.lo, self.hi + 1))


def dump(node: Any) -> str:
    """Stable s-expression rendering, used for golden tests."""
    if isinstance(node, ProblemSpec):
        lines = [f"(colors {node.lo} {node.hi})", f"(algebra {node.algebra})",
                 f"(cost {dump(node.cost)})", f"(check {dump(node.check)})"]
        lines += [f"(cap {k} {j})" for k, j in node.caps]
        return "(spec\n  " + "\n  ".join(lines) + ")"
    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, ColorV):
        return "(c v)"
    if isinstance(node, Neg):
        return f"(neg {dump(node.arg)})"
    if isinstance(node, (Arith, Cmp, BoolOp, PredBool)):
        return f"({node.op} {dump(node.left)} {dump(node.right)})"
    if isinstance(node, (Not, PredNot)):
        return f"(not {dump(node.arg)})"
    if isinstance(node, Truth):
        return "true" if node.value else "false"
    if isinstance(node, PredCmp):
        return f"({node.op} (c u) {node.value})"
    if isinstance(node, Count):
        return f"(count {'N[v]' if node.closed else 'N(v)'} {dump(node.pred)})"
    if isinstance(node, Sum):
        return f"(sum {'N[v]' if node.closed else 'N(v)'})"
    raise TypeError(f"not an AST node: {node!r}")


# -- lexer -------------------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\n]+|\#[^\n]*)
  | (?P<int>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*(?:-[A-Za-z][A-Za-z0-9_]*)*)
  | (?P<sym>\.\.|->|!=|<=|>=|[=<>()\[\]|;:+\-*/])
""", re.VERBOSE)

COMPARISONS = ("=", "!=", "<=", ">=", "<", ">")


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "name", "sym", "eof"
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise DSLSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(Token(kind, m.group(), line, pos - line_start + 1))
        for k, ch in enumerate(m.group()):
            if ch == "\n":
                line += 1
                line_start = pos + k + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


# -- parser ------------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.k = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.k]

    def peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.k + offset, len(self.tokens) - 1)]

    def fail(self, message: str, tok: Optional[Token] = None) -> DSLSyntaxError:
        tok = tok or self.tok
        return DSLSyntaxError(message, tok.line, tok.col)

    def at(self, text: str) -> bool:
        return self.tok.kind in ("name", "sym") and self.tok.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            found = self.tok.text or "end of input"
            raise self.fail(f"expected {text!r}, found {found!r}")
        tok = self.tok
        self.k += 1
        return tok

    def integer(self) -> int:
        sign = 1
        if self.at("-"):
            self.k += 1
            sign = -1
        if self.tok.kind != "int":
            raise self.fail(f"expected an integer, found {self.tok.text or 'end of input'!r}")
        value = int(self.tok.text)
        self.k += 1
        return sign * value

    # top level

    def spec(self) -> ProblemSpec:
        self.expect("colors")
        self.expect(":")
        start = self.tok
        lo = self.integer()
        self.expect("..")
        hi = self.integer()
        if lo > hi:
            raise self.fail(f"empty color range {lo}..{hi}", start)
        self.expect(";")
        self.expect("algebra")
        self.expect(":")
        if self.tok.kind != "name":
            raise self.fail("expected an algebra name")
        algebra = self.tok.text
        try:
            get_algebra(algebra)
        except ValueError as e:
            raise self.fail(str(e)) from None
        self.k += 1
        self.expect(";")
        self.expect("cost")
        self.expect(":")
        cost = self.cost_sum()
        self.expect(";")
        self.expect("check")
        self.expect(":")
        check = self.implication()
        self.expect(";")
        caps = []
        while self.at("cap"):
            self.k += 1
            k = self.integer()
            self.expect("at")
            j = self.integer()
            self.expect(";")
            if k < 0:
                raise self.fail(f"cap must be nonnegative, got {k}")
            caps.append((k, j))
        if self.tok.kind != "eof":
            raise self.fail(f"unexpected {self.tok.text!r} after the last declaration")
        return ProblemSpec(lo, hi, algebra, cost, check, tuple(caps))

    def color_ref(self) -> str:
        """Parse c(x) and return x."""
        self.expect("c")
        self.expect("(")
        if self.tok.kind != "name":
            raise self.fail("expected a vertex name")
        x = self.tok.text
        self.k += 1
        self.expect(")")
        return x

    def own_color(self) -> ColorV:
        tok = self.tok
        x = self.color_ref()
        if x != "v":
            raise SymmetryViolation(f"c({x}) outside count(...) or sum(...); neighbors may only be "
                                    "read through aggregates", tok.line, tok.col)
        return ColorV()

    # cost expressions: + - * and floor division over integers and c(v)

    def cost_sum(self):
        node = self.cost_product()
        while self.at("+") or self.at("-"):
            op = self.tok.text
            self.k += 1
            node = Arith(op, node, self.cost_product())
        return node

    def cost_product(self):
        node = self.cost_atom()
        while self.at("*") or self.at("/"):
            op = self.tok.text
            self.k += 1
            node = Arith(op, node, self.cost_atom())
        return node

    def cost_atom(self):
        if self.tok.kind == "int":
            return Num(self.integer())
        if self.at("-"):
            self.k += 1
            return Neg(self.cost_atom())
        if self.at("("):
            self.k += 1
            node = self.cost_sum()
            self.expect(")")
            return node
        if self.at("c"):
            return self.own_color()
        if self.at("count") or self.at("sum"):
            raise self.fail("the cost may only depend on c(v)")
        raise self.fail(f"expected a cost term, found {self.tok.text or 'end of input'!r}")

    # boolean expressions

    def implication(self):
        left = self.disjunction()
        if self.at("->") or self.at("implies"):
            self.k += 1
            return BoolOp("implies", left, self.implication())
        return left

    def disjunction(self):
        node = self.conjunction()
        while self.at("or"):
            self.k += 1
            node = BoolOp("or", node, self.conjunction())
        return node

    def conjunction(self):
        node = self.negation()
        while self.at("and"):
            self.k += 1
            node = BoolOp("and", node, self.negation())
        return node

    def negation(self):
        if self.at("not"):
            self.k += 1
            return Not(self.negation())
        return self.bool_atom()

    def bool_atom(self):
        if self.at("("):
            self.k += 1
            node = self.implication()
            self.expect(")")
            return node
        if self.at("true") or self.at("false"):
            value = self.tok.text == "true"
            self.k += 1
            return Truth(value)
        if self.at("exists") or self.at("forall"):
            word = self.tok.text
            self.k += 1
            closed, pred = self.aggregate_body(count=True)
            if word == "exists":
                return Cmp(">=", Count(closed, pred), Num(1))
            return Cmp("=", Count(closed, PredNot(pred)), Num(0))
        if self.tok.kind == "eof" or self.at(";"):
            raise self.fail("expected an expression")
        left = self.arith()
        if not (self.tok.kind == "sym" and self.tok.text in COMPARISONS):
            raise self.fail(f"expected a comparison, found {self.tok.text or 'end of input'!r}")
        op = self.tok.text
        self.k += 1
        return Cmp(op, left, self.arith())

    def arith(self):
        node = self.arith_atom()
        while self.at("+") or self.at("-"):
            op = self.tok.text
            self.k += 1
            node = Arith(op, node, self.arith_atom())
        return node

    def arith_atom(self):
        if self.tok.kind == "int":
            return Num(self.integer())
        if self.at("-") and self.peek().kind == "int":
            return Num(self.integer())
        if self.at("c"):
            return self.own_color()
        if self.at("count"):
            self.k += 1
            closed, pred = self.aggregate_body(count=True)
            return Count(closed, pred)
        if self.at("sum"):
            self.k += 1
            closed, _ = self.aggregate_body(count=False)
            return Sum(closed)
        raise self.fail(f"expected a number, c(v), count(...) or sum(...), found "
                        f"{self.tok.text or 'end of input'!r}")

    def aggregate_body(self, count: bool):
        """( x in N(v) | pred ) or ( x in N[v] | c(x) ); returns (closed, pred)."""
        self.expect("(")
        if self.tok.kind != "name" or self.tok.text in ("v", "c"):
            raise self.fail("expected a bound vertex name")
        var = self.tok.text
        self.k += 1
        self.expect("in")
        self.expect("N")
        if self.at("("):
            self.k += 1
            self.expect("v")
            self.expect(")")
            closed = False
        elif self.at("["):
            self.k += 1
            self.expect("v")
            self.expect("]")
            closed = True
        else:
            raise self.fail("expected N(v) or N[v]")
        self.expect("|")
        if count:
            pred = self.pred_or(var)
        else:
            self.bound_color(var)
            pred = None
        self.expect(")")
        return closed, pred

    def bound_color(self, var: str) -> None:
        tok = self.tok
        x = self.color_ref()
        if x != var:
            raise DSLSyntaxError(f"inside an aggregate only c({var}) may be used", tok.line, tok.col)

    def pred_or(self, var: str):
        node = self.pred_and(var)
        while self.at("or"):
            self.k += 1
            node = PredBool("or", node, self.pred_and(var))
        return node

    def pred_and(self, var: str):
        node = self.pred_not(var)
        while self.at("and"):
            self.k += 1
            node = PredBool("and", node, self.pred_not(var))
        return node

    def pred_not(self, var: str):
        if self.at("not"):
            self.k += 1
            return PredNot(self.pred_not(var))
        if self.at("("):
            self.k += 1
            node = self.pred_or(var)
            self.expect(")")
            return node
        self.bound_color(var)
        if not (self.tok.kind == "sym" and self.tok.text in COMPARISONS):
            raise self.fail("expected a comparison after the neighbor color")
        op = self.tok.text
        self.k += 1
        return PredCmp(op, self.integer())


def parse_problem(text: str) -> ProblemSpec:
    return _Parser(text).spec()


def load_problem(path: Union[str, Path]) -> ProblemSpec:
    return parse_problem(Path(path).read_text())


# -- evaluation ----------------------------------------------------------------------

_CMP = {
    "=": lambda a, b: a == b,
    "!=": lambda a, b: a != b,
    "<=": lambda a, b: a <= b,
    ">=": lambda a, b: a >= b,
    "<": lambda a, b: a < b,
    ">": lambda a, b: a > b,
}
_FLIP = {"=": "=", "!=": "!=", "<=": ">=", ">=": "<=", "<": ">", ">": "<"}


def pred_holds(pred: Any, x: int) -> bool:
    if isinstance(pred, PredCmp):
        return _CMP[pred.op](x, pred.value)
    if isinstance(pred, PredNot):
        return not pred_holds(pred.arg, x)
    if pred.op == "and":
        return pred_holds(pred.left, x) and pred_holds(pred.right, x)
    return pred_holds(pred.left, x) or pred_holds(pred.right, x)


def eval_arith(node: Any, cv: int, nbrs: tuple = ()) -> int:
    if isinstance(node, Num):
        return node.value
    if isinstance(node, ColorV):
        return cv
    if isinstance(node, Neg):
        return -eval_arith(node.arg, cv, nbrs)
    if isinstance(node, Count):
        own = [cv] if node.closed else []
        return sum(1 for x in [*own, *nbrs] if pred_holds(node.pred, x))
    if isinstance(node, Sum):
        return sum(nbrs) + (cv if node.closed else 0)
    a, b = eval_arith(node.left, cv, nbrs), eval_arith(node.right, cv, nbrs)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    if node.op == "*":
        return a * b
    if b == 0:
        raise ZeroDivisionError("division by zero in the cost expression")
    return a // b


def eval_check(node: Any, cv: int, nbrs: tuple) -> bool:
    if isinstance(node, Truth):
        return node.value
    if isinstance(node, Not):
        return not eval_check(node.arg, cv, nbrs)
    if isinstance(node, Cmp):
        return _CMP[node.op](eval_arith(node.left, cv, nbrs), eval_arith(node.right, cv, nbrs))
    if node.op == "and":
        return eval_check(node.left, cv, nbrs) and eval_check(node.right, cv, nbrs)
    if node.op == "or":
        return eval_check(node.left, cv, nbrs) or eval_check(node.right, cv, nbrs)
    return not eval_check(node.left, cv, nbrs) or eval_check(node.right, cv, nbrs)


# -- cap inference ---------------------------------------------------------------------


def _has_aggregate(node: Any) -> bool:
    if isinstance(node, (Count, Sum)):
        return True
    if isinstance(node, Arith):
        return _has_aggregate(node.left) or _has_aggregate(node.right)
    if isinstance(node, Neg):
        return _has_aggregate(node.arg)
    return False


def _touched(node: Any, colors: list[int]) -> set[int]:
    """Colors whose neighbor counts an arithmetic expression reads."""
    if isinstance(node, Count):
        return {x for x in colors if pred_holds(node.pred, x)}
    if isinstance(node, Sum):
        return {x for x in colors if x != 0}
    if isinstance(node, Arith):
        return _touched(node.left, colors) | _touched(node.right, colors)
    if isinstance(node, Neg):
        return _touched(node.arg, colors)
    return set()


def _monotone(node: Any, lo: int) -> bool:
    """A sum of nonnegative terms in which every aggregate only grows with
    every counter (so a saturated counter pushes the value to the cap or
    beyond)."""
    if isinstance(node, Num):
        return node.value >= 0
    if isinstance(node, ColorV):
        return lo >= 0
    if isinstance(node, Count):
        return True
    if isinstance(node, Sum):
        return lo >= 0
    if isinstance(node, Arith) and node.op == "+":
        return _monotone(node.left, lo) and _monotone(node.right, lo)
    return False


def _comparisons(node: Any):
    if isinstance(node, Cmp):
        yield node
    elif isinstance(node, Not):
        yield from _comparisons(node.arg)
    elif isinstance(node, BoolOp):
        yield from _comparisons(node.left)
        yield from _comparisons(node.right)


def required_caps(spec: ProblemSpec) -> dict[int, tuple[Optional[int], Optional[int]]]:
    """color -> (smallest safe cap, largest constant compared + 1), with
    None meaning no safe cap is known (the counter must not saturate below
    the degree).  Colors absent from the result are never counted."""
    colors = spec.colors
    out: dict[int, tuple[Optional[int], Optional[int]]] = {}

    def need(cs: set[int], lowest: Optional[int], default: Optional[int]) -> None:
        for x in cs:
            old = out.get(x, (0, 0))
            if lowest is None or old[0] is None:
                out[x] = (None, None)
            else:
                out[x] = (max(old[0], lowest), max(old[1], default))

    for cmp in _comparisons(spec.check):
        la, ra = _has_aggregate(cmp.left), _has_aggregate(cmp.right)
        if not la and not ra:
            continue
        if la and ra:
            need(_touched(cmp.left, colors) | _touched(cmp.right, colors), None, None)
            continue
        agg, other, op = (cmp.left, cmp.right, cmp.op) if la else (cmp.right, cmp.left, _FLIP[cmp.op])
        cs = _touched(agg, colors)
        if not _monotone(agg, spec.lo):
            need(cs, None, None)
            continue
        k = max(eval_arith(other, cv) for cv in colors)
        lowest = k if op in (">=", "<") else k + 1
        need(cs, max(lowest, 0), max(k + 1, 0))
    return out


def infer_caps(spec: ProblemSpec) -> dict[int, Optional[int]]:
    """Counter caps: declared ones (checked for safety), otherwise the
    largest compared constant plus one, 0 for colors no aggregate reads and
    None (degree) when no safe cap is known."""
    req = required_caps(spec)
    caps: dict[int, Optional[int]] = {x: (req[x][1] if x in req else 0) for x in spec.colors}
    for k, j in spec.caps:
        if j not in caps:
            raise CapTooSmall(f"cap declared for color {j}, outside {spec.lo}..{spec.hi}")
        lowest = req.get(j, (0, 0))[0]
        if lowest is not None and k < lowest:
            raise CapTooSmall(f"cap {k} at color {j} is below {lowest}, the value the check compares against")
        caps[j] = k
    return caps


def compile_problem(spec: ProblemSpec, g: LabeledGraph, use_caps: bool = True
                    ) -> tuple[ProblemInstance, CountingPNS]:
    """Instance on g plus its counting system.  With use_caps=False every
    counter saturates at the degree only."""
    alg = get_algebra(spec.algebra)
    colors = spec.colors
    cost_table = {x: eval_arith(spec.cost, x) for x in colors}
    check_ast = spec.check

    def cost(v: int, i: int):
        return cost_table[i]

    def check(v: int, c) -> bool:
        return eval_check(check_ast, c[v], tuple(c[u] for u in g.adj[v]))

    inst = ProblemInstance(g, alg, [colors] * g.n, cost, check, 1, "dsl", {})
    caps = None
    if use_caps:
        caps = {x: k for x, k in infer_caps(spec).items() if k is not None}
    else:
        infer_caps(spec)
    return inst, counting_pns(inst, caps)
