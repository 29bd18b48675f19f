from __future__ import annotations

import itertools
import random

import pytest

from lcsolve.catalog import instantiate
from lcsolve.dsl import (CapTooSmall, DSLSyntaxError, SymmetryViolation, compile_problem, dump,
                         eval_check, infer_caps, load_problem, parse_problem)
from lcsolve.engine import solve
from lcsolve.framework import pns_selfcheck
from lcsolve.graph import build_graph, cycle_graph, path_graph
from lcsolve.oracle import brute_force_solve

from corpus import DSL_DIR, DSL_PROBLEMS, small_connected_graphs

ROMAN = """colors: 0..2;
algebra: min-plus;
cost: c(v);
check: c(v)=0 -> count(u in N(v) | c(u)=2) >= 1;
"""

ROMAN_DUMP = """(spec
  (colors 0 2)
  (algebra min-plus)
  (cost (c v))
  (check (implies (= (c v) 0) (>= (count N(v) (= (c u) 2)) 1))))"""


def optimum(text, g, **kw):
    inst, pns = compile_problem(parse_problem(text), g, **kw)
    return solve(inst, pns).optimum


def test_roman_golden():
    assert dump(parse_problem(ROMAN)) == ROMAN_DUMP


@pytest.mark.parametrize("name", sorted(DSL_PROBLEMS))
def test_fixture_golden(name):
    spec = load_problem(DSL_DIR / f"{name}.lc")
    assert dump(spec) + "\n" == (DSL_DIR / f"{name}.golden").read_text()


def test_empty_check():
    with pytest.raises(SyntaxError):
        parse_problem("colors: 0..1; algebra: min-plus; cost: c(v); check: ;")


def test_neighbor_color_outside_aggregate():
    with pytest.raises(SymmetryViolation):
        parse_problem("colors: 0..1; algebra: min-plus; cost: c(v); check: c(u) = 1 and c(v) = 0;")


@pytest.mark.parametrize("text", [
    "colors: 2..1; algebra: min-plus; cost: 0; check: true;",
    "colors: 0..1; algebra: tropical; cost: 0; check: true;",
    "colors: 0..1; algebra: min-plus; cost: count(u in N(v) | c(u) = 1); check: true;",
    "colors: 0..1; algebra: min-plus; cost: 0; check: count(u in N(v) | c(w) = 1) >= 1;",
    "colors: 0..1; algebra: min-plus; cost: 0; check: c(v) >= 1",
    "colors: 0..1; algebra: min-plus; cost: 0; check: true; extra",
])
def test_syntax_errors(text):
    with pytest.raises(DSLSyntaxError) as err:
        parse_problem(text)
    assert err.value.line >= 1 and err.value.col >= 1


def test_examples():
    assert optimum(ROMAN, path_graph(4)) == 3
    two = "colors: 0..2; algebra: min-plus; cost: c(v); check: sum(u in N[v] | c(u)) >= 2;"
    assert optimum(two, path_graph(2)) == 2
    ind = ("colors: 0..1; algebra: max-plus; cost: c(v);"
           "check: c(v) = 1 -> count(u in N(v) | c(u) = 1) = 0;")
    assert optimum(ind, cycle_graph(5)) == 2


def test_caps():
    spec = parse_problem(ROMAN)
    assert infer_caps(spec) == {0: 0, 1: 0, 2: 2}
    with pytest.raises(CapTooSmall):
        infer_caps(parse_problem(ROMAN + "cap 0 at 2;"))
    assert infer_caps(parse_problem(ROMAN + "cap 1 at 2;"))[2] == 1
    exact = "colors: 0..1; algebra: min-plus; cost: c(v); check: count(u in N(v) | c(u) = 1) = 2;"
    assert infer_caps(parse_problem(exact))[1] == 3
    with pytest.raises(CapTooSmall):
        infer_caps(parse_problem(exact + "cap 2 at 1;"))
    odd = ("colors: 0..1; algebra: min-plus; cost: c(v);"
           "check: count(u in N(v) | c(u) = 1) - count(u in N(v) | c(u) = 0) >= 0;")
    assert infer_caps(parse_problem(odd)) == {0: None, 1: None}


@pytest.mark.parametrize("name", sorted(DSL_PROBLEMS))
def test_matches_catalog(name):
    spec = load_problem(DSL_DIR / f"{name}.lc")
    problem, params = DSL_PROBLEMS[name]
    for g in small_connected_graphs(2, 4):
        b = instantiate(problem, params, g)
        want = solve(b.instance, b.pns).optimum
        for use_caps in (True, False):
            inst, pns = compile_problem(spec, g, use_caps=use_caps)
            assert solve(inst, pns).optimum == want, (name, g.edges, use_caps)


# -- generated checks -----------------------------------------------------------------


def random_pred(rng, depth):
    if depth == 0 or rng.random() < 0.4:
        op = rng.choice(["=", "!=", "<=", ">=", "<", ">"])
        k = rng.randint(0, 2)
        return f"c(u) {op} {k}", lambda x, op=op, k=k: CMP[op](x, k)
    if rng.random() < 0.2:
        text, fn = random_pred(rng, depth - 1)
        return f"not ({text})", lambda x, fn=fn: not fn(x)
    word = rng.choice(["and", "or"])
    (ta, fa), (tb, fb) = random_pred(rng, depth - 1), random_pred(rng, depth - 1)
    if word == "and":
        return f"({ta} and {tb})", lambda x: fa(x) and fb(x)
    return f"({ta} or {tb})", lambda x: fa(x) or fb(x)


CMP = {"=": lambda a, b: a == b, "!=": lambda a, b: a != b, "<=": lambda a, b: a <= b,
       ">=": lambda a, b: a >= b, "<": lambda a, b: a < b, ">": lambda a, b: a > b}


def random_term(rng):
    r = rng.random()
    if r < 0.5:
        text, fn = random_pred(rng, 2)
        closed = rng.random() < 0.3
        hood = "N[v]" if closed else "N(v)"
        return (f"count(u in {hood} | {text})",
                lambda cv, nb, fn=fn, closed=closed: sum(1 for x in nb if fn(x)) + (closed and fn(cv)))
    if r < 0.65:
        closed = rng.random() < 0.5
        return (f"sum(u in {'N[v]' if closed else 'N(v)'} | c(u))",
                lambda cv, nb, closed=closed: sum(nb) + (cv if closed else 0))
    if r < 0.8:
        return "c(v)", lambda cv, nb: cv
    k = rng.randint(0, 3)
    return str(k), lambda cv, nb, k=k: k


def random_check(rng, depth):
    if depth == 0 or rng.random() < 0.35:
        (ta, fa), (tb, fb) = random_term(rng), random_term(rng)
        if rng.random() < 0.3:
            tc, fc = random_term(rng)
            ta, fa = f"{ta} + {tc}", (lambda cv, nb, fa=fa, fc=fc: fa(cv, nb) + fc(cv, nb))
        op = rng.choice(["=", "!=", "<=", ">=", "<", ">"])
        return f"{ta} {op} {tb}", lambda cv, nb: CMP[op](fa(cv, nb), fb(cv, nb))
    r = rng.random()
    (ta, fa) = random_check(rng, depth - 1)
    if r < 0.15:
        return f"not ({ta})", lambda cv, nb: not fa(cv, nb)
    (tb, fb) = random_check(rng, depth - 1)
    if r < 0.45:
        return f"({ta}) and ({tb})", lambda cv, nb: fa(cv, nb) and fb(cv, nb)
    if r < 0.75:
        return f"({ta}) or ({tb})", lambda cv, nb: fa(cv, nb) or fb(cv, nb)
    return f"({ta}) -> ({tb})", lambda cv, nb: (not fa(cv, nb)) or fb(cv, nb)


def test_generated_checks():
    rng = random.Random(7)
    star = build_graph(5, [(0, 1), (0, 2), (0, 3), (0, 4)])
    for _ in range(150):
        text, fn = random_check(rng, 3)
        spec = parse_problem(f"colors: 0..2; algebra: min-plus; cost: c(v); check: {text};")
        for cv in range(3):
            for k in range(4):
                for nb in itertools.combinations_with_replacement(range(3), k):
                    assert eval_check(spec.check, cv, nb) == bool(fn(cv, nb)), text
        # inferred caps must never change a check outcome
        inst, pns = compile_problem(spec, star)
        assert pns_selfcheck(inst, pns), text


def test_generated_problems_match_oracle():
    rng = random.Random(8)
    graphs = [path_graph(4), cycle_graph(4), build_graph(4, [(0, 1), (0, 2), (0, 3)])]
    for _ in range(40):
        text, _ = random_check(rng, 2)
        spec = parse_problem(f"colors: 0..2; algebra: min-plus; cost: c(v); check: {text};")
        for g in graphs:
            inst, pns = compile_problem(spec, g)
            assert solve(inst, pns).optimum == brute_force_solve(inst).optimum, text
