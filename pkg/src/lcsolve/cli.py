"""Command-line front end.

    lcsolve solve --graph g.gr --problem dominating-set
    lcsolve solve --graph g.gr --dsl roman.lc --td g.td --constraints '{"connected": [2]}'
    lcsolve oracle --graph g.gr --problem k-coloring --params '{"k": 3}'
    lcsolve validate --graph g.gr --td g.td
    lcsolve transform --graph g.gr --kind power --p 2 --output g2.gr
    lcsolve bench --problem dominating-set --sizes 2000,4000,8000

Exit codes: 0 on success, 2 on input errors, 1 for an invalid decomposition
(validate) or an Error optimum under --fail-on-error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Any, Optional, Sequence

from .algebra import WeightAlgebra
from .catalog import Bundle, instantiate, problem_names
from .constraints import parse_constraints, solve_with_globals
from .dsl import compile_problem, load_problem
from .engine import solve
from .flow import solve_complete_graph
from .graph import (GraphError, LabeledGraph, format_gr, graph_power, path_graph, read_gr,
                    transform_jagged, transform_subdivision)
from .oracle import DEFAULT_BUDGET, BudgetExceeded, brute_force_solve
from .treedec import (InvalidInput, format_td, lift_edge_transform,
                      lift_power, path_decomposition, read_td, to_easy, validate_decomposition)

ENGINES = ("treewidth-dp", "complete-flow", "oracle")


class InputError(Exception):
    """Bad arguments or input files; reported with exit code 2."""


def _json_value(x: Any) -> Any:
    if isinstance(x, tuple):
        return [_json_value(y) for y in x]
    return x


def _weight(alg: WeightAlgebra, w) -> Any:
    return alg.to_json(w)


def emit(obj: dict, path: Optional[str]) -> None:
    text = json.dumps(obj, sort_keys=True)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def load_bundle(args: argparse.Namespace, g: LabeledGraph) -> Bundle:
    if bool(args.problem) == bool(args.dsl):
        raise InputError("give exactly one of --problem and --dsl")
    if args.dsl:
        try:
            spec = load_problem(args.dsl)
        except OSError as e:
            raise InputError(f"cannot read {args.dsl}: {e.strerror}") from None
        inst, pns = compile_problem(spec, g)
        return Bundle("dsl", {}, g, inst, pns)
    try:
        params = json.loads(args.params) if args.params else {}
    except json.JSONDecodeError as e:
        raise InputError(f"--params is not valid JSON: {e}") from None
    if not isinstance(params, dict):
        raise InputError("--params must be a JSON object")
    return instantiate(args.problem, params, g)


def load_constraints(args: argparse.Namespace) -> list:
    if not args.constraints:
        return []
    try:
        spec = json.loads(args.constraints)
    except json.JSONDecodeError as e:
        raise InputError(f"--constraints is not valid JSON: {e}") from None
    if not isinstance(spec, dict):
        raise InputError("--constraints must be a JSON object")
    return parse_constraints(spec)


def _read_graph(path: str) -> LabeledGraph:
    try:
        return read_gr(path)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None


def _read_td(path: str):
    try:
        return read_td(path)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None


def _witness(bundle: Bundle, coloring: Optional[dict]) -> Optional[dict]:
    if coloring is None:
        return None
    return {k: _json_value(v) for k, v in bundle.original_witness(coloring).items()}


def run_solve(args: argparse.Namespace, engine: str) -> int:
    g = _read_graph(args.graph)
    bundle = load_bundle(args, g)
    extra = load_constraints(args)
    constraints = list(bundle.constraints) + extra
    alg = bundle.instance.algebra
    want_witness = not args.no_witness
    start = time.perf_counter()
    out: dict[str, Any] = {}

    if engine == "oracle":
        inst = bundle.reference or bundle.instance
        if inst is bundle.reference and constraints:
            raise InputError("constraints are not supported together with a distance reduction")
        res = brute_force_solve(inst, constraints, budget=args.budget, collect=1 if want_witness else 0)
        coloring = dict(enumerate(res.colorings[0])) if want_witness and res.colorings else None
        if inst is bundle.reference:
            out["witness"] = None if coloring is None else {str(v): _json_value(c) for v, c in coloring.items()}
        else:
            out["witness"] = _witness(bundle, coloring)
        out.update(optimum=_weight(alg, res.optimum), width=None, nodes=None)
        optimum_is_error = alg.is_error(res.optimum)
    elif engine == "complete-flow":
        if bundle.transform is not None:
            raise InputError(f"{bundle.name} is solved on a transformed graph; the flow engine needs the input graph")
        if constraints:
            raise InputError("the flow engine does not support global constraints")
        res = solve_complete_graph(bundle.instance)
        out.update(optimum=_weight(alg, res.optimum), width=None, nodes=None,
                   distributions=res.distributions)
        out["witness"] = _witness(bundle, res.witness) if want_witness else None
        optimum_is_error = alg.is_error(res.optimum)
    else:
        td = _read_td(args.td) if args.td else None
        if td is not None:
            check = validate_decomposition(g, td)
            if not check.ok:
                raise InputError(f"invalid decomposition: {check.reason}")
        lifted = bundle.lift(td)
        if args.max_width is not None and lifted.width > args.max_width:
            raise InputError(f"decomposition width {lifted.width} exceeds --max-width {args.max_width}")
        etd = to_easy(bundle.instance.graph, lifted)

        def log_state(t, kind, st):
            print(f"trace node={t} kind={kind} bag={etd.bag[t]}", file=sys.stderr)

        trace = log_state if args.trace else None
        if constraints:
            res = solve_with_globals(bundle.instance, bundle.pns, etd, constraints, witness=want_witness)
        else:
            res = solve(bundle.instance, bundle.pns, etd, witness=want_witness, trace=trace)
        out.update(optimum=_weight(alg, res.optimum), width=res.width, nodes=res.nodes,
                   witness=_witness(bundle, res.witness))
        optimum_is_error = alg.is_error(res.optimum)

    if not want_witness:
        out.pop("witness", None)
    out["millis"] = round((time.perf_counter() - start) * 1000.0, 3)
    emit(out, args.output)
    return 1 if args.fail_on_error and optimum_is_error else 0


def run_validate(args: argparse.Namespace) -> int:
    g = _read_graph(args.graph)
    td = _read_td(args.td)
    res = validate_decomposition(g, td)
    if res.ok:
        print(f"valid width {td.width}")
        return 0
    print(f"invalid: {res.reason}")
    return 1


def run_transform(args: argparse.Namespace) -> int:
    g = _read_graph(args.graph)
    td = _read_td(args.td) if args.td else None
    if args.kind == "power":
        if args.p < 1:
            raise InputError("--p must be positive")
        h = graph_power(g, args.p)
        lifted = None if td is None else lift_power(g, td, args.p)
    else:
        h = (transform_subdivision if args.kind == "subdivision" else transform_jagged)(g)[0]
        lifted = None if td is None else lift_edge_transform(g, td, args.kind)
    text = format_gr(h)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if lifted is not None:
        if not args.td_output:
            raise InputError("--td needs --td-output for the lifted decomposition")
        with open(args.td_output, "w") as fh:
            fh.write(format_td(lifted, h.n))
    return 0


def run_bench(args: argparse.Namespace) -> int:
    try:
        sizes = [int(x) for x in args.sizes.split(",") if x]
    except ValueError:
        raise InputError("--sizes must be a comma-separated list of integers") from None
    try:
        params = json.loads(args.params) if args.params else {}
    except json.JSONDecodeError as e:
        raise InputError(f"--params is not valid JSON: {e}") from None
    print(f"{'n':>8} {'width':>5} {'nodes':>8} {'states':>9} {'millis':>10} {'ratio':>6}")
    prev = None
    for n in sizes:
        g = path_graph(n)
        bundle = instantiate(args.problem, params, g)
        td = path_decomposition(n) if bundle.transform is None else None
        etd = bundle.decomposition(td)
        best = None
        for _ in range(max(1, args.repeat)):
            res = solve(bundle.instance, bundle.pns, etd)
            best = res if best is None or res.millis < best.millis else best
        ratio = "" if prev is None else f"{best.millis / prev:.2f}"
        print(f"{n:>8} {best.width:>5} {best.nodes:>8} {best.states:>9} {best.millis:>10.1f} {ratio:>6}")
        prev = best.millis
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lcsolve",
                                     description="Locally checkable problems on bounded-treewidth graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    def solve_flags(p: argparse.ArgumentParser, with_engine: bool) -> None:
        p.add_argument("--graph", required=True, help="input graph in .gr format")
        p.add_argument("--td", help="tree decomposition in .td format (default: min-fill heuristic)")
        p.add_argument("--problem", help=f"catalog problem, one of: {', '.join(problem_names())}")
        p.add_argument("--params", help="problem parameters as a JSON object")
        p.add_argument("--dsl", help="problem definition file")
        if with_engine:
            p.add_argument("--engine", choices=ENGINES, default="treewidth-dp")
        p.add_argument("--constraints", help='global constraints as JSON, e.g. {"connected": [1]}')
        p.add_argument("--output", help="write the JSON result here instead of stdout")
        p.add_argument("--no-witness", action="store_true", help="omit the witness coloring")
        p.add_argument("--trace", action="store_true", help="log every evaluated state to stderr")
        p.add_argument("--threads", type=int, default=1, help="accepted for compatibility; evaluation is sequential")
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="oracle enumeration budget")
        p.add_argument("--max-width", type=int, help="refuse decompositions wider than this")
        p.add_argument("--fail-on-error", action="store_true", help="exit 1 when no proper coloring exists")

    solve_flags(sub.add_parser("solve", help="solve a problem"), True)
    solve_flags(sub.add_parser("oracle", help="solve by exhaustive enumeration"), False)

    p = sub.add_parser("validate", help="check a tree decomposition")
    p.add_argument("--graph", required=True)
    p.add_argument("--td", required=True)

    p = sub.add_parser("transform", help="emit a graph power, subdivision or jagged graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--kind", choices=("power", "subdivision", "jagged"), required=True)
    p.add_argument("--p", type=int, default=2, help="exponent for --kind power")
    p.add_argument("--td", help="decomposition of the input graph to lift")
    p.add_argument("--td-output", help="where to write the lifted decomposition")
    p.add_argument("--output", help="where to write the transformed graph (default stdout)")

    p = sub.add_parser("bench", help="time a problem on paths of growing length")
    p.add_argument("--problem", default="dominating-set")
    p.add_argument("--params")
    p.add_argument("--sizes", default="2000,4000,8000")
    p.add_argument("--repeat", type=int, default=1)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "solve":
            return run_solve(args, args.engine)
        if args.command == "oracle":
            return run_solve(args, "oracle")
        if args.command == "validate":
            return run_validate(args)
        if args.command == "transform":
            return run_transform(args)
        return run_bench(args)
    except (InputError, GraphError, InvalidInput, BudgetExceeded, ValueError, KeyError, SyntaxError) as e:
        message = e.args[0] if isinstance(e, KeyError) and e.args else e
        print(f"error: {message}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
