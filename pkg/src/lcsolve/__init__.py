"""Generic solver for locally checkable vertex-coloring problems on graphs
of bounded treewidth."""

from .algebra import BOOLEAN, MAX_PLUS, MIN_MAX, MIN_PLUS, WeightAlgebra, get_algebra
from .catalog import Bundle, instantiate, problem_names
from .constraints import (Acyclic, Connected, SizeAutomaton, UnaryAutomaton, build_size_automaton,
                          canonical_components, solve_with_globals)
from .dsl import compile_problem, parse_problem
from .engine import SolveResult, solve
from .flow import min_cost_max_flow, solve_complete_graph
from .framework import ProblemInstance, counting_pns, generic_pns, is_proper
from .graph import LabeledGraph, build_graph, read_gr
from .oracle import brute_force_solve
from .treedec import heuristic_decomposition, read_td, to_easy, validate_decomposition

__version__ = "0.1.0"

__all__ = [
    "Acyclic", "BOOLEAN", "Bundle", "Connected", "LabeledGraph", "MAX_PLUS", "MIN_MAX", "MIN_PLUS",
    "ProblemInstance", "SizeAutomaton", "SolveResult", "UnaryAutomaton", "WeightAlgebra",
    "brute_force_solve", "build_graph", "build_size_automaton", "canonical_components",
    "compile_problem", "counting_pns", "generic_pns", "get_algebra", "heuristic_decomposition",
    "instantiate", "is_proper", "min_cost_max_flow", "parse_problem", "problem_names", "read_gr",
    "read_td", "solve", "solve_complete_graph", "solve_with_globals", "to_easy",
    "validate_decomposition",
]
