"""rosserlab: finite-scale laboratory for three Rosser provability predicates."""

from __future__ import annotations

from rosserlab.errors import CodeOverflowError, DomainCapError, RosserlabError, ScenarioError
from rosserlab.parser import ParseError, parse_formula, parse_term, print_formula, print_term
from rosserlab.syntax import (
    And, Box, Eq, Forall, Formula, Leq, Not, Prod, Succ, Sum, Term, Var, Zero,
    eval_delta0, eval_term, is_delta0, is_instance, minus, numeral, substitute,
)

__version__ = "0.1.0"

__all__ = [
    "And", "Box", "Eq", "Forall", "Formula", "Leq", "Not", "Prod", "Succ", "Sum",
    "Term", "Var", "Zero", "CodeOverflowError", "DomainCapError", "ParseError",
    "RosserlabError", "ScenarioError", "eval_delta0", "eval_term", "is_delta0",
    "is_instance", "minus", "numeral", "parse_formula", "parse_term",
    "print_formula", "print_term", "substitute",
]
