"""
Logic core

Weighted signal temporal logic: formula AST, text grammar, Boolean
satisfaction, classic min/max robustness and weighted robustness.
"""

from .activations import (
    conjunction,
    conjunction_grad,
    disjunction,
    disjunction_grad,
    negative_part,
    positive_part,
)
from .formula import (
    Always,
    And,
    Comparison,
    Eventually,
    Formula,
    Not,
    Or,
    Predicate,
    horizon,
    temporal_nodes,
    walk,
)
from .grammar import format_formula, parse_formula
from .semantics import eval_boolean, robustness_classic, robustness_weighted
from .signal import Signal, as_samples

__all__ = [
    'conjunction',
    'conjunction_grad',
    'disjunction',
    'disjunction_grad',
    'negative_part',
    'positive_part',
    'Always',
    'And',
    'Comparison',
    'Eventually',
    'Formula',
    'Not',
    'Or',
    'Predicate',
    'horizon',
    'temporal_nodes',
    'walk',
    'format_formula',
    'parse_formula',
    'eval_boolean',
    'robustness_classic',
    'robustness_weighted',
    'Signal',
    'as_samples',
]
