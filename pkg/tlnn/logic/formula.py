#!/usr/bin/env python3
"""
Abstract syntax tree of weighted signal temporal logic (wSTL) formulas.

Nodes are immutable dataclasses, so structural equality is plain ``==``.
Weights default to 1 everywhere; a predicate weight w scales its
robustness by w/2.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Optional, Sequence, Tuple, Union

from ..common.errors import FormulaError, FormulaIntervalError, FormulaWeightError


class Comparison(str, Enum):
    """Predicate comparison f(x(t)) ~ c"""
    GE = ">="
    LT = "<"

    @property
    def sign(self) -> float:
        """+1 when robustness grows with x, -1 otherwise"""
        return 1.0 if self is Comparison.GE else -1.0


def _weights(values: Optional[Sequence[float]], count: int, where: str) -> Tuple[float, ...]:
    if values is None:
        return (1.0,) * count
    weights = tuple(float(w) for w in values)
    if len(weights) != count:
        raise FormulaWeightError(f"{where}: expected {count} weights, got {len(weights)}")
    for w in weights:
        if not math.isfinite(w):
            raise FormulaWeightError(f"{where}: weights must be finite, got {w}")
        if w < 0:
            raise FormulaWeightError(f"{where}: weights must be non-negative, got {w}")
    return weights


@dataclass(frozen=True)
class Predicate:
    comparison: Comparison
    threshold: float
    weight: float = 1.0
    variable: str = "x"

    def __post_init__(self):
        object.__setattr__(self, "comparison", Comparison(self.comparison))
        object.__setattr__(self, "threshold", float(self.threshold))
        if not math.isfinite(self.threshold):
            raise FormulaError(f"Predicate threshold must be finite, got {self.threshold}")
        (weight,) = _weights((self.weight,), 1, "predicate")
        object.__setattr__(self, "weight", weight)


@dataclass(frozen=True)
class Not:
    child: "Formula"


@dataclass(frozen=True)
class And:
    children: Tuple["Formula", ...]
    weights: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        children = tuple(self.children)
        if len(children) < 2:
            raise FormulaError(f"Conjunction needs at least 2 children, got {len(children)}")
        object.__setattr__(self, "children", children)
        object.__setattr__(self, "weights", _weights(self.weights, len(children), "conjunction"))


@dataclass(frozen=True)
class Or:
    children: Tuple["Formula", ...]
    weights: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        children = tuple(self.children)
        if len(children) < 2:
            raise FormulaError(f"Disjunction needs at least 2 children, got {len(children)}")
        object.__setattr__(self, "children", children)
        object.__setattr__(self, "weights", _weights(self.weights, len(children), "disjunction"))


def _check_interval(start: int, end: int) -> Tuple[int, int]:
    if int(start) != start or int(end) != end:
        raise FormulaIntervalError(f"Interval bounds must be integers, got [{start},{end}]")
    start, end = int(start), int(end)
    if start < 0 or end < 0:
        raise FormulaIntervalError(f"Interval bounds must be non-negative, got [{start},{end}]")
    if start > end:
        raise FormulaIntervalError(f"Interval start exceeds end: [{start},{end}]")
    return start, end


@dataclass(frozen=True)
class Always:
    child: "Formula"
    start: int
    end: int
    weights: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        start, end = _check_interval(self.start, self.end)
        object.__setattr__(self, "start", start)
        object.__setattr__(self, "end", end)
        object.__setattr__(self, "weights", _weights(self.weights, end - start + 1, "always"))


@dataclass(frozen=True)
class Eventually:
    child: "Formula"
    start: int
    end: int
    weights: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        start, end = _check_interval(self.start, self.end)
        object.__setattr__(self, "start", start)
        object.__setattr__(self, "end", end)
        object.__setattr__(self, "weights", _weights(self.weights, end - start + 1, "eventually"))


Formula = Union[Predicate, Not, And, Or, Always, Eventually]
Temporal = (Always, Eventually)


def horizon(f: Formula) -> int:
    """Number of samples past t the formula reads (sum of nested window ends)"""
    if isinstance(f, Predicate):
        return 0
    if isinstance(f, Not):
        return horizon(f.child)
    if isinstance(f, (And, Or)):
        return max(horizon(c) for c in f.children)
    return f.end + horizon(f.child)


def children(f: Formula) -> Tuple[Formula, ...]:
    if isinstance(f, Predicate):
        return ()
    if isinstance(f, (And, Or)):
        return f.children
    return (f.child,)


def walk(f: Formula) -> Iterator[Formula]:
    """Pre-order traversal"""
    yield f
    for c in children(f):
        yield from walk(c)


def temporal_nodes(f: Formula) -> Iterator[Union[Always, Eventually]]:
    return (node for node in walk(f) if isinstance(node, Temporal))

