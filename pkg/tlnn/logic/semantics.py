#!/usr/bin/env python3
"""
Semantics of (weighted) STL formulas over discrete-time signals.

- eval_boolean: standard satisfaction, weights ignored
- robustness_classic: min/max robustness, weights ignored
- robustness_weighted: arithmetic-geometric weighted robustness

The predicate function is the identity map, f(x(t)) = x(t).
"""

import numpy as np

from ..common.errors import HorizonError
from .activations import conjunction, disjunction
from .formula import Always, And, Comparison, Formula, Not, Or, Predicate, horizon
from .signal import SignalLike, as_samples


def _prepare(f: Formula, x: SignalLike, t: int) -> np.ndarray:
    samples = as_samples(x)
    if t < 0:
        raise HorizonError(f"Evaluation time must be non-negative, got {t}")
    needed = t + horizon(f)
    if needed > samples.size - 1:
        raise HorizonError(
            f"Formula reads up to index {needed} but the signal has {samples.size} samples"
        )
    return samples


def _window(f, t: int) -> range:
    return range(t + f.start, t + f.end + 1)


def eval_boolean(f: Formula, x: SignalLike, t: int = 0) -> bool:
    """Boolean satisfaction of f by x at index t"""
    return _boolean(f, _prepare(f, x, t), t)


def _boolean(f: Formula, x: np.ndarray, t: int) -> bool:
    if isinstance(f, Predicate):
        if f.comparison is Comparison.GE:
            return bool(x[t] >= f.threshold)
        return bool(x[t] < f.threshold)
    if isinstance(f, Not):
        return not _boolean(f.child, x, t)
    if isinstance(f, And):
        return all(_boolean(c, x, t) for c in f.children)
    if isinstance(f, Or):
        return any(_boolean(c, x, t) for c in f.children)
    if isinstance(f, Always):
        return all(_boolean(f.child, x, k) for k in _window(f, t))
    return any(_boolean(f.child, x, k) for k in _window(f, t))


def robustness_classic(f: Formula, x: SignalLike, t: int = 0) -> float:
    """Traditional min/max robustness of f on x at index t"""
    return _classic(f, _prepare(f, x, t), t)


def _classic(f: Formula, x: np.ndarray, t: int) -> float:
    if isinstance(f, Predicate):
        return f.comparison.sign * float(x[t] - f.threshold)
    if isinstance(f, Not):
        return -_classic(f.child, x, t)
    if isinstance(f, And):
        return min(_classic(c, x, t) for c in f.children)
    if isinstance(f, Or):
        return max(_classic(c, x, t) for c in f.children)
    if isinstance(f, Always):
        return min(_classic(f.child, x, k) for k in _window(f, t))
    return max(_classic(f.child, x, k) for k in _window(f, t))


def robustness_weighted(f: Formula, x: SignalLike, t: int = 0) -> float:
    """Weighted (arithmetic-geometric) robustness of f on x at index t"""
    return _weighted(f, _prepare(f, x, t), t)


def _weighted(f: Formula, x: np.ndarray, t: int) -> float:
    if isinstance(f, Predicate):
        return 0.5 * f.weight * f.comparison.sign * float(x[t] - f.threshold)
    if isinstance(f, Not):
        return -_weighted(f.child, x, t)
    if isinstance(f, (And, Or)):
        values = [_weighted(c, x, t) for c in f.children]
        gate = conjunction if isinstance(f, And) else disjunction
        return gate(f.weights, values)[0]
    values = [_weighted(f.child, x, k) for k in _window(f, t)]
    gate = conjunction if isinstance(f, Always) else disjunction
    return gate(f.weights, values)[0]
