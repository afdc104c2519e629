#!/usr/bin/env python3
"""
Arithmetic-geometric activation functions of weighted robustness.

``conjunction`` serves the weighted "and" as well as "always" over a window,
``disjunction`` serves "or" as well as "eventually": the window form is the
same formula with one weight per window position. L is the number of
inputs (window length = end - start + 1).

Geometric means are taken in log space with log1p/expm1, so the sign of the
result is exact on each branch.
"""

from typing import Tuple

import numpy as np


def positive_part(q):
    """[q]+ = q if q > 0 else 0"""
    return np.maximum(q, 0.0)


def negative_part(q):
    """[q]- = -[-q]+"""
    return np.minimum(q, 0.0)


def _inputs(weights, values) -> Tuple[np.ndarray, np.ndarray]:
    w = np.asarray(weights, dtype=float)
    v = np.asarray(values, dtype=float)
    if w.shape != v.shape or v.ndim != 1 or v.size == 0:
        raise ValueError(f"weights {w.shape} and values {v.shape} must be equal-length 1-d arrays")
    return w, v


def conjunction(weights, values) -> Tuple[float, bool]:
    """Weighted "and" / "always"; returns (value, positive-branch flag)

    All inputs > 0: L-th root of prod(1 + w_i v_i) minus 1.
    Otherwise: mean of [w_i v_i]-.
    """
    w, v = _inputs(weights, values)
    if np.all(v > 0):
        return float(np.expm1(np.mean(np.log1p(w * v)))), True
    return float(np.mean(negative_part(w * v))), False


def disjunction(weights, values) -> Tuple[float, bool]:
    """Weighted "or" / "eventually"; returns (value, positive-branch flag)

    Some input > 0: mean of [w_i v_i]+.
    Otherwise: 1 minus the L-th root of prod(1 - w_i v_i).
    """
    w, v = _inputs(weights, values)
    if np.any(v > 0):
        return float(np.mean(positive_part(w * v))), True
    return float(-np.expm1(np.mean(np.log1p(-w * v)))), False


def conjunction_grad(weights, values, positive: bool) -> Tuple[np.ndarray, np.ndarray]:
    """Partials (d/dw, d/dv) of ``conjunction`` on the recorded branch"""
    w, v = _inputs(weights, values)
    size = v.size
    if positive:
        terms = 1.0 + w * v
        scale = np.exp(np.mean(np.log1p(w * v))) / size
        return scale * v / terms, scale * w / terms
    # negative-branch sub-gradient at [0]-
    active = (w * v) <= 0
    return np.where(active, v / size, 0.0), np.where(active, w / size, 0.0)


def disjunction_grad(weights, values, positive: bool) -> Tuple[np.ndarray, np.ndarray]:
    """Partials (d/dw, d/dv) of ``disjunction`` on the recorded branch"""
    w, v = _inputs(weights, values)
    size = v.size
    if positive:
        active = (w * v) > 0
        return np.where(active, v / size, 0.0), np.where(active, w / size, 0.0)
    terms = 1.0 - w * v
    scale = np.exp(np.mean(np.log1p(-w * v))) / size
    return scale * v / terms, scale * w / terms
