#!/usr/bin/env python3
"""
Formula extraction from trained networks.

Each neuron's interval is frozen by hard-quantizing its mean encoder output
over a calibration set. The decoder then gives fixed window weights and the
neuron becomes an atomic wSTL formula over the predicate (x >= W1) or
(x < W1), carried with weight 2 so its robustness equals the Layer-2 output.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Tuple, Union

import numpy as np
import pandas as pd

from ..common.errors import NetworkStructureError
from ..logic.formula import Always, And, Eventually, Formula, Not, Or, Predicate, Temporal, children
from ..logic.semantics import robustness_classic, robustness_weighted
from ..network.forward import Mode, decode_window_weights, encode_interval, forward, layer2_predicates
from ..network.parameters import NeuronKind, NeuronSpec, TlnnParams
from ..quantizer.quantization import quantize_hard
from ..signals.dataset import Dataset

logger = logging.getLogger(__name__)

PREDICATE_WEIGHT = 2.0
REGION_COLUMNS = ("operator", "start", "end", "abs_start", "abs_end", "threshold", "comparison", "depth")


@dataclass(frozen=True)
class ExtractionResult:
    formula: Formula
    intervals: Tuple[Tuple[int, int], ...]   # frozen integer window per neuron
    params: TlnnParams

    def agreement(self, dataset: Dataset) -> np.ndarray:
        """Per sample: does the formula's weighted robustness sign match the hard-mode network output?"""
        matches = []
        for sample in dataset:
            network, _ = forward(self.params, sample.signal, Mode.HARD)
            formula = robustness_weighted(self.formula, sample.signal)
            matches.append((network >= 0.0) == (formula >= 0.0))
        return np.array(matches, dtype=bool)

    def fidelity(self, dataset: Dataset) -> float:
        return float(np.mean(self.agreement(dataset)))


def freeze_intervals(params: TlnnParams, calibration: Dataset) -> Tuple[Tuple[int, int], ...]:
    """Integer window per neuron from the hard-quantized mean encoder output"""
    if calibration.length != params.length:
        raise NetworkStructureError(
            f"Calibration signals have length {calibration.length}, network expects {params.length}"
        )
    rows = np.stack([layer2_predicates(sample.signal, params) for sample in calibration])
    intervals = []
    for i, neuron in enumerate(params.neurons):
        h = np.mean([encode_interval(neuron, row)[1] for row in rows[:, i]], axis=0)
        q1, q2 = quantize_hard(h[0], neuron.quant), quantize_hard(h[1], neuron.quant)
        start, end = min(q1, neuron.cap), min(q1 + q2, neuron.cap)
        intervals.append((int(np.floor(start + 0.5)), int(np.floor(end + 0.5))))
    return tuple(intervals)


def atomic_formula(neuron: NeuronSpec, threshold: float, interval: Tuple[int, int]) -> Formula:
    """wSTL formula computed by one neuron over a fixed window"""
    a, b = interval
    _, _, w2 = decode_window_weights(neuron, np.array([a, b], dtype=float))
    weights = tuple(float(w) for w in w2[a:b + 1])
    predicate = Predicate(neuron.comparison, float(threshold), PREDICATE_WEIGHT)
    if neuron.kind is NeuronKind.ALWAYS:
        return Always(predicate, a, b, weights)
    if neuron.kind is NeuronKind.EVENTUALLY:
        return Eventually(predicate, a, b, weights)
    if neuron.kind is NeuronKind.ALWAYS_EVENTUALLY:
        return Always(Eventually(predicate, a, b, weights), 0, neuron.nested_horizon)
    return Eventually(Always(predicate, a, b, weights), 0, neuron.nested_horizon)


def _weighted(node_type, members: List[Formula], weights: List[float]) -> Formula:
    """Gate over ``members``; a single member keeps its weight as a gate over two copies of itself"""
    if len(members) > 1:
        return node_type(tuple(members), tuple(weights))
    if weights[0] == 1.0:
        return members[0]
    # a gate over (f, f) with weights (w, w) computes w * rho(f) on both branches
    return node_type((members[0], members[0]), (weights[0], weights[0]))


def _group(node_type, atoms: List[Formula], weights: np.ndarray) -> Optional[Formula]:
    active = np.flatnonzero(weights > 0)
    if active.size == 0:
        return None
    return _weighted(node_type, [atoms[int(i)] for i in active], [float(weights[i]) for i in active])


def extract(params: TlnnParams, calibration: Dataset) -> ExtractionResult:
    """Extract the network's formula together with its frozen intervals

    The formula's weighted robustness equals the network output with its
    intervals frozen, on every signal. A gate left with one input is emitted as the bare input
    when its weight is 1 and as the gate over two copies of it otherwise.
    """
    intervals = freeze_intervals(params, calibration)
    atoms = [atomic_formula(neuron, params.thresholds[i], intervals[i]) for i, neuron in enumerate(params.neurons)]
    groups = [_group(And, atoms, params.layer4[:, 0]), _group(Or, atoms, params.layer4[:, 1])]
    present = [k for k, g in enumerate(groups) if g is not None]
    if not present:
        raise NetworkStructureError("Every layer-4 weight is zero, no formula to extract")
    formula = _weighted(And, [groups[k] for k in present], [float(params.layer5[k]) for k in present])
    logger.info(f"Extracted formula from {params.neuron_count} neurons using {len(calibration)} calibration samples")
    return ExtractionResult(formula, intervals, params)


def extract_formula(params: TlnnParams, calibration: Dataset) -> Formula:
    return extract(params, calibration).formula


def strip_weights(f: Formula) -> Formula:
    """Same formula with every weight set to 1"""
    if isinstance(f, Predicate):
        return Predicate(f.comparison, f.threshold, 1.0, f.variable)
    if isinstance(f, Not):
        return Not(strip_weights(f.child))
    if isinstance(f, (And, Or)):
        return type(f)(tuple(strip_weights(c) for c in f.children))
    return type(f)(strip_weights(f.child), f.start, f.end)


def classic_robustness(f: Formula, dataset: Dataset) -> np.ndarray:
    """Min/max robustness of the unweighted formula on every sample"""
    stripped = strip_weights(f)
    return np.array([robustness_classic(stripped, sample.signal) for sample in dataset])


def _first_predicate(f: Formula) -> Optional[Predicate]:
    if isinstance(f, Predicate):
        return f
    for child in children(f):
        found = _first_predicate(child)
        if found is not None:
            return found
    return None


def formula_regions(f: Formula) -> pd.DataFrame:
    """One row per temporal sub-formula, with its window relative to t = 0"""
    rows = []

    def visit(node: Formula, low: int, high: int, depth: int):
        if isinstance(node, Temporal):
            predicate = _first_predicate(node)
            rows.append((
                "G" if isinstance(node, Always) else "F", node.start, node.end,
                low + node.start, high + node.end,
                predicate.threshold, predicate.comparison.value, depth,
            ))
            low, high, depth = low + node.start, high + node.end, depth + 1
        for child in children(node):
            visit(child, low, high, depth)

    visit(f, 0, 0, 0)
    return pd.DataFrame(rows, columns=list(REGION_COLUMNS))


def save_regions(f: Formula, path: Union[str, Path]) -> int:
    regions = formula_regions(f)
    regions.to_csv(path, index=False)
    logger.info(f"Wrote {len(regions)} formula regions to {path}")
    return len(regions)
