#!/usr/bin/env python3
"""
Data-driven placement of new Layer-3 neurons.

A candidate is one atomic formula: neuron kind, comparison and integer
window. Its threshold goes halfway between the smallest window statistic of
the positive samples the network still accepts and the largest statistic
below it among the accepted negatives, so the atom keeps every accepted
positive. The candidate that leaves the fewest accepted negatives wins;
a wider gap, then a wider window, breaks ties.
"""

import logging
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from ..common.errors import ValidationError
from ..logic.formula import Comparison
from ..network.parameters import NeuronKind

logger = logging.getLogger(__name__)

WINDOW_WIDTHS = (1, 2, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64, 96, 128)


@dataclass(frozen=True)
class Placement:
    """Best atom for the accepted samples"""
    kind: NeuronKind
    comparison: Comparison
    start: int
    end: int
    threshold: float
    remaining: int          # accepted negatives the atom still accepts
    gap: float              # statistic gap around the threshold

    @property
    def width(self) -> int:
        return self.end - self.start + 1


def window_statistics(matrix: np.ndarray, kind: NeuronKind, width: int, nested_horizon: int = 0) -> np.ndarray:
    """Per sample and window start, the value whose excess over the threshold decides the atom

    ``matrix`` holds one oriented signal per row (x for >=, -x for <). The
    result has one column per admissible start.
    """
    kind = NeuronKind(kind)
    windows = sliding_window_view(matrix, width, axis=1)
    if not kind.nested:
        return windows.min(axis=2) if kind is NeuronKind.ALWAYS else windows.max(axis=2)
    inner = windows.max(axis=2) if kind is NeuronKind.ALWAYS_EVENTUALLY else windows.min(axis=2)
    shifted = sliding_window_view(inner, nested_horizon + 1, axis=1)
    return shifted.min(axis=2) if kind is NeuronKind.ALWAYS_EVENTUALLY else shifted.max(axis=2)


def _best_column(statistics: np.ndarray, positives: np.ndarray, negatives: np.ndarray):
    """(column, remaining, gap, oriented threshold) of the best start, or None"""
    lowest = statistics[positives].min(axis=0)
    negative = statistics[negatives]
    below = np.where(negative < lowest, negative, -np.inf).max(axis=0)
    usable = np.isfinite(below)
    if not usable.any():
        return None
    remaining = np.where(usable, (negative >= lowest).sum(axis=0), negatives.sum() + 1)
    gap = np.where(usable, lowest - below, -np.inf)
    fewest = remaining.min()
    column = int(np.argmax(np.where(remaining == fewest, gap, -np.inf)))
    return column, int(fewest), float(gap[column]), float(0.5 * (lowest[column] + below[column]))


def place_neuron(signals: np.ndarray, labels: Sequence[int], accepted: Optional[Sequence[bool]] = None,
                 kinds: Iterable[NeuronKind] = tuple(NeuronKind),
                 comparisons: Iterable[Comparison] = (Comparison.GE, Comparison.LT),
                 nested_horizon: int = 0, widths: Sequence[int] = WINDOW_WIDTHS) -> Optional[Placement]:
    """Atom that rejects the most accepted negatives while keeping every accepted positive

    Returns None when no positive or no negative sample is accepted, or
    when no candidate rejects any accepted negative.
    """
    signals = np.asarray(signals, dtype=float)
    labels = np.asarray(labels)
    if signals.ndim != 2 or signals.shape[0] != labels.size:
        raise ValidationError(f"Expected one label per signal row, got {signals.shape} and {labels.size} labels")
    accepted = np.ones(labels.size, dtype=bool) if accepted is None else np.asarray(accepted, dtype=bool)
    positives = accepted & (labels == 1)
    negatives = accepted & (labels == -1)
    if not positives.any() or not negatives.any():
        return None

    length = signals.shape[1]
    best, best_key = None, None
    for comparison in comparisons:
        comparison = Comparison(comparison)
        oriented = comparison.sign * signals
        for kind in kinds:
            kind = NeuronKind(kind)
            tau0 = nested_horizon if kind.nested else 0
            for width in sorted(widths, reverse=True):
                if width > length - tau0:
                    continue
                found = _best_column(window_statistics(oriented, kind, width, tau0), positives, negatives)
                if found is None:
                    continue
                start, remaining, gap, level = found
                key = (-remaining, gap)
                if best_key is not None and key <= best_key:
                    continue
                best_key = key
                best = Placement(kind, comparison, start, start + width - 1,
                                 comparison.sign * level, remaining, gap)
    if best is not None:
        logger.debug(f"Placed {best.kind.value} ({best.comparison.value} {best.threshold:.4f}) on "
                     f"[{best.start},{best.end}], {best.remaining} accepted negative(s) left")
    return best
