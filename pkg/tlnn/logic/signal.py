#!/usr/bin/env python3
"""
Discrete-time, real-valued signals.

All logic works on integer sample indices; the sample period is metadata.
"""

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from ..common.errors import SignalLengthError, ValidationError


@dataclass(frozen=True, eq=False)
class Signal:
    """Samples x(0..n-1) with sample period in seconds"""
    samples: np.ndarray
    period: float = 1.0

    def __post_init__(self):
        samples = np.array(self.samples, dtype=float).reshape(-1)
        if samples.size < 1:
            raise SignalLengthError("Signal must contain at least one sample")
        if not np.all(np.isfinite(samples)):
            raise ValidationError("Signal samples must be finite")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)

    def __len__(self) -> int:
        return int(self.samples.size)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Signal):
            return NotImplemented
        return self.period == other.period and np.array_equal(self.samples, other.samples)


SignalLike = Union[Signal, np.ndarray, Sequence[float]]


def as_samples(x: SignalLike) -> np.ndarray:
    """Sample array of a Signal or of anything array-like"""
    if isinstance(x, Signal):
        return x.samples
    return Signal(x).samples
