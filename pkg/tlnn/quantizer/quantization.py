#!/usr/bin/env python3
"""
Hard and soft quantization of encoder outputs onto the time grid.

The range [l, u] is divided into 2^b - 1 intervals P_i of width
delta = (u - l) / (2^b - 1). Hard quantization rounds to the nearest grid
point; soft quantization replaces each step with a tanh ramp centred on the
midpoint of P_i, so it is differentiable and approaches the hard staircase
as the sharpness k grows.
"""

import math
from dataclasses import dataclass, replace

from ..common.errors import ValidationError


@dataclass(frozen=True)
class QuantSpec:
    """Quantizer bounds, bit width and sharpness"""
    lower: float
    upper: float
    bits: int
    sharpness: float = 10.0

    def __post_init__(self):
        if not self.lower < self.upper:
            raise ValidationError(f"Quantizer needs lower < upper, got [{self.lower}, {self.upper}]")
        if self.bits < 1:
            raise ValidationError(f"Quantizer bit width must be >= 1, got {self.bits}")
        if self.sharpness <= 0:
            raise ValidationError(f"Quantizer sharpness must be > 0, got {self.sharpness}")

    @property
    def levels(self) -> int:
        """Number of intervals, 2^b - 1"""
        return 2 ** self.bits - 1

    @property
    def step(self) -> float:
        return (self.upper - self.lower) / self.levels

    def with_sharpness(self, sharpness: float) -> "QuantSpec":
        return replace(self, sharpness=float(sharpness))

    @classmethod
    def for_length(cls, length: int, bits: int = None, sharpness: float = 10.0) -> "QuantSpec":
        """Grid over the sample indices 0..n-1 of a length-n signal"""
        if length < 2:
            raise ValidationError(f"Interval quantization needs a signal of length >= 2, got {length}")
        if bits is None:
            bits = max(1, math.ceil(math.log2(length)))
        return cls(0.0, float(length - 1), int(bits), float(sharpness))


def _interval_index(h: float, spec: QuantSpec) -> int:
    return min(int(math.floor((h - spec.lower) / spec.step)), spec.levels - 1)


def quantize_hard(h: float, spec: QuantSpec) -> float:
    """Clamp to [l, u] and round to the nearest grid point"""
    h = min(max(float(h), spec.lower), spec.upper)
    level = math.floor((h - spec.lower) / spec.step + 0.5)
    return min(spec.lower + level * spec.step, spec.upper)


def quantize_soft(h: float, spec: QuantSpec) -> float:
    """Differentiable staircase: l + delta * (i + (kappa(h) + 1) / 2) on P_i"""
    h = float(h)
    if h < spec.lower:
        return spec.lower
    if h > spec.upper:
        return spec.upper
    i = _interval_index(h, spec)
    delta, k = spec.step, spec.sharpness
    kappa = math.tanh(k * (h - spec.lower - (i + 0.5) * delta)) / math.tanh(0.5 * k * delta)
    return spec.lower + delta * (i + 0.5 * (kappa + 1.0))


def quantize_soft_grad(h: float, spec: QuantSpec) -> float:
    """d quantize_soft / dh; 0 outside [l, u] where the output saturates"""
    h = float(h)
    if h < spec.lower or h > spec.upper:
        return 0.0
    i = _interval_index(h, spec)
    delta, k = spec.step, spec.sharpness
    slope = math.tanh(k * (h - spec.lower - (i + 0.5) * delta))
    return 0.5 * delta * k * (1.0 - slope * slope) / math.tanh(0.5 * k * delta)
