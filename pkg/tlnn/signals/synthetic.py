#!/usr/bin/env python3
"""
Synthetic rolling-bearing vibration signals.

A local defect is struck once per fault period, exciting a structural
resonance: each strike adds a decaying sinusoid. Faults differ in strike
rate and resonance frequency; the normal condition is broadband noise only.
"""

import logging
from typing import List, Optional

import numpy as np

from ..common.configurations import CONDITIONS, FaultConfiguration, SynthConfiguration
from ..common.errors import ConfigurationError
from ..logic.signal import Signal
from .dataset import Dataset, LabeledSample

logger = logging.getLogger(__name__)


def _impulse_train(rng: np.random.Generator, fault: FaultConfiguration, length: int,
                   sampling_rate: float, config: SynthConfiguration) -> np.ndarray:
    time = np.arange(length) / sampling_rate
    period = 1.0 / fault.impulse_rate
    signal = np.zeros(length)
    strike = rng.uniform(0.0, period)
    while strike < time[-1]:
        amplitude = fault.amplitude * abs(1.0 + config.amplitude_jitter * rng.standard_normal())
        phase = rng.uniform(0.0, 2.0 * np.pi)
        elapsed = time - strike
        ringing = elapsed >= 0.0
        signal[ringing] += (amplitude * np.exp(-fault.decay * elapsed[ringing])
                            * np.sin(2.0 * np.pi * fault.ring_frequency * elapsed[ringing] + phase))
        strike += period * max(0.1, 1.0 + config.rate_jitter * rng.standard_normal())
    return signal


def synth_bearing(rng: np.random.Generator, condition: str, count: int, length: int = 1024,
                  sampling_rate: float = 12000.0, config: Optional[SynthConfiguration] = None) -> List[Signal]:
    """``count`` signals of one bearing condition"""
    config = config or SynthConfiguration()
    fault = config.fault(condition)
    if count < 0:
        raise ConfigurationError(f"count must be >= 0, got {count}")
    signals = []
    for _ in range(count):
        samples = np.zeros(length)
        if fault is not None:
            samples += _impulse_train(rng, fault, length, sampling_rate, config)
        if config.noise_amplitude > 0:
            samples += config.noise_amplitude * rng.standard_normal(length)
        signals.append(Signal(samples, period=1.0 / sampling_rate))
    return signals


def synth_dataset(config: Optional[SynthConfiguration] = None) -> Dataset:
    """All four conditions, ``count_per_condition`` each; faults labelled +1, normal -1"""
    config = config or SynthConfiguration()
    rng = np.random.default_rng(config.seed)
    samples = []
    for condition in CONDITIONS:
        signals = synth_bearing(rng, condition, config.count_per_condition, config.length,
                                config.sampling_rate, config)
        label = -1 if condition == "normal" else 1
        samples.extend(LabeledSample(s, label, condition) for s in signals)
        logger.debug(f"Generated {len(signals)} {condition} signals")
    return Dataset(samples)
