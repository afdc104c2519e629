#!/usr/bin/env python3
"""
Vibration feature pipeline.

raw signal -> level-2 Haar wavelet packet (4 bands, frequency order)
           -> sliding second central moment per band, bands concatenated
           -> block-average downsampling to the target length
           -> dataset-wide min-max scaling to [0, 1]

The feature index is treated as the time axis of the resulting signal.
"""

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pywt
from numpy.lib.stride_tricks import sliding_window_view

from ..common.configurations import CONDITIONS, PreprocessConfiguration
from ..common.errors import DatasetError, SignalLengthError, ValidationError
from ..logic.signal import Signal, SignalLike, as_samples
from .dataset import Dataset, LabeledSample

logger = logging.getLogger(__name__)

WAVELET = "haar"
LEVEL = 2


def wpt_level2(x: SignalLike) -> List[Signal]:
    """Four level-2 Haar packet bands, lowest frequency first, each of length n/4"""
    samples = as_samples(x)
    if samples.size % 4:
        raise SignalLengthError(f"Wavelet packet decomposition needs a length divisible by 4, got {samples.size}")
    packet = pywt.WaveletPacket(data=np.array(samples), wavelet=WAVELET, mode="periodization", maxlevel=LEVEL)
    return [Signal(node.data) for node in packet.get_level(LEVEL, order="freq")]


def second_moment_features(bands: Sequence[SignalLike], window: int) -> Signal:
    """Sliding-window population variance of every band, concatenated"""
    moments = []
    for band in bands:
        samples = as_samples(band)
        if not 1 <= window <= samples.size:
            raise ValidationError(f"Moment window must be in [1, {samples.size}], got {window}")
        moments.append(sliding_window_view(samples, window).var(axis=1))
    if not moments:
        raise ValidationError("No bands to compute moments of")
    return Signal(np.concatenate(moments))


def downsample(x: SignalLike, target: int) -> Signal:
    """Block means over target near-equal index blocks"""
    samples = as_samples(x)
    if not 1 <= target <= samples.size:
        raise SignalLengthError(f"Downsampling target must be in [1, {samples.size}], got {target}")
    edges = (np.arange(target + 1) * samples.size) // target
    return Signal(np.add.reduceat(samples, edges[:-1]) / np.diff(edges))


def feature_signal(x: SignalLike, window: int = 32, target: int = 128) -> Signal:
    return downsample(second_moment_features(wpt_level2(x), window), target)


def minmax_scale(dataset: Dataset, bounds: Optional[Tuple[float, float]] = None) -> Dataset:
    """Rescale every sample with one dataset-wide (min, max) to [0, 1]"""
    low, high = bounds if bounds is not None else dataset.data_range()
    span = high - low
    scaled = []
    for sample in dataset:
        values = (sample.signal.samples - low) / span if span > 0 else np.zeros(dataset.length)
        scaled.append(LabeledSample(Signal(values), sample.label, sample.condition))
    return Dataset(scaled)


def preprocess_dataset(dataset: Dataset, config: Optional[PreprocessConfiguration] = None) -> Dataset:
    config = config or PreprocessConfiguration()
    features = Dataset([
        LabeledSample(feature_signal(s.signal, config.window, config.target_length), s.label, s.condition)
        for s in dataset
    ])
    logger.info(f"Extracted features of length {features.length} from {len(dataset)} signals of length {dataset.length}")
    return minmax_scale(features) if config.rescale else features


def one_vs_rest_split(dataset: Dataset, target: str, rng: np.random.Generator,
                      train_positive: int = 110, train_negative_per_condition: int = 30) -> Tuple[Dataset, Dataset]:
    """Train and test splits labelled +1 for ``target`` and -1 for every other condition

    Each split gets ``train_positive`` target samples and
    ``train_negative_per_condition`` samples of every other condition present.
    """
    if target not in CONDITIONS:
        raise DatasetError(f"Unknown condition '{target}', expected one of {CONDITIONS}")
    by_condition = {}
    for index, condition in enumerate(dataset.conditions):
        if condition is None:
            raise DatasetError(f"Sample {index + 1} has no condition tag")
        by_condition.setdefault(condition, []).append(index)
    if target not in by_condition:
        raise DatasetError(f"No samples of condition '{target}'")

    train, test = [], []
    for condition in CONDITIONS:
        if condition not in by_condition:
            continue
        count = train_positive if condition == target else train_negative_per_condition
        indices = rng.permutation(by_condition[condition])
        if indices.size < 2 * count:
            raise DatasetError(f"Condition '{condition}' has {indices.size} samples, splitting needs {2 * count}")
        label = 1 if condition == target else -1
        train.extend(LabeledSample(dataset[int(i)].signal, label, condition) for i in indices[:count])
        test.extend(LabeledSample(dataset[int(i)].signal, label, condition) for i in indices[count:2 * count])
    return Dataset(train), Dataset(test)
