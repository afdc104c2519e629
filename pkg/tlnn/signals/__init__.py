"""
Signals

Labelled datasets and their CSV form, the wavelet-packet feature pipeline,
one-vs-rest splits and a synthetic bearing-fault generator.
"""

from .dataset import Dataset, LabeledSample, load_csv, save_csv
from .preprocessing import (
    downsample,
    feature_signal,
    minmax_scale,
    one_vs_rest_split,
    preprocess_dataset,
    second_moment_features,
    wpt_level2
)
from .synthetic import synth_bearing, synth_dataset

__all__ = [
    'Dataset',
    'LabeledSample',
    'load_csv',
    'save_csv',
    'downsample',
    'feature_signal',
    'minmax_scale',
    'one_vs_rest_split',
    'preprocess_dataset',
    'second_moment_features',
    'wpt_level2',
    'synth_bearing',
    'synth_dataset'
]
