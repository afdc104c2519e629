#!/usr/bin/env python3
"""
Labelled signal datasets and their CSV form.

File layout: header ``label[,condition],x0,x1,...,x{n-1}``, one sample per
row, labels +1 / -1, optional condition tag.
"""

import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from ..common.configurations import CONDITIONS
from ..common.errors import DatasetError, DatasetLengthError, DatasetParseError, EmptyDatasetError
from ..logic.signal import Signal, SignalLike

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LabeledSample:
    signal: Signal
    label: int
    condition: Optional[str] = None

    def __post_init__(self):
        if not isinstance(self.signal, Signal):
            object.__setattr__(self, "signal", Signal(self.signal))
        if self.label not in (1, -1):
            raise DatasetError(f"Label must be +1 or -1, got {self.label}")
        object.__setattr__(self, "label", int(self.label))
        if self.condition is not None and self.condition not in CONDITIONS:
            raise DatasetError(f"Unknown condition '{self.condition}', expected one of {CONDITIONS}")


class Dataset:
    """Non-empty list of labelled samples of one common length"""

    def __init__(self, samples: Sequence[LabeledSample]):
        samples = list(samples)
        if not samples:
            raise EmptyDatasetError("Dataset contains no samples")
        length = len(samples[0].signal)
        for i, sample in enumerate(samples):
            if len(sample.signal) != length:
                raise DatasetLengthError(
                    f"signal has {len(sample.signal)} samples, expected {length}", row=i + 1
                )
        self._samples = samples
        self._length = length

    @classmethod
    def from_arrays(cls, signals: Sequence[SignalLike], labels: Sequence[int],
                    conditions: Optional[Sequence[Optional[str]]] = None) -> "Dataset":
        if conditions is None:
            conditions = [None] * len(labels)
        if not len(signals) == len(labels) == len(conditions):
            raise DatasetError("signals, labels and conditions must have the same count")
        return cls([LabeledSample(Signal(s), int(y), c) for s, y, c in zip(signals, labels, conditions)])

    def __len__(self) -> int:
        return len(self._samples)

    def __getitem__(self, index: int) -> LabeledSample:
        return self._samples[index]

    def __iter__(self) -> Iterator[LabeledSample]:
        return iter(self._samples)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return self._samples == other._samples

    @property
    def length(self) -> int:
        """Common signal length n"""
        return self._length

    @property
    def labels(self) -> np.ndarray:
        return np.array([s.label for s in self._samples], dtype=int)

    @property
    def conditions(self) -> Tuple[Optional[str], ...]:
        return tuple(s.condition for s in self._samples)

    def matrix(self) -> np.ndarray:
        return np.vstack([s.signal.samples for s in self._samples])

    def data_range(self) -> Tuple[float, float]:
        values = self.matrix()
        return float(values.min()), float(values.max())

    def subset(self, indices: Sequence[int]) -> "Dataset":
        return Dataset([self._samples[int(i)] for i in indices])


def _header(length: int, with_condition: bool) -> List[str]:
    return ["label"] + (["condition"] if with_condition else []) + [f"x{i}" for i in range(length)]


def save_csv(dataset: Dataset, path: Union[str, Path]) -> None:
    with_condition = any(c is not None for c in dataset.conditions)
    frame = pd.DataFrame(dataset.matrix(), columns=[f"x{i}" for i in range(dataset.length)])
    if with_condition:
        frame.insert(0, "condition", [c or "" for c in dataset.conditions])
    frame.insert(0, "label", dataset.labels)
    frame.to_csv(path, index=False)
    logger.info(f"Wrote {len(dataset)} samples of length {dataset.length} to {path}")


def load_csv(path: Union[str, Path]) -> Dataset:
    """Read a dataset file

    Raises:
        DatasetParseError: malformed header, non-numeric value or label not +/-1 (with row number)
        DatasetLengthError: ragged rows
        EmptyDatasetError: header without samples
    """
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False)
    except pd.errors.EmptyDataError as e:
        raise DatasetParseError(f"{path}: file is empty") from e
    except pd.errors.ParserError as e:
        line = re.search(r"line (\d+)", str(e))
        row = int(line.group(1)) - 1 if line else None
        raise DatasetLengthError(f"{path}: row has more values than the header", row=row) from e

    columns = list(frame.columns)
    with_condition = len(columns) > 1 and columns[1] == "condition"
    length = len(columns) - (2 if with_condition else 1)
    if length < 1 or columns != _header(length, with_condition):
        raise DatasetParseError(f"{path}: header must be label[,condition],x0,...,x{{n-1}}")
    if frame.empty:
        raise EmptyDatasetError(f"{path}: no samples")

    values = frame[[f"x{i}" for i in range(length)]]
    missing = values.isna() | values.eq("")
    samples = []
    for index in range(len(frame)):
        row = index + 1
        if missing.iloc[index].any():
            raise DatasetLengthError(f"{path}: expected {length} values", row=row)
        text = frame["label"].iloc[index]
        try:
            label = float(text)
        except ValueError:
            label = None
        if label not in (1.0, -1.0):
            raise DatasetParseError(f"{path}: label must be +1 or -1, got {text!r}", row=row)
        condition = None
        if with_condition and frame["condition"].iloc[index]:
            condition = frame["condition"].iloc[index]
            if condition not in CONDITIONS:
                raise DatasetParseError(f"{path}: unknown condition {condition!r}", row=row)
        try:
            # correctly rounded parse: written floats read back bit-exact
            signal = Signal(np.asarray(values.iloc[index].to_numpy(), dtype=float))
        except ValueError as e:
            raise DatasetParseError(f"{path}: non-numeric or non-finite value ({e})", row=row) from e
        samples.append(LabeledSample(signal, int(label), condition))

    dataset = Dataset(samples)
    logger.info(f"Loaded {len(dataset)} samples of length {length} from {path}")
    return dataset
