#!/usr/bin/env python3
"""
Parameter store of the temporal logic neural network.

Layer 2 holds one threshold W1 per Layer-3 neuron, Layer 3 one interval
autoencoder per neuron, Layer 4 the non-negative M x 2 matrix W3 (column 0
feeds the "and" neuron, column 1 the "or" neuron) and Layer 5 the two
non-negative weights W4.
"""

import copy
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..common.configurations import NetworkConfiguration, QuantizerConfiguration
from ..common.errors import NetworkStructureError
from ..logic.formula import Comparison
from ..quantizer.quantization import QuantSpec

logger = logging.getLogger(__name__)


def _unit_softplus_bias() -> float:
    """Float r next to log(e - 1) with softplus(r) == 1.0 exactly"""
    guess = math.log(math.e - 1.0)
    candidates = [guess]
    below = above = guess
    for _ in range(8):
        below, above = np.nextafter(below, -np.inf), np.nextafter(above, np.inf)
        candidates += [float(below), float(above)]
    for r in candidates:
        if np.logaddexp(0.0, r) == 1.0:
            return r
    return guess


# softplus(SOFTPLUS_ONE) == 1, so a zero decoder starts with unit window weights
SOFTPLUS_ONE = _unit_softplus_bias()

AUTOENCODER_ARRAYS = ("enc_w1", "enc_b1", "enc_w2", "enc_b2", "dec_w1", "dec_b1", "dec_w2", "dec_b2")


class NeuronKind(str, Enum):
    """Atomic formula realised by a Layer-3 neuron"""
    ALWAYS = "always"
    EVENTUALLY = "eventually"
    ALWAYS_EVENTUALLY = "always_eventually"
    EVENTUALLY_ALWAYS = "eventually_always"

    @property
    def nested(self) -> bool:
        return self in (NeuronKind.ALWAYS_EVENTUALLY, NeuronKind.EVENTUALLY_ALWAYS)


@dataclass
class AutoEncoder:
    """Interval encoder R^n -> R^2 and window-weight decoder R^2 -> R^n

    Both maps are two-layer feed-forward networks with tanh hidden units;
    the decoder output goes through softplus so window weights stay >= 0.
    Also used as the container of the matching gradients.
    """
    enc_w1: np.ndarray   # H x n
    enc_b1: np.ndarray   # H
    enc_w2: np.ndarray   # 2 x H
    enc_b2: np.ndarray   # 2
    dec_w1: np.ndarray   # H x 2
    dec_b1: np.ndarray   # H
    dec_w2: np.ndarray   # n x H
    dec_b2: np.ndarray   # n

    def __post_init__(self):
        for name in AUTOENCODER_ARRAYS:
            setattr(self, name, np.array(getattr(self, name), dtype=float))
        hidden, length = self.enc_w1.shape
        expected = {
            "enc_b1": (hidden,), "enc_w2": (2, hidden), "enc_b2": (2,),
            "dec_w1": (hidden, 2), "dec_b1": (hidden,), "dec_w2": (length, hidden), "dec_b2": (length,),
        }
        for name, shape in expected.items():
            if getattr(self, name).shape != shape:
                raise NetworkStructureError(
                    f"Autoencoder array {name} has shape {getattr(self, name).shape}, expected {shape}"
                )

    @property
    def length(self) -> int:
        return int(self.enc_w1.shape[1])

    @property
    def hidden_width(self) -> int:
        return int(self.enc_w1.shape[0])

    def arrays(self) -> Dict[str, np.ndarray]:
        return {name: getattr(self, name) for name in AUTOENCODER_ARRAYS}

    def zeros_like(self) -> "AutoEncoder":
        return AutoEncoder(**{name: np.zeros_like(a) for name, a in self.arrays().items()})

    @classmethod
    def initialize(cls, length: int, config: NetworkConfiguration, rng: np.random.Generator,
                   nested_horizon: int = 0) -> "AutoEncoder":
        """Random weights in [-scale, scale]; encoder bias set to a random initial interval"""
        hidden, scale = config.hidden_width, config.init_scale
        top = length - 1 - nested_horizon
        start = rng.uniform(0.0, top / 2.0)
        width = rng.uniform(length / 16.0, length / 4.0)
        return cls(
            enc_w1=rng.uniform(-scale, scale, (hidden, length)),
            enc_b1=np.zeros(hidden),
            enc_w2=rng.uniform(-scale, scale, (2, hidden)),
            enc_b2=np.array([start, width]),
            dec_w1=rng.uniform(-scale, scale, (hidden, 2)),
            dec_b1=np.zeros(hidden),
            dec_w2=rng.uniform(-scale, scale, (length, hidden)),
            dec_b2=np.full(length, SOFTPLUS_ONE),
        )


@dataclass
class NeuronSpec:
    """One Layer-3 neuron: kind, predicate direction, autoencoder, quantizer"""
    kind: NeuronKind
    comparison: Comparison
    autoencoder: AutoEncoder
    quant: QuantSpec
    nested_horizon: int = 0

    def __post_init__(self):
        self.kind = NeuronKind(self.kind)
        self.comparison = Comparison(self.comparison)
        if self.nested_horizon < 0:
            raise NetworkStructureError(f"Nested horizon must be >= 0, got {self.nested_horizon}")
        if self.kind.nested and self.nested_horizon > self.autoencoder.length - 1:
            raise NetworkStructureError(
                f"Nested horizon {self.nested_horizon} leaves no room in a length-{self.autoencoder.length} signal"
            )

    @property
    def cap(self) -> float:
        """Largest admissible interval end, n - 1 - tau0 for nested kinds"""
        top = self.autoencoder.length - 1
        return float(top - self.nested_horizon) if self.kind.nested else float(top)

    @property
    def shifts(self) -> int:
        """Number of shifted windows, tau0 + 1 for nested kinds, 1 otherwise"""
        return self.nested_horizon + 1 if self.kind.nested else 1


@dataclass
class TlnnParams:
    """Full parameter store; M = len(neurons)"""
    length: int
    neurons: List[NeuronSpec]
    thresholds: np.ndarray                # W1, shape (M,)
    layer4: np.ndarray                    # W3, shape (M, 2)
    layer5: np.ndarray = field(default_factory=lambda: np.ones(2))   # W4

    def __post_init__(self):
        self.neurons = list(self.neurons)
        self.thresholds = np.array(self.thresholds, dtype=float).reshape(-1)
        self.layer4 = np.array(self.layer4, dtype=float).reshape(-1, 2)
        self.layer5 = np.array(self.layer5, dtype=float).reshape(-1)
        self.validate()

    def validate(self) -> None:
        count = len(self.neurons)
        if count < 1:
            raise NetworkStructureError("Network needs at least one Layer-3 neuron")
        if self.thresholds.shape != (count,) or self.layer4.shape != (count, 2):
            raise NetworkStructureError(
                f"Thresholds {self.thresholds.shape} and layer-4 weights {self.layer4.shape} do not match {count} neurons"
            )
        if self.layer5.shape != (2,):
            raise NetworkStructureError(f"Layer-5 weights must have shape (2,), got {self.layer5.shape}")
        if np.any(self.layer4 < 0) or np.any(self.layer5 < 0):
            raise NetworkStructureError("Layer-4 and layer-5 weights must be non-negative")
        for i, neuron in enumerate(self.neurons):
            if neuron.autoencoder.length != self.length:
                raise NetworkStructureError(
                    f"Neuron {i} autoencoder expects length {neuron.autoencoder.length}, network length is {self.length}"
                )

    @property
    def neuron_count(self) -> int:
        return len(self.neurons)

    def named_arrays(self) -> Dict[str, np.ndarray]:
        """Every trainable array by name, in a fixed order (references, not copies)"""
        arrays = {"thresholds": self.thresholds, "layer4": self.layer4, "layer5": self.layer5}
        for i, neuron in enumerate(self.neurons):
            for name, array in neuron.autoencoder.arrays().items():
                arrays[f"neurons.{i}.{name}"] = array
        return arrays

    def copy(self) -> "TlnnParams":
        return copy.deepcopy(self)

    def with_sharpness(self, sharpness: float) -> "TlnnParams":
        params = self.copy()
        for neuron in params.neurons:
            neuron.quant = neuron.quant.with_sharpness(sharpness)
        return params

    def without_neurons(self, indices: Sequence[int]) -> "TlnnParams":
        """Copy with the given Layer-3 neurons removed"""
        drop = set(int(i) for i in indices)
        keep = [i for i in range(self.neuron_count) if i not in drop]
        return TlnnParams(
            length=self.length,
            neurons=[copy.deepcopy(self.neurons[i]) for i in keep],
            thresholds=self.thresholds[keep],
            layer4=self.layer4[keep],
            layer5=self.layer5.copy(),
        )

    def with_neuron(self, neuron: NeuronSpec, threshold: float,
                    layer4_row: Tuple[float, float] = (1.0, 1.0)) -> "TlnnParams":
        """Copy with one neuron appended"""
        return TlnnParams(
            length=self.length,
            neurons=[copy.deepcopy(n) for n in self.neurons] + [neuron],
            thresholds=np.append(self.thresholds, float(threshold)),
            layer4=np.vstack([self.layer4, np.asarray(layer4_row, dtype=float)]),
            layer5=self.layer5.copy(),
        )


@dataclass
class Gradients:
    """dL/dtheta for every array of a TlnnParams, plus dL/drho5 and the loss"""
    thresholds: np.ndarray
    layer4: np.ndarray
    layer5: np.ndarray
    neurons: List[AutoEncoder]
    output: float = 0.0
    loss: float = 0.0

    @classmethod
    def zeros(cls, params: TlnnParams) -> "Gradients":
        return cls(
            thresholds=np.zeros_like(params.thresholds),
            layer4=np.zeros_like(params.layer4),
            layer5=np.zeros_like(params.layer5),
            neurons=[n.autoencoder.zeros_like() for n in params.neurons],
        )

    def named_arrays(self) -> Dict[str, np.ndarray]:
        arrays = {"thresholds": self.thresholds, "layer4": self.layer4, "layer5": self.layer5}
        for i, autoencoder in enumerate(self.neurons):
            for name, array in autoencoder.arrays().items():
                arrays[f"neurons.{i}.{name}"] = array
        return arrays


def new_neuron(length: int, rng: np.random.Generator, network: NetworkConfiguration,
               quantizer: QuantizerConfiguration, kind: Optional[str] = None,
               comparison: Optional[str] = None, sharpness: Optional[float] = None) -> NeuronSpec:
    """Freshly initialised neuron; kind and comparison drawn from rng when not given"""
    kinds = list(NeuronKind)
    if kind is None or kind == "random":
        kind = kinds[int(rng.integers(len(kinds)))]
    if comparison is None or comparison == "random":
        comparison = (Comparison.GE, Comparison.LT)[int(rng.integers(2))]
    kind = NeuronKind(kind)
    tau0 = network.nested_horizon if kind.nested else 0
    if sharpness is None:
        sharpness = quantizer.initial_sharpness
    return NeuronSpec(
        kind=kind,
        comparison=Comparison(comparison),
        autoencoder=AutoEncoder.initialize(length, network, rng, tau0),
        quant=QuantSpec.for_length(length, quantizer.bits, sharpness),
        nested_horizon=tau0,
    )


def initialize_params(length: int, data_range: Tuple[float, float], rng: np.random.Generator,
                      network: Optional[NetworkConfiguration] = None,
                      quantizer: Optional[QuantizerConfiguration] = None) -> TlnnParams:
    """Single-neuron network; W1 ~ uniform over the data range, W3 = W4 = 1"""
    network = network or NetworkConfiguration()
    quantizer = quantizer or QuantizerConfiguration()
    neuron = new_neuron(length, rng, network, quantizer, network.initial_kind, network.initial_comparison)
    low, high = data_range
    params = TlnnParams(
        length=length,
        neurons=[neuron],
        thresholds=np.array([rng.uniform(low, high)]),
        layer4=np.ones((1, 2)),
        layer5=np.ones(2),
    )
    logger.debug(f"Initialized network: n={length}, first neuron {neuron.kind.value} {neuron.comparison.value}")
    return params
