#!/usr/bin/env python3
"""
Shared configuration classes for the tlnn library.

This module contains the configuration dataclasses used across the
signal pipeline, the network, the learner and the command-line front end.
Default values are the documented defaults; every value can be overridden
from a JSON configuration file or from the command line.
"""

import json
import logging
from dataclasses import asdict, dataclass, field, fields, is_dataclass
from pathlib import Path
from typing import Any, Dict, Optional, Union

from .errors import ConfigurationError

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

NEURON_KINDS = ("always", "eventually", "always_eventually", "eventually_always")
CONDITIONS = ("inner", "outer", "rolling", "normal")
PLACEMENTS = ("search", "random")


@dataclass
class QuantizerConfiguration:
    """Quantizer configuration

    Bit width and sharpness schedule of the interval quantizer. The bit
    width defaults to ceil(log2 n) so the grid covers every sample index.
    """
    bits: Optional[int] = None          # None: ceil(log2 n)
    initial_sharpness: float = 10.0     # k at epoch 0
    anneal_factor: float = 2.0          # k multiplier
    anneal_period: int = 20             # epochs between multiplications

    def __post_init__(self):
        if self.bits is not None and self.bits < 1:
            raise ConfigurationError(f"bits must be >= 1, got {self.bits}")
        if self.initial_sharpness <= 0:
            raise ConfigurationError(f"initial_sharpness must be > 0, got {self.initial_sharpness}")
        if self.anneal_factor <= 0:
            raise ConfigurationError(f"anneal_factor must be > 0, got {self.anneal_factor}")
        if self.anneal_period < 1:
            raise ConfigurationError(f"anneal_period must be >= 1, got {self.anneal_period}")


@dataclass
class NetworkConfiguration:
    """Network configuration

    Shape and initialization of the layer-3 autoencoders.
    """
    hidden_width: int = 16              # H, encoder and decoder
    nested_horizon: int = 5             # tau0 of the nested neuron kinds
    init_scale: float = 0.1             # weights ~ uniform[-scale, scale]
    initial_kind: str = "random"        # kind of the first neuron, or "random"
    initial_comparison: str = "random"  # ">=", "<" or "random"

    def __post_init__(self):
        if self.hidden_width < 1:
            raise ConfigurationError(f"hidden_width must be >= 1, got {self.hidden_width}")
        if self.nested_horizon < 0:
            raise ConfigurationError(f"nested_horizon must be >= 0, got {self.nested_horizon}")
        if self.init_scale < 0:
            raise ConfigurationError(f"init_scale must be >= 0, got {self.init_scale}")
        if self.initial_kind != "random" and self.initial_kind not in NEURON_KINDS:
            raise ConfigurationError(f"initial_kind must be 'random' or one of {NEURON_KINDS}")
        if self.initial_comparison not in ("random", ">=", "<"):
            raise ConfigurationError(f"initial_comparison must be 'random', '>=' or '<', got {self.initial_comparison!r}")


@dataclass
class TrainConfiguration:
    """Training configuration

    Learning rate, structure-learning thresholds and schedule.
    """
    learning_rate: float = 0.05         # eta, in [0, 1]
    prune_threshold: float = 0.05       # w_th
    growth_threshold: float = 0.01      # c_th on C = mean (y_hat - y_d)^2, i.e. 4 x error rate
    max_neurons: int = 8                # M_max
    epochs: int = 200                   # E
    structure_every: int = 1            # epochs between structure checks
    seed: int = 0
    average_threshold_gradient: bool = True   # scale W1 steps by 1/n
    patience: Optional[int] = 20        # stop after this many error-free epochs
    placement: str = "search"           # "search": data-driven new neurons, "random": random ones
    keep_best: bool = True              # return the snapshot with the lowest training error
    log_every: int = 10                 # epochs between progress log lines
    quantizer: QuantizerConfiguration = field(default_factory=QuantizerConfiguration)
    network: NetworkConfiguration = field(default_factory=NetworkConfiguration)

    def __post_init__(self):
        if not 0.0 <= self.learning_rate <= 1.0:
            raise ConfigurationError(f"learning_rate must be in [0, 1], got {self.learning_rate}")
        if self.prune_threshold < 0:
            raise ConfigurationError(f"prune_threshold must be >= 0, got {self.prune_threshold}")
        if self.growth_threshold <= 0:
            raise ConfigurationError(f"growth_threshold must be > 0, got {self.growth_threshold}")
        if self.max_neurons < 1:
            raise ConfigurationError(f"max_neurons must be >= 1, got {self.max_neurons}")
        if self.epochs < 0:
            raise ConfigurationError(f"epochs must be >= 0, got {self.epochs}")
        if self.structure_every < 1:
            raise ConfigurationError(f"structure_every must be >= 1, got {self.structure_every}")
        if self.patience is not None and self.patience < 1:
            raise ConfigurationError(f"patience must be >= 1, got {self.patience}")
        if self.log_every < 1:
            raise ConfigurationError(f"log_every must be >= 1, got {self.log_every}")
        if self.placement not in PLACEMENTS:
            raise ConfigurationError(f"placement must be one of {PLACEMENTS}, got {self.placement!r}")

    def sharpness_at(self, epoch: int) -> float:
        """Quantizer sharpness k for a zero-based epoch"""
        q = self.quantizer
        return q.initial_sharpness * q.anneal_factor ** (epoch // q.anneal_period)


TrainConfig = TrainConfiguration


@dataclass
class FaultConfiguration:
    """Synthetic fault configuration

    Impulse train of decaying sinusoids excited by roller strikes.
    """
    impulse_rate: float                 # characteristic fault frequency (Hz)
    ring_frequency: float               # structural resonance (Hz)
    amplitude: float = 1.0
    decay: float = 900.0                # envelope decay rate (1/s)

    def __post_init__(self):
        if self.impulse_rate <= 0 or self.ring_frequency <= 0:
            raise ConfigurationError("impulse_rate and ring_frequency must be > 0")
        if self.amplitude < 0 or self.decay <= 0:
            raise ConfigurationError("amplitude must be >= 0 and decay > 0")


@dataclass
class SynthConfiguration:
    """Synthetic bearing data configuration"""
    count_per_condition: int = 220
    length: int = 1024
    sampling_rate: float = 12000.0      # Hz
    noise_amplitude: float = 0.2        # std of the broadband noise
    amplitude_jitter: float = 0.1       # relative impulse amplitude jitter
    rate_jitter: float = 0.02           # relative inter-impulse jitter
    seed: int = 7
    inner: FaultConfiguration = field(default_factory=lambda: FaultConfiguration(162.0, 3750.0))
    outer: FaultConfiguration = field(default_factory=lambda: FaultConfiguration(107.0, 5250.0))
    rolling: FaultConfiguration = field(default_factory=lambda: FaultConfiguration(141.0, 2250.0))

    def __post_init__(self):
        if self.count_per_condition < 0:
            raise ConfigurationError(f"count_per_condition must be >= 0, got {self.count_per_condition}")
        if self.length < 4:
            raise ConfigurationError(f"length must be >= 4, got {self.length}")
        if self.sampling_rate <= 0:
            raise ConfigurationError(f"sampling_rate must be > 0, got {self.sampling_rate}")
        if self.noise_amplitude < 0 or self.amplitude_jitter < 0 or self.rate_jitter < 0:
            raise ConfigurationError("noise_amplitude and jitters must be >= 0")

    def fault(self, condition: str) -> Optional[FaultConfiguration]:
        """Fault parameters of a condition; None for the normal condition"""
        if condition not in CONDITIONS:
            raise ConfigurationError(f"Unknown condition '{condition}', expected one of {CONDITIONS}")
        return None if condition == "normal" else getattr(self, condition)


@dataclass
class PreprocessConfiguration:
    """Feature pipeline and split configuration"""
    window: int = 32                    # second-moment window (band samples)
    target_length: int = 128
    rescale: bool = True                # min-max to [0, 1] over the dataset
    train_positive: int = 110
    train_negative_per_condition: int = 30
    seed: int = 11

    def __post_init__(self):
        if self.window < 1:
            raise ConfigurationError(f"window must be >= 1, got {self.window}")
        if self.target_length < 1:
            raise ConfigurationError(f"target_length must be >= 1, got {self.target_length}")
        if self.train_positive < 1 or self.train_negative_per_condition < 1:
            raise ConfigurationError("split sizes must be >= 1")


@dataclass
class TlnnConfiguration:
    """Top-level configuration document"""
    schema_version: int = SCHEMA_VERSION
    synth: SynthConfiguration = field(default_factory=SynthConfiguration)
    preprocess: PreprocessConfiguration = field(default_factory=PreprocessConfiguration)
    train: TrainConfiguration = field(default_factory=TrainConfiguration)

    def __post_init__(self):
        if self.schema_version != SCHEMA_VERSION:
            raise ConfigurationError(
                f"Unsupported configuration schema version {self.schema_version}, expected {SCHEMA_VERSION}"
            )

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "TlnnConfiguration":
        return _from_mapping(cls, data, "configuration")


def _from_mapping(cls, data: Any, where: str):
    """Build a (nested) configuration dataclass, rejecting unknown keys"""
    if not isinstance(data, dict):
        raise ConfigurationError(f"{where}: expected an object, got {type(data).__name__}")
    known = {f.name: f for f in fields(cls)}
    unknown = sorted(set(data) - set(known))
    if unknown:
        raise ConfigurationError(f"{where}: unknown keys {unknown}")

    kwargs = {}
    for name, value in data.items():
        field_type = known[name].type
        if is_dataclass(field_type):
            value = _from_mapping(field_type, value, f"{where}.{name}")
        kwargs[name] = value
    try:
        return cls(**kwargs)
    except TypeError as e:
        raise ConfigurationError(f"{where}: {e}") from e


def load_configuration(path: Optional[Union[str, Path]] = None) -> TlnnConfiguration:
    """Load a JSON configuration file; defaults when path is None"""
    if path is None:
        return TlnnConfiguration()
    with open(path, "r", encoding="utf-8") as handle:
        try:
            data = json.load(handle)
        except json.JSONDecodeError as e:
            raise ConfigurationError(f"{path}: invalid JSON ({e})") from e
    config = TlnnConfiguration.from_dict(data)
    logger.info(f"Loaded configuration from {path}")
    return config


def save_configuration(config: TlnnConfiguration, path: Union[str, Path]) -> None:
    """Write a configuration document as indented JSON"""
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(config.to_dict(), handle, indent=2)
        handle.write("\n")
