#!/usr/bin/env python3
"""
JSON checkpoints of trained networks.

Floats are written with Python's shortest round-trip repr, so a saved and
reloaded network is bit-identical to the original.
"""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Union

import numpy as np

from ..common.errors import CheckpointError, TlnnError
from ..quantizer.quantization import QuantSpec
from .parameters import AUTOENCODER_ARRAYS, AutoEncoder, NeuronSpec, TlnnParams

logger = logging.getLogger(__name__)

CHECKPOINT_FORMAT = "tlnn-checkpoint"
CHECKPOINT_VERSION = 1


@dataclass
class Checkpoint:
    params: TlnnParams
    metadata: Dict[str, Any] = field(default_factory=dict)   # seed, configuration, ...


def params_to_dict(params: TlnnParams) -> Dict[str, Any]:
    neurons = []
    for neuron in params.neurons:
        quant = neuron.quant
        neurons.append({
            "kind": neuron.kind.value,
            "comparison": neuron.comparison.value,
            "nested_horizon": neuron.nested_horizon,
            "quant": {"lower": quant.lower, "upper": quant.upper, "bits": quant.bits, "sharpness": quant.sharpness},
            "autoencoder": {name: array.tolist() for name, array in neuron.autoencoder.arrays().items()},
        })
    return {
        "length": params.length,
        "thresholds": params.thresholds.tolist(),
        "layer4": params.layer4.tolist(),
        "layer5": params.layer5.tolist(),
        "neurons": neurons,
    }


def params_from_dict(data: Dict[str, Any]) -> TlnnParams:
    """Rebuild parameters; malformed content raises CheckpointError"""
    try:
        neurons = []
        for entry in data["neurons"]:
            arrays = entry["autoencoder"]
            missing = [name for name in AUTOENCODER_ARRAYS if name not in arrays]
            if missing:
                raise CheckpointError(f"Autoencoder arrays missing from checkpoint: {missing}")
            neurons.append(NeuronSpec(
                kind=entry["kind"],
                comparison=entry["comparison"],
                autoencoder=AutoEncoder(**{name: np.asarray(arrays[name], dtype=float) for name in AUTOENCODER_ARRAYS}),
                quant=QuantSpec(**entry["quant"]),
                nested_horizon=int(entry["nested_horizon"]),
            ))
        return TlnnParams(
            length=int(data["length"]),
            neurons=neurons,
            thresholds=data["thresholds"],
            layer4=data["layer4"],
            layer5=data["layer5"],
        )
    except CheckpointError:
        raise
    except (KeyError, TypeError, ValueError, TlnnError) as e:
        raise CheckpointError(f"Malformed checkpoint: {e}") from e


def save_checkpoint(params: TlnnParams, path: Union[str, Path], metadata: Dict[str, Any] = None) -> None:
    document = {
        "format": CHECKPOINT_FORMAT,
        "version": CHECKPOINT_VERSION,
        "metadata": dict(metadata or {}),
        "params": params_to_dict(params),
    }
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(document, handle)
        handle.write("\n")
    logger.info(f"Saved checkpoint with {params.neuron_count} neurons to {path}")


def load_checkpoint(path: Union[str, Path]) -> Checkpoint:
    with open(path, "r", encoding="utf-8") as handle:
        try:
            document = json.load(handle)
        except json.JSONDecodeError as e:
            raise CheckpointError(f"{path}: invalid JSON ({e})") from e
    if not isinstance(document, dict) or document.get("format") != CHECKPOINT_FORMAT:
        raise CheckpointError(f"{path}: not a {CHECKPOINT_FORMAT} document")
    if document.get("version") != CHECKPOINT_VERSION:
        raise CheckpointError(
            f"{path}: unsupported checkpoint version {document.get('version')}, expected {CHECKPOINT_VERSION}"
        )
    params = params_from_dict(document.get("params"))
    logger.info(f"Loaded checkpoint with {params.neuron_count} neurons from {path}")
    return Checkpoint(params, document.get("metadata") or {})
