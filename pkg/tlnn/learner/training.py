#!/usr/bin/env python3
"""
Simultaneous structure and parameter learning.

Parameters follow per-sample gradient descent in soft mode. After each
structure epoch, neurons whose Layer-4 weights fell below the prune
threshold are removed, and a neuron is added when the squared error of the
predicted labels on the training set stays above the growth threshold.
New neurons are either random or placed on the atom that best separates
the samples the network still accepts.
"""

import logging
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from ..common.configurations import NetworkConfiguration, QuantizerConfiguration, TrainConfiguration
from ..common.errors import NetworkStructureError, ValidationError
from ..logic.formula import Comparison
from ..network.backward import backward
from ..network.forward import Interval, Mode, forward
from ..network.parameters import Gradients, NeuronKind, NeuronSpec, TlnnParams, initialize_params, new_neuron
from ..signals.dataset import Dataset
from .monitor import ConvergenceMonitor
from .placement import place_neuron

logger = logging.getLogger(__name__)

HISTORY_COLUMNS = ("epoch", "loss", "C", "M", "error_rate", "mean_robustness", "robustness_variance")


@dataclass(frozen=True)
class Metrics:
    """Error rate and robustness of a network on a dataset"""
    error_rate: float
    mean_robustness: float
    robustness: Tuple[float, ...]

    @property
    def variance(self) -> float:
        return float(np.var(self.robustness)) if self.robustness else 0.0

    @property
    def predictions(self) -> np.ndarray:
        """+1 where rho5 >= 0, -1 otherwise"""
        return np.where(np.asarray(self.robustness) >= 0.0, 1, -1)


@dataclass(frozen=True)
class EpochRecord:
    epoch: int
    loss: float                 # mean per-sample training loss
    cost: float                 # C on the training set
    neurons: int                # M after the structure step
    error_rate: float
    mean_robustness: float
    robustness_variance: float

    def row(self) -> Tuple:
        return tuple(asdict(self).values())


def _descend(params: TlnnParams, grads: Gradients, learning_rate: float, threshold_scale: float) -> TlnnParams:
    """In-place update theta -= eta * g, then project W3, W4 onto >= 0"""
    gradients = grads.named_arrays()
    arrays = params.named_arrays()
    if gradients.keys() != arrays.keys():
        raise NetworkStructureError("Gradients do not match the network structure")
    for name, array in arrays.items():
        step = gradients[name]
        if step.shape != array.shape:
            raise NetworkStructureError(f"Gradient {name} has shape {step.shape}, expected {array.shape}")
        scale = learning_rate * threshold_scale if name == "thresholds" else learning_rate
        array -= scale * step
    np.maximum(params.layer4, 0.0, out=params.layer4)
    np.maximum(params.layer5, 0.0, out=params.layer5)
    return params


def sgd_step(params: TlnnParams, grads: Gradients, learning_rate: float,
             threshold_scale: float = 1.0) -> TlnnParams:
    """New parameters theta - eta * dL/dtheta with W3, W4 projected onto >= 0

    ``threshold_scale`` multiplies the step of the Layer-2 thresholds.
    """
    if not 0.0 <= learning_rate <= 1.0:
        raise ValidationError(f"Learning rate must be in [0, 1], got {learning_rate}")
    return _descend(params.copy(), grads, learning_rate, threshold_scale)


def prune_neurons(params: TlnnParams, threshold: float) -> TlnnParams:
    """Zero W3 entries below ``threshold`` and drop neurons left with no connection

    The neuron with the largest outgoing weight survives even when every
    neuron would be dropped; its connected entries are raised to the
    threshold, or both set to 1 when it has none.
    """
    weights = np.where(params.layer4 < threshold, 0.0, params.layer4)
    dead = [int(i) for i in np.flatnonzero(np.all(weights == 0.0, axis=1))]
    if len(dead) == params.neuron_count:
        keep = int(np.argmax(params.layer4.max(axis=1)))
        row = params.layer4[keep]
        weights[keep] = np.where(row > 0.0, np.maximum(row, threshold), 0.0) if row.any() else 1.0
        dead.remove(keep)
        logger.warning(f"Pruning would remove every neuron, keeping neuron {keep} with weights {weights[keep].tolist()}")

    pruned = params.copy()
    pruned.layer4 = weights
    if dead:
        pruned = pruned.without_neurons(dead)
        logger.info(f"Pruned {len(dead)} neuron(s), {pruned.neuron_count} remaining")
    return pruned


def network_outputs(params: TlnnParams, dataset: Dataset, mode: Mode = Mode.HARD,
                    intervals: Optional[Sequence[Interval]] = None) -> np.ndarray:
    return np.array([forward(params, sample.signal, mode, intervals)[0] for sample in dataset])


def squared_error_cost(predicted: Sequence[float], labels: Sequence[int]) -> float:
    """C = mean (y - y_d)^2 over predicted labels y"""
    predicted = np.asarray(predicted, dtype=float)
    labels = np.asarray(labels, dtype=float)
    return float(np.mean((predicted - labels) ** 2))


def structure_cost(params: TlnnParams, dataset: Dataset, mode: Mode = Mode.HARD) -> float:
    """C of the hard-mode predictions; 0 for a perfect fit, 4 x the error rate in general"""
    return squared_error_cost(evaluate(params, dataset, mode).predictions, dataset.labels)


def accepted_samples(params: TlnnParams, dataset: Dataset) -> np.ndarray:
    """Per sample: does the Layer-4 "and" gate accept it? True where the gate has no input"""
    flags = []
    for sample in dataset:
        _, trace = forward(params, sample.signal, Mode.HARD)
        group = trace.groups[0]
        flags.append(group is None or group.value >= 0.0)
    return np.array(flags, dtype=bool)


def _choices(value: Optional[str], options):
    return list(options) if value in (None, "random") else [type(options[0])(value)]


def placed_neuron(dataset: Dataset, rng: np.random.Generator,
                  network: Optional[NetworkConfiguration] = None,
                  quantizer: Optional[QuantizerConfiguration] = None,
                  sharpness: Optional[float] = None, accepted: Optional[Sequence[bool]] = None,
                  kind: Optional[str] = None, comparison: Optional[str] = None) -> Optional[Tuple[NeuronSpec, float]]:
    """Neuron and threshold W1 realising the best atom for the accepted samples

    The encoder output is pinned to the atom's window (h = (a, b - a)) until
    training moves it. Returns None when no atom rejects an accepted negative.
    """
    network = network or NetworkConfiguration()
    placement = place_neuron(
        dataset.matrix(), dataset.labels, accepted,
        kinds=_choices(kind, list(NeuronKind)),
        comparisons=_choices(comparison, [Comparison.GE, Comparison.LT]),
        nested_horizon=network.nested_horizon,
    )
    if placement is None:
        return None
    neuron = new_neuron(dataset.length, rng, network, quantizer or QuantizerConfiguration(),
                        placement.kind.value, placement.comparison.value, sharpness)
    neuron.autoencoder.enc_w2[:] = 0.0
    neuron.autoencoder.enc_b2[:] = (placement.start, placement.end - placement.start)
    return neuron, placement.threshold


def maybe_add_neuron(params: TlnnParams, dataset: Dataset, growth_threshold: float,
                     rng: np.random.Generator, max_neurons: int = 8,
                     network: Optional[NetworkConfiguration] = None,
                     quantizer: Optional[QuantizerConfiguration] = None,
                     sharpness: Optional[float] = None, cost: Optional[float] = None,
                     placement: str = "random") -> TlnnParams:
    """Add one neuron with W3 = (1, 1) when the cost exceeds the growth threshold

    With ``placement="search"`` the neuron is the atom that rejects the most
    negatives still accepted by the "and" gate, and nothing is added when no
    atom rejects any of them.
    """
    if cost is None:
        cost = structure_cost(params, dataset)
    if cost <= growth_threshold:
        return params
    if params.neuron_count >= max_neurons:
        logger.debug(f"Cost {cost:.4f} above {growth_threshold} but the network already has {max_neurons} neurons")
        return params

    if placement == "search":
        placed = placed_neuron(dataset, rng, network, quantizer, sharpness, accepted_samples(params, dataset))
        if placed is None:
            logger.info(f"Cost {cost:.4f} above {growth_threshold} but no atom separates the remaining errors")
            return params
        neuron, threshold = placed
    else:
        neuron = new_neuron(params.length, rng, network or NetworkConfiguration(),
                            quantizer or QuantizerConfiguration(), sharpness=sharpness)
        low, high = dataset.data_range()
        threshold = rng.uniform(low, high)
    grown = params.with_neuron(neuron, threshold)
    logger.info(f"Cost {cost:.4f} above {growth_threshold}: added {neuron.kind.value} neuron "
                f"({neuron.comparison.value} {threshold:.4f}), {grown.neuron_count} neurons")
    return grown


def evaluate(params: TlnnParams, dataset: Dataset, mode: Mode = Mode.HARD,
             intervals: Optional[Sequence[Interval]] = None) -> Metrics:
    """Error rate (rho5 = 0 counts as positive) and robustness of rho5 over a dataset"""
    outputs = network_outputs(params, dataset, mode, intervals)
    predicted = np.where(outputs >= 0.0, 1, -1)
    return Metrics(
        error_rate=float(np.mean(predicted != dataset.labels)),
        mean_robustness=float(np.mean(outputs)),
        robustness=tuple(float(y) for y in outputs),
    )


def initial_network(dataset: Dataset, config: TrainConfiguration, rng: np.random.Generator) -> TlnnParams:
    """Single-neuron network; with search placement its neuron is the best atom for the whole set"""
    low, high = dataset.data_range()
    params = initialize_params(dataset.length, (low, high), rng, config.network, config.quantizer)
    if config.placement != "search" or config.epochs == 0:
        return params
    placed = placed_neuron(dataset, rng, config.network, config.quantizer,
                           kind=config.network.initial_kind, comparison=config.network.initial_comparison)
    if placed is None:
        return params
    neuron, threshold = placed
    logger.info(f"Initial neuron: {neuron.kind.value} ({neuron.comparison.value} {threshold:.4f})")
    return TlnnParams(length=dataset.length, neurons=[neuron], thresholds=[threshold],
                      layer4=np.ones((1, 2)), layer5=np.ones(2))


def train(dataset: Dataset, config: Optional[TrainConfiguration] = None,
          validation: Optional[Dataset] = None, name: str = "tlnn") -> Tuple[TlnnParams, List[EpochRecord]]:
    """Train a network from a single neuron

    The robustness columns of the history come from ``validation`` when
    given, otherwise from the training set. With ``keep_best`` the returned
    parameters are the latest evaluated snapshot with the lowest training
    error.
    """
    config = config or TrainConfiguration()
    rng = np.random.default_rng(config.seed)
    params = initial_network(dataset, config, rng)
    history: List[EpochRecord] = []
    if config.epochs == 0:
        return params, history

    if validation is not None and validation.length != dataset.length:
        raise ValidationError(
            f"Validation signals have length {validation.length}, training signals {dataset.length}"
        )
    monitor = ConvergenceMonitor(name, config.patience)
    threshold_scale = 1.0 / dataset.length if config.average_threshold_gradient else 1.0
    capped = False
    best, best_error = params.copy(), evaluate(params, dataset).error_rate
    logger.info(f"Training {name} on {len(dataset)} samples of length {dataset.length} for {config.epochs} epochs")

    for epoch in range(config.epochs):
        sharpness = config.sharpness_at(epoch)
        params = params.with_sharpness(sharpness)

        losses = []
        for index in rng.permutation(len(dataset)):
            sample = dataset[int(index)]
            _, trace = forward(params, sample.signal, Mode.SOFT)
            grads = backward(trace, params, sample.label)
            losses.append(grads.loss)
            params = _descend(params, grads, config.learning_rate, threshold_scale)

        structural = (epoch + 1) % config.structure_every == 0
        if structural:
            params = prune_neurons(params, config.prune_threshold)
        training = evaluate(params, dataset)
        cost = squared_error_cost(training.predictions, dataset.labels)
        if training.error_rate <= best_error:
            best, best_error = params.copy(), training.error_rate
        reported = evaluate(params, validation) if validation is not None else training
        if structural:
            if cost > config.growth_threshold and params.neuron_count >= config.max_neurons and not capped:
                logger.warning(f"Cost {cost:.4f} above growth threshold with {config.max_neurons} neurons, not growing")
                capped = True
            params = maybe_add_neuron(
                params, dataset, config.growth_threshold, rng,
                max_neurons=config.max_neurons, network=config.network,
                quantizer=config.quantizer, sharpness=sharpness, cost=cost,
                placement=config.placement,
            )

        record = EpochRecord(
            epoch=epoch + 1,
            loss=float(np.mean(losses)),
            cost=cost,
            neurons=params.neuron_count,
            error_rate=training.error_rate,
            mean_robustness=reported.mean_robustness,
            robustness_variance=reported.variance,
        )
        history.append(record)
        if (epoch + 1) % config.log_every == 0 or epoch + 1 == config.epochs:
            logger.info(f"Epoch {record.epoch}/{config.epochs}: loss={record.loss:.4f} C={cost:.4f} "
                        f"M={record.neurons} error={record.error_rate:.3f} robustness={record.mean_robustness:.4f}")

        message = monitor.process_epoch(training.error_rate == 0.0)
        if message:
            logger.info(message["message"])
        if monitor.converged:
            logger.info(f"Stopping {name} after epoch {record.epoch}")
            break

    if config.keep_best and best_error < evaluate(params, dataset).error_rate:
        logger.info(f"Restoring the snapshot with training error {best_error:.3f}")
        params = best
    return params, history


def history_frame(history: Sequence[EpochRecord]) -> pd.DataFrame:
    return pd.DataFrame([record.row() for record in history], columns=list(HISTORY_COLUMNS))


def save_history(history: Sequence[EpochRecord], path: Union[str, Path]) -> None:
    history_frame(history).to_csv(path, index=False)
    logger.info(f"Wrote {len(history)} history rows to {path}")
