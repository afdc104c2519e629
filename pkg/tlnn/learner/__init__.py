"""
Learner

Per-sample gradient descent with online structure learning (neuron
pruning and growth), data-driven neuron placement, dataset evaluation and
training history.
"""

from .monitor import ConvergenceMonitor
from .placement import WINDOW_WIDTHS, Placement, place_neuron, window_statistics
from .training import (
    HISTORY_COLUMNS,
    EpochRecord,
    Metrics,
    accepted_samples,
    evaluate,
    history_frame,
    initial_network,
    maybe_add_neuron,
    network_outputs,
    placed_neuron,
    prune_neurons,
    save_history,
    sgd_step,
    squared_error_cost,
    structure_cost,
    train
)

__all__ = [
    'ConvergenceMonitor',
    'HISTORY_COLUMNS',
    'WINDOW_WIDTHS',
    'EpochRecord',
    'Metrics',
    'Placement',
    'accepted_samples',
    'evaluate',
    'history_frame',
    'initial_network',
    'maybe_add_neuron',
    'network_outputs',
    'place_neuron',
    'placed_neuron',
    'prune_neurons',
    'save_history',
    'sgd_step',
    'squared_error_cost',
    'structure_cost',
    'train',
    'window_statistics'
]
