"""
Network

The five-layer temporal logic neural network: parameter store, forward
pass with trace, manual backward pass and JSON checkpoints.

Layers:
- Layer 1/2: predicates x(t) - W1 (or W1 - x(t)) per neuron
- Layer 3: always, eventually, always-eventually, eventually-always neurons
- Layer 4: weighted "and" / "or" reduction
- Layer 5: weighted "and" output
"""

from .backward import backward
from .checkpoint import Checkpoint, load_checkpoint, params_from_dict, params_to_dict, save_checkpoint
from .forward import (
    ForwardTrace,
    GateTrace,
    Mode,
    NeuronTrace,
    atomic_forward,
    forward,
    layer2_predicates,
    output_forward,
    reduction_forward
)
from .parameters import (
    AutoEncoder,
    Gradients,
    NeuronKind,
    NeuronSpec,
    TlnnParams,
    initialize_params,
    new_neuron
)

__all__ = [
    'backward',
    'Checkpoint',
    'load_checkpoint',
    'params_from_dict',
    'params_to_dict',
    'save_checkpoint',
    'ForwardTrace',
    'GateTrace',
    'Mode',
    'NeuronTrace',
    'atomic_forward',
    'forward',
    'layer2_predicates',
    'output_forward',
    'reduction_forward',
    'AutoEncoder',
    'Gradients',
    'NeuronKind',
    'NeuronSpec',
    'TlnnParams',
    'initialize_params',
    'new_neuron'
]
