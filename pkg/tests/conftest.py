import numpy as np
import pytest

from tlnn.common.configurations import NetworkConfiguration, QuantizerConfiguration
from tlnn.logic.formula import Always, And, Eventually, Not, Or, Predicate
from tlnn.network.parameters import SOFTPLUS_ONE, AutoEncoder, NeuronSpec, TlnnParams, new_neuron
from tlnn.quantizer.quantization import QuantSpec
from tlnn.signals.dataset import Dataset


def fixed_neuron(kind, comparison, length, start, width, nested_horizon=0, hidden=2, sharpness=10.0):
    """Neuron whose encoder ignores its input (h = (start, width)) and whose decoder gives W2 = 1"""
    autoencoder = AutoEncoder(
        enc_w1=np.zeros((hidden, length)),
        enc_b1=np.zeros(hidden),
        enc_w2=np.zeros((2, hidden)),
        enc_b2=np.array([start, width], dtype=float),
        dec_w1=np.zeros((hidden, 2)),
        dec_b1=np.zeros(hidden),
        dec_w2=np.zeros((length, hidden)),
        dec_b2=np.full(length, SOFTPLUS_ONE),
    )
    return NeuronSpec(kind, comparison, autoencoder, QuantSpec.for_length(length, sharpness=sharpness),
                      nested_horizon)


def fixed_network(neurons, thresholds, layer4=None, layer5=(1.0, 1.0)):
    length = neurons[0].autoencoder.length
    if layer4 is None:
        layer4 = np.ones((len(neurons), 2))
    return TlnnParams(length=length, neurons=list(neurons), thresholds=thresholds, layer4=layer4, layer5=layer5)


def random_network(rng, length=12, nested_horizon=2, sharpness=2.0):
    """One neuron of every kind with random weights and random W1, W3, W4"""
    network = NetworkConfiguration(hidden_width=4, nested_horizon=nested_horizon, init_scale=0.5)
    quantizer = QuantizerConfiguration(initial_sharpness=sharpness)
    neurons = [
        new_neuron(length, rng, network, quantizer, kind=kind)
        for kind in ("always", "eventually", "always_eventually", "eventually_always")
    ]
    return TlnnParams(
        length=length,
        neurons=neurons,
        thresholds=rng.uniform(0.2, 0.8, len(neurons)),
        layer4=rng.uniform(0.2, 1.5, (len(neurons), 2)),
        layer5=rng.uniform(0.2, 1.5, 2),
    )


def random_formula(rng, depth):
    """Random formula with strictly positive weights"""
    if depth == 0 or rng.random() < 0.3:
        comparison = (">=", "<")[int(rng.integers(2))]
        return Predicate(comparison, rng.uniform(-1.0, 1.0), rng.uniform(0.1, 3.0))
    choice = int(rng.integers(5))
    if choice == 0:
        return Not(random_formula(rng, depth - 1))
    if choice in (1, 2):
        count = int(rng.integers(2, 4))
        nodes = tuple(random_formula(rng, depth - 1) for _ in range(count))
        node_type = And if choice == 1 else Or
        return node_type(nodes, tuple(rng.uniform(0.1, 3.0, count)))
    start = int(rng.integers(0, 3))
    end = start + int(rng.integers(0, 3))
    node_type = Always if choice == 3 else Eventually
    return node_type(random_formula(rng, depth - 1), start, end, tuple(rng.uniform(0.1, 3.0, end - start + 1)))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def make_neuron():
    return fixed_neuron


@pytest.fixture
def make_network():
    return fixed_network


@pytest.fixture
def make_formula():
    return random_formula


@pytest.fixture
def make_random_network():
    return random_network


@pytest.fixture
def toy_dataset():
    """Linearly separable: positives x = +1, negatives x = -1, length 8"""
    signals = [np.full(8, 1.0)] * 6 + [np.full(8, -1.0)] * 6
    labels = [1] * 6 + [-1] * 6
    return Dataset.from_arrays(signals, labels)
