#!/usr/bin/env python3
"""
Forward pass of the five-layer network.

Layer 1 passes the signal through, Layer 2 turns it into one predicate
robustness row per neuron, Layer 3 evaluates each neuron's atomic formula
over its learned interval, Layer 4 reduces the atomic robustnesses with a
weighted "and" and a weighted "or", and Layer 5 joins both with a weighted
"and". Every intermediate value and branch choice is recorded in a
ForwardTrace for the backward pass.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Tuple

import numpy as np

from ..common.errors import SignalLengthError
from ..logic.activations import conjunction, disjunction
from ..logic.signal import SignalLike, as_samples
from ..quantizer.quantization import quantize_hard, quantize_soft
from .parameters import NeuronKind, NeuronSpec, TlnnParams

Interval = Tuple[float, float]


class Mode(str, Enum):
    """Soft quantization while training, hard quantization for inference"""
    SOFT = "soft"
    HARD = "hard"


@dataclass(frozen=True)
class NeuronTrace:
    """Layer-3 record of one neuron"""
    kind: NeuronKind
    encoder_hidden: Optional[np.ndarray]   # tanh activations, None for frozen intervals
    h: Optional[np.ndarray]                # encoder outputs (h1, h2)
    q: Optional[np.ndarray]                # quantized (Q(h1), Q(h2))
    cap: float
    t: np.ndarray                          # (tau1, tau2) after clamping
    window: Tuple[int, int]                # integer window [a, b]
    decoded: np.ndarray                    # decoder input: t in soft mode, [a, b] otherwise
    decoder_hidden: np.ndarray
    decoder_raw: np.ndarray                # pre-softplus decoder output
    w2: np.ndarray                         # window weights W2, length n
    inner: Optional[np.ndarray]            # shifted inner robustnesses, nested kinds only
    inner_positive: Optional[Tuple[bool, ...]]
    positive: bool
    value: float

    @property
    def frozen(self) -> bool:
        return self.h is None


@dataclass(frozen=True)
class GateTrace:
    """One Layer-4 or Layer-5 gate: value, branch flag and the inputs it read"""
    value: float
    positive: bool
    active: np.ndarray


@dataclass(frozen=True)
class ForwardTrace:
    mode: Mode
    signal: np.ndarray                     # rho1
    predicates: np.ndarray                 # rho2, M x n
    neurons: Tuple[NeuronTrace, ...]
    atomic: np.ndarray                     # rho3
    groups: Tuple[Optional[GateTrace], Optional[GateTrace]]   # ("and", "or")
    top: GateTrace
    output: float                          # rho5

    def branch_flags(self) -> Tuple[bool, ...]:
        """Every branch choice of the pass, in a fixed order"""
        flags = []
        for neuron in self.neurons:
            flags.append(neuron.positive)
            if neuron.inner_positive is not None:
                flags.extend(neuron.inner_positive)
        flags.extend(g.positive for g in self.groups if g is not None)
        flags.append(self.top.positive)
        return tuple(flags)

    def branch_margin(self) -> float:
        """Distance to the nearest branch switch

        Minimum over sign margins of every gate input, distances of the
        interval ends to a rounding tie, clamping margins and, in soft mode,
        quantizer saturation margins. Zero means the pass sits on a kink.
        """
        margins = [math.inf]
        for i, neuron in enumerate(self.neurons):
            a, b = neuron.window
            extra = neuron.inner.size - 1 if neuron.inner is not None else 0
            margins.append(float(np.min(np.abs(self.predicates[i, a:b + extra + 1]))))
            if neuron.inner is not None:
                margins.append(float(np.min(np.abs(neuron.inner))))
            margins.extend(float(0.5 - abs(t - round(t))) for t in neuron.t)
            if neuron.q is not None:
                margins.append(abs(neuron.cap - neuron.q[0]))
                margins.append(abs(neuron.cap - neuron.q[0] - neuron.q[1]))
            if neuron.h is not None and self.mode is Mode.SOFT:
                margins.extend(float(np.min(np.abs(neuron.h - bound))) for bound in (0.0, self.signal.size - 1.0))
        if self.atomic.size:
            margins.append(float(np.min(np.abs(self.atomic))))
        margins.extend(abs(g.value) for g in self.groups if g is not None)
        return float(min(margins))

    def replay(self, params: TlnnParams) -> float:
        """Recompute rho5 from the recorded atomic robustnesses"""
        groups = reduction_forward(self.atomic, params.layer4)
        return output_forward(tuple(None if g is None else g.value for g in groups), params.layer5).value


def softplus(r: np.ndarray) -> np.ndarray:
    return np.logaddexp(0.0, r)


def layer2_predicates(x: SignalLike, params: TlnnParams) -> np.ndarray:
    """rho2[i, t] = x(t) - W1_i for >= neurons, W1_i - x(t) for < neurons"""
    samples = as_samples(x)
    if samples.size != params.length:
        raise SignalLengthError(f"Network expects signals of length {params.length}, got {samples.size}")
    signs = np.array([n.comparison.sign for n in params.neurons])
    return signs[:, None] * (samples[None, :] - params.thresholds[:, None])


def decode_window_weights(neuron: NeuronSpec, t: np.ndarray):
    """Decoder pass on the normalised interval; returns (hidden, raw, W2)"""
    ae = neuron.autoencoder
    z = t / (ae.length - 1)
    hidden = np.tanh(ae.dec_w1 @ z + ae.dec_b1)
    raw = ae.dec_w2 @ hidden + ae.dec_b2
    return hidden, raw, softplus(raw)


def encode_interval(neuron: NeuronSpec, row: np.ndarray):
    """Encoder pass; returns (hidden, (h1, h2))"""
    ae = neuron.autoencoder
    hidden = np.tanh(ae.enc_w1 @ row + ae.enc_b1)
    return hidden, ae.enc_w2 @ hidden + ae.enc_b2


def _gates(kind: NeuronKind):
    """(outer gate, inner gate) of a neuron kind"""
    if kind in (NeuronKind.ALWAYS, NeuronKind.ALWAYS_EVENTUALLY):
        outer = conjunction
    else:
        outer = disjunction
    inner = disjunction if outer is conjunction else conjunction
    return outer, inner


def atomic_forward(neuron: NeuronSpec, row: np.ndarray, mode: Mode = Mode.SOFT,
                   interval: Optional[Interval] = None) -> Tuple[float, NeuronTrace]:
    """Layer-3 neuron on its predicate row

    The interval is tau1 = Q(h1), tau2 = Q(h1) + Q(h2), clamped to the
    neuron's cap; ``interval`` replaces the encoder with fixed (tau1, tau2).
    """
    row = np.asarray(row, dtype=float)
    mode = Mode(mode)
    cap = neuron.cap
    if interval is None:
        hidden, h = encode_interval(neuron, row)
        quantize = quantize_soft if mode is Mode.SOFT else quantize_hard
        q = np.array([quantize(h[0], neuron.quant), quantize(h[1], neuron.quant)])
        t = np.array([min(q[0], cap), min(q[0] + q[1], cap)])
    else:
        hidden, h, q = None, None, None
        start, end = (min(max(float(v), 0.0), cap) for v in interval)
        t = np.array([start, max(start, end)])

    a, b = (int(math.floor(v + 0.5)) for v in t)
    # hard and frozen windows decode at their integer ends, as extraction does
    decoded = t if mode is Mode.SOFT and interval is None else np.array([a, b], dtype=float)
    dec_hidden, raw, w2 = decode_window_weights(neuron, decoded)
    weights = w2[a:b + 1]
    outer, inner_gate = _gates(neuron.kind)

    inner, inner_positive = None, None
    if neuron.kind.nested:
        results = [inner_gate(weights, row[a + j:b + j + 1]) for j in range(neuron.nested_horizon + 1)]
        inner = np.array([value for value, _ in results])
        inner_positive = tuple(flag for _, flag in results)
        value, positive = outer(np.ones(inner.size), inner)
    else:
        value, positive = outer(weights, row[a:b + 1])

    return value, NeuronTrace(
        kind=neuron.kind, encoder_hidden=hidden, h=h, q=q, cap=cap, t=t, window=(a, b), decoded=decoded,
        decoder_hidden=dec_hidden, decoder_raw=raw, w2=w2,
        inner=inner, inner_positive=inner_positive, positive=positive, value=value,
    )


def _connected(weights: np.ndarray) -> np.ndarray:
    return np.flatnonzero(weights > 0)


def reduction_forward(atomic: np.ndarray, layer4: np.ndarray) -> Tuple[Optional[GateTrace], Optional[GateTrace]]:
    """Layer 4: weighted "and" and "or" over the connected neurons

    A neuron takes part in a gate only when its W3 entry is > 0; a gate
    with no connected neuron is None.
    """
    atomic = np.asarray(atomic, dtype=float)
    layer4 = np.asarray(layer4, dtype=float).reshape(-1, 2)
    groups = []
    for column, gate in ((0, conjunction), (1, disjunction)):
        active = _connected(layer4[:, column])
        if active.size == 0:
            groups.append(None)
            continue
        value, positive = gate(layer4[active, column], atomic[active])
        groups.append(GateTrace(value, positive, active))
    return groups[0], groups[1]


def output_forward(reduced: Sequence[Optional[float]], layer5: np.ndarray) -> GateTrace:
    """Layer 5: weighted "and" of the present Layer-4 outputs; 0 when none is present"""
    layer5 = np.asarray(layer5, dtype=float)
    present = np.array([k for k, value in enumerate(reduced) if value is not None], dtype=int)
    if present.size == 0:
        return GateTrace(0.0, False, present)
    values = [reduced[k] for k in present]
    value, positive = conjunction(layer5[present], values)
    return GateTrace(value, positive, present)


def forward(params: TlnnParams, x: SignalLike, mode: Mode = Mode.SOFT,
            intervals: Optional[Sequence[Interval]] = None) -> Tuple[float, ForwardTrace]:
    """Network output rho5 and the full trace

    ``intervals`` fixes (tau1, tau2) for every neuron, bypassing the encoders.
    """
    mode = Mode(mode)
    signal = as_samples(x)
    rho2 = layer2_predicates(signal, params)
    if intervals is not None and len(intervals) != params.neuron_count:
        raise SignalLengthError(f"Expected {params.neuron_count} frozen intervals, got {len(intervals)}")

    values, traces = [], []
    for i, neuron in enumerate(params.neurons):
        value, trace = atomic_forward(neuron, rho2[i], mode, None if intervals is None else intervals[i])
        values.append(value)
        traces.append(trace)
    rho3 = np.array(values)

    groups = reduction_forward(rho3, params.layer4)
    top = output_forward(tuple(None if g is None else g.value for g in groups), params.layer5)
    trace = ForwardTrace(
        mode=mode, signal=signal, predicates=rho2, neurons=tuple(traces),
        atomic=rho3, groups=groups, top=top, output=top.value,
    )
    return top.value, trace
