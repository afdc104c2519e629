#!/usr/bin/env python3
"""
Manual backward pass for the loss L = 1/2 (rho5 - y_d)^2.

Gradients follow the branch recorded in the trace for every piecewise
activation. Window weights outside [tau1, tau2] receive zero gradient, and
encoder gradients reach the intervals through the soft quantizer.
"""

import numpy as np

from ..common.errors import NonDifferentiableTraceError, ValidationError
from ..logic.activations import conjunction_grad, disjunction_grad
from ..quantizer.quantization import quantize_soft_grad
from .forward import ForwardTrace, Mode, NeuronTrace
from .parameters import AutoEncoder, Gradients, NeuronKind, NeuronSpec, TlnnParams


def _gate_grads(kind: NeuronKind):
    """(outer, inner) gradient functions of a neuron kind"""
    if kind in (NeuronKind.ALWAYS, NeuronKind.ALWAYS_EVENTUALLY):
        return conjunction_grad, disjunction_grad
    return disjunction_grad, conjunction_grad


def backward(trace: ForwardTrace, params: TlnnParams, target: float) -> Gradients:
    """Exact dL/dtheta for every parameter array of ``params``

    Raises:
        NonDifferentiableTraceError: trace was produced in hard mode
        ValidationError: target label is not +1 or -1
    """
    if trace.mode is not Mode.SOFT:
        raise NonDifferentiableTraceError("Backward pass needs a soft-mode trace; hard quantization has no gradient")
    if target not in (-1, 1):
        raise ValidationError(f"Target label must be +1 or -1, got {target}")

    grads = Gradients.zeros(params)
    d5 = trace.output - float(target)
    grads.output = d5
    grads.loss = 0.5 * d5 * d5

    # Layer 5
    top = trace.top
    d4 = np.zeros(2)
    if top.active.size:
        reduced = np.array([trace.groups[k].value for k in top.active])
        dw, dv = conjunction_grad(params.layer5[top.active], reduced, top.positive)
        grads.layer5[top.active] = d5 * dw
        d4[top.active] = d5 * dv

    # Layer 4
    d3 = np.zeros(params.neuron_count)
    for column, gate_grad in ((0, conjunction_grad), (1, disjunction_grad)):
        group = trace.groups[column]
        if group is None:
            continue
        active = group.active
        dw, dv = gate_grad(params.layer4[active, column], trace.atomic[active], group.positive)
        grads.layer4[active, column] += d4[column] * dw
        d3[active] += d4[column] * dv

    # Layers 3 and 2
    for i, (neuron, record) in enumerate(zip(params.neurons, trace.neurons)):
        d_row = _neuron_backward(neuron, record, trace.predicates[i], d3[i], grads.neurons[i])
        grads.thresholds[i] = -neuron.comparison.sign * float(np.sum(d_row))
    return grads


def _neuron_backward(neuron: NeuronSpec, record: NeuronTrace, row: np.ndarray,
                     upstream: float, out: AutoEncoder) -> np.ndarray:
    """Accumulate autoencoder gradients into ``out``; returns dL/drho2 for the row"""
    d_row = np.zeros_like(row)
    if upstream == 0.0:
        return d_row
    a, b = record.window
    weights = record.w2[a:b + 1]
    outer_grad, inner_grad = _gate_grads(record.kind)

    d_w2 = np.zeros_like(record.w2)
    if record.inner is None:
        dw, dv = outer_grad(weights, row[a:b + 1], record.positive)
        d_w2[a:b + 1] = upstream * dw
        d_row[a:b + 1] += upstream * dv
    else:
        _, d_inner = outer_grad(np.ones(record.inner.size), record.inner, record.positive)
        for j, flag in enumerate(record.inner_positive):
            scale = upstream * d_inner[j]
            dw, dv = inner_grad(weights, row[a + j:b + j + 1], flag)
            d_w2[a:b + 1] += scale * dw
            d_row[a + j:b + j + 1] += scale * dv

    # decoder: W2 = softplus(dec_w2 . tanh(dec_w1 . z + dec_b1) + dec_b2), z = decoded / (n - 1)
    ae = neuron.autoencoder
    d_raw = d_w2 / (1.0 + np.exp(-record.decoder_raw))
    out.dec_w2 += np.outer(d_raw, record.decoder_hidden)
    out.dec_b2 += d_raw
    d_pre = (ae.dec_w2.T @ d_raw) * (1.0 - record.decoder_hidden ** 2)
    z = record.decoded / (ae.length - 1)
    out.dec_w1 += np.outer(d_pre, z)
    out.dec_b1 += d_pre
    if record.frozen:
        return d_row

    # interval: t1 = min(q1, cap), t2 = min(q1 + q2, cap)
    d_t = (ae.dec_w1.T @ d_pre) / (ae.length - 1)
    q = record.q
    end_free = float(q[0] + q[1] < record.cap)
    d_q = np.array([d_t[0] * float(q[0] < record.cap) + d_t[1] * end_free, d_t[1] * end_free])
    d_h = d_q * np.array([quantize_soft_grad(record.h[0], neuron.quant),
                          quantize_soft_grad(record.h[1], neuron.quant)])

    # encoder: h = enc_w2 . tanh(enc_w1 . rho2 + enc_b1) + enc_b2
    out.enc_w2 += np.outer(d_h, record.encoder_hidden)
    out.enc_b2 += d_h
    d_pre = (ae.enc_w2.T @ d_h) * (1.0 - record.encoder_hidden ** 2)
    out.enc_w1 += np.outer(d_pre, row)
    out.enc_b1 += d_pre
    d_row += ae.enc_w1.T @ d_pre
    return d_row
