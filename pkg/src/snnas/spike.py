"""Leaky integrate-and-fire forward simulation with activity recording.

The engine runs a quantized (or raw) network for T timesteps under direct
input coding: the real-valued image is applied as the stem convolution's
input current at every step.  Each LIF layer keeps a per-neuron membrane
that persists across timesteps; a neuron's activity bit is 1 iff it spiked
at least once during the run.  The classifier head (global pool + linear
readout) carries no spiking state and is skipped by the simulation.

Tensors are NHWC internally; conv weights are stored (k, k, D, F) so the
im2col GEMM needs no transpose.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .arch import LayerKind, Operation


@dataclass(frozen=True)
class LifParams:
    v_threshold: float = 1.0
    v_reset: float = 0.0
    leak: float = 0.75          # multiplicative membrane decay per step
    timesteps: int = 4

    def __post_init__(self):
        if self.v_threshold <= self.v_reset:
            raise ValueError("v_threshold must exceed v_reset")
        if not 0.0 < self.leak <= 1.0:
            raise ValueError("leak must be in (0, 1]")
        if self.timesteps < 1:
            raise ValueError("timesteps must be >= 1")


def lif_step(v, input_current, p):
    """One membrane update: leak, integrate, threshold, hard reset.

    Returns (v_next, spikes); spikes are 0.0/1.0.  Reference semantics for
    the fused kernel used inside forward().
    """
    v = np.asarray(v, dtype=np.float64)
    i = np.asarray(input_current, dtype=np.float64)
    if v.shape != i.shape:
        raise ValueError("membrane and current shapes differ")
    u = p.leak * v + i
    spikes = u >= p.v_threshold
    v_next = np.where(spikes, p.v_reset, u)
    return v_next, spikes.astype(np.float64)


@dataclass
class ActivityRecord:
    """Per-layer binary activity: bits[l][i, n] = 1 iff neuron n of LIF
    layer l spiked at least once for sample i."""

    batch_size: int
    bits: dict  # layer index -> (S, N_l) uint8

    def layer_indices(self):
        return sorted(self.bits)

    def neuron_count(self, layer_index):
        return self.bits[layer_index].shape[1]

    def spike_rate(self, layer_index):
        return float(self.bits[layer_index].mean())

    def layer_sparsity(self, arch):
        """Activity fraction driving each layer's crossbar reads.

        Conv layers report their own LIF rate; the classifier reads the
        globally pooled spikes of the last LIF layer (average pooling
        preserves the mean rate); pools have no crossbars and report 0.
        """
        rates = []
        last_rate = 0.0
        for i, layer in enumerate(arch.layers):
            if layer.has_lif and i in self.bits:
                last_rate = self.spike_rate(i)
                rates.append(last_rate)
            elif layer.kind is LayerKind.FULLY_CONNECTED:
                rates.append(last_rate)
            else:
                rates.append(0.0)
        return rates


def init_weights(arch, seed):
    """Fan-in-scaled uniform weights from a seeded PRNG.

    Conv: (k, k, D, F) in [-(1/fan_in)^0.5, +(1/fan_in)^0.5], fan_in = k*k*D.
    Fully connected: (D, F) with fan_in = D.  Pool layers get None.
    """
    rng = np.random.default_rng(seed)
    weights = []
    for layer in arch.layers:
        if layer.kind is LayerKind.CONV:
            fan_in = layer.kernel * layer.kernel * layer.in_channels
            bound = (1.0 / fan_in) ** 0.5
            shape = (layer.kernel, layer.kernel, layer.in_channels, layer.out_channels)
            weights.append(rng.uniform(-bound, bound, size=shape))
        elif layer.kind is LayerKind.FULLY_CONNECTED:
            bound = (1.0 / layer.in_channels) ** 0.5
            weights.append(rng.uniform(-bound, bound,
                                       size=(layer.in_channels, layer.out_channels)))
        else:
            weights.append(None)
    return weights


def _expected_weight_shape(layer):
    if layer.kind is LayerKind.CONV:
        return (layer.kernel, layer.kernel, layer.in_channels, layer.out_channels)
    if layer.kind is LayerKind.FULLY_CONNECTED:
        return (layer.in_channels, layer.out_channels)
    return None


def _validate_weights(arch, weights):
    if len(weights) != len(arch.layers):
        raise ValueError(f"expected {len(arch.layers)} weight entries, "
                         f"got {len(weights)}")
    for i, (layer, w) in enumerate(zip(arch.layers, weights)):
        expected = _expected_weight_shape(layer)
        if expected is None:
            if w is not None:
                raise ValueError(f"layer {i} ({layer.kind.value}): expected no weights")
            continue
        if w is None or tuple(w.shape) != expected:
            got = None if w is None else tuple(w.shape)
            raise ValueError(f"layer {i} ({layer.kind.value}): expected weight "
                             f"shape {expected}, got {got}")


class _LayerState:
    """Membrane/fired buffers, the GEMM-ready weight view, and scratch
    buffers reused across timesteps."""

    def __init__(self, layer, batch_size, weight):
        self.layer = layer
        ho = layer.out_spatial
        self.out_shape = (batch_size, ho, ho, layer.out_channels)
        if layer.has_lif:
            self.v = np.zeros(self.out_shape)
            self.fired = np.zeros(self.out_shape, dtype=np.uint8)
            self.spikes = np.empty(self.out_shape)
        if weight is not None and layer.kind is LayerKind.CONV:
            k = layer.kernel
            self.w_mat = np.ascontiguousarray(
                weight.reshape(k * k * layer.in_channels, layer.out_channels))
            rows = batch_size * ho * ho
            self.cols = np.empty((rows, k * k * layer.in_channels))
            self.current = np.empty((rows, layer.out_channels))


def forward(arch, weights, batch, p):
    """Simulate T timesteps on a minibatch; return the activity record.

    batch is (S, C, H, W) sample-major.  Deterministic for fixed inputs.
    """
    batch = np.asarray(batch)
    if batch.ndim != 4:
        raise ValueError("batch must be (S, C, H, W)")
    s = batch.shape[0]
    if s < 2:
        raise ValueError("batch must contain at least 2 samples")
    in_ch, height, width = arch.input_shape
    if batch.shape[1:] != (in_ch, height, width):
        raise ValueError(f"batch shape {batch.shape[1:]} does not match "
                         f"network input {(in_ch, height, width)}")
    _validate_weights(arch, weights)

    x0 = np.ascontiguousarray(batch.transpose(0, 2, 3, 1), dtype=np.float64)
    states = {}
    for i, layer in enumerate(arch.layers):
        if layer.kind is LayerKind.CONV:
            states[i] = _LayerState(layer, s, weights[i])

    def conv_current(idx, x):
        layer = arch.layers[idx]
        st = states[idx]
        cols = kernels.im2col(x, layer.kernel, layer.stride, layer.padding,
                              out=st.cols)
        np.dot(cols, st.w_mat, out=st.current)
        return st.current.reshape(st.out_shape)

    def fire(idx, current):
        st = states[idx]
        kernels.lif_update(st.v, current, st.fired, st.spikes,
                           p.v_threshold, p.v_reset, p.leak)
        return st.spikes

    # Walk the layer list once to bind cell edges to layer indices.
    cursor = [1]  # layer 0 is the stem

    def bind_cell(cfg):
        steps = []
        for (src, dst), op in cfg.edges():
            if op is Operation.SKIP_CON:
                steps.append((src, dst, op, None))
            else:
                steps.append((src, dst, op, cursor[0]))
                cursor[0] += 1
        return steps

    cell_a_steps = bind_cell(arch.cell_a)
    red1_idx = cursor[0]
    cursor[0] += 1
    cell_b_steps = bind_cell(arch.cell_b)
    red2_idx = cursor[0]

    def run_cell(steps, x_in):
        nodes = [x_in, None, None, None]
        for src, dst, op, idx in steps:
            if op is Operation.CONV3X3:
                contrib = fire(idx, conv_current(idx, nodes[src]))
            elif op is Operation.AVG_POOL3X3:
                contrib = kernels.avgpool3x3(nodes[src])
            else:
                contrib = nodes[src]
            if nodes[dst] is None:
                nodes[dst] = contrib.copy() if contrib is nodes[src] else contrib
            else:
                nodes[dst] += contrib
        return nodes[3]

    stem_current = conv_current(0, x0)  # constant under direct coding
    for _ in range(p.timesteps):
        x = fire(0, stem_current)
        x = run_cell(cell_a_steps, x)
        x = fire(red1_idx, conv_current(red1_idx, x))
        x = run_cell(cell_b_steps, x)
        fire(red2_idx, conv_current(red2_idx, x))

    bits = {i: st.fired.reshape(s, -1).copy()
            for i, st in states.items() if st.layer.has_lif}
    return ActivityRecord(batch_size=s, bits=bits)
