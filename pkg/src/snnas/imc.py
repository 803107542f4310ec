"""Crossbar mapping and analytic area / latency / energy estimation.

Mapping follows the kernel-position-major strategy for compute-in-memory
accelerators: the k*k positions of a conv kernel occupy k*k separate
crossbars; input channels run down crossbar rows (split when D > X); each
filter occupies ceil(bit_w / bit_d) adjacent columns (bit-sliced across
device cells) and filters pack side by side without splitting across
crossbars.  Crossbars group into PEs, PEs into tiles, and tiles are never
shared between layers.

The cost formulas are closed-form and driven entirely by the unit costs in
HardwareConfig.  The shipped defaults are placeholders with plausible
magnitudes, not measurements; calibrate them for a real process.  The
model's structural properties (monotonicity in crossbar count, linearity
in timesteps and spike rate, the bit-slicing adjustment) hold for any
positive unit costs.
"""

from dataclasses import dataclass, field

from .arch import LayerKind, param_count
from .quant import adjustment_factor


def _ceil_div(a, b):
    return -(-a // b)


@dataclass(frozen=True)
class UnitCosts:
    """Per-component cost constants (areas mm2, energies J, time cycles)."""

    a_xbar_mm2: float = 0.0005
    a_adc_mm2: float = 0.002
    a_buf_mm2_per_kb: float = 0.01
    a_neur_mm2: float = 2.0
    a_pool_mm2: float = 1.0
    a_noc_mm2: float = 2.0
    e_xbar_row_j: float = 1.0e-12
    e_adc_j: float = 2.0e-12
    e_buf_bit_j: float = 1.0e-13
    e_noc_hop_j: float = 1.0e-11
    t_xbar_read_cycles: float = 100.0

    def __post_init__(self):
        for name, value in self.__dict__.items():
            if value <= 0:
                raise ValueError(f"unit cost {name} must be positive")


@dataclass(frozen=True)
class HardwareConfig:
    """Crossbar / PE / tile geometry plus circuit and device parameters."""

    xbar_size: int = 64
    xbars_per_pe: int = 9
    pes_per_tile: int = 8
    mux_size: int = 8
    adc_bits: int = 4
    clock_hz: float = 250e6
    gbuff_kb: float = 20.0
    tbuff_kb: float = 10.0
    pbuff_kb: float = 5.0
    tib_kb: float = 50.0
    pib_kb: float = 30.0
    vdd: float = 0.9
    vread: float = 0.1
    r_on_ohm: float = 20e3
    r_off_ohm: float = 200e3
    bits_per_cell: int = 1
    unit: UnitCosts = field(default_factory=UnitCosts)

    def __post_init__(self):
        counts = ("xbar_size", "xbars_per_pe", "pes_per_tile", "mux_size",
                  "adc_bits", "bits_per_cell")
        for name in counts:
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        positives = ("clock_hz", "gbuff_kb", "tbuff_kb", "pbuff_kb", "tib_kb",
                     "pib_kb", "vdd", "vread", "r_on_ohm", "r_off_ohm")
        for name in positives:
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.xbar_size % self.mux_size != 0:
            raise ValueError("mux_size must divide xbar_size")


@dataclass(frozen=True)
class LayerMapping:
    layer_index: int
    n_xbars: int
    n_pes: int
    n_tiles: int
    row_splits: int
    col_splits: int
    cols_per_filter: int
    rows_active: float  # average occupied rows per crossbar


@dataclass(frozen=True)
class MappingPlan:
    entries: tuple

    @property
    def total_xbars(self):
        return sum(e.n_xbars for e in self.entries)

    @property
    def total_pes(self):
        return sum(e.n_pes for e in self.entries)

    @property
    def total_tiles(self):
        return sum(e.n_tiles for e in self.entries)


def map_layer(layer, hw, spec, layer_index=0):
    """Crossbar/PE/tile allocation for one layer.

    Pool layers run on the pooling module and occupy no crossbars.
    """
    if layer.kind is LayerKind.AVG_POOL:
        return LayerMapping(layer_index, 0, 0, 0, 0, 0, 0, 0.0)
    p = layer.kernel if layer.kind is LayerKind.CONV else 1
    d, f = layer.in_channels, layer.out_channels
    cols_per_filter = adjustment_factor(spec)
    filters_per_xbar = hw.xbar_size // cols_per_filter
    if filters_per_xbar == 0:
        raise ValueError("weight word exceeds crossbar width")
    col_splits = _ceil_div(f, filters_per_xbar)
    row_splits = _ceil_div(d, hw.xbar_size)
    n_xbars = p * p * row_splits * col_splits
    n_pes = _ceil_div(n_xbars, hw.xbars_per_pe)
    n_tiles = _ceil_div(n_pes, hw.pes_per_tile)
    return LayerMapping(layer_index, n_xbars, n_pes, n_tiles,
                        row_splits, col_splits, cols_per_filter,
                        d / row_splits)


def map_network(arch, hw, spec):
    return MappingPlan(tuple(map_layer(layer, hw, spec, i)
                             for i, layer in enumerate(arch.layers)))


def _tile_area_mm2(hw):
    u = hw.unit
    adcs_per_xbar = hw.xbar_size // hw.mux_size
    pe = (hw.xbars_per_pe * (u.a_xbar_mm2 + adcs_per_xbar * u.a_adc_mm2)
          + (hw.pbuff_kb + hw.pib_kb) * u.a_buf_mm2_per_kb)
    return hw.pes_per_tile * pe + (hw.tbuff_kb + hw.tib_kb) * u.a_buf_mm2_per_kb


def global_area_mm2(hw):
    u = hw.unit
    return (hw.gbuff_kb * u.a_buf_mm2_per_kb + u.a_neur_mm2
            + u.a_pool_mm2 + u.a_noc_mm2)


def area(plan, hw):
    """Total die area: per-layer tiles (never shared) plus global modules."""
    return plan.total_tiles * _tile_area_mm2(hw) + global_area_mm2(hw)


def _layer_cycles(layer, hw, lif):
    # One activation per output pixel per timestep; the ADC is
    # time-multiplexed over the crossbar columns.  Row and column splits
    # run on distinct crossbars in parallel, so they add no cycles.
    activations = layer.out_spatial ** 2 * lif.timesteps
    read_slots = hw.xbar_size // hw.mux_size
    return activations * hw.unit.t_xbar_read_cycles * read_slots


def latency(plan, arch, hw, lif):
    """End-to-end latency in ms; layers execute sequentially."""
    total_cycles = sum(_layer_cycles(layer, hw, lif) for layer in arch.layers)
    return total_cycles / hw.clock_hz * 1e3


def _layer_energy_j(layer, entry, hw, spec, s_l):
    u = hw.unit
    activations = layer.out_spatial ** 2
    p = layer.kernel if layer.kind is not LayerKind.FULLY_CONNECTED else 1
    xbar_term = s_l * entry.rows_active * u.e_xbar_row_j * entry.n_xbars
    adc_term = (hw.xbar_size // hw.mux_size) * u.e_adc_j * entry.n_xbars
    # Spike inputs are one bit; outputs are written at word precision.
    buffer_bits = p * p * layer.in_channels + layer.out_channels * spec.bit_w
    noc_hops = entry.n_tiles + 1
    per_activation = (xbar_term + adc_term
                      + buffer_bits * u.e_buf_bit_j
                      + noc_hops * u.e_noc_hop_j)
    return activations * per_activation


def energy(plan, arch, hw, spec, sparsity, lif):
    """Inference energy in microjoules for one sample over all timesteps."""
    total = 0.0
    for layer, entry, s_l in zip(arch.layers, plan.entries, sparsity):
        if not 0.0 <= s_l <= 1.0:
            raise ValueError(f"sparsity for layer {entry.layer_index} "
                             f"out of [0, 1]: {s_l}")
        total += _layer_energy_j(layer, entry, hw, spec, s_l) * lif.timesteps
    return total * 1e6


@dataclass(frozen=True)
class LayerCost:
    index: int
    kind: str
    params: int
    n_xbars: int
    n_pes: int
    n_tiles: int
    area_mm2: float
    cycles: float
    latency_ms: float
    energy_uj: float
    sparsity: float


@dataclass(frozen=True)
class CostReport:
    mem_params: int
    area_mm2: float
    latency_ms: float
    energy_uj: float
    area_global_mm2: float
    per_layer: tuple

    def as_dict(self):
        return {
            "mem_params": self.mem_params,
            "area_mm2": self.area_mm2,
            "latency_ms": self.latency_ms,
            "energy_uj": self.energy_uj,
            "area_global_mm2": self.area_global_mm2,
            "per_layer": [
                {
                    "index": c.index,
                    "kind": c.kind,
                    "params": c.params,
                    "n_xbars": c.n_xbars,
                    "n_pes": c.n_pes,
                    "n_tiles": c.n_tiles,
                    "area_mm2": c.area_mm2,
                    "cycles": c.cycles,
                    "latency_ms": c.latency_ms,
                    "energy_uj": c.energy_uj,
                    "sparsity": c.sparsity,
                }
                for c in self.per_layer
            ],
        }


def evaluate_costs(arch, hw, spec, sparsity, lif):
    """Bundle memory, area, latency, and energy with a per-layer breakdown.

    sparsity holds one measured activity fraction per layer (see
    ActivityRecord.layer_sparsity).
    """
    if len(sparsity) != len(arch.layers):
        raise ValueError("sparsity must have one entry per layer")
    plan = map_network(arch, hw, spec)
    tile_area = _tile_area_mm2(hw)
    rows = []
    for layer, entry, s_l in zip(arch.layers, plan.entries, sparsity):
        if not 0.0 <= s_l <= 1.0:
            raise ValueError(f"sparsity for layer {entry.layer_index} "
                             f"out of [0, 1]: {s_l}")
        cycles = _layer_cycles(layer, hw, lif)
        e_uj = _layer_energy_j(layer, entry, hw, spec, s_l) * lif.timesteps * 1e6
        rows.append(LayerCost(
            index=entry.layer_index, kind=layer.kind.value,
            params=layer.param_count,
            n_xbars=entry.n_xbars, n_pes=entry.n_pes, n_tiles=entry.n_tiles,
            area_mm2=entry.n_tiles * tile_area,
            cycles=cycles, latency_ms=cycles / hw.clock_hz * 1e3,
            energy_uj=e_uj, sparsity=float(s_l)))
    return CostReport(
        mem_params=param_count(arch),
        area_mm2=sum(r.area_mm2 for r in rows) + global_area_mm2(hw),
        latency_ms=sum(r.latency_ms for r in rows),
        energy_uj=sum(r.energy_uj for r in rows),
        area_global_mm2=global_area_mm2(hw),
        per_layer=tuple(rows))
