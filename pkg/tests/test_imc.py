import numpy as np
import pytest

from oracles import placement_oracle
from snnas.arch import CellConfig, LayerKind, LayerSpec, build_network
from snnas.imc import (CostReport, HardwareConfig, UnitCosts, area, energy,
                       evaluate_costs, global_area_mm2, latency, map_layer,
                       map_network)
from snnas.quant import QuantSpec
from snnas.spike import LifParams

HW = HardwareConfig()
LIF = LifParams()


def conv(d, f, spatial=32, kernel=3, stride=1):
    return LayerSpec(LayerKind.CONV, kernel, d, f, spatial, stride, True)


def fc(d, f):
    return LayerSpec(LayerKind.FULLY_CONNECTED, 1, d, f, 1, 1, False)


def test_map_fig5_anchor_nine_crossbars():
    # 3x3 kernel, channels and filters within one crossbar, one cell per word
    plan = map_layer(conv(64, 64), HW, QuantSpec(bit_w=1, bit_d=1))
    assert plan.n_xbars == 9
    plan = map_layer(conv(16, 32), HW, QuantSpec(bit_w=1, bit_d=1))
    assert plan.n_xbars == 9


def test_map_worked_conv_example():
    plan = map_layer(conv(64, 64), HW, QuantSpec(bit_w=8, bit_d=1))
    assert plan.cols_per_filter == 8
    assert plan.col_splits == 8
    assert plan.row_splits == 1
    assert plan.n_xbars == 72
    assert plan.n_pes == 8
    assert plan.n_tiles == 1


def test_map_worked_fc_example():
    plan = map_layer(fc(256, 10), HW, QuantSpec(bit_w=8, bit_d=1))
    assert plan.row_splits == 4
    assert plan.col_splits == 2
    assert plan.n_xbars == 8


def test_map_pool_layers_use_no_crossbars():
    pool = LayerSpec(LayerKind.AVG_POOL, 3, 16, 16, 32, 1, False)
    plan = map_layer(pool, HW, QuantSpec(bit_w=8, bit_d=1))
    assert plan.n_xbars == plan.n_pes == plan.n_tiles == 0


def test_map_word_wider_than_crossbar_errors():
    with pytest.raises(ValueError, match="weight word exceeds crossbar width"):
        map_layer(conv(16, 16), HardwareConfig(xbar_size=8, mux_size=8),
                  QuantSpec(bit_w=16, bit_d=1))


def test_map_matches_placement_oracle_sample():
    rng = np.random.default_rng(4)
    for _ in range(60):
        p = int(rng.choice([1, 3]))
        d = int(rng.integers(1, 300))
        f = int(rng.integers(1, 300))
        bit_w = int(rng.choice([1, 4, 8, 16]))
        bit_d = int(rng.choice([1, 2, 4, 8]))
        x = int(rng.choice([32, 64, 128]))
        hw = HardwareConfig(xbar_size=x, mux_size=8)
        layer = (conv(d, f) if p == 3 else fc(d, f))
        got = map_layer(layer, hw, QuantSpec(bit_w=bit_w, bit_d=bit_d))
        want = placement_oracle(p, d, f, x, hw.xbars_per_pe, hw.pes_per_tile,
                                bit_w, bit_d)
        assert (got.n_xbars, got.n_pes, got.n_tiles) == want


SKIP = CellConfig.from_codes([0] * 6)
CONV_CELL = CellConfig.from_codes([1] * 6)
SPEC8 = QuantSpec(bit_w=8, bit_d=1)


def _report(arch, hw=HW, spec=SPEC8, s=0.2, lif=LIF):
    return evaluate_costs(arch, hw, spec, [s] * len(arch.layers), lif)


def test_area_empty_plan_is_global_only():
    from snnas.imc import MappingPlan
    assert area(MappingPlan(()), HW) == global_area_mm2(HW)


def test_area_monotone_in_filters():
    prev = None
    for f in (8, 16, 32, 64, 128, 256):
        plan = map_network(build_network(SKIP, SKIP, (3, 32, 32), f, 10),
                           HW, SPEC8)
        a = area(plan, HW)
        if prev is not None:
            assert a >= prev
        prev = a


def test_two_identical_layers_double_tiles():
    single = map_layer(conv(64, 64), HW, SPEC8)
    from snnas.imc import MappingPlan
    double = MappingPlan((map_layer(conv(64, 64), HW, SPEC8, 0),
                          map_layer(conv(64, 64), HW, SPEC8, 1)))
    assert double.total_tiles == 2 * single.n_tiles
    assert (area(double, HW) - global_area_mm2(HW)
            == pytest.approx(2 * (area(MappingPlan((single,)), HW)
                                  - global_area_mm2(HW))))


def test_latency_empty_network_zero():
    class Empty:
        layers = ()
    from snnas.imc import MappingPlan
    assert latency(MappingPlan(()), Empty(), HW, LIF) == 0.0


def test_latency_linear_in_timesteps():
    arch = build_network(CONV_CELL, SKIP, (3, 32, 32), 16, 10)
    plan = map_network(arch, HW, SPEC8)
    t4 = latency(plan, arch, HW, LifParams(timesteps=4))
    t8 = latency(plan, arch, HW, LifParams(timesteps=8))
    assert t8 == pytest.approx(2.0 * t4)


def test_latency_minimal_when_mux_equals_xbar():
    arch = build_network(CONV_CELL, SKIP, (3, 32, 32), 16, 10)
    lats = []
    for mux in (8, 16, 32, 64):
        hw = HardwareConfig(mux_size=mux)
        lats.append(latency(map_network(arch, hw, SPEC8), arch, hw, LIF))
    assert lats == sorted(lats, reverse=True)


def test_latency_halves_with_doubled_clock():
    arch = build_network(CONV_CELL, CONV_CELL, (3, 32, 32), 16, 10)
    r1 = _report(arch, hw=HardwareConfig(clock_hz=250e6))
    r2 = _report(arch, hw=HardwareConfig(clock_hz=500e6))
    assert r2.latency_ms == pytest.approx(r1.latency_ms / 2)
    assert r2.area_mm2 == r1.area_mm2
    assert r2.energy_uj == r1.energy_uj
    assert r2.mem_params == r1.mem_params


def test_energy_zero_sparsity_leaves_floor():
    arch = build_network(CONV_CELL, SKIP, (3, 32, 32), 16, 10)
    plan = map_network(arch, HW, SPEC8)
    zero = energy(plan, arch, HW, SPEC8, [0.0] * len(arch.layers), LIF)
    some = energy(plan, arch, HW, SPEC8, [0.5] * len(arch.layers), LIF)
    assert 0.0 < zero < some


def test_energy_crossbar_term_linear_in_sparsity():
    arch = build_network(CONV_CELL, CONV_CELL, (3, 32, 32), 16, 10)
    plan = map_network(arch, HW, SPEC8)
    n = len(arch.layers)
    e0 = energy(plan, arch, HW, SPEC8, [0.0] * n, LIF)
    e1 = energy(plan, arch, HW, SPEC8, [0.3] * n, LIF)
    e2 = energy(plan, arch, HW, SPEC8, [0.6] * n, LIF)
    assert e2 - e0 == pytest.approx(2.0 * (e1 - e0), rel=1e-12)


def test_energy_never_increases_with_denser_cells():
    arch = build_network(CONV_CELL, CONV_CELL, (3, 32, 32), 16, 10)
    s = [0.2] * len(arch.layers)
    prev = None
    for bit_d in (1, 2, 4, 8):
        spec = QuantSpec(bit_w=8, bit_d=bit_d)
        plan = map_network(arch, HW, spec)
        e = energy(plan, arch, HW, spec, s, LIF)
        if prev is not None:
            assert e <= prev
        prev = e


def test_energy_monotone_in_crossbar_count():
    s = [0.2]
    prev = None
    from snnas.imc import MappingPlan

    class One:
        def __init__(self, layer):
            self.layers = (layer,)
    for f in (8, 32, 64, 128, 256):
        layer = conv(16, f)
        plan = MappingPlan((map_layer(layer, HW, SPEC8),))
        e = energy(plan, One(layer), HW, SPEC8, s, LIF)
        if prev is not None:
            assert e >= prev
        prev = e


def test_energy_rejects_bad_sparsity():
    arch = build_network(SKIP, SKIP, (3, 32, 32), 8, 10)
    plan = map_network(arch, HW, SPEC8)
    with pytest.raises(ValueError, match="sparsity"):
        energy(plan, arch, HW, SPEC8, [1.5] * len(arch.layers), LIF)


def test_evaluate_costs_totals_match_breakdown():
    arch = build_network(CONV_CELL, CellConfig.from_codes([2, 1, 0, 2, 1, 0]),
                         (3, 32, 32), 16, 10)
    rep = _report(arch)
    assert isinstance(rep, CostReport)
    assert rep.area_mm2 == pytest.approx(
        sum(r.area_mm2 for r in rep.per_layer) + rep.area_global_mm2)
    assert rep.latency_ms == pytest.approx(sum(r.latency_ms for r in rep.per_layer))
    assert rep.energy_uj == pytest.approx(sum(r.energy_uj for r in rep.per_layer))
    assert rep.mem_params == sum(r.params for r in rep.per_layer)


def test_paper_regime_budgets():
    # a ~1.9M-parameter network must report inside the default budgets
    arch = build_network(CONV_CELL, CONV_CELL, (3, 32, 32), 73, 100)
    rep = _report(arch)
    assert 1.8e6 < rep.mem_params < 2.0e6
    assert rep.mem_params <= 10_000_000
    assert rep.area_mm2 <= 1000.0
    assert rep.latency_ms <= 500.0
    assert rep.energy_uj <= 1000.0


def test_hw_config_validation():
    with pytest.raises(ValueError, match="mux_size must divide"):
        HardwareConfig(xbar_size=64, mux_size=6)
    with pytest.raises(ValueError):
        HardwareConfig(xbar_size=0)
    with pytest.raises(ValueError):
        UnitCosts(a_xbar_mm2=0.0)
