import numpy as np
import pytest

from snnas.arch import (CellConfig, LayerKind, NUM_CELL_CONFIGS, Operation,
                        build_cell, build_network, enumerate_cells, param_count)

SKIP = CellConfig.from_codes([0] * 6)
CONV = CellConfig.from_codes([1] * 6)


def test_enumeration_order_and_cardinality():
    cells = list(enumerate_cells())
    assert len(cells) == 729
    assert cells[0].codes() == (0, 0, 0, 0, 0, 0)
    assert cells[1].codes() == (0, 0, 0, 0, 0, 1)
    assert len(set(c.codes() for c in cells)) == 729
    assert [c.codes() for c in cells] == sorted(c.codes() for c in cells)


def test_enumeration_restartable_from_index():
    cells = list(enumerate_cells())
    for i in (0, 1, 3, 242, 700, 728):
        assert CellConfig.from_index(i) == cells[i]
        assert cells[i].index() == i
    with pytest.raises(ValueError):
        CellConfig.from_index(NUM_CELL_CONFIGS)


def test_build_cell_expansion():
    assert build_cell(SKIP, 16, 32) == []
    convs = build_cell(CONV, 16, 32)
    assert len(convs) == 6
    assert all(l.kind is LayerKind.CONV and l.kernel == 3
               and l.in_channels == 16 and l.out_channels == 16
               and l.stride == 1 and l.has_lif for l in convs)
    one = build_cell(CellConfig.from_codes([1, 0, 0, 0, 0, 0]), 8, 16)
    assert len(one) == 1
    pools = build_cell(CellConfig.from_codes([2, 2, 0, 0, 0, 0]), 8, 16)
    assert len(pools) == 2
    assert all(l.kind is LayerKind.AVG_POOL and not l.has_lif for l in pools)


def test_build_network_all_skip_params():
    arch = build_network(SKIP, SKIP, (3, 32, 32), 64, 10)
    parameterized = [l for l in arch.layers if l.param_count > 0]
    assert len(parameterized) == 4  # stem, two reductions, classifier
    # hand sum: 3*3*3*64 + 3*3*64*128 + 3*3*128*256 + 256*10
    assert param_count(arch) == 1728 + 73728 + 294912 + 2560 == 372928


def test_build_network_all_conv_layer_count():
    arch = build_network(CONV, CONV, (3, 32, 32), 64, 10)
    parameterized = [l for l in arch.layers if l.param_count > 0]
    assert len(parameterized) == 4 + 12


def test_single_conv_edge_param_delta():
    base = build_network(SKIP, SKIP, (3, 32, 32), 64, 10)
    plus = build_network(CellConfig.from_codes([1, 0, 0, 0, 0, 0]), SKIP,
                         (3, 32, 32), 64, 10)
    assert param_count(plus) - param_count(base) == 3 * 3 * 64 * 64 == 36864


def test_param_count_against_dimension_oracle():
    rng = np.random.default_rng(11)
    for _ in range(25):
        a = CellConfig.from_index(int(rng.integers(729)))
        b = CellConfig.from_index(int(rng.integers(729)))
        arch = build_network(a, b, (3, 32, 32), 16, 10)
        oracle = 0
        for layer in arch.layers:
            if layer.kind is LayerKind.CONV:
                oracle += layer.kernel * layer.kernel * layer.in_channels * layer.out_channels
            elif layer.kind is LayerKind.FULLY_CONNECTED:
                oracle += layer.in_channels * layer.out_channels
        assert param_count(arch) == oracle


def test_build_network_pure_function():
    a = CellConfig.from_codes([1, 2, 0, 1, 0, 2])
    first = build_network(a, CONV, (3, 32, 32), 16, 10)
    second = build_network(a, CONV, (3, 32, 32), 16, 10)
    assert first == second
    assert first.layers == second.layers


def test_dimension_chaining():
    rng = np.random.default_rng(3)
    for _ in range(10):
        a = CellConfig.from_index(int(rng.integers(729)))
        b = CellConfig.from_index(int(rng.integers(729)))
        arch = build_network(a, b, (3, 32, 32), 8, 10)
        for prev, nxt in zip(arch.layers, arch.layers[1:]):
            assert prev.out_channels == nxt.in_channels
            assert prev.out_spatial == nxt.in_spatial


def test_spatial_bookkeeping():
    arch = build_network(SKIP, SKIP, (3, 32, 32), 8, 10)
    stem, red1, red2, gap, fc = arch.layers
    assert stem.out_spatial == 32
    assert red1.out_spatial == 16
    assert red2.out_spatial == 8
    assert gap.out_spatial == 1
    assert fc.out_spatial == 1
    assert fc.out_channels == 10


def test_build_network_validation():
    with pytest.raises(ValueError):
        build_network(SKIP, SKIP, (3, 4, 4), 8, 10)
    with pytest.raises(ValueError):
        build_network(SKIP, SKIP, (3, 32, 32), 8, 1)
    with pytest.raises(ValueError):
        build_network(SKIP, SKIP, (3, 32, 16), 8, 10)


def test_operation_codes():
    assert [op.value for op in Operation] == [0, 1, 2]
    assert Operation.SKIP_CON == 0
    assert Operation.CONV3X3 == 1
    assert Operation.AVG_POOL3X3 == 2
