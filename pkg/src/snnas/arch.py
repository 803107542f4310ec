"""Cell search space and macro-network construction.

A candidate is a pair of neural cells.  Each cell is a 4-node DAG with six
edges (one per ordered node pair i < j); every edge carries one of three
operations.  A node's value is the elementwise sum of its incoming edge
outputs, so all in-cell operations preserve channel count and spatial size.
"""

import itertools
from dataclasses import dataclass
from enum import Enum, IntEnum


class Operation(IntEnum):
    SKIP_CON = 0
    CONV3X3 = 1
    AVG_POOL3X3 = 2


NUM_OPERATIONS = len(Operation)

# Edge order is the enumeration order everywhere: c01, c02, c03, c12, c13, c23.
EDGE_NODES = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
NUM_EDGES = len(EDGE_NODES)
NUM_CELL_CONFIGS = NUM_OPERATIONS ** NUM_EDGES  # 729


@dataclass(frozen=True)
class CellConfig:
    """Operations on the six edges of one cell DAG."""

    c01: Operation
    c02: Operation
    c03: Operation
    c12: Operation
    c13: Operation
    c23: Operation

    @classmethod
    def from_codes(cls, codes):
        codes = tuple(int(c) for c in codes)
        if len(codes) != NUM_EDGES:
            raise ValueError(f"expected {NUM_EDGES} edge codes, got {len(codes)}")
        return cls(*(Operation(c) for c in codes))

    @classmethod
    def from_index(cls, index):
        """Config at a given position of the lexicographic enumeration."""
        if not 0 <= index < NUM_CELL_CONFIGS:
            raise ValueError(f"cell index {index} out of range")
        codes = []
        for _ in range(NUM_EDGES):
            codes.append(index % NUM_OPERATIONS)
            index //= NUM_OPERATIONS
        return cls.from_codes(reversed(codes))

    def codes(self):
        return (int(self.c01), int(self.c02), int(self.c03),
                int(self.c12), int(self.c13), int(self.c23))

    def index(self):
        idx = 0
        for c in self.codes():
            idx = idx * NUM_OPERATIONS + c
        return idx

    def edges(self):
        """Yield ((src, dst), operation) in enumeration order."""
        return tuple(zip(EDGE_NODES, (self.c01, self.c02, self.c03,
                                      self.c12, self.c13, self.c23)))


def enumerate_cells():
    """All 729 cell configs in lexicographic order over (c01..c23)."""
    for codes in itertools.product(range(NUM_OPERATIONS), repeat=NUM_EDGES):
        yield CellConfig.from_codes(codes)


class LayerKind(Enum):
    CONV = "conv"
    AVG_POOL = "avg_pool"
    FULLY_CONNECTED = "fully_connected"


@dataclass(frozen=True)
class LayerSpec:
    """One concrete layer of the expanded network."""

    kind: LayerKind
    kernel: int
    in_channels: int
    out_channels: int
    in_spatial: int
    stride: int
    has_lif: bool

    @property
    def padding(self):
        if self.kind is LayerKind.FULLY_CONNECTED:
            return 0
        if self.kind is LayerKind.AVG_POOL and self.stride != 1:
            return 0  # global pool
        return self.kernel // 2

    @property
    def out_spatial(self):
        if self.kind is LayerKind.FULLY_CONNECTED:
            return 1
        return (self.in_spatial + 2 * self.padding - self.kernel) // self.stride + 1

    @property
    def param_count(self):
        if self.kind is LayerKind.CONV:
            return self.kernel * self.kernel * self.in_channels * self.out_channels
        if self.kind is LayerKind.FULLY_CONNECTED:
            return self.in_channels * self.out_channels
        return 0

    @property
    def neuron_count(self):
        return self.out_channels * self.out_spatial * self.out_spatial


@dataclass(frozen=True)
class NetworkArch:
    """Concrete layered network built from a pair of cells."""

    cell_a: CellConfig
    cell_b: CellConfig
    layers: tuple
    base_channels: int
    input_shape: tuple  # (channels, height, width), height == width
    num_classes: int


def build_cell(cfg, channels, spatial):
    """Expand a cell config into layer specs, one per non-identity edge."""
    if channels < 1:
        raise ValueError("channels must be >= 1")
    if spatial < 3:
        raise ValueError("spatial must be >= 3")
    layers = []
    for _, op in cfg.edges():
        if op is Operation.CONV3X3:
            layers.append(LayerSpec(LayerKind.CONV, 3, channels, channels,
                                    spatial, 1, True))
        elif op is Operation.AVG_POOL3X3:
            layers.append(LayerSpec(LayerKind.AVG_POOL, 3, channels, channels,
                                    spatial, 1, False))
    return layers


def build_network(cell_a, cell_b, input_shape, base_channels, num_classes):
    """Stem + cell A + reduction + cell B + reduction + pool + classifier.

    Width doubles at each stride-2 reduction; spatial halves.  The layer
    list is a pure function of the arguments.
    """
    in_ch, height, width = input_shape
    if height != width:
        raise ValueError("input must be square")
    if height < 8:
        raise ValueError("input spatial size must be >= 8")
    if num_classes < 2:
        raise ValueError("num_classes must be >= 2")
    if base_channels < 1:
        raise ValueError("base_channels must be >= 1")

    c = base_channels
    layers = [LayerSpec(LayerKind.CONV, 3, in_ch, c, height, 1, True)]
    layers.extend(build_cell(cell_a, c, height))

    red1 = LayerSpec(LayerKind.CONV, 3, c, 2 * c, height, 2, True)
    layers.append(red1)
    h2 = red1.out_spatial
    layers.extend(build_cell(cell_b, 2 * c, h2))

    red2 = LayerSpec(LayerKind.CONV, 3, 2 * c, 4 * c, h2, 2, True)
    layers.append(red2)
    h4 = red2.out_spatial

    layers.append(LayerSpec(LayerKind.AVG_POOL, h4, 4 * c, 4 * c, h4, h4, False))
    layers.append(LayerSpec(LayerKind.FULLY_CONNECTED, 1, 4 * c, num_classes, 1, 1, False))

    return NetworkArch(cell_a=cell_a, cell_b=cell_b, layers=tuple(layers),
                       base_channels=base_channels,
                       input_shape=(in_ch, height, width),
                       num_classes=num_classes)


def param_count(arch):
    """Total weight parameters; pools and skip connections contribute 0."""
    return sum(layer.param_count for layer in arch.layers)
