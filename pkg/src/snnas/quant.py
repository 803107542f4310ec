"""Fixed-point weight quantization and the device-precision adjustment factor."""

from dataclasses import dataclass

import numpy as np

ROUND_NEAREST_EVEN = "nearest_even"


@dataclass(frozen=True)
class QuantSpec:
    """Signed fixed-point weight format plus NVM device bits-per-cell.

    bit_w total bits hold 1 sign bit and frac_bits fractional bits
    (frac_bits defaults to bit_w - 1, i.e. values in [-1, 1)).  bit_d is
    the device precision; a weight word occupies ceil(bit_w / bit_d)
    crossbar columns.  Configs loaded from file additionally require
    bit_d <= bit_w, but the mapping model itself accepts any positive pair.
    """

    bit_w: int
    bit_d: int = 1
    rounding: str = ROUND_NEAREST_EVEN
    frac_bits: int = None

    def __post_init__(self):
        if self.bit_w < 1:
            raise ValueError("bit_w must be >= 1")
        if self.bit_d < 1:
            raise ValueError("bit_d must be >= 1")
        if self.rounding != ROUND_NEAREST_EVEN:
            raise ValueError(f"unsupported rounding mode {self.rounding!r}")
        if self.frac_bits is not None and not 0 <= self.frac_bits < self.bit_w:
            raise ValueError("frac_bits must satisfy 0 <= frac_bits < bit_w")

    @property
    def frac(self):
        return self.bit_w - 1 if self.frac_bits is None else self.frac_bits


def adjustment_factor(spec):
    """Crossbar columns per weight word: ceil(bit_w / bit_d)."""
    return -(-spec.bit_w // spec.bit_d)


def quantize(weights, spec):
    """Snap values onto the two's-complement fixed-point grid.

    Round-to-nearest-even, then saturate to the representable range
    [-2^(bit_w-1), 2^(bit_w-1)-1] / 2^frac.  Idempotent.
    """
    w = np.asarray(weights, dtype=np.float64)
    if not np.all(np.isfinite(w)):
        raise ValueError("non-finite weight")
    scale = 2.0 ** spec.frac
    qmin = -(2 ** (spec.bit_w - 1))
    qmax = 2 ** (spec.bit_w - 1) - 1
    codes = np.clip(np.rint(w * scale), qmin, qmax)
    return codes / scale
