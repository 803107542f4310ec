"""Binary minibatch file format.

Header (little-endian): magic "NNAS", u16 version, u32 sample count S,
u32 channels, u32 height, u32 width.  Payload: S*C*H*W float32 values,
sample-major C order.  Round-trips are byte-exact.
"""

import struct

import numpy as np

from .errors import BatchFormatError

MAGIC = b"NNAS"
VERSION = 1
_HEADER = struct.Struct("<4sHIIII")


def save_batch(path, batch):
    batch = np.asarray(batch, dtype="<f4")
    if batch.ndim != 4:
        raise BatchFormatError("batch must be (S, C, H, W)")
    s, c, h, w = batch.shape
    if s < 2:
        raise BatchFormatError("batch must contain at least 2 samples")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, VERSION, s, c, h, w))
        fh.write(np.ascontiguousarray(batch).tobytes())


def load_batch(path):
    with open(path, "rb") as fh:
        header = fh.read(_HEADER.size)
        if len(header) < _HEADER.size:
            raise BatchFormatError("truncated header")
        magic, version, s, c, h, w = _HEADER.unpack(header)
        if magic != MAGIC:
            raise BatchFormatError("bad magic")
        if version != VERSION:
            raise BatchFormatError(f"unsupported version {version}")
        if s < 2:
            raise BatchFormatError("batch must contain at least 2 samples")
        payload = fh.read()
    expected = s * c * h * w * 4
    if len(payload) < expected:
        raise BatchFormatError("truncated payload")
    if len(payload) > expected:
        raise BatchFormatError("payload larger than header declares")
    data = np.frombuffer(payload, dtype="<f4").reshape(s, c, h, w)
    return data.copy()


def gen_synthetic_batch(samples, shape, seed):
    """Deterministic pseudo-random samples in [0, 1); shape is (C, H, W)."""
    if samples < 2:
        raise BatchFormatError("batch must contain at least 2 samples")
    c, h, w = shape
    rng = np.random.default_rng(seed)
    return rng.random(size=(samples, c, h, w), dtype=np.float32)
