"""Kernel backend selection.

The compiled extension (snnas.kernels._native) is preferred when it
imported cleanly; otherwise the numpy fallback is used.  Both produce
bit-identical results, so the choice only affects speed.  Set
SNNAS_PURE_PYTHON=1 to force the fallback, or call set_backend() to switch
at runtime (used by the benchmark and the equivalence tests).

Matrix products themselves stay in BLAS (np.dot) for both backends; the
compiled kernels cover the gather/scatter loops around them.
"""

import os

import numpy as np

from . import fallback as _fallback

try:
    from . import _native
except ImportError:
    _native = None

_backend_name = "python"
_impl = _fallback
if _native is not None and os.environ.get("SNNAS_PURE_PYTHON", "") != "1":
    _backend_name = "native"
    _impl = _native


def backend_name():
    return _backend_name


def native_available():
    return _native is not None


def set_backend(name):
    """Switch kernel backend ("native" or "python"). Returns the old name."""
    global _impl, _backend_name
    old = _backend_name
    if name == "native":
        if _native is None:
            raise RuntimeError("native kernels are not available")
        _impl, _backend_name = _native, "native"
    elif name == "python":
        _impl, _backend_name = _fallback, "python"
    else:
        raise ValueError(f"unknown backend {name!r}")
    return old


def im2col(x, kernel, stride, pad, out=None):
    x = np.ascontiguousarray(x, dtype=np.float64)
    return _impl.im2col(x, kernel, stride, pad, out)


def lif_update(v, current, fired, spikes, threshold, reset, leak):
    if _impl is _fallback:
        _fallback.lif_update(v, current, fired, spikes, threshold, reset, leak)
    else:
        _impl.lif_update(v.reshape(-1), np.ascontiguousarray(current).reshape(-1),
                         fired.reshape(-1), spikes.reshape(-1),
                         threshold, reset, leak)


def avgpool3x3(x):
    x = np.ascontiguousarray(x, dtype=np.float64)
    return _impl.avgpool3x3(x)


def hamming_counts(bits):
    bits = np.ascontiguousarray(bits, dtype=np.uint8)
    return _impl.hamming_counts(bits)
