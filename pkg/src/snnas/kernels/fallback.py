"""Pure-numpy implementations of the hot kernels.

These mirror the native (Cython) kernels element-for-element: the same
value is produced by the same sequence of IEEE-754 operations, so results
are bit-identical across backends.  Tensors are NHWC float64; im2col rows
are ordered (sample, out_y, out_x) and columns (ky, kx, channel) so that a
(k*k*D, F) weight matrix multiplies them directly.
"""

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view


def im2col(x, kernel, stride, pad, out=None):
    """Unfold an (S, H, W, D) tensor into (S*Ho*Wo, kernel*kernel*D) patches."""
    s, h, w, d = x.shape
    if pad:
        xp = np.zeros((s, h + 2 * pad, w + 2 * pad, d), dtype=x.dtype)
        xp[:, pad:pad + h, pad:pad + w, :] = x
    else:
        xp = x
    windows = sliding_window_view(xp, (kernel, kernel), axis=(1, 2))
    windows = windows[:, ::stride, ::stride]          # (S, Ho, Wo, D, k, k)
    ho, wo = windows.shape[1], windows.shape[2]
    cols = windows.transpose(0, 1, 2, 4, 5, 3)        # -> (S, Ho, Wo, k, k, D)
    cols = np.ascontiguousarray(cols).reshape(s * ho * wo, kernel * kernel * d)
    if out is not None:
        np.copyto(out, cols)
        return out
    return cols


def lif_update(v, current, fired, spikes, threshold, reset, leak):
    """One leaky integrate-and-fire step, in place.

    v and fired are state (updated in place); spikes receives the 0/1
    output map.  All arrays share one shape.
    """
    u = leak * v
    u += current
    did = u >= threshold
    np.copyto(spikes, did)
    np.copyto(v, np.where(did, reset, u))
    np.bitwise_or(fired, did.view(np.uint8), out=fired)


def avgpool3x3(x):
    """3x3 average pool, stride 1, zero pad 1, divisor fixed at 9."""
    s, h, w, d = x.shape
    xp = np.zeros((s, h + 2, w + 2, d), dtype=x.dtype)
    xp[:, 1:1 + h, 1:1 + w, :] = x
    acc = xp[:, 0:h, 0:w, :].copy()
    for ky in range(3):
        for kx in range(3):
            if ky == 0 and kx == 0:
                continue
            acc += xp[:, ky:ky + h, kx:kx + w, :]
    return acc / 9.0


def hamming_counts(bits):
    """Pairwise Hamming distances between rows of a binary (S, N) matrix."""
    b = bits.astype(np.float64)
    ones = b.sum(axis=1)
    g = b @ b.T
    d = ones[:, None] + ones[None, :] - 2.0 * g       # exact small integers
    return d.astype(np.int64)
