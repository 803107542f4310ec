# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Native kernels for the spike-simulation inner loops.

Semantics match snnas.kernels.fallback exactly (same per-element operation
order), so both backends produce bit-identical tensors.
"""

import numpy as np

cimport numpy as cnp
from libc.string cimport memcpy, memset

cnp.import_array()


def im2col(double[:, :, :, ::1] x, int kernel, int stride, int pad, out_arr=None):
    """Every output cell is written (patch value or zero), so a reused
    buffer needs no clearing between calls."""
    cdef Py_ssize_t s = x.shape[0], h = x.shape[1], w = x.shape[2], d = x.shape[3]
    cdef Py_ssize_t ho = (h + 2 * pad - kernel) // stride + 1
    cdef Py_ssize_t wo = (w + 2 * pad - kernel) // stride + 1
    if out_arr is None:
        out_arr = np.empty((s * ho * wo, kernel * kernel * d), dtype=np.float64)
    elif out_arr.shape != (s * ho * wo, kernel * kernel * d):
        raise ValueError("im2col output buffer has the wrong shape")
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t si, oy, ox, ky, kx, iy, ix, row, col
    with nogil:
        for si in range(s):
            for oy in range(ho):
                for ox in range(wo):
                    row = (si * ho + oy) * wo + ox
                    for ky in range(kernel):
                        iy = oy * stride + ky - pad
                        if iy < 0 or iy >= h:
                            memset(&out[row, ky * kernel * d], 0,
                                   kernel * d * sizeof(double))
                            continue
                        for kx in range(kernel):
                            ix = ox * stride + kx - pad
                            col = (ky * kernel + kx) * d
                            if ix < 0 or ix >= w:
                                memset(&out[row, col], 0, d * sizeof(double))
                            else:
                                memcpy(&out[row, col], &x[si, iy, ix, 0],
                                       d * sizeof(double))
    return out_arr


def lif_update(double[::1] v, double[::1] current, unsigned char[::1] fired,
               double[::1] spikes, double threshold, double reset, double leak):
    cdef Py_ssize_t n = v.shape[0]
    cdef Py_ssize_t i
    cdef double u
    with nogil:
        for i in range(n):
            u = leak * v[i] + current[i]
            if u >= threshold:
                spikes[i] = 1.0
                v[i] = reset
                fired[i] = 1
            else:
                spikes[i] = 0.0
                v[i] = u
    return None


def avgpool3x3(double[:, :, :, ::1] x):
    cdef Py_ssize_t s = x.shape[0], h = x.shape[1], w = x.shape[2], d = x.shape[3]
    out_arr = np.empty((s, h, w, d), dtype=np.float64)
    cdef double[:, :, :, ::1] out = out_arr
    cdef Py_ssize_t si, oy, ox, ky, kx, iy, ix, c
    cdef double acc
    with nogil:
        for si in range(s):
            for oy in range(h):
                for ox in range(w):
                    for c in range(d):
                        acc = 0.0
                        for ky in range(3):
                            iy = oy + ky - 1
                            if iy < 0 or iy >= h:
                                continue
                            for kx in range(3):
                                ix = ox + kx - 1
                                if ix < 0 or ix >= w:
                                    continue
                                acc += x[si, iy, ix, c]
                        out[si, oy, ox, c] = acc / 9.0
    return out_arr


def hamming_counts(unsigned char[:, ::1] bits):
    cdef Py_ssize_t s = bits.shape[0], n = bits.shape[1]
    out_arr = np.zeros((s, s), dtype=np.int64)
    cdef long long[:, ::1] out = out_arr
    cdef Py_ssize_t i, j, k
    cdef long long acc
    with nogil:
        for i in range(s):
            for j in range(i + 1, s):
                acc = 0
                for k in range(n):
                    if bits[i, k] != bits[j, k]:
                        acc += 1
                out[i, j] = acc
                out[j, i] = acc
    return out_arr
