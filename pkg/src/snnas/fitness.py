"""Hamming-kernel fitness scoring of untrained spiking networks.

For each LIF layer the per-sample activity vectors give an S x S matrix
with entries N - beta * H(b_i, b_j); the candidate's score is
log|det(sum over layers)|.  Candidates whose summed matrix is singular
(all samples indistinguishable somewhere) are rejected with a sentinel
that never wins a comparison.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .quant import quantize
from .spike import forward, init_weights

NEG_SENTINEL = float("-inf")

# Reciprocal-condition cutoff: below this the determinant is treated as
# zero relative to the matrix scale.
DET_RCOND = 1e-12


@dataclass(frozen=True)
class FitnessScore:
    value: float

    @property
    def valid(self):
        return self.value != NEG_SENTINEL


@dataclass(frozen=True)
class HammingMatrix:
    m: np.ndarray      # (S, S)
    n_neurons: int
    beta: float


def hamming_matrix(bits, beta=None):
    """Kernel matrix for one layer: m[i, j] = N - beta * H(b_i, b_j).

    beta defaults to S / N, which keeps the off-diagonal spread comparable
    across layer widths.
    """
    bits = np.asarray(bits)
    s, n = bits.shape
    if s < 2:
        raise ValueError("need at least 2 samples")
    if n < 1:
        raise ValueError("need at least 1 neuron")
    if beta is None:
        beta = s / n
    if beta <= 0:
        raise ValueError("beta must be positive")
    counts = kernels.hamming_counts(bits)
    m = float(n) - beta * counts.astype(np.float64)
    return HammingMatrix(m=m, n_neurons=n, beta=float(beta))


def fitness_score(matrices):
    """log|det| of the elementwise sum of the per-layer kernel matrices."""
    if not matrices:
        raise ValueError("no LIF layers recorded")
    k = matrices[0].m.copy()
    for hm in matrices[1:]:
        k += hm.m
    sign, logabsdet = np.linalg.slogdet(k)
    if sign == 0 or not np.isfinite(logabsdet):
        return FitnessScore(NEG_SENTINEL)
    cond = np.linalg.cond(k)
    if not np.isfinite(cond) or cond > 1.0 / DET_RCOND:
        return FitnessScore(NEG_SENTINEL)
    return FitnessScore(float(logabsdet))


def qafe_evaluate(arch, spec, batch, lif, seed, beta=None):
    """Quantization-aware evaluation pipeline.

    init weights -> quantize to the deployment format -> simulate ->
    kernel matrix per LIF layer -> score.  Returns (score, activity record)
    so cost models can reuse the measured spike rates.
    """
    weights = init_weights(arch, seed)
    if spec is not None:
        weights = [None if w is None else quantize(w, spec) for w in weights]
    record = forward(arch, weights, batch, lif)
    matrices = [hamming_matrix(record.bits[i], beta=beta)
                for i in sorted(record.bits)]
    return fitness_score(matrices), record


def qafe_score(arch, spec, batch, lif, seed, beta=None):
    score, _ = qafe_evaluate(arch, spec, batch, lif, seed, beta=beta)
    return score
