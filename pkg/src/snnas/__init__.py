"""Training-free, hardware-constrained architecture search for spiking
networks targeting RRAM crossbar in-memory-computing accelerators.

Given a minibatch, a fixed-point precision, and four budgets (memory,
area, latency, energy), the search walks a 729-config cell space twice
and returns the highest-scoring architecture that fits every budget,
together with a full hardware cost report.
"""

import os as _os

# Pin BLAS threading before numpy loads so repeated runs (and worker
# processes) see one consistent threading configuration; candidate-level
# parallelism is provided by the search's worker pool instead.  Explicit
# environment settings are respected.
for _var in ("OPENBLAS_NUM_THREADS", "OMP_NUM_THREADS", "MKL_NUM_THREADS"):
    _os.environ.setdefault(_var, "1")
del _os, _var

from .arch import (CellConfig, LayerKind, LayerSpec, NetworkArch, Operation,
                   build_cell, build_network, enumerate_cells, param_count)
from .batchio import gen_synthetic_batch, load_batch, save_batch
from .config import RunConfig, default_config_path, load_config
from .errors import (BatchFormatError, ConfigError,
                     NoFeasibleArchitectureError, SnnasError)
from .fitness import (NEG_SENTINEL, FitnessScore, HammingMatrix,
                      fitness_score, hamming_matrix, qafe_evaluate, qafe_score)
from .imc import (CostReport, HardwareConfig, LayerMapping, MappingPlan,
                  UnitCosts, area, energy, evaluate_costs, latency, map_layer,
                  map_network)
from .quant import QuantSpec, adjustment_factor, quantize
from .report import (batch_digest, build_candidate_report, build_search_report,
                     canonical_bytes, emit_report, load_report)
from .search import (CandidateEvaluator, Constraints, EvalContext,
                     SearchResult, candidate_costs, derive_weight_seed,
                     hw_aware_search, score_candidate)
from .spike import ActivityRecord, LifParams, forward, init_weights, lif_step

__version__ = "0.1.0"
