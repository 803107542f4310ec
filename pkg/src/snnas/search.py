"""Two-phase, constraint-filtered exhaustive search over the cell space.

Phase 0 sweeps cell A (with cell B mirroring it) under the memory budget
only; phase 1 freezes the phase-0 winner as cell A and sweeps cell B under
all four budgets.  The running best score starts at -1000 and candidates
must beat it strictly, so ties keep the earlier (lexicographically
smaller) config and parallel execution reproduces the sequential result
exactly.

Candidates always run their own quantized forward pass before the energy
check (the energy model consumes the measured spike rates), but fitness is
only computed for candidates that pass every budget of their phase.
"""

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import isfinite

import numpy as np

from .arch import NUM_CELL_CONFIGS, CellConfig, build_network, param_count
from .errors import NoFeasibleArchitectureError
from .fitness import FitnessScore, qafe_evaluate
from .imc import evaluate_costs, latency, map_network
from .imc import area as plan_area

INITIAL_BEST_SCORE = -1000.0


@dataclass(frozen=True)
class Constraints:
    mem_params_max: float
    area_mm2_max: float
    latency_ms_max: float
    energy_uj_max: float

    def __post_init__(self):
        for name, value in self.__dict__.items():
            if not value > 0:
                raise ValueError(f"{name} must be positive")

    @classmethod
    def unbounded(cls):
        inf = float("inf")
        return cls(inf, inf, inf, inf)


@dataclass(frozen=True)
class SearchResult:
    cell_a: CellConfig
    cell_b: CellConfig
    score: float
    report: object  # CostReport
    evaluated_count: int
    feasible_count: int
    trace: tuple = None


def derive_weight_seed(run_seed, pair_index):
    """Stable per-candidate weight seed; independent of evaluation order."""
    ss = np.random.SeedSequence([int(run_seed), int(pair_index)])
    return int(ss.generate_state(1)[0])


@dataclass(frozen=True)
class EvalContext:
    batch: np.ndarray
    hw: object
    quant: object
    lif: object
    run_seed: int
    base_channels: int
    num_classes: int
    beta: float = None  # None -> per-layer S / N


class CandidateEvaluator:
    """Caches per-candidate builds, static costs, and full evaluations.

    All results are pure functions of (context, cell pair), so the cache
    is safe to share across searches with different budgets.
    """

    def __init__(self, ctx):
        self.ctx = ctx
        s, c, h, w = ctx.batch.shape
        self.input_shape = (c, h, w)
        self._static = {}
        self._full = {}

    def _arch(self, ia, ib):
        return build_network(CellConfig.from_index(ia), CellConfig.from_index(ib),
                             self.input_shape, self.ctx.base_channels,
                             self.ctx.num_classes)

    def static_costs(self, ia, ib):
        """(params, area_mm2, latency_ms): costs that need no simulation."""
        key = (ia, ib)
        hit = self._static.get(key)
        if hit is None:
            arch = self._arch(ia, ib)
            plan = map_network(arch, self.ctx.hw, self.ctx.quant)
            hit = (param_count(arch),
                   plan_area(plan, self.ctx.hw),
                   latency(plan, arch, self.ctx.hw, self.ctx.lif))
            self._static[key] = hit
        return hit

    def full_eval(self, ia, ib):
        """(score value, CostReport) after the quantized forward pass."""
        key = (ia, ib)
        hit = self._full.get(key)
        if hit is None:
            arch = self._arch(ia, ib)
            seed = derive_weight_seed(self.ctx.run_seed,
                                      ia * NUM_CELL_CONFIGS + ib)
            score, record = qafe_evaluate(arch, self.ctx.quant, self.ctx.batch,
                                          self.ctx.lif, seed, beta=self.ctx.beta)
            report = evaluate_costs(arch, self.ctx.hw, self.ctx.quant,
                                    record.layer_sparsity(arch), self.ctx.lif)
            hit = (score.value, report)
            self._full[key] = hit
        return hit


@dataclass(frozen=True)
class CandidateRow:
    """Per-candidate outcome used for reduction, tracing, and diagnostics."""

    phase: int
    index: int          # the swept cell's lexicographic index
    ia: int
    ib: int
    params: int
    area_mm2: float = None
    latency_ms: float = None
    energy_uj: float = None
    feasible: bool = False
    score: float = None


def _eval_phase0(ev, constraints, ia):
    params, _, _ = ev.static_costs(ia, ia)
    if params > constraints.mem_params_max:
        return CandidateRow(0, ia, ia, ia, params)
    score, report = ev.full_eval(ia, ia)
    return CandidateRow(0, ia, ia, ia, params,
                        area_mm2=report.area_mm2, latency_ms=report.latency_ms,
                        energy_uj=report.energy_uj, feasible=True, score=score)


def _eval_phase1(ev, constraints, ia, ib):
    params, area_mm2, latency_ms = ev.static_costs(ia, ib)
    if (params > constraints.mem_params_max
            or area_mm2 > constraints.area_mm2_max
            or latency_ms > constraints.latency_ms_max):
        return CandidateRow(1, ib, ia, ib, params,
                            area_mm2=area_mm2, latency_ms=latency_ms)
    score, report = ev.full_eval(ia, ib)
    if report.energy_uj > constraints.energy_uj_max:
        return CandidateRow(1, ib, ia, ib, params, area_mm2=area_mm2,
                            latency_ms=latency_ms, energy_uj=report.energy_uj)
    return CandidateRow(1, ib, ia, ib, params, area_mm2=area_mm2,
                        latency_ms=latency_ms, energy_uj=report.energy_uj,
                        feasible=True, score=score)


_WORKER_EVALUATOR = None


def _init_worker(ctx):
    global _WORKER_EVALUATOR
    _WORKER_EVALUATOR = CandidateEvaluator(ctx)


def _worker_chunk(args):
    phase, constraints, ia, indices = args
    ev = _WORKER_EVALUATOR
    if phase == 0:
        return [_eval_phase0(ev, constraints, i) for i in indices]
    return [_eval_phase1(ev, constraints, ia, i) for i in indices]


def _run_phase(ev, pool, constraints, phase, ia, workers):
    indices = range(NUM_CELL_CONFIGS)
    if pool is None:
        if phase == 0:
            return [_eval_phase0(ev, constraints, i) for i in indices]
        return [_eval_phase1(ev, constraints, ia, i) for i in indices]
    chunk = max(1, NUM_CELL_CONFIGS // (workers * 8))
    tasks = [(phase, constraints, ia, list(range(lo, min(lo + chunk, NUM_CELL_CONFIGS))))
             for lo in range(0, NUM_CELL_CONFIGS, chunk)]
    rows = []
    for part in pool.map(_worker_chunk, tasks):
        rows.extend(part)
    rows.sort(key=lambda r: r.index)
    return rows


def _reduce(rows, best_score, best_index):
    """Strict-max reduction in index order; earlier candidate wins ties."""
    for row in rows:
        if row.feasible and row.score > best_score:
            best_score, best_index = row.score, row.index
    return best_score, best_index


def _diagnostics(rows):
    diag = {"candidates": len(rows)}
    for field, key in (("params", "min_mem_params"), ("area_mm2", "min_area_mm2"),
                       ("latency_ms", "min_latency_ms"), ("energy_uj", "min_energy_uj")):
        values = [getattr(r, field) for r in rows if getattr(r, field) is not None]
        diag[key] = min(values) if values else None
    return diag


def hw_aware_search(constraints, hw, spec, batch, lif, run_seed, *,
                    base_channels=16, num_classes=10, beta=None,
                    workers=1, trace=False, evaluator=None):
    """Run the full two-phase search and return the winning architecture.

    workers=0 uses one process per CPU; any degree returns the identical
    result.  An existing CandidateEvaluator may be passed to reuse its
    cache across searches that differ only in budgets.
    """
    batch = np.asarray(batch)
    if batch.ndim != 4 or batch.shape[0] < 2:
        raise ValueError("batch must be (S, C, H, W) with S >= 2")
    ctx = EvalContext(batch=batch, hw=hw, quant=spec, lif=lif,
                      run_seed=int(run_seed), base_channels=base_channels,
                      num_classes=num_classes, beta=beta)
    if evaluator is None:
        evaluator = CandidateEvaluator(ctx)
    if workers == 0:
        workers = os.cpu_count() or 1

    pool = None
    try:
        if workers > 1:
            pool = ProcessPoolExecutor(max_workers=workers,
                                       initializer=_init_worker, initargs=(ctx,))
        trace_rows = [] if trace else None

        rows0 = _run_phase(evaluator, pool, constraints, 0, None, workers)
        if trace:
            trace_rows.extend(rows0)
        evaluated = len(rows0)
        feasible = sum(r.feasible for r in rows0)
        best_score, best_ia = _reduce(rows0, INITIAL_BEST_SCORE, None)
        if best_ia is None:
            if feasible == 0:
                raise NoFeasibleArchitectureError("memory", _diagnostics(rows0))
            raise NoFeasibleArchitectureError("fitness", _diagnostics(rows0))

        rows1 = _run_phase(evaluator, pool, constraints, 1, best_ia, workers)
        if trace:
            trace_rows.extend(rows1)
        evaluated += len(rows1)
        phase1_feasible = sum(r.feasible for r in rows1)
        feasible += phase1_feasible
        if phase1_feasible == 0:
            raise NoFeasibleArchitectureError("hardware constraints",
                                              _diagnostics(rows1))
        _, best_ib = _reduce(rows1, best_score, None)
        if best_ib is None:
            # No phase-1 candidate beat the phase-0 winner, which carries
            # over with cell B = cell A but was only memory-checked.
            best_ib = best_ia
    finally:
        if pool is not None:
            pool.shutdown()

    score_value, report = evaluator.full_eval(best_ia, best_ib)
    if (report.mem_params > constraints.mem_params_max
            or report.area_mm2 > constraints.area_mm2_max
            or report.latency_ms > constraints.latency_ms_max
            or report.energy_uj > constraints.energy_uj_max):
        diag = _diagnostics(rows1)
        diag["carryover_violates_budgets"] = True
        raise NoFeasibleArchitectureError("hardware constraints", diag)
    if not isfinite(score_value):
        raise NoFeasibleArchitectureError("fitness", _diagnostics(rows1))

    return SearchResult(cell_a=CellConfig.from_index(best_ia),
                        cell_b=CellConfig.from_index(best_ib),
                        score=score_value, report=report,
                        evaluated_count=evaluated, feasible_count=feasible,
                        trace=tuple(trace_rows) if trace else None)


def score_candidate(cell_a, cell_b, hw, spec, batch, lif, run_seed, *,
                    base_channels=16, num_classes=10, beta=None,
                    evaluator=None):
    """Single-candidate pipeline shared by both phases and the CLI.

    Uses the same weight-seed derivation as the search, so scoring the
    cells a search reported reproduces its numbers exactly.
    """
    batch = np.asarray(batch)
    ctx = EvalContext(batch=batch, hw=hw, quant=spec, lif=lif,
                      run_seed=int(run_seed), base_channels=base_channels,
                      num_classes=num_classes, beta=beta)
    if evaluator is None:
        evaluator = CandidateEvaluator(ctx)
    value, report = evaluator.full_eval(cell_a.index(), cell_b.index())
    return FitnessScore(value), report


def candidate_costs(cell_a, cell_b, hw, spec, batch, lif, run_seed, *,
                    base_channels=16, num_classes=10):
    """Cost report for one candidate without any fitness scoring.

    The simulation still runs (the energy model needs the measured spike
    rates), but no kernel matrices or determinants are computed.
    """
    from .quant import quantize
    from .spike import forward, init_weights

    batch = np.asarray(batch)
    s, c, h, w = batch.shape
    arch = build_network(cell_a, cell_b, (c, h, w), base_channels, num_classes)
    seed = derive_weight_seed(run_seed,
                              cell_a.index() * NUM_CELL_CONFIGS + cell_b.index())
    weights = [None if wt is None else quantize(wt, spec)
               for wt in init_weights(arch, seed)]
    record = forward(arch, weights, batch, lif)
    return evaluate_costs(arch, hw, spec, record.layer_sparsity(arch), lif)
