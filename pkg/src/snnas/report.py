"""Structured result reports.

A report document has two top-level sections: "canonical" (deterministic;
two runs with the same config, batch, and seed produce byte-identical
canonical YAML at any worker count) and "meta" (timestamps, paths, trace).
"""

import datetime
import hashlib
import struct

import numpy as np
import yaml

from .config import config_echo

REPORT_SCHEMA_VERSION = 1


def batch_digest(batch):
    """SHA-256 over the batch dimensions and its float32 LE payload."""
    batch = np.asarray(batch, dtype="<f4")
    h = hashlib.sha256()
    h.update(struct.pack("<IIII", *batch.shape))
    h.update(np.ascontiguousarray(batch).tobytes())
    return h.hexdigest()


def _py(value):
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    return value


def _margins(constraints, report):
    return {
        "mem_params": _py(constraints.mem_params_max - report.mem_params),
        "area_mm2": _py(constraints.area_mm2_max - report.area_mm2),
        "latency_ms": _py(constraints.latency_ms_max - report.latency_ms),
        "energy_uj": _py(constraints.energy_uj_max - report.energy_uj),
    }


def _meta(cfg, extra=None):
    meta = {
        "generated_at": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "workers": cfg.workers,
        "batch_path": cfg.batch_path,
        "output_path": cfg.output_path,
    }
    if extra:
        meta.update(extra)
    return meta


def _trace_rows(trace):
    return [
        {"phase": r.phase, "index": r.index, "ia": r.ia, "ib": r.ib,
         "params": _py(r.params), "area_mm2": _py(r.area_mm2),
         "latency_ms": _py(r.latency_ms), "energy_uj": _py(r.energy_uj),
         "feasible": r.feasible, "score": _py(r.score)}
        for r in trace
    ]


def build_search_report(cfg, digest, result):
    canonical = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "kind": "search",
        "cells": {"cell_a": list(result.cell_a.codes()),
                  "cell_b": list(result.cell_b.codes())},
        "score": _py(result.score),
        "cost": result.report.as_dict(),
        "constraint_margins": _margins(cfg.constraints, result.report),
        "counters": {"evaluated": result.evaluated_count,
                     "feasible": result.feasible_count},
        "config": config_echo(cfg),
        "batch_sha256": digest,
    }
    extra = {}
    if result.trace is not None:
        extra["trace"] = _trace_rows(result.trace)
    return {"canonical": canonical, "meta": _meta(cfg, extra)}


def build_candidate_report(cfg, digest, kind, cell_a, cell_b, score, report):
    canonical = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "kind": kind,
        "cells": {"cell_a": list(cell_a.codes()),
                  "cell_b": list(cell_b.codes())},
        "score": _py(score),
        "cost": report.as_dict(),
        "constraint_margins": _margins(cfg.constraints, report),
        "config": config_echo(cfg),
        "batch_sha256": digest,
    }
    return {"canonical": canonical, "meta": _meta(cfg)}


def canonical_bytes(doc):
    """Deterministic serialization of the canonical section."""
    return yaml.safe_dump(doc["canonical"], sort_keys=True,
                          default_flow_style=False).encode("utf-8")


def report_text(doc):
    return yaml.safe_dump(doc, sort_keys=True, default_flow_style=False)


def emit_report(doc, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(report_text(doc))


def load_report(path):
    with open(path, "r", encoding="utf-8") as fh:
        return yaml.safe_load(fh)
