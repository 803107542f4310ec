"""Command-line entry point.

Subcommands: search (full two-phase run), score (one candidate),
cost (cost report only, no fitness), gen-batch (synthetic minibatch).
Exit codes: 0 success, 2 no feasible architecture, 1 usage/config errors.
"""

import argparse
import sys

from .arch import CellConfig
from .batchio import gen_synthetic_batch, load_batch, save_batch
from .config import (config_from_dict, config_to_dict, default_config_path,
                     load_config)
from .errors import BatchFormatError, ConfigError, NoFeasibleArchitectureError
from .report import (batch_digest, build_candidate_report, build_search_report,
                     emit_report, report_text)
from .search import candidate_costs, hw_aware_search, score_candidate


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(1)


def _parse_cell(text, flag):
    parts = text.split(",")
    if len(parts) != 6:
        raise ConfigError(f"{flag} needs 6 comma-separated codes, got {text!r}")
    try:
        codes = [int(p) for p in parts]
        return CellConfig.from_codes(codes)
    except ValueError as exc:
        raise ConfigError(f"{flag}: {exc}") from None


def _build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH",
                        help="run configuration (defaults to the shipped config)")
    common.add_argument("--batch", metavar="PATH",
                        help="minibatch file (overrides batch_path)")
    common.add_argument("--out", metavar="PATH",
                        help="report output path (overrides output_path)")
    common.add_argument("--seed", type=int, metavar="N",
                        help="override run_seed")
    common.add_argument("--bits", type=int, metavar="N",
                        help="override weight precision bit_w")
    common.add_argument("--trace", action="store_true", default=None,
                        help="log every evaluated candidate into the report")

    parser = _Parser(prog="snnas",
                     description="Constraint-driven training-free search for "
                                 "spiking networks on crossbar hardware")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("search", parents=[common],
                   help="run the full two-phase search")
    for name, text in (("score", "score one candidate pair"),
                       ("cost", "hardware cost report only, no fitness")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--cell-a", required=True, metavar="C,C,C,C,C,C",
                       help="six edge operation codes for cell A")
        p.add_argument("--cell-b", required=True, metavar="C,C,C,C,C,C",
                       help="six edge operation codes for cell B")
    g = sub.add_parser("gen-batch", parents=[common],
                       help="write a deterministic synthetic minibatch")
    g.add_argument("--samples", type=int, default=16, metavar="S")
    g.add_argument("--shape", default="3x32x32", metavar="CxHxW")
    return parser


def _load_run_config(args):
    cfg = load_config(args.config if args.config else default_config_path())
    data = config_to_dict(cfg)
    if args.seed is not None:
        data["run_seed"] = args.seed
    if args.bits is not None:
        data["quant"]["bit_w"] = args.bits
    if args.batch is not None:
        data["batch_path"] = args.batch
    if args.out is not None:
        data["output_path"] = args.out
    if args.trace is not None:
        data["trace"] = True
    return config_from_dict(data)


def _load_run_batch(cfg):
    if not cfg.batch_path:
        raise ConfigError("no batch file given (set batch_path or pass --batch)")
    return load_batch(cfg.batch_path)


def _deliver(doc, cfg):
    if cfg.output_path:
        emit_report(doc, cfg.output_path)
        print(f"report written to {cfg.output_path}")
    else:
        print(report_text(doc), end="")


def _cmd_search(args):
    cfg = _load_run_config(args)
    batch = _load_run_batch(cfg)
    result = hw_aware_search(cfg.constraints, cfg.hw, cfg.quant, batch,
                             cfg.lif, cfg.run_seed,
                             base_channels=cfg.base_channels,
                             num_classes=cfg.num_classes, beta=cfg.beta,
                             workers=cfg.workers, trace=cfg.trace)
    doc = build_search_report(cfg, batch_digest(batch), result)
    print(f"winner: cell_a={','.join(map(str, result.cell_a.codes()))} "
          f"cell_b={','.join(map(str, result.cell_b.codes()))} "
          f"score={result.score:.6f}")
    r = result.report
    print(f"costs: {r.mem_params} params, {r.area_mm2:.3f} mm2, "
          f"{r.latency_ms:.3f} ms, {r.energy_uj:.3f} uJ "
          f"({result.evaluated_count} evaluated, {result.feasible_count} feasible)")
    _deliver(doc, cfg)
    return 0


def _cmd_candidate(args, kind):
    cfg = _load_run_config(args)
    batch = _load_run_batch(cfg)
    cell_a = _parse_cell(args.cell_a, "--cell-a")
    cell_b = _parse_cell(args.cell_b, "--cell-b")
    kwargs = dict(base_channels=cfg.base_channels, num_classes=cfg.num_classes)
    if kind == "score":
        score, report = score_candidate(cell_a, cell_b, cfg.hw, cfg.quant,
                                        batch, cfg.lif, cfg.run_seed,
                                        beta=cfg.beta, **kwargs)
        score_value = score.value
        print(f"score={score_value:.6f}")
    else:
        report = candidate_costs(cell_a, cell_b, cfg.hw, cfg.quant, batch,
                                 cfg.lif, cfg.run_seed, **kwargs)
        score_value = None
    print(f"costs: {report.mem_params} params, {report.area_mm2:.3f} mm2, "
          f"{report.latency_ms:.3f} ms, {report.energy_uj:.3f} uJ")
    doc = build_candidate_report(cfg, batch_digest(batch), kind,
                                 cell_a, cell_b, score_value, report)
    _deliver(doc, cfg)
    return 0


def _cmd_gen_batch(args):
    if not args.out:
        raise ConfigError("gen-batch requires --out")
    try:
        c, h, w = (int(p) for p in args.shape.lower().split("x"))
    except ValueError:
        raise ConfigError(f"--shape must look like 3x32x32, got {args.shape!r}")
    seed = args.seed if args.seed is not None else 0
    batch = gen_synthetic_batch(args.samples, (c, h, w), seed)
    save_batch(args.out, batch)
    print(f"wrote {args.samples} samples of shape {c}x{h}x{w} to {args.out}")
    return 0


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "search":
            return _cmd_search(args)
        if args.command == "score":
            return _cmd_candidate(args, "score")
        if args.command == "cost":
            return _cmd_candidate(args, "cost")
        if args.command == "gen-batch":
            return _cmd_gen_batch(args)
        parser.error(f"unknown command {args.command!r}")
    except NoFeasibleArchitectureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ConfigError, BatchFormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
