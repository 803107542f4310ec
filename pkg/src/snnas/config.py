"""Run configuration: strict YAML loading and echoing.

Every field must be present and no unknown keys are accepted, so typos
fail loudly.  The device bits-per-cell lives in the hardware section and
feeds the quantization spec (one source of truth).
"""

from dataclasses import dataclass
from importlib import resources
from math import isinf, isnan

import yaml

from .errors import ConfigError
from .imc import HardwareConfig, UnitCosts
from .quant import ROUND_NEAREST_EVEN, QuantSpec
from .search import Constraints
from .spike import LifParams

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class RunConfig:
    constraints: Constraints
    quant: QuantSpec
    hw: HardwareConfig
    lif: LifParams
    base_channels: int
    num_classes: int
    run_seed: int
    batch_path: str = None
    output_path: str = None
    trace: bool = False
    workers: int = 0          # 0 = one worker per CPU
    beta: float = None        # None = per-layer S / N


def default_config_path():
    return str(resources.files("snnas").joinpath("configs/default.yaml"))


def _require_keys(section, data, expected):
    if not isinstance(data, dict):
        raise ConfigError(f"section '{section}' must be a mapping")
    unknown = sorted(set(data) - set(expected))
    if unknown:
        raise ConfigError(f"unknown config key '{section}.{unknown[0]}'"
                          if section else f"unknown config key '{unknown[0]}'")
    missing = sorted(set(expected) - set(data))
    if missing:
        raise ConfigError(f"missing config key '{section}.{missing[0]}'"
                          if section else f"missing config key '{missing[0]}'")


def _number(section, key, value, *, minimum=None, allow_inf=False, integer=False):
    path = f"{section}.{key}" if section else key
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"'{path}' must be a number")
    if isinstance(value, float):
        if isnan(value):
            raise ConfigError(f"'{path}' must not be NaN")
        if isinf(value) and not allow_inf:
            raise ConfigError(f"'{path}' must be finite")
        if integer and not (isinf(value) or float(value).is_integer()):
            raise ConfigError(f"'{path}' must be an integer")
    if minimum is not None and value < minimum:
        raise ConfigError(f"'{path}' must be >= {minimum}")
    return value


def _positive(section, key, value, **kw):
    v = _number(section, key, value, **kw)
    if not v > 0:
        path = f"{section}.{key}" if section else key
        raise ConfigError(f"'{path}' must be positive")
    return v


def config_from_dict(data):
    _require_keys("", data, ["schema_version", "run_seed", "base_channels",
                             "num_classes", "workers", "trace", "beta",
                             "batch_path", "output_path", "constraints",
                             "quant", "lif", "hardware"])
    if data["schema_version"] != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema_version {data['schema_version']!r}")

    cons = data["constraints"]
    _require_keys("constraints", cons,
                  ["mem_params_max", "area_mm2_max", "latency_ms_max",
                   "energy_uj_max"])
    constraints = Constraints(
        mem_params_max=_positive("constraints", "mem_params_max",
                                 cons["mem_params_max"], allow_inf=True,
                                 integer=True),
        area_mm2_max=_positive("constraints", "area_mm2_max",
                               cons["area_mm2_max"], allow_inf=True),
        latency_ms_max=_positive("constraints", "latency_ms_max",
                                 cons["latency_ms_max"], allow_inf=True),
        energy_uj_max=_positive("constraints", "energy_uj_max",
                                cons["energy_uj_max"], allow_inf=True))

    hw_data = data["hardware"]
    _require_keys("hardware", hw_data,
                  ["xbar_size", "xbars_per_pe", "pes_per_tile", "mux_size",
                   "adc_bits", "clock_hz", "gbuff_kb", "tbuff_kb", "pbuff_kb",
                   "tib_kb", "pib_kb", "vdd", "vread", "r_on_ohm", "r_off_ohm",
                   "bits_per_cell", "unit_costs"])
    uc = hw_data["unit_costs"]
    _require_keys("hardware.unit_costs", uc,
                  ["a_xbar_mm2", "a_adc_mm2", "a_buf_mm2_per_kb", "a_neur_mm2",
                   "a_pool_mm2", "a_noc_mm2", "e_xbar_row_j", "e_adc_j",
                   "e_buf_bit_j", "e_noc_hop_j", "t_xbar_read_cycles"])
    for key, value in uc.items():
        _positive("hardware.unit_costs", key, value)
    for key in ("xbar_size", "xbars_per_pe", "pes_per_tile", "mux_size",
                "adc_bits", "bits_per_cell"):
        _positive("hardware", key, hw_data[key], integer=True)
    for key in ("clock_hz", "gbuff_kb", "tbuff_kb", "pbuff_kb", "tib_kb",
                "pib_kb", "vdd", "vread", "r_on_ohm", "r_off_ohm"):
        _positive("hardware", key, hw_data[key])
    try:
        hw = HardwareConfig(
            xbar_size=int(hw_data["xbar_size"]),
            xbars_per_pe=int(hw_data["xbars_per_pe"]),
            pes_per_tile=int(hw_data["pes_per_tile"]),
            mux_size=int(hw_data["mux_size"]),
            adc_bits=int(hw_data["adc_bits"]),
            clock_hz=float(hw_data["clock_hz"]),
            gbuff_kb=float(hw_data["gbuff_kb"]),
            tbuff_kb=float(hw_data["tbuff_kb"]),
            pbuff_kb=float(hw_data["pbuff_kb"]),
            tib_kb=float(hw_data["tib_kb"]),
            pib_kb=float(hw_data["pib_kb"]),
            vdd=float(hw_data["vdd"]),
            vread=float(hw_data["vread"]),
            r_on_ohm=float(hw_data["r_on_ohm"]),
            r_off_ohm=float(hw_data["r_off_ohm"]),
            bits_per_cell=int(hw_data["bits_per_cell"]),
            unit=UnitCosts(**{k: float(v) for k, v in uc.items()}))
    except ValueError as exc:
        raise ConfigError(f"hardware: {exc}") from None

    q = data["quant"]
    _require_keys("quant", q, ["bit_w", "rounding", "frac_bits"])
    bit_w = int(_number("quant", "bit_w", q["bit_w"], integer=True))
    if not 4 <= bit_w <= 32:
        raise ConfigError("'quant.bit_w' must be in 4..32")
    if hw.bits_per_cell > bit_w:
        raise ConfigError("bit_d exceeds bit_w "
                          f"(hardware.bits_per_cell={hw.bits_per_cell}, "
                          f"quant.bit_w={bit_w})")
    if q["rounding"] != ROUND_NEAREST_EVEN:
        raise ConfigError(f"'quant.rounding' must be '{ROUND_NEAREST_EVEN}'")
    frac_bits = q["frac_bits"]
    if frac_bits is not None:
        frac_bits = int(_number("quant", "frac_bits", frac_bits,
                                minimum=0, integer=True))
        if frac_bits >= bit_w:
            raise ConfigError("'quant.frac_bits' must be < bit_w")
    quant = QuantSpec(bit_w=bit_w, bit_d=hw.bits_per_cell,
                      rounding=q["rounding"], frac_bits=frac_bits)

    lif_data = data["lif"]
    _require_keys("lif", lif_data, ["v_threshold", "v_reset", "leak",
                                    "timesteps"])
    try:
        lif = LifParams(
            v_threshold=float(_number("lif", "v_threshold",
                                      lif_data["v_threshold"])),
            v_reset=float(_number("lif", "v_reset", lif_data["v_reset"])),
            leak=float(_positive("lif", "leak", lif_data["leak"])),
            timesteps=int(_positive("lif", "timesteps", lif_data["timesteps"],
                                    integer=True)))
    except ValueError as exc:
        raise ConfigError(f"lif: {exc}") from None

    beta = data["beta"]
    if beta == "auto":
        beta = None
    elif beta is not None:
        beta = float(_positive("", "beta", beta))

    for key in ("batch_path", "output_path"):
        if data[key] is not None and not isinstance(data[key], str):
            raise ConfigError(f"'{key}' must be a path string or null")
    if not isinstance(data["trace"], bool):
        raise ConfigError("'trace' must be a boolean")

    return RunConfig(
        constraints=constraints, quant=quant, hw=hw, lif=lif,
        base_channels=int(_positive("", "base_channels",
                                    data["base_channels"], integer=True)),
        num_classes=int(_number("", "num_classes", data["num_classes"],
                                minimum=2, integer=True)),
        run_seed=int(_number("", "run_seed", data["run_seed"], minimum=0,
                             integer=True)),
        batch_path=data["batch_path"], output_path=data["output_path"],
        trace=data["trace"],
        workers=int(_number("", "workers", data["workers"], minimum=0,
                            integer=True)),
        beta=beta)


def load_config(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    except yaml.YAMLError as exc:
        raise ConfigError(f"invalid YAML in {path}: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("config file must contain a mapping")
    return config_from_dict(data)


def config_to_dict(cfg):
    """Full round-trippable dict (same schema the loader accepts)."""
    return {
        "schema_version": SCHEMA_VERSION,
        "run_seed": cfg.run_seed,
        "base_channels": cfg.base_channels,
        "num_classes": cfg.num_classes,
        "workers": cfg.workers,
        "trace": cfg.trace,
        "beta": "auto" if cfg.beta is None else cfg.beta,
        "batch_path": cfg.batch_path,
        "output_path": cfg.output_path,
        "constraints": {
            "mem_params_max": cfg.constraints.mem_params_max,
            "area_mm2_max": cfg.constraints.area_mm2_max,
            "latency_ms_max": cfg.constraints.latency_ms_max,
            "energy_uj_max": cfg.constraints.energy_uj_max,
        },
        "quant": {
            "bit_w": cfg.quant.bit_w,
            "rounding": cfg.quant.rounding,
            "frac_bits": cfg.quant.frac_bits,
        },
        "lif": {
            "v_threshold": cfg.lif.v_threshold,
            "v_reset": cfg.lif.v_reset,
            "leak": cfg.lif.leak,
            "timesteps": cfg.lif.timesteps,
        },
        "hardware": {
            "xbar_size": cfg.hw.xbar_size,
            "xbars_per_pe": cfg.hw.xbars_per_pe,
            "pes_per_tile": cfg.hw.pes_per_tile,
            "mux_size": cfg.hw.mux_size,
            "adc_bits": cfg.hw.adc_bits,
            "clock_hz": cfg.hw.clock_hz,
            "gbuff_kb": cfg.hw.gbuff_kb,
            "tbuff_kb": cfg.hw.tbuff_kb,
            "pbuff_kb": cfg.hw.pbuff_kb,
            "tib_kb": cfg.hw.tib_kb,
            "pib_kb": cfg.hw.pib_kb,
            "vdd": cfg.hw.vdd,
            "vread": cfg.hw.vread,
            "r_on_ohm": cfg.hw.r_on_ohm,
            "r_off_ohm": cfg.hw.r_off_ohm,
            "bits_per_cell": cfg.hw.bits_per_cell,
            "unit_costs": {
                "a_xbar_mm2": cfg.hw.unit.a_xbar_mm2,
                "a_adc_mm2": cfg.hw.unit.a_adc_mm2,
                "a_buf_mm2_per_kb": cfg.hw.unit.a_buf_mm2_per_kb,
                "a_neur_mm2": cfg.hw.unit.a_neur_mm2,
                "a_pool_mm2": cfg.hw.unit.a_pool_mm2,
                "a_noc_mm2": cfg.hw.unit.a_noc_mm2,
                "e_xbar_row_j": cfg.hw.unit.e_xbar_row_j,
                "e_adc_j": cfg.hw.unit.e_adc_j,
                "e_buf_bit_j": cfg.hw.unit.e_buf_bit_j,
                "e_noc_hop_j": cfg.hw.unit.e_noc_hop_j,
                "t_xbar_read_cycles": cfg.hw.unit.t_xbar_read_cycles,
            },
        },
    }


def config_echo(cfg):
    """Result-affecting subset echoed into the canonical report section.

    Execution details (workers, trace, paths) are excluded so reports stay
    byte-identical across parallelism degrees; the batch content is pinned
    separately by its digest.
    """
    full = config_to_dict(cfg)
    for key in ("workers", "trace", "batch_path", "output_path"):
        del full[key]
    return full
