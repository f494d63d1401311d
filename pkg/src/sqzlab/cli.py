"""Command line front end running reproducible numerical experiments.

Usage::

    sqzlab list
    sqzlab run --config cfg.json [--set key=value ...] [--out DIR]

A config file is a JSON object with keys ``experiment``, ``parameters``,
``seed``, ``output_path``, and ``output_format`` (csv or json).  Unknown
keys anywhere are rejected.  Stochastic experiments require an integer
seed, and a rerun of the same config writes byte-identical output files.
Every run also writes a ``manifest.json`` recording the experiment name,
the fully resolved parameters, the seed, the package version, and the
output file names.

Exit codes: 0 success, 2 config error, 3 validation error from a model
precondition, 4 unexpected runtime failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any, Callable, Mapping

import numpy as np

from . import __version__
from .budget import (
    FilterCavityParams,
    IfoConfig,
    crossover_frequency,
    quantum_noise_budget,
    snr_equivalent_power_gain,
)
from .decoherence import (
    PhaseNoise,
    SqueezeMeasurement,
    fit_loss_phase,
    forward_model,
)
from .detection import (
    DetectorParams,
    LightSource,
    MeasurementWindowing,
    add_signal_modulation,
    bhd_series,
    fano_factor,
    mean_photons_per_window,
    sample_photon_record,
    welch_psd,
)
from .gaussian import SqueezeSetting, db_from_variance, squeeze, vacuum
from .io import write_csv, write_json
from .opo import OpoParams, opo_spectrum, parametric_gain, pump_ratio_from_gain

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_VALIDATION = 3
EXIT_RUNTIME = 4

_TOP_LEVEL_KEYS = {"experiment", "parameters", "seed", "output_path", "output_format"}
_REQUIRED = object()
_BUNDLED_DATASET = "data/synthetic_loss_sweep.json"


class ConfigError(Exception):
    """Raised for config-file or override problems (exit code 2)."""


@dataclass(frozen=True)
class Param:
    kind: str
    default: Any = _REQUIRED
    help: str = ""


@dataclass(frozen=True)
class ExperimentOutcome:
    metadata: dict
    columns: list
    rows: list
    result: dict | None = None


@dataclass(frozen=True)
class Experiment:
    summary: str
    stochastic: bool
    params: dict[str, Param]
    run: Callable[[dict, int | None], ExperimentOutcome]


# ---------------------------------------------------------------------------
# Shared helpers
# ---------------------------------------------------------------------------


def _state_from_db(squeeze_db: float, angle: float):
    """Squeezed vacuum with the given positive dB magnitude at ``angle``."""
    if not np.isfinite(squeeze_db) or squeeze_db < 0.0:
        raise ValueError("squeeze_db must be finite and >= 0 (0 means coherent)")
    r = squeeze_db * np.log(10.0) / 20.0
    return squeeze(vacuum(), SqueezeSetting(r, angle))


def _frequency_grid(params: Mapping[str, Any]) -> np.ndarray:
    start = params["frequency_start_hz"]
    stop = params["frequency_stop_hz"]
    points = params["frequency_points"]
    if points < 2:
        raise ValueError("frequency_points must be at least 2")
    if not 0.0 < start < stop:
        raise ValueError("need 0 < frequency_start_hz < frequency_stop_hz")
    if params["log_spacing"]:
        return np.geomspace(start, stop, points)
    return np.linspace(start, stop, points)


def _child_seeds(seed: int, count: int) -> list[int]:
    """Independent substream seeds derived from the master seed."""
    children = np.random.SeedSequence(seed).spawn(count)
    return [int(c.generate_state(1, dtype=np.uint64)[0]) for c in children]


# ---------------------------------------------------------------------------
# Experiment runners
# ---------------------------------------------------------------------------


def _run_opo_spectrum(params: dict, seed: int | None) -> ExperimentOutcome:
    if params["pump_ratio"] is not None:
        pump = params["pump_ratio"]
    elif params["gain"] is not None:
        pump = pump_ratio_from_gain(params["gain"])
    else:
        raise ValueError("set either gain or pump_ratio")
    cavity = OpoParams(pump, params["escape_efficiency"], params["half_linewidth_hz"])
    rows = []
    for f in _frequency_grid(params):
        point = opo_spectrum(cavity, float(f))
        rows.append(
            (
                point.frequency,
                point.v_squeeze,
                point.v_antisqueeze,
                db_from_variance(point.v_squeeze),
                db_from_variance(point.v_antisqueeze),
            )
        )
    metadata = {
        "pump_ratio": pump,
        "parametric_gain": parametric_gain(pump),
        "escape_efficiency": params["escape_efficiency"],
        "half_linewidth_hz": params["half_linewidth_hz"],
    }
    columns = [
        "frequency_hz",
        "v_squeeze",
        "v_antisqueeze",
        "squeeze_db",
        "antisqueeze_db",
    ]
    return ExperimentOutcome(metadata, columns, rows)


def _run_decohere(params: dict, seed: int | None) -> ExperimentOutcome:
    noise = PhaseNoise.from_degrees(params["phase_noise_deg"])
    rows = []
    for added in params["added_losses"]:
        if isinstance(added, bool) or not isinstance(added, (int, float)):
            raise ValueError("added_losses must contain numbers")
        s_db, a_db = forward_model(
            params["gain"],
            params["intrinsic_loss"],
            float(added),
            noise,
            params["frequency_hz"],
            params["half_linewidth_hz"],
        )
        rows.append((float(added), s_db, a_db))
    metadata = {
        "gain": params["gain"],
        "intrinsic_loss": params["intrinsic_loss"],
        "phase_noise_deg": params["phase_noise_deg"],
    }
    return ExperimentOutcome(
        metadata, ["added_loss", "squeeze_db", "antisqueeze_db"], rows
    )


def _load_bundled_measurements() -> dict:
    text = resources.files("sqzlab").joinpath(_BUNDLED_DATASET).read_text("utf-8")
    return json.loads(text)


def _run_fit_loss(params: dict, seed: int | None) -> ExperimentOutcome:
    source = params["measurements"]
    if isinstance(source, str):
        if source != "bundled":
            raise ValueError(
                "measurements must be a list of [added_loss, squeeze_db, "
                "antisqueeze_db] triples or the string 'bundled'"
            )
        payload = _load_bundled_measurements()
        gain = payload["gain"]
        frequency = payload["frequency_hz"]
        half_linewidth = payload["half_linewidth_hz"]
        triples = payload["measurements"]
        origin = "bundled"
    else:
        gain = params["gain"]
        frequency = params["frequency_hz"]
        half_linewidth = params["half_linewidth_hz"]
        triples = source
        origin = "config"
    measurements = []
    for triple in triples:
        if not isinstance(triple, (list, tuple)) or len(triple) != 3:
            raise ValueError("each measurement must be a 3-item list")
        measurements.append(
            SqueezeMeasurement(float(triple[0]), float(triple[1]), float(triple[2]))
        )
    fixed = params["fixed_phase_noise_deg"]
    fixed_noise = None if fixed is None else PhaseNoise.from_degrees(fixed)
    fit = fit_loss_phase(
        measurements,
        gain,
        frequency,
        half_linewidth,
        fixed_phase_noise=fixed_noise,
    )
    result = {
        "intrinsic_loss": fit.intrinsic_loss,
        "phase_noise_deg": fit.phase_noise.degrees,
        "residual": fit.residual,
        "converged": fit.converged,
    }
    metadata = {
        "measurement_source": origin,
        "gain": gain,
        "n_measurements": len(measurements),
        "fit_mode": "fixed-jitter" if fixed_noise is not None else "free-jitter",
    }
    columns = ["intrinsic_loss", "phase_noise_deg", "residual", "converged"]
    rows = [tuple(result[c] for c in columns)]
    return ExperimentOutcome(metadata, columns, rows, result)


def _run_photon_record(params: dict, seed: int | None) -> ExperimentOutcome:
    state = _state_from_db(params["noise_squeeze_db"], 0.0)
    source = LightSource(
        params["wavelength_m"], params["power_w"], params["coherence_time_s"]
    )
    windowing = MeasurementWindowing(
        params["window_s"], params["window_shape"], params["n_windows"]
    )
    record = sample_photon_record(state, source, windowing, seed)
    metadata = {
        "expected_mean_count": mean_photons_per_window(source, windowing),
        "mean_count": record.mean,
        "fano_factor": fano_factor(record),
        "window_shape": windowing.shape,
    }
    rows = list(enumerate(record.counts.tolist()))
    result = {"mean_count": record.mean, "fano_factor": metadata["fano_factor"]}
    return ExperimentOutcome(metadata, ["window_index", "count"], rows, result)


def _run_bhd_psd(params: dict, seed: int | None) -> ExperimentOutcome:
    state = _state_from_db(
        params["squeeze_db"], np.deg2rad(params["squeeze_angle_deg"])
    )
    detector = DetectorParams(
        quantum_efficiency=params["quantum_efficiency"],
        dark_noise_variance=params["dark_noise_variance"],
        visibility=params["visibility"],
        balance_asymmetry=params["balance_asymmetry"],
    )
    series = bhd_series(
        state,
        np.deg2rad(params["lo_phase_deg"]),
        params["signal_to_lo_power_ratio"],
        detector,
        params["n_samples"],
        seed,
        params["sample_rate_hz"],
        params["lo_noise_variance"],
    )
    spectrum = welch_psd(series, params["resolution_bandwidth_hz"])
    rows = [
        (f, p, db_from_variance(p))
        for f, p in zip(spectrum.frequencies.tolist(), spectrum.psd.tolist())
    ]
    metadata = {
        "series_variance": float(series.samples.var()),
        "resolution_bandwidth_hz": spectrum.resolution_bandwidth,
        "n_averages": params["n_samples"]
        // int(round(params["sample_rate_hz"] / spectrum.resolution_bandwidth)),
    }
    columns = ["frequency_hz", "psd_rel_shot", "psd_db"]
    return ExperimentOutcome(metadata, columns, rows)


def _peak_snr(spectrum, signal_frequency: float) -> float:
    """Signal-bin PSD over the mean off-signal floor."""
    idx = int(np.argmin(np.abs(spectrum.frequencies - signal_frequency)))
    mask = np.ones(spectrum.psd.size, dtype=bool)
    mask[max(idx - 1, 0) : idx + 2] = False
    return float(spectrum.psd[idx] / spectrum.psd[mask].mean())


def _run_snr_equivalence(params: dict, seed: int | None) -> ExperimentOutcome:
    fs = params["sample_rate_hz"]
    rbw = params["resolution_bandwidth_hz"]
    f_signal = params["signal_frequency_hz"]
    n_segment = int(round(fs / rbw))
    bin_position = f_signal / (fs / n_segment)
    if abs(bin_position - round(bin_position)) > 1e-9:
        raise ValueError("signal_frequency_hz must sit on a spectrum bin")
    detector = DetectorParams(
        quantum_efficiency=params["quantum_efficiency"],
        visibility=params["visibility"],
    )
    squeezed = _state_from_db(params["squeeze_db"], 0.0)
    depth = params["modulation_depth"]
    seeds = _child_seeds(seed, 3)
    cases = [
        ("squeezed", squeezed, depth, seeds[0]),
        ("coherent_equal_power", vacuum(), depth, seeds[1]),
        # Doubling the carrier power scales the shot-relative modulation
        # depth by sqrt(2) while the noise floor stays at shot noise.
        ("coherent_double_power", vacuum(), depth * np.sqrt(2.0), seeds[2]),
    ]
    snr = {}
    for label, state, case_depth, case_seed in cases:
        series = bhd_series(
            state,
            0.0,
            params["signal_to_lo_power_ratio"],
            detector,
            params["n_samples"],
            case_seed,
            fs,
        )
        series = add_signal_modulation(series, f_signal, case_depth)
        snr[label] = _peak_snr(welch_psd(series, rbw), f_signal)
    result = {
        "snr_squeezed": snr["squeezed"],
        "snr_coherent_equal_power": snr["coherent_equal_power"],
        "snr_coherent_double_power": snr["coherent_double_power"],
        "improvement_over_equal_power": snr["squeezed"] / snr["coherent_equal_power"],
        "ratio_to_double_power": snr["squeezed"] / snr["coherent_double_power"],
        "equivalent_power_gain": snr_equivalent_power_gain(params["squeeze_db"]),
    }
    metadata = {
        "squeeze_db": params["squeeze_db"],
        "modulation_depth": depth,
        "signal_frequency_hz": f_signal,
    }
    columns = list(result)
    return ExperimentOutcome(metadata, columns, [tuple(result.values())], result)


def _run_noise_budget(params: dict, seed: int | None) -> ExperimentOutcome:
    half_linewidth = params["filter_cavity_half_linewidth_hz"]
    detuning = params["filter_cavity_detuning_hz"]
    if (half_linewidth is None) != (detuning is None):
        raise ValueError(
            "filter cavity needs both half linewidth and detuning, or neither"
        )
    cavity = (
        None
        if half_linewidth is None
        else FilterCavityParams(half_linewidth, detuning)
    )
    config = IfoConfig(
        arm_power=params["arm_power_w"],
        mirror_mass=params["mirror_mass_kg"],
        arm_length=params["arm_length_m"],
        wavelength=params["wavelength_m"],
        detection_efficiency=params["detection_efficiency"],
        injection_loss=params["injection_loss"],
        injected_squeeze=SqueezeSetting(
            params["squeeze_db"] * np.log(10.0) / 20.0,
            float(np.deg2rad(params["squeeze_angle_deg"])),
        ),
        filter_cavity=cavity,
        matched_rotation=params["matched_rotation"],
        sql_scale=params["sql_scale"],
    )
    curve = quantum_noise_budget(config, _frequency_grid(params))
    rows = list(
        zip(
            curve.frequencies.tolist(),
            curve.shot.tolist(),
            curve.rpn.tolist(),
            curve.total.tolist(),
            curve.sql.tolist(),
        )
    )
    metadata = {"crossover_frequency_hz": crossover_frequency(config)}
    columns = ["frequency_hz", "shot", "rpn", "total", "sql"]
    return ExperimentOutcome(metadata, columns, rows)


# ---------------------------------------------------------------------------
# Experiment registry
# ---------------------------------------------------------------------------

EXPERIMENTS: dict[str, Experiment] = {
    "opo-spectrum": Experiment(
        "squeezing and anti-squeezing spectra of a below-threshold cavity "
        "versus sideband frequency",
        False,
        {
            "gain": Param(
                "float?", 63.0, "parametric gain; ignored when pump_ratio is set"
            ),
            "pump_ratio": Param(
                "float?", None, "pump amplitude over threshold in [0, 1); overrides gain"
            ),
            "escape_efficiency": Param("float", 0.914, "output-coupler escape efficiency"),
            "half_linewidth_hz": Param("float", 1.0e7, "cavity half linewidth"),
            "frequency_start_hz": Param("float", 1.0e4, "first sideband frequency"),
            "frequency_stop_hz": Param("float", 1.0e8, "last sideband frequency"),
            "frequency_points": Param("int", 200, "number of grid points"),
            "log_spacing": Param("bool", True, "log-spaced grid if true"),
        },
        _run_opo_spectrum,
    ),
    "decohere": Experiment(
        "squeeze and anti-squeeze factors along a deliberate loss sweep, "
        "including phase jitter",
        False,
        {
            "gain": Param("float", 63.0, "parametric gain of the source"),
            "intrinsic_loss": Param("float", 0.086, "loss already in the setup"),
            "phase_noise_deg": Param("float", 0.0, "RMS quadrature jitter"),
            "added_losses": Param(
                "list", [0.0, 0.1, 0.2, 0.3, 0.4, 0.5], "added-loss sweep values"
            ),
            "frequency_hz": Param("float", 0.0, "sideband frequency"),
            "half_linewidth_hz": Param("float", 1.0e6, "cavity half linewidth"),
        },
        _run_decohere,
    ),
    "fit-loss": Experiment(
        "infer intrinsic loss and phase jitter from a measured loss sweep",
        False,
        {
            "measurements": Param(
                "list|str",
                "bundled",
                "[added_loss, squeeze_db, antisqueeze_db] triples, or 'bundled' "
                "for the packaged synthetic sweep",
            ),
            "gain": Param("float", 63.0, "parametric gain during the sweep"),
            "frequency_hz": Param("float", 0.0, "sideband frequency"),
            "half_linewidth_hz": Param("float", 1.0e6, "cavity half linewidth"),
            "fixed_phase_noise_deg": Param(
                "float?", None, "hold the jitter fixed and fit only the loss"
            ),
        },
        _run_fit_loss,
    ),
    "photon-record": Experiment(
        "per-window photon counts of a carrier with coherent or squeezed "
        "amplitude noise",
        True,
        {
            "noise_squeeze_db": Param(
                "float", 0.0, "amplitude squeezing of the noise state; 0 is coherent"
            ),
            "power_w": Param("float", _REQUIRED, "carrier optical power"),
            "wavelength_m": Param("float", 1.064e-6, "carrier wavelength"),
            "coherence_time_s": Param("float", 1.0e-2, "source coherence time"),
            "window_s": Param("float", 1.0e-4, "counting-window duration"),
            "window_shape": Param(
                "str", "rectangular", "rectangular or gaussian (metadata only)"
            ),
            "n_windows": Param("int", 100000, "number of counting windows"),
        },
        _run_photon_record,
    ),
    "bhd-psd": Experiment(
        "balanced-homodyne noise spectrum of a squeezed mode, relative to "
        "shot noise",
        True,
        {
            "squeeze_db": Param("float", 10.0, "injected squeezing magnitude"),
            "squeeze_angle_deg": Param("float", 0.0, "squeezed-axis angle"),
            "lo_phase_deg": Param("float", 0.0, "local-oscillator phase"),
            "quantum_efficiency": Param("float", 0.995, "photodiode efficiency"),
            "visibility": Param("float", 0.99, "signal/LO fringe visibility"),
            "dark_noise_variance": Param("float", 0.0, "detector dark noise"),
            "balance_asymmetry": Param("float", 0.0, "splitter deviation from 50/50"),
            "lo_noise_variance": Param(
                "float", 0.0, "classical LO intensity noise relative to shot"
            ),
            "signal_to_lo_power_ratio": Param("float", 0.005, "must stay below 0.01"),
            "sample_rate_hz": Param("float", 262144.0, "photocurrent sample rate"),
            "n_samples": Param("int", 2097152, "number of samples"),
            "resolution_bandwidth_hz": Param("float", 2048.0, "PSD bin width"),
        },
        _run_bhd_psd,
    ),
    "snr-equivalence": Experiment(
        "signal-to-noise of a modulation on a squeezed floor versus raising "
        "the carrier power",
        True,
        {
            "squeeze_db": Param(
                "float", 3.0103, "squeezing magnitude (3.0103 dB halves the variance)"
            ),
            "modulation_depth": Param("float", 0.5, "signal amplitude over shot noise"),
            "signal_frequency_hz": Param("float", 8192.0, "must sit on a PSD bin"),
            "sample_rate_hz": Param("float", 65536.0, "photocurrent sample rate"),
            "n_samples": Param("int", 1048576, "samples per case"),
            "resolution_bandwidth_hz": Param("float", 16.0, "PSD bin width"),
            "quantum_efficiency": Param("float", 1.0, "photodiode efficiency"),
            "visibility": Param("float", 1.0, "signal/LO fringe visibility"),
            "signal_to_lo_power_ratio": Param("float", 0.005, "must stay below 0.01"),
        },
        _run_snr_equivalence,
    ),
    "noise-budget": Experiment(
        "interferometer quantum noise budget with optional squeezed-light "
        "injection and input filtering",
        False,
        {
            "arm_power_w": Param("float", 1.0e6, "circulating arm power"),
            "mirror_mass_kg": Param("float", 40.0, "test-mass mirror mass"),
            "arm_length_m": Param("float", 4000.0, "arm length"),
            "wavelength_m": Param("float", 1.064e-6, "laser wavelength"),
            "detection_efficiency": Param("float", 1.0, "readout efficiency"),
            "injection_loss": Param("float", 0.0, "squeezed-path injection loss"),
            "squeeze_db": Param("float", 0.0, "injected squeezing; 0 is vacuum"),
            "squeeze_angle_deg": Param(
                "float", 90.0, "90 squeezes the shot-noise quadrature"
            ),
            "filter_cavity_half_linewidth_hz": Param(
                "float?", None, "rotation-cavity half linewidth"
            ),
            "filter_cavity_detuning_hz": Param("float?", None, "rotation-cavity detuning"),
            "matched_rotation": Param(
                "bool", False, "idealized frequency-dependent angle matching"
            ),
            "sql_scale": Param("float", 1.0, "overall envelope scale"),
            "frequency_start_hz": Param("float", 1.0, "first sideband frequency"),
            "frequency_stop_hz": Param("float", 1000.0, "last sideband frequency"),
            "frequency_points": Param("int", 120, "number of grid points"),
            "log_spacing": Param("bool", True, "log-spaced grid if true"),
        },
        _run_noise_budget,
    ),
}


# ---------------------------------------------------------------------------
# Config handling
# ---------------------------------------------------------------------------


def _load_config(path_text: str) -> dict:
    path = Path(path_text)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    try:
        config = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(config, dict):
        raise ConfigError("config root must be a JSON object")
    return config


def _apply_override(config: dict, assignment: str) -> None:
    key, sep, raw = assignment.partition("=")
    if not sep or not key:
        raise ConfigError(f"override must look like key=value, got {assignment!r}")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    node = config
    parts = key.split(".")
    for part in parts[:-1]:
        child = node.get(part)
        if child is None:
            child = {}
            node[part] = child
        if not isinstance(child, dict):
            raise ConfigError(f"cannot descend into {part!r}: not an object")
        node = child
    node[parts[-1]] = value


def _coerce(experiment: str, name: str, param: Param, value: Any) -> Any:
    def fail(expected: str):
        raise ConfigError(
            f"{experiment}: parameter {name!r} must be {expected}, "
            f"got {value!r}"
        )

    kind = param.kind
    optional = kind.endswith("?")
    if optional:
        if value is None:
            return None
        kind = kind[:-1]
    if kind == "float":
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            fail("a number")
        return float(value)
    if kind == "int":
        if isinstance(value, bool) or not isinstance(value, int):
            fail("an integer")
        return int(value)
    if kind == "bool":
        if not isinstance(value, bool):
            fail("a boolean")
        return value
    if kind == "str":
        if not isinstance(value, str):
            fail("a string")
        return value
    if kind == "list":
        if not isinstance(value, list):
            fail("a list")
        return value
    if kind == "list|str":
        if not isinstance(value, (list, str)):
            fail("a list or a string")
        return value
    raise AssertionError(f"unhandled parameter kind {param.kind!r}")


def _validate_config(config: dict) -> tuple[str, dict, int | None, str, str]:
    unknown = sorted(set(config) - _TOP_LEVEL_KEYS)
    if unknown:
        raise ConfigError(
            f"unknown top-level keys {unknown}; allowed: {sorted(_TOP_LEVEL_KEYS)}"
        )
    if "experiment" not in config:
        raise ConfigError("missing required key 'experiment'")
    name = config["experiment"]
    if name not in EXPERIMENTS:
        raise ConfigError(
            f"unknown experiment {name!r}; choose from {sorted(EXPERIMENTS)}"
        )
    experiment = EXPERIMENTS[name]
    raw = config.get("parameters", {})
    if not isinstance(raw, dict):
        raise ConfigError("'parameters' must be a JSON object")
    unknown = sorted(set(raw) - set(experiment.params))
    if unknown:
        raise ConfigError(
            f"unknown parameters for {name}: {unknown}; "
            f"allowed: {sorted(experiment.params)}"
        )
    params = {}
    for pname, param in experiment.params.items():
        if pname in raw:
            params[pname] = _coerce(name, pname, param, raw[pname])
        elif param.default is _REQUIRED:
            raise ConfigError(f"{name}: missing required parameter {pname!r}")
        else:
            params[pname] = param.default
    seed = config.get("seed")
    if seed is not None and (isinstance(seed, bool) or not isinstance(seed, int) or seed < 0):
        raise ConfigError("seed must be a non-negative integer")
    if experiment.stochastic and seed is None:
        raise ConfigError(f"experiment {name} samples noise: an integer seed is required")
    output_format = config.get("output_format", "csv")
    if output_format not in ("csv", "json"):
        raise ConfigError("output_format must be 'csv' or 'json'")
    output_path = config.get("output_path", ".")
    if not isinstance(output_path, str):
        raise ConfigError("output_path must be a string")
    return name, params, seed, output_path, output_format


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _cmd_run(args: argparse.Namespace) -> int:
    config = _load_config(args.config)
    for assignment in args.set or []:
        _apply_override(config, assignment)
    name, params, seed, output_path, output_format = _validate_config(config)
    if args.out:
        output_path = args.out
    out_dir = Path(output_path)
    out_dir.mkdir(parents=True, exist_ok=True)

    outcome = EXPERIMENTS[name].run(params, seed)
    data_name = f"{name}.{output_format}"
    if output_format == "csv":
        metadata = {
            "experiment": name,
            "seed": "none" if seed is None else seed,
            "version": __version__,
            **outcome.metadata,
        }
        write_csv(out_dir / data_name, metadata, outcome.columns, outcome.rows)
    else:
        write_json(
            out_dir / data_name,
            {
                "experiment": name,
                "seed": seed,
                "version": __version__,
                "parameters": params,
                "metadata": outcome.metadata,
                "columns": outcome.columns,
                "rows": outcome.rows,
                "result": outcome.result,
            },
        )
    manifest = {
        "experiment": name,
        "parameters": params,
        "seed": seed,
        "version": __version__,
        "outputs": [data_name],
    }
    write_json(out_dir / "manifest.json", manifest)
    print(f"wrote {out_dir / data_name} and {out_dir / 'manifest.json'}")
    return EXIT_OK


def _cmd_list() -> int:
    for name, experiment in EXPERIMENTS.items():
        seed_note = "seed required" if experiment.stochastic else "deterministic"
        print(f"{name}: {experiment.summary} [{seed_note}]")
        for pname, param in experiment.params.items():
            if param.default is _REQUIRED:
                default = "required"
            else:
                default = f"default {json.dumps(param.default)}"
            print(f"  {pname} ({param.kind}, {default}): {param.help}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sqzlab",
        description="Reproducible squeezed-light simulation experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    run_parser = sub.add_parser("run", help="run one experiment from a JSON config")
    run_parser.add_argument("--config", required=True, help="path to the JSON config")
    run_parser.add_argument(
        "--set",
        action="append",
        metavar="KEY=VALUE",
        help="override a config entry, e.g. --set parameters.gain=100 "
        "(values parse as JSON, bare words as strings)",
    )
    run_parser.add_argument(
        "--out", help="output directory (overrides output_path in the config)"
    )
    sub.add_parser("list", help="describe the available experiments")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "list":
            return _cmd_list()
        return _cmd_run(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except Exception as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
