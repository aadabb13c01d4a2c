"""
Command implementations for the DTC toolkit CLI.

This module turns a parsed command line and the merged configuration into
calls of the numerical modules and writes each command's CSV/JSON
artifacts. Every handler returns the list of files it wrote.
"""

import json
import math
import logging
from argparse import Namespace
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import numpy as np
from pydantic import ValidationError

from dtc_toolkit.config import ConfigManager
from dtc_toolkit.core.benchmarking import (
    cz_metrics,
    cz_metrics_from_errors,
    fit_lrb,
    gate_length_study,
    simulate_rb,
)
from dtc_toolkit.core.calibration_optim import (
    CZFidelityObjective,
    Jazz2Objective,
    calibrate_vz_from_propagator,
    optimize_pulse,
)
from dtc_toolkit.core.circuit_model import (
    anharmonicities,
    build_hamiltonian,
    spectrum_scan,
    transition_frequencies,
)
from dtc_toolkit.core.clifford import CZ_GATE
from dtc_toolkit.core.gate_dynamics import evolve, gate_report
from dtc_toolkit.core.noise_channels import (
    compose,
    dephasing_time_from_echo,
    depolarizing_kraus,
    error_budget,
    flux_noise_mc,
    incoherent_error_estimate,
)
from dtc_toolkit.core.pulse_shaping import (
    apply_distortion,
    controls_from_waveform,
    equal_area_square,
    predistort,
    slepian_unit_pulse,
)
from dtc_toolkit.core.tomography import (
    fidelity_from_ptm,
    pauli_labels,
    ptm_long_form,
    ptm_of,
    readout_assignment_matrices,
    reconstruct_ptm,
    simulate_qpt,
)
from dtc_toolkit.core.toy_model import (
    derive_toy_params,
    effective_coupling,
    idle_point_estimate,
    mode_frequency_curve,
    potential_minimum,
    potential_surface,
)
from dtc_toolkit.core.zz_analysis import (
    find_idle_point,
    nearest_miss_details,
    parameter_search,
    search_map_rows,
    zz_at,
    zz_scan,
)
from dtc_toolkit.exceptions import ConfigError
from dtc_toolkit.models import (
    BasisConfig,
    CircuitParams,
    DistortionModel,
    FitResult,
    FluxNoiseParams,
    KrausSet,
    LeakageErrorModel,
    NoiseParams,
    OptimizerConfig,
    RBDataset,
    RunConfig,
    SearchSpec,
    SlepianConfig,
    Waveform,
)
from dtc_toolkit.utils.io import read_csv, write_csv, write_json

# Setup logging
logger = logging.getLogger(__name__)

GLOBAL_OPTIONS = {"config", "out", "seed", "threads", "verbose", "quiet", "log_file", "command"}

SPECTRUM_HEADER = ("phi_ex_over_2pi", "state_label", "energy_ghz", "overlap")
ZZ_HEADER = ("phi_ex_over_2pi", "zeta_over_2pi_mhz")
WAVEFORM_HEADER = ("t_ns", "amplitude")
RB_HEADER = ("variant", "m", "seq_index", "p_id", "p_x1")
TRACE_HEADER = ("epoch", "candidate", "objective")

DEFAULT_M_VALUES = [1, 20, 50, 100, 200, 300, 400, 500, 700]
DEFAULT_CLIFFORD_MODEL = {"l1": 4e-4, "l2": 1e-4, "p_d": 1e-2}
DEFAULT_CZ_MODEL = {"l1": 2.7e-4, "l2": 1e-4, "p_d": 9.3e-4}
DEFAULT_LENGTHS = [40.0, 48.0, 56.0, 64.0, 72.0, 80.0]


class RunContext:
    """
    Everything a command needs: options, configuration and output location.

    Command parameters are resolved from the built-in defaults of each
    command, then the ``commands.<name>`` block of the configuration, then
    the command-line options.
    """

    def __init__(self, args: Namespace, config: Dict[str, Any], run: RunConfig):
        """
        Initialize the context.

        Args:
            args: Parsed command-line arguments
            config: Configuration merged over the defaults
            run: Validated run configuration
        """
        self.args = args
        self.command = args.command
        self.config = config
        self.run = run
        self.seed = args.seed if args.seed is not None else run.seed
        self.threads = args.threads if args.threads is not None else run.threads
        self.out_dir = Path(args.out) if args.out is not None else Path(run.output_dir)
        self.used_params: Dict[str, Any] = {}

    def params(self, defaults: Dict[str, Any]) -> Dict[str, Any]:
        """Resolve the command's parameters and record them for the manifest."""
        merged = dict(defaults)
        merged.update(self.run.command_params(self.command))
        for key, value in vars(self.args).items():
            if key in GLOBAL_OPTIONS or value is None or value is False:
                continue
            merged[key] = value
        self.used_params = merged
        return merged

    def path(self, name: str) -> Path:
        return self.out_dir / name

    def device(self) -> CircuitParams:
        source = self.run.device if self.run.device is not None else self.config["device"]
        return ConfigManager.load_device(source)

    def basis(self) -> BasisConfig:
        return ConfigManager.load_basis(self.run.basis)

    @property
    def idle_flux(self) -> float:
        return float(self.config["idle_flux"])

    def waveform(self, params: Dict[str, Any]) -> Waveform:
        """The pulse under study: a waveform file or the scaled Slepian pulse."""
        if params.get("waveform_file"):
            return read_waveform(Path(params["waveform_file"]))
        slepian = dict(self.config["slepian"])
        if params.get("duration") is not None:
            slepian["duration"] = params["duration"]
        try:
            cfg = SlepianConfig(**slepian)
        except ValidationError as e:
            raise ConfigError(f"Invalid pulse settings: {e}", config_key="slepian", cause=e)
        amplitude = params.get("amplitude")
        if amplitude is None:
            amplitude = float(self.config["operating_flux"]) - self.idle_flux
        return slepian_unit_pulse(cfg).scaled(amplitude)

    def manifest_inputs(self) -> Dict[str, Any]:
        return {"config": self.config, "params": self.used_params}


def _model(cls, data: Dict[str, Any], key: str):
    try:
        return cls(**data)
    except (TypeError, ValidationError) as e:
        raise ConfigError(f"Invalid {key} settings: {e}", config_key=key, cause=e)


def read_waveform(path: Path) -> Waveform:
    """
    Read a waveform CSV written by pulse-gen.

    Raises:
        ConfigError: If the file is missing or malformed
    """
    try:
        columns = read_csv(path)
        times = np.array(columns["t_ns"], dtype=float)
        samples = np.array(columns["amplitude"], dtype=float)
        return Waveform(samples=samples, dt=float(times[1] - times[0]))
    except (OSError, KeyError, IndexError, ValueError) as e:
        raise ConfigError(f"Cannot read waveform: {e}", config_file=str(path), cause=e)


def read_rb_dataset(path: Path) -> RBDataset:
    """
    Read an RB dataset CSV (variant,m,seq_index,p_id,p_x1).

    Raises:
        ConfigError: If the file is missing, malformed or incomplete
    """
    try:
        columns = read_csv(path)
        m = np.array(columns["m"], dtype=int)
        seq = np.array(columns["seq_index"], dtype=int)
        m_values = np.unique(m)
        p_id = np.full((m_values.size, seq.max() + 1), np.nan)
        p_x1 = np.full_like(p_id, np.nan)
        rows = np.searchsorted(m_values, m)
        p_id[rows, seq] = np.array(columns["p_id"], dtype=float)
        p_x1[rows, seq] = np.array(columns["p_x1"], dtype=float)
        if np.isnan(p_id).any():
            raise ValueError("every length needs the same sequence indices")
        return RBDataset(
            m_values=m_values, p_id=p_id, p_x1=p_x1, variant=columns["variant"][0]
        )
    except (OSError, KeyError, IndexError, ValueError) as e:
        raise ConfigError(f"Cannot read RB dataset: {e}", config_file=str(path), cause=e)


def read_fit(path: Path) -> FitResult:
    try:
        with open(path, "r") as f:
            return FitResult(**json.load(f))
    except (OSError, json.JSONDecodeError, ValidationError) as e:
        raise ConfigError(f"Cannot read fit result: {e}", config_file=str(path), cause=e)


def _grid(params: Dict[str, Any]) -> np.ndarray:
    return np.linspace(float(params["flux_min"]), float(params["flux_max"]), int(params["points"]))


def _noise_times(config: Dict[str, Any]) -> Dict[str, Any]:
    noise = config["noise"]
    t1 = tuple(noise["t1"])
    t_phi = tuple(dephasing_time_from_echo(a, b) for a, b in zip(t1, noise["t2_echo"]))
    t_cz = noise.get("t_cz") or math.inf
    return {"t1": t1, "t_phi": t_phi, "t_cz": t_cz}


def _fit_payload(fit: FitResult) -> Dict[str, Any]:
    payload = fit.model_dump()
    payload["leakage_rate"] = fit.leakage_rate
    payload["error_rate"] = fit.error_rate
    return payload


def spectrum_command(ctx: RunContext) -> List[Path]:
    """Labeled spectrum over a flux grid plus the idle-point transition table."""
    p = ctx.params({"flux_min": 0.0, "flux_max": 0.5, "points": 51, "n_states": 12})
    params, basis = ctx.device(), ctx.basis()
    ham = build_hamiltonian(params, basis)
    spectrum = spectrum_scan(
        params, basis, _grid(p), int(p["n_states"]), hamiltonian=ham, max_workers=ctx.threads
    )
    summary = {
        "idle_flux": ctx.idle_flux,
        "transitions_ghz": transition_frequencies(ham, ctx.idle_flux),
        "anharmonicities_ghz": anharmonicities(ham, ctx.idle_flux),
        "warnings": spectrum.warnings,
    }
    return [
        write_csv(ctx.path("spectrum.csv"), SPECTRUM_HEADER, spectrum.csv_rows()),
        write_json(ctx.path("transitions.json"), summary),
    ]


def zz_scan_command(ctx: RunContext) -> List[Path]:
    p = ctx.params({"flux_min": 0.0, "flux_max": 0.5, "points": 201})
    curve = zz_scan(ctx.device(), ctx.basis(), _grid(p), max_workers=ctx.threads)
    summary = {
        "idle_point": curve.idle_point,
        "zeta_idle_mhz": float(curve.zeta[curve.idle_index]),
        "max_point": curve.max_point,
        "zeta_max_mhz": float(curve.zeta[curve.max_index]),
        "onoff_ratio": curve.onoff_ratio,
    }
    return [
        write_csv(ctx.path("zz_curve.csv"), ZZ_HEADER, curve.csv_rows()),
        write_json(ctx.path("zz_summary.json"), summary),
    ]


def idle_point_command(ctx: RunContext) -> List[Path]:
    p = ctx.params({"bracket": [0.25, 0.35], "tol": 1e-4})
    params, basis = ctx.device(), ctx.basis()
    ham = build_hamiltonian(params, basis)
    idle = find_idle_point(params, basis, tuple(p["bracket"]), float(p["tol"]), hamiltonian=ham)
    zeta_khz = zz_at(params, basis, idle, hamiltonian=ham) * 1e3
    return [write_json(ctx.path("idle_point.json"), {"idle_flux": idle, "zeta_khz": zeta_khz})]


def param_search_command(ctx: RunContext) -> List[Path]:
    p = ctx.params({})
    spec = _model(SearchSpec, {"base": ctx.device(), **p}, "param-search")
    result = parameter_search(spec, ctx.basis(), max_workers=ctx.threads)
    summary = {
        "feasible": result.feasible,
        "best_c_c": result.best_c_c,
        "candidates": [c.model_dump() for c in result.candidates],
        "nearest_misses": nearest_miss_details(result.nearest_misses),
    }
    return [
        write_csv(
            ctx.path("search_stage1.csv"),
            ("c_c_ff", "e_jc_ghz", "zeta_min_khz", "zeta_max_mhz"),
            search_map_rows(result.stage_one, 1),
        ),
        write_csv(
            ctx.path("search_stage2.csv"),
            ("e_jc_ghz", "alpha", "zeta_min_khz", "zeta_max_mhz"),
            search_map_rows(result.stage_two, 2),
        ),
        write_json(ctx.path("search_summary.json"), summary),
    ]


def pulse_gen_command(ctx: RunContext) -> List[Path]:
    p = ctx.params({"amplitude": None, "duration": None})
    waveform = ctx.waveform(p)
    square = equal_area_square(waveform)
    n_control = int(ctx.config["slepian"].get("n_control", 20))
    summary = {
        "duration_ns": waveform.duration,
        "peak": waveform.peak,
        "area": waveform.area,
        "controls": controls_from_waveform(waveform, n_control),
    }
    return [
        write_csv(ctx.path("waveform.csv"), WAVEFORM_HEADER, waveform.csv_rows()),
        write_csv(ctx.path("square.csv"), WAVEFORM_HEADER, square.csv_rows()),
        write_json(ctx.path("pulse.json"), summary),
    ]


def predistort_command(ctx: RunContext) -> List[Path]:
    p = ctx.params({"model": "short_term", "tail_ns": 200.0})
    models = ctx.config["distortion"]
    if p["model"] not in models:
        raise ConfigError(f"Unknown distortion model: {p['model']}", config_key="distortion")
    model = _model(lambda **d: DistortionModel.from_dict(d), models[p["model"]], "distortion")
    waveform = ctx.waveform(p)
    tail = float(p["tail_ns"])
    corrected = predistort(waveform, model, tail=tail)
    delivered = apply_distortion(corrected, model, tail=0.0)
    target = np.concatenate(
        [waveform.samples, np.zeros(delivered.samples.size - waveform.samples.size)]
    )
    error = float(np.max(np.abs(delivered.samples - target)) / max(waveform.peak, 1e-300))
    return [
        write_csv(ctx.path("predistorted.csv"), WAVEFORM_HEADER, corrected.csv_rows()),
        write_json(
            ctx.path("predistort.json"),
            {"model": model.to_dict(), "tail_ns": tail, "roundtrip_error": error},
        ),
    ]


def optimize_cz_command(ctx: RunContext) -> List[Path]:
    p = ctx.params({"objective": "fidelity", "k": 9})
    settings = dict(ctx.config["optimizer"])
    for key in ("epochs", "population"):
        if p.get(key) is not None:
            settings[key] = p[key]
    cfg = _model(
        OptimizerConfig, {**settings, "seed": ctx.seed, "max_workers": ctx.threads}, "optimizer"
    )
    params, basis = ctx.device(), ctx.basis()
    if p["objective"] == "jazz2":
        objective = Jazz2Objective(params, basis, ctx.idle_flux, k=int(p["k"]))
    else:
        objective = CZFidelityObjective(params, basis, ctx.idle_flux)

    result = optimize_pulse(ctx.waveform(p), objective, cfg)
    report = gate_report(objective.propagate(result.waveform))
    summary = {
        "best_objective": result.best_objective,
        "reached_target": result.reached_target,
        "best_per_epoch": result.best_per_epoch,
        "report": report,
    }
    return [
        write_csv(ctx.path("trace.csv"), TRACE_HEADER, result.csv_rows()),
        write_csv(ctx.path("best_waveform.csv"), WAVEFORM_HEADER, result.waveform.csv_rows()),
        write_json(ctx.path("optimize.json"), summary),
    ]


def gate_report_command(ctx: RunContext) -> List[Path]:
    p = ctx.params({"calibrate_vz": False})
    u = evolve(ctx.device(), ctx.basis(), ctx.waveform(p), ctx.idle_flux)
    if p["calibrate_vz"]:
        calibration = calibrate_vz_from_propagator(u, seed=ctx.seed)
        report = gate_report(u, calibration.theta1, calibration.theta2)
        report["vz_calibration"] = calibration.to_dict()
    else:
        report = gate_report(u)
    return [write_json(ctx.path("gate_report.json"), report)]


def rb_sim_command(ctx: RunContext) -> List[Path]:
    p = ctx.params(
        {
            "m_values": DEFAULT_M_VALUES,
            "n_sequences": 10,
            "shots": 0,
            "model": DEFAULT_CLIFFORD_MODEL,
            "cz": DEFAULT_CZ_MODEL,
        }
    )
    model = _model(LeakageErrorModel, p["model"], "model")
    cz = _model(LeakageErrorModel, p["cz"], "cz")
    m_values = [int(m) for m in p["m_values"]]
    kwargs = {"n_sequences": int(p["n_sequences"]), "shots": int(p["shots"]), "seed": ctx.seed}
    srb = simulate_rb(model, m_values, **kwargs)
    irb = simulate_rb(model, m_values, interleave=cz, **kwargs)
    return [
        write_csv(ctx.path("rb_srb.csv"), RB_HEADER, srb.csv_rows()),
        write_csv(ctx.path("rb_irb.csv"), RB_HEADER, irb.csv_rows()),
    ]


def lrb_fit_command(ctx: RunContext) -> List[Path]:
    p = ctx.params({"srb_file": None, "irb_file": None})
    if not p["srb_file"] and not p["irb_file"]:
        raise ConfigError("lrb-fit needs --srb-file and/or --irb-file", config_key="lrb-fit")
    fits: Dict[str, FitResult] = {}
    outputs = []
    for variant in ("srb", "irb"):
        if p[f"{variant}_file"]:
            fits[variant] = fit_lrb(read_rb_dataset(Path(p[f"{variant}_file"])))
            outputs.append(write_json(ctx.path(f"fit_{variant}.json"), _fit_payload(fits[variant])))
    if len(fits) == 2:
        metrics = cz_metrics(fits["srb"], fits["irb"])
        outputs.append(write_json(ctx.path("metrics.json"), metrics.to_dict()))
    return outputs


def cz_metrics_command(ctx: RunContext) -> List[Path]:
    p = ctx.params({"srb_fit": None, "irb_fit": None, "l1_cz": None, "r_cz": None})
    if p["l1_cz"] is not None or p["r_cz"] is not None:
        if p["l1_cz"] is None or p["r_cz"] is None:
            raise ConfigError("--l1-cz and --r-cz must be given together", config_key="cz-metrics")
        metrics = cz_metrics_from_errors(float(p["l1_cz"]), float(p["r_cz"]))
    else:
        if not (p["srb_fit"] and p["irb_fit"]):
            raise ConfigError("--srb-fit and --irb-fit must be given together", config_key="cz-metrics")
        metrics = cz_metrics(read_fit(Path(p["srb_fit"])), read_fit(Path(p["irb_fit"])))
    return [write_json(ctx.path("metrics.json"), metrics.to_dict())]


def gate_length_study_command(ctx: RunContext) -> List[Path]:
    """
    Gate-length study from measured points, a synthetic T_eff or the configured coherence.

    A ``points`` list of {length_ns, l1_cz, r_cz} in the command block takes
    precedence; otherwise each length gets r_CZ = (2/5) t / T_eff from
    ``t_eff_us`` or from the configured coherence times.
    """
    p = ctx.params({"lengths": DEFAULT_LENGTHS, "t_eff_us": None, "points": None})
    if p["points"]:
        lengths = [float(pt["length_ns"]) for pt in p["points"]]
        metrics = [cz_metrics_from_errors(float(pt["l1_cz"]), float(pt["r_cz"])) for pt in p["points"]]
    else:
        lengths = [float(t) for t in p["lengths"]]
        if p["t_eff_us"] is not None:
            errors = [0.4 * t * 1e-3 / float(p["t_eff_us"]) for t in lengths]
        else:
            times = _noise_times(ctx.config)
            errors = [
                incoherent_error_estimate(_model(NoiseParams, {**times, "gate_time": t}, "noise")).total
                for t in lengths
            ]
        metrics = [cz_metrics_from_errors(0.0, r) for r in errors]

    study = gate_length_study(lengths, metrics)
    rows = ((r.length_ns, r.r_cz, r.l1_cz, r.r_d_cz, r.outlier) for r in study.rows)
    summary = study.model_dump(exclude={"rows"})
    return [
        write_csv(
            ctx.path("gate_length.csv"), ("length_ns", "r_cz", "l1_cz", "r_d_cz", "outlier"), rows
        ),
        write_json(ctx.path("gate_length_fit.json"), summary),
    ]


def qpt_command(ctx: RunContext) -> List[Path]:
    p = ctx.params({"spam": "readout", "depolarizing": 0.0})
    spam = None
    if p["spam"] == "readout":
        readout = ctx.config["readout"]
        spam = readout_assignment_matrices(readout["q1"], readout["q2"])
    channel = KrausSet(operators=[CZ_GATE], label="cz")
    if p["depolarizing"]:
        channel = compose(depolarizing_kraus(float(p["depolarizing"])), channel)

    ptm = reconstruct_ptm(simulate_qpt(channel, spam))
    fidelity = fidelity_from_ptm(ptm, ptm_of(CZ_GATE))
    labels = pauli_labels()
    rows = ([labels[i], *ptm.matrix[i]] for i in range(16))
    summary = {
        "fidelity": fidelity,
        "trace_preservation_error": ptm.trace_preservation_error,
        "spam": p["spam"],
        "depolarizing": p["depolarizing"],
    }
    return [
        write_csv(ctx.path("ptm.csv"), ("row", *labels), rows),
        write_csv(ctx.path("ptm_long.csv"), ("row_label", "col_label", "value"), ptm_long_form(ptm)),
        write_json(ctx.path("qpt.json"), summary),
    ]


def error_budget_command(ctx: RunContext) -> List[Path]:
    p = ctx.params({"gate_time": float(ctx.config["slepian"]["duration"]), "flux_noise": False})
    noise = _model(NoiseParams, {**_noise_times(ctx.config), "gate_time": p["gate_time"]}, "noise")
    report: Dict[str, Any] = {
        "budget": error_budget(noise).model_dump(),
        "estimate": incoherent_error_estimate(noise).model_dump(),
    }
    outputs = []
    if p["flux_noise"]:
        settings = ctx.config["flux_noise"]
        fn = _model(
            FluxNoiseParams, {**settings, "seed": ctx.seed, "max_workers": ctx.threads}, "flux_noise"
        )
        result = flux_noise_mc(ctx.device(), ctx.basis(), ctx.waveform(p), fn, ctx.idle_flux)
        report["flux_noise"] = {
            "mean": result.mean,
            "std": result.std,
            "nominal_infidelity": result.nominal_infidelity,
            "offset_std": fn.offset_std,
        }
        outputs.append(
            write_csv(
                ctx.path("flux_noise.csv"),
                ("offset", "induced_error"),
                zip(result.offsets, result.errors),
            )
        )
    outputs.append(write_json(ctx.path("error_budget.json"), report))
    return outputs


def toy_model_command(ctx: RunContext) -> List[Path]:
    p = ctx.params({"alpha": None, "flux_min": 0.0, "flux_max": 0.5, "points": 101})
    if p["alpha"] is not None:
        alpha = float(p["alpha"])
        idle = idle_point_estimate(alpha)
        phi_m, residual = potential_minimum(alpha, 2.0 * math.pi * idle)
        summary = {"alpha": alpha, "idle_point": idle, "phi_m": phi_m, "residual": residual}
        return [write_json(ctx.path("toy_model.json"), summary)]

    params = ctx.device()
    toy = derive_toy_params(params, ctx.idle_flux)
    g_eff, dispersive = effective_coupling(toy)
    summary = {
        "toy": toy.to_dict(),
        "idle_point": idle_point_estimate(toy.alpha),
        "g_eff_ghz": g_eff,
        "dispersive": dispersive,
    }
    grid = _grid(p)
    surface = potential_surface(params, ctx.idle_flux, np.linspace(-math.pi, math.pi, 41))
    return [
        write_json(ctx.path("toy_model.json"), summary),
        write_csv(
            ctx.path("mode_frequency.csv"),
            ("phi_ex_over_2pi", "omega_m_ghz"),
            zip(grid, mode_frequency_curve(params, grid)),
        ),
        write_csv(
            ctx.path("potential_surface.csv"),
            ("phi_p", "phi_m", "v_exact_ghz", "v_approx_ghz", "diff_ghz"),
            surface.csv_rows(),
        ),
    ]


COMMANDS: Dict[str, Callable[[RunContext], List[Path]]] = {
    "spectrum": spectrum_command,
    "zz-scan": zz_scan_command,
    "idle-point": idle_point_command,
    "param-search": param_search_command,
    "pulse-gen": pulse_gen_command,
    "predistort": predistort_command,
    "optimize-cz": optimize_cz_command,
    "gate-report": gate_report_command,
    "rb-sim": rb_sim_command,
    "lrb-fit": lrb_fit_command,
    "cz-metrics": cz_metrics_command,
    "gate-length-study": gate_length_study_command,
    "qpt": qpt_command,
    "error-budget": error_budget_command,
    "toy-model": toy_model_command,
}


def run_command(ctx: RunContext) -> List[Path]:
    """
    Dispatch a command by name.

    Raises:
        ConfigError: If the command is unknown
    """
    handler: Optional[Callable[[RunContext], List[Path]]] = COMMANDS.get(ctx.command)
    if handler is None:
        raise ConfigError(f"Unknown command: {ctx.command}")
    logger.info(f"Running {ctx.command} into {ctx.out_dir}")
    return handler(ctx)
