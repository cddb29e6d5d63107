"""Declarative scenario runner and figure presets.

A scenario is a JSON-compatible tree with a versioned schema.  Running one
produces a deterministic CSV: full 17-significant-digit floats, comma
delimiter, LF line endings, one row per (time, sweep-value) pair ordered by
(sweep index, time index).  Re-running an identical config yields an
identical file byte for byte.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigError, NumericalError
from .measurement import (
    MeasurementBasis,
    common_basis,
    computational_basis,
    dephase,
    epm_from_propagator,
    mean_energy_change,
    tpm_from_propagator,
)
from .model import (
    BathParams,
    apply_propagator,
    build_liouvillian,
    ell_from_f,
    magnetizations,
    propagator,
    spectrum,
)
from .states import (
    CoherenceBlock,
    bell_state,
    mms_with_coherence,
    pauli_product_coherence,
    thermal_coherent_product,
)
from .thermo import average_entropy, entropy_rate

SCHEMA_VERSION = 1

STATE_KINDS = ("mms_with_coherence", "bell", "thermal_coherent_product")
BASES = ("computational", "common")
PROTOCOLS = ("TPM", "EPM")
SWEEP_PARAMETERS = ("r", "alpha", "t_f")
OUTPUT_COLUMNS = (
    "mean_dE_tpm",
    "mean_dE_epm",
    "dE_coh",
    "avg_sigma_tpm",
    "avg_sigma_epm",
    "classical_tpm",
    "classical_epm",
    "rate_tpm",
    "rate_epm",
    "gap",
    "F",
    "ell",
)


def _require(cfg: dict, key: str, where: str):
    if key not in cfg:
        raise ConfigError(f"{where}: missing required field '{key}'")
    return cfg[key]


def _as_float(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}: expected a number, got {value!r}")
    return float(value)


def _reject_unknown(cfg: dict, allowed: set, where: str):
    unknown = set(cfg) - allowed
    if unknown:
        raise ConfigError(f"{where}: unknown field(s) {sorted(unknown)}; allowed: {sorted(allowed)}")


def _beta_s_of(state_cfg: dict, model: BathParams) -> float:
    """System inverse temperature of a thermal_coherent_product descriptor."""
    if "beta_s" in state_cfg and "beta_s_scale" in state_cfg:
        raise ConfigError("initial_state: give either beta_s or beta_s_scale, not both")
    if "beta_s" in state_cfg:
        return _as_float(state_cfg["beta_s"], "initial_state.beta_s")
    if "beta_s_scale" in state_cfg:
        return _as_float(state_cfg["beta_s_scale"], "initial_state.beta_s_scale") * model.beta
    raise ConfigError("initial_state: thermal_coherent_product needs beta_s or beta_s_scale")


@dataclass(frozen=True)
class TimeGrid:
    start: float
    stop: float
    points: int
    spacing: str = "linear"

    def values(self) -> np.ndarray:
        if self.points == 1:
            return np.array([self.start])
        if self.spacing == "geometric":
            return np.geomspace(self.start, self.stop, self.points)
        return np.linspace(self.start, self.stop, self.points)

    @classmethod
    def from_dict(cls, cfg: dict) -> "TimeGrid":
        where = "time_grid"
        _reject_unknown(cfg, {"start", "stop", "points", "spacing"}, where)
        start = _as_float(_require(cfg, "start", where), f"{where}.start")
        stop = _as_float(_require(cfg, "stop", where), f"{where}.stop")
        points = _require(cfg, "points", where)
        if not isinstance(points, int) or points < 1:
            raise ConfigError(f"{where}.points: expected a positive integer, got {points!r}")
        spacing = cfg.get("spacing", "linear")
        if spacing not in ("linear", "geometric"):
            raise ConfigError(f"{where}.spacing: expected 'linear' or 'geometric', got {spacing!r}")
        if start < 0:
            raise ConfigError(f"{where}.start: times must be nonnegative, got {start}")
        if points > 1 and not start < stop:
            raise ConfigError(f"{where}: start must be < stop for a strictly increasing grid")
        if spacing == "geometric" and start <= 0:
            raise ConfigError(f"{where}.start: geometric spacing needs start > 0, got {start}")
        return cls(start=start, stop=stop, points=points, spacing=spacing)

    def to_dict(self) -> dict:
        return {"start": self.start, "stop": self.stop, "points": self.points,
                "spacing": self.spacing}


@dataclass(frozen=True)
class Sweep:
    parameter: str
    values: tuple

    @classmethod
    def from_dict(cls, cfg: dict) -> "Sweep":
        where = "sweep"
        _reject_unknown(cfg, {"parameter", "values"}, where)
        parameter = _require(cfg, "parameter", where)
        if parameter not in SWEEP_PARAMETERS:
            raise ConfigError(f"{where}.parameter: expected one of {SWEEP_PARAMETERS}, got {parameter!r}")
        raw = _require(cfg, "values", where)
        if not isinstance(raw, list) or not raw:
            raise ConfigError(f"{where}.values: expected a non-empty list of numbers")
        values = tuple(_as_float(v, f"{where}.values[{i}]") for i, v in enumerate(raw))
        return cls(parameter=parameter, values=values)

    def to_dict(self) -> dict:
        return {"parameter": self.parameter, "values": list(self.values)}


@dataclass(frozen=True)
class Scenario:
    model: BathParams
    initial_state: dict
    basis: str
    time_grid: TimeGrid | None
    sweep: Sweep | None
    protocols: tuple
    outputs: tuple

    @classmethod
    def from_dict(cls, cfg: dict) -> "Scenario":
        if not isinstance(cfg, dict):
            raise ConfigError(f"config root: expected an object, got {type(cfg).__name__}")
        allowed = {"schema_version", "model", "initial_state", "basis", "time_grid",
                   "sweep", "protocols", "outputs"}
        _reject_unknown(cfg, allowed, "config root")
        version = _require(cfg, "schema_version", "config root")
        if version != SCHEMA_VERSION:
            raise ConfigError(f"schema_version: expected {SCHEMA_VERSION}, got {version!r}")

        mcfg = _require(cfg, "model", "config root")
        _reject_unknown(mcfg, {"omega0", "A", "B", "alpha"}, "model")
        try:
            model = BathParams(
                omega0=_as_float(mcfg.get("omega0", 1.0), "model.omega0"),
                A=_as_float(_require(mcfg, "A", "model"), "model.A"),
                B=_as_float(_require(mcfg, "B", "model"), "model.B"),
                alpha=_as_float(_require(mcfg, "alpha", "model"), "model.alpha"),
            )
        except ValueError as exc:
            raise ConfigError(f"model: {exc}") from None

        state_cfg = dict(_require(cfg, "initial_state", "config root"))
        kind = _require(state_cfg, "kind", "initial_state")
        if kind not in STATE_KINDS:
            raise ConfigError(f"initial_state.kind: expected one of {STATE_KINDS}, got {kind!r}")

        basis = cfg.get("basis", "computational")
        if basis not in BASES:
            raise ConfigError(f"basis: expected one of {BASES}, got {basis!r}")

        grid = TimeGrid.from_dict(cfg["time_grid"]) if "time_grid" in cfg else None
        sweep = Sweep.from_dict(cfg["sweep"]) if cfg.get("sweep") else None

        raw_protocols = cfg.get("protocols", list(PROTOCOLS))
        if not isinstance(raw_protocols, list) or not raw_protocols:
            raise ConfigError("protocols: expected a non-empty list")
        for p in raw_protocols:
            if p not in PROTOCOLS:
                raise ConfigError(f"protocols: expected entries from {PROTOCOLS}, got {p!r}")
        protocols = tuple(dict.fromkeys(raw_protocols))

        raw_outputs = _require(cfg, "outputs", "config root")
        if not isinstance(raw_outputs, list) or not raw_outputs:
            raise ConfigError("outputs: expected a non-empty list of column names")
        for col in raw_outputs:
            if col not in OUTPUT_COLUMNS:
                raise ConfigError(f"outputs: unknown column {col!r}; known: {OUTPUT_COLUMNS}")
        outputs = tuple(dict.fromkeys(raw_outputs))

        scenario = cls(model=model, initial_state=state_cfg, basis=basis, time_grid=grid,
                       sweep=sweep, protocols=protocols, outputs=outputs)
        scenario._validate_consistency()
        return scenario

    def _validate_consistency(self):
        kind = self.initial_state["kind"]
        self._build_state(self.initial_state, self.model)  # field/domain validation

        if self.sweep is not None:
            if self.sweep.parameter == "r" and kind != "thermal_coherent_product":
                raise ConfigError("sweep.parameter 'r' needs initial_state.kind "
                                  "'thermal_coherent_product'")
            if self.sweep.parameter == "alpha":
                for i, v in enumerate(self.sweep.values):
                    if not 0.0 <= v <= 1.0:
                        raise ConfigError(f"sweep.values[{i}]: alpha must be in [0, 1], got {v}")
            if self.sweep.parameter == "r":
                bound = self._coherence_bound()
                for i, v in enumerate(self.sweep.values):
                    if not 0.0 <= v < bound:
                        raise ConfigError(
                            f"sweep.values[{i}]: r must be in [0, 1/Z) = [0, {bound:.6g}), got {v}"
                        )
            if self.sweep.parameter == "t_f":
                if self.time_grid is not None:
                    raise ConfigError("sweep over t_f replaces the time grid; omit time_grid")
                for i, v in enumerate(self.sweep.values):
                    if v < 0:
                        raise ConfigError(f"sweep.values[{i}]: t_f must be nonnegative, got {v}")
        if self.time_grid is None and (self.sweep is None or self.sweep.parameter != "t_f"):
            raise ConfigError("time_grid: required unless sweeping over t_f")

        needs_tpm = [c for c in self.outputs
                     if c.endswith("_tpm") or c == "dE_coh"]
        needs_epm = [c for c in self.outputs
                     if c.endswith("_epm") or c == "dE_coh"]
        if needs_tpm and "TPM" not in self.protocols:
            raise ConfigError(f"outputs {needs_tpm} need 'TPM' in protocols")
        if needs_epm and "EPM" not in self.protocols:
            raise ConfigError(f"outputs {needs_epm} need 'EPM' in protocols")
        if any(c.startswith("classical") for c in self.outputs) and kind != "thermal_coherent_product":
            raise ConfigError("classical_* columns need a thermal_coherent_product initial "
                              "state (they use delta_beta = beta_S - beta)")
        if any(c.startswith("rate") for c in self.outputs):
            if self.time_grid is None or self.time_grid.points < 3:
                raise ConfigError("rate_* columns need a time grid with at least 3 points")

    def _coherence_bound(self) -> float:
        beta_s = _beta_s_of(self.initial_state, self.model)
        return 1.0 / (2.0 * math.cosh(0.5 * beta_s * self.model.omega0))

    @staticmethod
    def _build_state(cfg: dict, model: BathParams, r_override: float | None = None) -> np.ndarray:
        kind = cfg["kind"]
        if kind == "bell":
            _reject_unknown(cfg, {"kind", "which"}, "initial_state")
            which = _require(cfg, "which", "initial_state")
            try:
                return bell_state(which)
            except ValueError as exc:
                raise ConfigError(f"initial_state.which: {exc}") from None
        if kind == "mms_with_coherence":
            _reject_unknown(cfg, {"kind", "c1", "pauli1", "c2", "pauli2"}, "initial_state")
            try:
                chi = pauli_product_coherence(
                    _as_float(_require(cfg, "c1", "initial_state"), "initial_state.c1"),
                    _require(cfg, "pauli1", "initial_state"),
                    _as_float(_require(cfg, "c2", "initial_state"), "initial_state.c2"),
                    _require(cfg, "pauli2", "initial_state"),
                )
                return mms_with_coherence(chi)
            except ValueError as exc:
                raise ConfigError(f"initial_state: {exc}") from None
        # thermal_coherent_product
        _reject_unknown(cfg, {"kind", "beta_s", "beta_s_scale", "r1", "theta1", "r2", "theta2"},
                        "initial_state")
        beta_s = _beta_s_of(cfg, model)
        r1 = _as_float(cfg.get("r1", 0.0), "initial_state.r1")
        r2 = _as_float(cfg.get("r2", r1), "initial_state.r2")
        if r_override is not None:
            r1 = r2 = r_override
        theta1 = _as_float(cfg.get("theta1", 0.0), "initial_state.theta1")
        theta2 = _as_float(cfg.get("theta2", 0.0), "initial_state.theta2")
        coherence = CoherenceBlock.from_polar(r1, theta1, r2, theta2)
        try:
            return thermal_coherent_product(beta_s, coherence, model.omega0)
        except ValueError as exc:
            raise ConfigError(f"initial_state: {exc}") from None

    def to_dict(self) -> dict:
        out = {
            "schema_version": SCHEMA_VERSION,
            "model": {"omega0": self.model.omega0, "A": self.model.A,
                      "B": self.model.B, "alpha": self.model.alpha},
            "initial_state": dict(self.initial_state),
            "basis": self.basis,
            "protocols": list(self.protocols),
            "outputs": list(self.outputs),
        }
        if self.time_grid is not None:
            out["time_grid"] = self.time_grid.to_dict()
        if self.sweep is not None:
            out["sweep"] = self.sweep.to_dict()
        return out


def _format_number(x: float) -> str:
    return format(float(x), ".17g")


def _sweep_points(scenario: Scenario):
    """(sweep_value | None, params, rho0, times) per sweep entry."""
    sweep = scenario.sweep
    base_times = scenario.time_grid.values() if scenario.time_grid is not None else None
    if sweep is None:
        yield None, scenario.model, Scenario._build_state(scenario.initial_state, scenario.model), base_times
        return
    for value in sweep.values:
        params = scenario.model
        r_override = None
        times = base_times
        if sweep.parameter == "alpha":
            params = BathParams(omega0=params.omega0, A=params.A, B=params.B, alpha=value)
        elif sweep.parameter == "r":
            r_override = value
        elif sweep.parameter == "t_f":
            times = np.array([value])
        rho0 = Scenario._build_state(scenario.initial_state, params, r_override=r_override)
        yield value, params, rho0, times


def _evaluate_point(scenario: Scenario, sweep_value, params: BathParams,
                    rho0: np.ndarray, times: np.ndarray) -> list:
    """Rows (list of dicts) for one sweep entry across its time grid."""
    basis = computational_basis(params) if scenario.basis == "computational" else common_basis(params)
    liou = build_liouvillian(params)
    outputs = scenario.outputs

    need_tpm = any(c in outputs for c in ("mean_dE_tpm", "dE_coh", "avg_sigma_tpm",
                                          "classical_tpm", "rate_tpm"))
    need_epm = any(c in outputs for c in ("mean_dE_epm", "dE_coh", "avg_sigma_epm",
                                          "classical_epm", "rate_epm"))
    need_sigma_tpm = any(c in outputs for c in ("avg_sigma_tpm", "rate_tpm"))
    need_sigma_epm = any(c in outputs for c in ("avg_sigma_epm", "rate_epm"))
    delta_beta = None
    if any(c.startswith("classical") for c in outputs):
        delta_beta = _beta_s_of(scenario.initial_state, params) - params.beta

    static: dict = {}
    if "gap" in outputs:
        static["gap"] = spectrum(liou).gap
    if "F" in outputs or "ell" in outputs:
        f_value = magnetizations(rho0).f
        static["F"] = f_value
        if "ell" in outputs:
            static["ell"] = ell_from_f(f_value, params)

    rows = []
    sigma_tpm, sigma_epm = [], []
    for t in times:
        try:
            phi = propagator(liou, float(t))
            row = {"t": float(t)}
            if sweep_value is not None:
                row["sweep_value"] = float(sweep_value)
            tpm_d = tpm_from_propagator(rho0, phi, basis, float(t)) if need_tpm else None
            epm_d = epm_from_propagator(rho0, phi, basis, float(t)) if need_epm else None
            mean_tpm = mean_energy_change(tpm_d) if tpm_d is not None else None
            mean_epm = mean_energy_change(epm_d) if epm_d is not None else None
            if "mean_dE_tpm" in outputs:
                row["mean_dE_tpm"] = mean_tpm
            if "mean_dE_epm" in outputs:
                row["mean_dE_epm"] = mean_epm
            if "dE_coh" in outputs:
                direct = mean_epm - mean_tpm
                chi = rho0 - dephase(rho0, basis)
                evolved = apply_propagator(phi, chi)
                via = float(sum(e * np.real(np.trace(p @ evolved))
                                for e, p in zip(basis.energies, basis.projectors)))
                if abs(direct - via) > 1e-10:
                    raise NumericalError(
                        f"coherent-gap identity violated: {direct!r} vs {via!r}"
                    )
                row["dE_coh"] = direct
            if need_sigma_tpm:
                sigma_tpm.append(average_entropy(tpm_d))
                if "avg_sigma_tpm" in outputs:
                    row["avg_sigma_tpm"] = sigma_tpm[-1]
            if need_sigma_epm:
                sigma_epm.append(average_entropy(epm_d))
                if "avg_sigma_epm" in outputs:
                    row["avg_sigma_epm"] = sigma_epm[-1]
            if "classical_tpm" in outputs:
                row["classical_tpm"] = delta_beta * mean_tpm
            if "classical_epm" in outputs:
                row["classical_epm"] = delta_beta * mean_epm
            row.update(static)
            rows.append(row)
        except NumericalError as exc:
            raise NumericalError(
                f"numerical failure at t={float(t):g}"
                + (f", sweep_value={float(sweep_value):g}" if sweep_value is not None else "")
                + f": {exc}"
            ) from exc

    if "rate_tpm" in outputs:
        for row, rate in zip(rows, entropy_rate(times, np.array(sigma_tpm))):
            row["rate_tpm"] = float(rate)
    if "rate_epm" in outputs:
        for row, rate in zip(rows, entropy_rate(times, np.array(sigma_epm))):
            row["rate_epm"] = float(rate)
    return rows


def run_scenario(scenario: Scenario, out_path, threads: int = 1) -> Path:
    """Run a scenario and write its CSV; returns the output path."""
    out_path = Path(out_path)
    points = list(_sweep_points(scenario))
    if threads > 1 and len(points) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            blocks = list(pool.map(
                lambda args: _evaluate_point(scenario, *args), points
            ))
    else:
        blocks = [_evaluate_point(scenario, *args) for args in points]

    header = ["t"] + (["sweep_value"] if scenario.sweep is not None else []) + list(scenario.outputs)
    lines = [",".join(header)]
    for block in blocks:
        for row in block:
            lines.append(",".join(_format_number(row[col]) for col in header))
    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_bytes(("\n".join(lines) + "\n").encode("ascii"))
    return out_path


def load_scenario(path) -> Scenario:
    """Parse and validate a scenario config file."""
    try:
        cfg = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON ({exc})") from None
    return Scenario.from_dict(cfg)


# ---------------------------------------------------------------------------
# Figure presets.  Bath parameters follow the reference study (A = 0.1,
# B = 0.9 in units of omega0, beta*omega0 = ln 9); grid densities (200
# geometric points per time axis, 25 linear points per coherence sweep)
# are reproduction choices documented here, not published values.
# ---------------------------------------------------------------------------

_ALPHA_PRETHERMAL = 1.0 - 1e-5
_TIME_GRID_LOG = {"start": 0.1, "stop": 1.0e6, "points": 200, "spacing": "geometric"}
_BETA_S_SCALE = 1.5


def _r_sweep_values(n: int = 25) -> list:
    beta_s = _BETA_S_SCALE * BathParams().beta
    bound = 1.0 / (2.0 * math.cosh(0.5 * beta_s))
    return [bound * k / n for k in range(n)]


def _model_cfg(alpha: float) -> dict:
    return {"omega0": 1.0, "A": 0.1, "B": 0.9, "alpha": alpha}


def _fig1_cfg(alpha: float) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "model": _model_cfg(alpha),
        "initial_state": {"kind": "mms_with_coherence", "c1": 0.2, "pauli1": "x",
                          "c2": 0.3, "pauli2": "x"},
        "basis": "computational",
        "time_grid": dict(_TIME_GRID_LOG),
        "protocols": ["TPM", "EPM"],
        "outputs": ["mean_dE_tpm", "mean_dE_epm", "dE_coh"],
    }


def _fig2_cfg(which: str) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "model": _model_cfg(_ALPHA_PRETHERMAL),
        "initial_state": {"kind": "bell", "which": which},
        "basis": "computational",
        "time_grid": dict(_TIME_GRID_LOG),
        "protocols": ["TPM", "EPM"],
        "outputs": ["mean_dE_tpm", "mean_dE_epm", "dE_coh"],
    }


def _fig3_cfg() -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "model": _model_cfg(_ALPHA_PRETHERMAL),
        "initial_state": {"kind": "thermal_coherent_product", "beta_s_scale": _BETA_S_SCALE},
        "basis": "computational",
        "time_grid": {"start": 50.0, "stop": 50.0, "points": 1, "spacing": "linear"},
        "sweep": {"parameter": "r", "values": _r_sweep_values()},
        "protocols": ["TPM", "EPM"],
        "outputs": ["avg_sigma_tpm", "avg_sigma_epm", "classical_tpm", "classical_epm"],
    }


def _fig4_cfg(basis: str) -> dict:
    cfg = _fig3_cfg()
    cfg["basis"] = basis
    cfg["outputs"] = ["mean_dE_tpm", "mean_dE_epm", "avg_sigma_tpm", "avg_sigma_epm"]
    return cfg


def _fig5_cfg() -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "model": _model_cfg(_ALPHA_PRETHERMAL),
        "initial_state": {"kind": "thermal_coherent_product", "beta_s_scale": _BETA_S_SCALE,
                          "r1": 0.1, "r2": 0.1},
        "basis": "computational",
        "time_grid": dict(_TIME_GRID_LOG),
        "protocols": ["TPM", "EPM"],
        "outputs": ["avg_sigma_tpm", "avg_sigma_epm", "rate_tpm", "rate_epm"],
    }


FIGURES = ("fig1", "fig2", "fig3", "fig4", "fig5")


def figure_presets(figure: str) -> dict:
    """Named scenario configs for one figure preset."""
    if figure == "fig1":
        return {"fig1": _fig1_cfg(_ALPHA_PRETHERMAL), "fig1_inset": _fig1_cfg(0.5)}
    if figure == "fig2":
        return {f"fig2_{w}": _fig2_cfg(w)
                for w in ("phi_plus", "phi_minus", "psi_plus", "psi_minus")}
    if figure == "fig3":
        return {"fig3": _fig3_cfg()}
    if figure == "fig4":
        return {"fig4_computational": _fig4_cfg("computational"),
                "fig4_common": _fig4_cfg("common")}
    if figure == "fig5":
        return {"fig5": _fig5_cfg()}
    raise ConfigError(f"unknown figure {figure!r}; expected one of {FIGURES}")


def reproduce(figure: str, out_dir, threads: int = 1) -> list:
    """Emit the preset config(s) and CSV(s) for one figure; returns CSV paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, cfg in figure_presets(figure).items():
        scenario = Scenario.from_dict(cfg)
        config_path = out_dir / f"{name}.config.json"
        config_path.write_text(json.dumps(cfg, indent=2) + "\n")
        paths.append(run_scenario(scenario, out_dir / f"{name}.csv", threads=threads))
    return paths
