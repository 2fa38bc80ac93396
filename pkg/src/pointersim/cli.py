"""Batch driver: load a model config, run a subcommand, write CSV artifacts.

Artifacts are deterministic for a fixed config and seed: floats are written
with shortest round-trip repr and every file starts with ``#``-prefixed
metadata lines carrying the config hash, grid parameters and, where time
evolution is involved, the recurrence-window validity horizon.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .continuum import build_grid
from .errors import ConfigParse, RecurrenceWindowExceeded, SimulationError
from .evolution import decompose_initial, discrete_state, evolve, recompose
from .measurement import MeasurementSetup, readout
from .model import ModelSpec, load_model
from .oracle import coherence, discretize, survival_probability
from .spectrum import liouville_spectrum

COMMANDS = ("spectrum", "evolve", "compare", "measure")

# discrepancies below the comparator's own floating-point resolution are
# reported as exact zeros in the rel_error column
_FLOAT_NOISE = 64 * np.finfo(float).eps


@dataclass(frozen=True)
class TimeGrid:
    t_start: float
    t_end: float
    samples: int
    spacing: str = "log"

    def values(self) -> np.ndarray:
        if self.spacing == "linear":
            return np.linspace(self.t_start, self.t_end, self.samples)
        return np.geomspace(self.t_start, self.t_end, self.samples)


@dataclass(frozen=True)
class RunConfig:
    model: ModelSpec
    grid_m: int
    grid_scheme: str
    times: TimeGrid | None
    output_dir: Path
    seed: int
    params: dict
    effective: dict


def _require(data: dict, key: str):
    if key not in data:
        raise ConfigParse(f"config is missing required field '{key}'")
    return data[key]


def _parse_times(data) -> TimeGrid:
    try:
        grid = TimeGrid(
            t_start=float(_require(data, "t_start")),
            t_end=float(_require(data, "t_end")),
            samples=int(_require(data, "samples")),
            spacing=str(data.get("spacing", "log")),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigParse(f"malformed 'times' block: {exc}") from exc
    if grid.samples < 2:
        raise ConfigParse(f"times.samples must be >= 2, got {grid.samples}")
    if not 0 <= grid.t_start < grid.t_end:
        raise ConfigParse("times must satisfy t_end > t_start >= 0")
    if grid.spacing not in ("linear", "log"):
        raise ConfigParse(f"unknown times.spacing '{grid.spacing}'")
    if grid.spacing == "log" and grid.t_start <= 0:
        raise ConfigParse("log-spaced times need t_start > 0")
    return grid


def load_config(path, grid_m=None, out=None, seed=None) -> RunConfig:
    """Parse a JSON run config, applying any command-line overrides."""
    path = Path(path)
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigParse(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigParse("config root must be a JSON object")

    if grid_m is not None:
        data.setdefault("grid", {})
        data["grid"]["m"] = grid_m
    if out is not None:
        data["output_dir"] = str(out)
    if seed is not None:
        data["seed"] = seed

    grid_block = data.get("grid", {})
    model_ref = _require(data, "model")
    model_path = (path.parent / model_ref).resolve()
    if not model_path.exists():
        raise ConfigParse(f"model file does not exist: {model_path}")
    model = load_model(model_path)

    times = _parse_times(data["times"]) if "times" in data else None
    reserved = {"model", "grid", "times", "output_dir", "seed"}
    return RunConfig(
        model=model,
        grid_m=int(grid_block.get("m", 2000)),
        grid_scheme=str(grid_block.get("scheme", "uniform-midpoint")),
        times=times,
        output_dir=Path(data.get("output_dir", "out")),
        seed=int(data.get("seed", 0)),
        params={k: v for k, v in data.items() if k not in reserved},
        effective=data,
    )


def config_hash(command: str, cfg: RunConfig) -> str:
    # the hash identifies the run's physics; where the artifact lands does not
    # change its content, so output_dir stays out of the payload
    hashed = {k: v for k, v in cfg.effective.items() if k != "output_dir"}
    payload = json.dumps({"command": command, "config": hashed},
                         sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()


def _fmt(value) -> str:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _write_csv(path: Path, command: str, cfg: RunConfig, grid, columns, rows):
    # the recurrence horizon is a grid property; quoting it in every artifact
    # marks the window inside which oracle cross-checks are meaningful
    spacing = (grid.nodes[-1] - grid.nodes[0]) / (grid.size - 1)
    recurrence = 2.0 * np.pi / spacing
    lines = [
        f"# pointersim {command}",
        f"# config_hash: {config_hash(command, cfg)}",
        f"# grid_m: {cfg.grid_m}",
        f"# grid_scheme: {cfg.grid_scheme}",
        f"# coupling_scale: {_fmt(cfg.model.coupling_scale)}",
        f"# seed: {cfg.seed}",
        f"# recurrence_time: {_fmt(recurrence)}",
        f"# valid_t_max: {_fmt(0.5 * recurrence)}",
    ]
    lines.append(",".join(columns))
    lines += [",".join(_fmt(v) for v in row) for row in rows]
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n")
    return path


def _model_grid(cfg: RunConfig):
    return build_grid(cfg.model.omega_max, cfg.grid_m, cfg.grid_scheme,
                      avoid=cfg.model.levels)


def _initial_rho_d(cfg: RunConfig) -> np.ndarray:
    initial = cfg.params.get("initial")
    if initial is None:
        raise ConfigParse("evolve needs an 'initial' block with 'amplitudes' or 'diagonal'")
    if "amplitudes" in initial:
        a = _complex_array(initial["amplitudes"])
        return np.outer(np.conj(a), a)
    if "diagonal" in initial:
        return np.diag(np.asarray(initial["diagonal"], float)).astype(complex)
    raise ConfigParse("'initial' block must contain 'amplitudes' or 'diagonal'")


def _complex_array(pairs) -> np.ndarray:
    try:
        arr = np.asarray(pairs, float)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise ValueError("expected [re, im] pairs")
    except (TypeError, ValueError) as exc:
        raise ConfigParse(f"malformed amplitude list: {exc}") from exc
    return arr[:, 0] + 1j * arr[:, 1]


def _rel_error(oracle_value: float, predicted: float) -> float:
    diff = abs(oracle_value - predicted)
    if diff <= _FLOAT_NOISE * max(1.0, abs(predicted)):
        return 0.0
    return diff / max(abs(predicted), np.finfo(float).tiny)


# -- subcommands ---------------------------------------------------------------

def run_spectrum(cfg: RunConfig):
    grid = _model_grid(cfg)
    spec = liouville_spectrum(cfg.model, grid)
    rows = []
    for i in range(spec.n_levels):
        for j in range(spec.n_levels):
            lam = spec.lambda_d[i, j]
            rows.append((i, j, lam.real, lam.imag, spec.gamma[i], spec.shift[i]))
    return [_write_csv(cfg.output_dir / "spectrum.csv", "spectrum", cfg, grid,
                       ["i", "j", "re_lambda", "im_lambda", "gamma_i", "delta_i"], rows)]


def run_evolve(cfg: RunConfig):
    if cfg.times is None:
        raise ConfigParse("evolve needs a 'times' block")
    grid = _model_grid(cfg)
    spec = liouville_spectrum(cfg.model, grid)
    state0 = decompose_initial(discrete_state(grid, _initial_rho_d(cfg)), spec)

    n = spec.n_levels
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    columns = (["t"] + [f"occ_{i}" for i in range(n)] + [f"atom_{i}" for i in range(n)]
               + [f"abs_coh_{i}_{j}" for i, j in pairs])
    rows = []
    for t in cfg.times.values():
        state = recompose(evolve(state0, spec, float(t)), spec)
        occ = [float(np.real(state.rho_d[i, i])) for i in range(n)]
        atom = [state.rho_omega_atoms.weight_at(float(spec.levels[i])) for i in range(n)]
        coh = [float(np.abs(state.rho_d[i, j])) for i, j in pairs]
        rows.append([float(t)] + occ + atom + coh)
    return [_write_csv(cfg.output_dir / "evolve.csv", "evolve", cfg, grid, columns, rows)]


def run_compare(cfg: RunConfig):
    if cfg.times is None:
        raise ConfigParse("compare needs a 'times' block")
    grid = _model_grid(cfg)
    spec = liouville_spectrum(cfg.model, grid)
    oracle = discretize(cfg.model, grid)
    horizon = 0.5 * oracle.recurrence_time

    n = spec.n_levels
    rng = np.random.default_rng(cfg.seed)
    amps = rng.normal(size=n) + 1j * rng.normal(size=n)
    amps /= np.linalg.norm(amps)

    rows = []
    with warnings.catch_warnings():
        # beyond-horizon rows are computed anyway but flagged invalid below
        warnings.simplefilter("ignore", RecurrenceWindowExceeded)
        for t in cfg.times.values():
            t = float(t)
            valid = int(t < horizon)
            for i in range(n):
                predicted = float(np.exp(-spec.gamma[i] * t))
                measured = survival_probability(oracle, i, t)
                err = _rel_error(measured, predicted) if valid else float("nan")
                rows.append((t, f"survival_{i}", measured, predicted, err, valid))
            for i in range(n):
                for j in range(i + 1, n):
                    initial = float(np.abs(np.conj(amps[i]) * amps[j]))
                    predicted = initial * float(np.exp(-spec.lambda_d[i, j].imag * t))
                    measured = abs(coherence(oracle, i, j, amps, t))
                    err = _rel_error(measured, predicted) if valid else float("nan")
                    rows.append((t, f"abs_coherence_{i}_{j}", measured, predicted, err, valid))
    return [_write_csv(cfg.output_dir / "compare.csv", "compare", cfg, grid,
                       ["t", "quantity", "oracle", "predicted", "rel_error", "valid"], rows)]


def run_measure(cfg: RunConfig):
    if "amplitudes" not in cfg.params:
        raise ConfigParse("measure needs an 'amplitudes' list of [re, im] pairs")
    grid = _model_grid(cfg)
    spec = liouville_spectrum(cfg.model, grid)
    setup = MeasurementSetup(amplitudes=_complex_array(cfg.params["amplitudes"]))
    pointer = readout(setup, spec)
    rows = [(i, omega, probability) for i, (omega, probability) in enumerate(pointer)]
    artifacts = [_write_csv(cfg.output_dir / "measure.csv", "measure", cfg, grid,
                            ["i", "omega", "probability"], rows)]

    if cfg.times is not None:
        state0 = decompose_initial(
            discrete_state(grid, np.outer(np.conj(setup.amplitudes), setup.amplitudes)), spec)
        n = spec.n_levels
        columns = ["t"] + [f"atom_{i}" for i in range(n)]
        time_rows = []
        for t in cfg.times.values():
            state = recompose(evolve(state0, spec, float(t)), spec)
            time_rows.append([float(t)] + [state.rho_omega_atoms.weight_at(float(spec.levels[i]))
                                           for i in range(n)])
        artifacts.append(_write_csv(cfg.output_dir / "measure_timeseries.csv", "measure",
                                    cfg, grid, columns, time_rows))
    return artifacts


_RUNNERS = {
    "spectrum": run_spectrum,
    "evolve": run_evolve,
    "compare": run_compare,
    "measure": run_measure,
}


def run(command: str, config: RunConfig):
    """Dispatch a subcommand; returns the list of written artifact paths."""
    if command not in _RUNNERS:
        raise ConfigParse(f"unknown command '{command}'")
    return _RUNNERS[command](config)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="pointersim",
        description="Decay, decoherence and pointer-basis simulator for discrete "
                    "levels coupled to a continuum.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        cmd = sub.add_parser(name)
        cmd.add_argument("--config", required=True, help="JSON run configuration")
        cmd.add_argument("--out", default=None, help="output directory override")
        cmd.add_argument("--grid-m", type=int, default=None, help="grid size override")
        cmd.add_argument("--seed", type=int, default=None, help="seed override")
    args = parser.parse_args(argv)

    try:
        cfg = load_config(args.config, grid_m=args.grid_m, out=args.out, seed=args.seed)
        artifacts = run(args.command, cfg)
    except SimulationError as exc:
        print(f"pointersim {args.command}: error: {exc}", file=sys.stderr)
        return 1
    for artifact in artifacts:
        print(artifact)
    return 0


if __name__ == "__main__":
    sys.exit(main())
