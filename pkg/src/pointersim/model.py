"""Physical model: N discrete levels embedded in a continuum [0, omega_max].

Energies, rates and times share one unit system with hbar = 1.  The coupling
V(omega, i) between level i and the continuum mode at omega is real and plays
a symmetric role for emission and absorption.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .errors import (
    DegenerateLevels,
    LevelOutsideContinuum,
    ModelInvalid,
    NegativeScale,
    OutOfSupport,
)

COUPLING_KINDS = ("constant", "lorentzian-window", "gaussian-window", "tabulated")

_SUPPORT_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class CouplingProfile:
    """Real coupling amplitude V(omega, i), defined on all of [0, omega_max].

    ``amplitude``, ``center`` and ``width`` may be scalars (shared by every
    level) or per-level sequences; ``validate`` broadcasts them.  For the
    window kinds ``center`` defaults to the level energy itself.  Tabulated
    profiles are linearly interpolated, with ``table_values`` of shape
    (n_samples,) or (n_samples, n_levels).
    """

    kind: str
    amplitude: np.ndarray | None = None
    center: np.ndarray | None = None
    width: np.ndarray | None = None
    table_omega: np.ndarray | None = None
    table_values: np.ndarray | None = None

    @classmethod
    def constant(cls, amplitude) -> "CouplingProfile":
        return cls(kind="constant", amplitude=np.atleast_1d(np.asarray(amplitude, float)))

    @classmethod
    def gaussian_window(cls, amplitude, width, center=None) -> "CouplingProfile":
        return cls(
            kind="gaussian-window",
            amplitude=np.atleast_1d(np.asarray(amplitude, float)),
            width=np.atleast_1d(np.asarray(width, float)),
            center=None if center is None else np.atleast_1d(np.asarray(center, float)),
        )

    @classmethod
    def lorentzian_window(cls, amplitude, width, center=None) -> "CouplingProfile":
        return cls(
            kind="lorentzian-window",
            amplitude=np.atleast_1d(np.asarray(amplitude, float)),
            width=np.atleast_1d(np.asarray(width, float)),
            center=None if center is None else np.atleast_1d(np.asarray(center, float)),
        )

    @classmethod
    def tabulated(cls, omega, values) -> "CouplingProfile":
        return cls(
            kind="tabulated",
            table_omega=np.asarray(omega, float),
            table_values=np.asarray(values, float),
        )


@dataclass(frozen=True, eq=False)
class ModelSpec:
    """Discrete levels, continuum cutoff and coupling profile.

    Levels must be pairwise distinct and lie strictly inside (0, omega_max);
    nondegenerate perturbation theory underlies every downstream formula.
    ``coupling_scale`` is a dimensionless global multiplier on V.

    The decay physics is local around each level, so the finite cutoff only
    trims tail contributions to the level shifts.  Pick omega_max with a
    comfortable margin above the highest level (an order of magnitude is a
    good default; a few times the highest level is usually adequate).
    """

    levels: np.ndarray
    omega_max: float
    coupling: CouplingProfile
    coupling_scale: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "levels", np.atleast_1d(np.asarray(self.levels, float)))
        object.__setattr__(self, "omega_max", float(self.omega_max))
        object.__setattr__(self, "coupling_scale", float(self.coupling_scale))

    @property
    def n_levels(self) -> int:
        return len(self.levels)


def _broadcast(name: str, value, n: int) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(value, float))
    if arr.size == 1:
        arr = np.repeat(arr, n)
    if arr.shape != (n,):
        raise ModelInvalid(f"coupling parameter '{name}' has size {arr.size}, expected 1 or {n}")
    if not np.all(np.isfinite(arr)):
        raise ModelInvalid(f"coupling parameter '{name}' contains non-finite entries")
    return arr


def _resolve_profile(profile: CouplingProfile, spec: ModelSpec) -> CouplingProfile:
    n = spec.n_levels
    if profile.kind not in COUPLING_KINDS:
        raise ModelInvalid(f"unknown coupling kind '{profile.kind}'")

    if profile.kind == "constant":
        if profile.amplitude is None:
            raise ModelInvalid("constant coupling requires 'amplitude'")
        return CouplingProfile(kind="constant", amplitude=_broadcast("amplitude", profile.amplitude, n))

    if profile.kind in ("gaussian-window", "lorentzian-window"):
        if profile.amplitude is None or profile.width is None:
            raise ModelInvalid(f"{profile.kind} coupling requires 'amplitude' and 'width'")
        center = spec.levels if profile.center is None else profile.center
        width = _broadcast("width", profile.width, n)
        if np.any(width <= 0):
            raise ModelInvalid("window widths must be > 0")
        return CouplingProfile(
            kind=profile.kind,
            amplitude=_broadcast("amplitude", profile.amplitude, n),
            center=_broadcast("center", center, n),
            width=width,
        )

    # tabulated
    if profile.table_omega is None or profile.table_values is None:
        raise ModelInvalid("tabulated coupling requires 'omega' and 'values'")
    om = np.asarray(profile.table_omega, float)
    vals = np.asarray(profile.table_values, float)
    if om.ndim != 1 or om.size < 2 or np.any(np.diff(om) <= 0):
        raise ModelInvalid("tabulated 'omega' must be a strictly increasing 1-d array")
    if vals.ndim == 1:
        vals = np.repeat(vals[:, None], n, axis=1)
    if vals.shape != (om.size, n):
        raise ModelInvalid(
            f"tabulated 'values' has shape {vals.shape}, expected ({om.size},) or ({om.size}, {n})"
        )
    if not np.all(np.isfinite(vals)):
        raise ModelInvalid("tabulated 'values' contains non-finite entries")
    if om[0] > _SUPPORT_TOL or om[-1] < spec.omega_max - _SUPPORT_TOL:
        raise ModelInvalid("tabulated 'omega' must cover [0, omega_max]")
    return CouplingProfile(kind="tabulated", table_omega=om, table_values=vals)


def validate(spec: ModelSpec) -> ModelSpec:
    """Check every model invariant and return the spec in resolved form.

    Per-level coupling parameters are broadcast, window centers default to
    the level energies.  Raises ``LevelOutsideContinuum``, ``DegenerateLevels``,
    ``NegativeScale`` or ``ModelInvalid``.
    """
    if not np.isfinite(spec.omega_max) or spec.omega_max <= 0:
        raise ModelInvalid(f"omega_max must be positive and finite, got {spec.omega_max}")
    if spec.n_levels == 0:
        raise ModelInvalid("at least one discrete level is required")
    if not np.all(np.isfinite(spec.levels)):
        raise ModelInvalid("levels contain non-finite entries")
    for omega_i in spec.levels:
        if not (0.0 < omega_i < spec.omega_max):
            raise LevelOutsideContinuum(
                f"level {omega_i} is not strictly inside (0, {spec.omega_max})"
            )
    if len(np.unique(spec.levels)) != spec.n_levels:
        raise DegenerateLevels(f"levels must be pairwise distinct, got {spec.levels.tolist()}")
    if spec.coupling_scale < 0:
        raise NegativeScale(f"coupling_scale must be >= 0, got {spec.coupling_scale}")

    resolved = replace(spec, coupling=_resolve_profile(spec.coupling, spec))
    # probe finiteness across the support, including the level positions
    probe = np.unique(np.concatenate([np.linspace(0.0, spec.omega_max, 257), spec.levels]))
    for i in range(spec.n_levels):
        if not np.all(np.isfinite(_profile_values(resolved.coupling, probe, i))):
            raise ModelInvalid(f"coupling for level {i} is non-finite somewhere on [0, omega_max]")
    return resolved


def _profile_values(profile: CouplingProfile, omega, i: int):
    om = np.asarray(omega, float)
    if profile.kind == "constant":
        return np.broadcast_to(profile.amplitude[i], om.shape).copy() if om.ndim else profile.amplitude[i]
    if profile.kind == "gaussian-window":
        x = (om - profile.center[i]) / profile.width[i]
        return profile.amplitude[i] * np.exp(-0.5 * x * x)
    if profile.kind == "lorentzian-window":
        w2 = profile.width[i] ** 2
        return profile.amplitude[i] * w2 / ((om - profile.center[i]) ** 2 + w2)
    return np.interp(om, profile.table_omega, profile.table_values[:, i])


def coupling_at(spec: ModelSpec, omega, i: int):
    """Evaluate coupling_scale * V(omega, i); omega may be a scalar or array."""
    if not 0 <= i < spec.n_levels:
        raise IndexError(f"level index {i} out of range for {spec.n_levels} levels")
    om = np.asarray(omega, float)
    if np.any(om < -_SUPPORT_TOL) or np.any(om > spec.omega_max + _SUPPORT_TOL):
        raise OutOfSupport(f"omega outside [0, {spec.omega_max}]")
    value = spec.coupling_scale * _profile_values(spec.coupling, om, i)
    return float(value) if np.ndim(omega) == 0 else value


# -- JSON model files --------------------------------------------------------
# Exact field names: levels, omega_max, coupling{kind, ...}, coupling_scale.

def model_from_dict(data: dict) -> ModelSpec:
    """Build and validate a ModelSpec from its JSON dictionary form."""
    try:
        coupling = data["coupling"]
        kind = coupling["kind"]
    except (KeyError, TypeError) as exc:
        raise ModelInvalid(f"model description missing required field: {exc}") from exc
    profile = CouplingProfile(
        kind=kind,
        amplitude=_maybe_array(coupling.get("amplitude")),
        center=_maybe_array(coupling.get("center")),
        width=_maybe_array(coupling.get("width")),
        table_omega=_maybe_array(coupling.get("omega")),
        table_values=_maybe_array(coupling.get("values")),
    )
    try:
        spec = ModelSpec(
            levels=np.asarray(data["levels"], float),
            omega_max=data["omega_max"],
            coupling=profile,
            coupling_scale=data.get("coupling_scale", 1.0),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelInvalid(f"malformed model description: {exc}") from exc
    return validate(spec)


def _maybe_array(value):
    if value is None:
        return None
    return np.atleast_1d(np.asarray(value, float))


def model_to_dict(spec: ModelSpec) -> dict:
    """Inverse of ``model_from_dict`` for a resolved spec."""
    coupling: dict = {"kind": spec.coupling.kind}
    if spec.coupling.amplitude is not None:
        coupling["amplitude"] = spec.coupling.amplitude.tolist()
    if spec.coupling.center is not None:
        coupling["center"] = spec.coupling.center.tolist()
    if spec.coupling.width is not None:
        coupling["width"] = spec.coupling.width.tolist()
    if spec.coupling.table_omega is not None:
        coupling["omega"] = spec.coupling.table_omega.tolist()
    if spec.coupling.table_values is not None:
        coupling["values"] = spec.coupling.table_values.tolist()
    return {
        "levels": spec.levels.tolist(),
        "omega_max": spec.omega_max,
        "coupling": coupling,
        "coupling_scale": spec.coupling_scale,
    }


def load_model(path) -> ModelSpec:
    """Load and validate a JSON model file."""
    try:
        with open(Path(path)) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ModelInvalid(f"cannot read model file {path}: {exc}") from exc
    return model_from_dict(data)
