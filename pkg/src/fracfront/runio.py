"""Run configuration, CSV snapshot output, and the JSON run manifest.

CSV layout: first column ``x``, then one column per snapshot headed
``u@t=<time>`` (time with 6 significant digits).  Values are written in
shortest round-trip decimal form so reading the file back recovers the
exact doubles; identical configurations therefore produce byte-identical
files.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .diagnostics import estimate_decay_rate, estimate_speed, make_ic
from .errors import FracfrontError, OutOfRangeError
from .grids import FractionalParams, Grid1D
from .operators import quadrature_coefficients
from .reaction import BistableCubic
from .stepping import SimulationResult, StepperConfig, integrate, make_schedule

STEPPER_CHOICES = ("semi-implicit", "rk-adaptive")
IC_CHOICES = ("chen", "step")


@dataclass
class RunConfig:
    """Complete description of one simulation run."""

    alpha: float
    theta: float
    a: float = 0.5
    b: float = 30.0
    n: int = 181
    t_final: float = 20.0
    ic: str = "chen"
    step_lo: float = 0.49
    step_hi: float = 1.51
    stepper: str = "semi-implicit"
    dt: float = 0.02
    abs_tol: float = 1e-6
    rel_tol: float = 1e-6
    snapshots: int = 21
    tail_correction: bool = False
    seed: int = 0
    out: Optional[str] = None

    def validated(self):
        """Build the validated domain objects for this configuration."""
        params = FractionalParams(self.alpha, self.theta)
        grid = Grid1D(self.b, self.n)
        nl = BistableCubic(self.a)
        if self.ic not in IC_CHOICES:
            raise OutOfRangeError(f"ic must be one of {IC_CHOICES}, got {self.ic!r}")
        if self.stepper not in STEPPER_CHOICES:
            raise OutOfRangeError(
                f"stepper must be one of {STEPPER_CHOICES}, got {self.stepper!r}")
        method = "semi-implicit" if self.stepper == "semi-implicit" else "rk-adaptive"
        cfg = StepperConfig(method=method, dt=self.dt, abs_tol=self.abs_tol,
                            rel_tol=self.rel_tol)
        schedule = make_schedule(self.t_final, self.snapshots)
        return params, grid, nl, cfg, schedule


def run_simulation(config: RunConfig) -> tuple[SimulationResult, dict]:
    """Run one configuration and measure the standard diagnostics.

    The returned dict holds the front speed and decay-rate fit when they are
    measurable for the run (None entries otherwise).
    """
    params, grid, nl, cfg, schedule = config.validated()
    ic = make_ic(config.ic, grid, config.step_lo, config.step_hi)
    result = integrate(ic, schedule, cfg, grid, params, nl,
                       tail_correction=config.tail_correction)
    diag = {"speed": None, "speed_intercept": None, "speed_residual": None,
            "decay_rate": None, "decay_r_squared": None}
    try:
        est = estimate_speed(result)
        diag.update(speed=est.speed, speed_intercept=est.intercept,
                    speed_residual=est.residual)
    except FracfrontError:
        pass
    try:
        report = estimate_decay_rate(result)
        diag.update(decay_rate=report.decay_rate,
                    decay_r_squared=report.r_squared)
    except FracfrontError:
        pass
    return result, diag


# ---------------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------------

def _fmt(v: float) -> str:
    # repr of a Python float is the shortest decimal that round-trips exactly
    return repr(float(v))


def write_snapshot_csv(result: SimulationResult, path) -> None:
    """Write the snapshot series (see module docstring for the layout)."""
    path = Path(path)
    header = "x," + ",".join(f"u@t={t:.6g}" for t in result.times)
    lines = [header]
    for i in range(result.grid.n):
        row = [_fmt(result.grid.x[i])]
        row.extend(_fmt(result.states[k, i]) for k in range(len(result.times)))
        lines.append(",".join(row))
    try:
        path.write_text("\n".join(lines) + "\n")
    except OSError as exc:
        raise FracfrontError(f"cannot write snapshot CSV {path}: {exc}") from exc


def read_profile_csv(path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Read a snapshot CSV back: returns (x, times, states[k, n])."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise FracfrontError(f"cannot read profile CSV {path}: {exc}") from exc
    lines = [ln for ln in text.splitlines() if ln.strip()]
    header = lines[0].split(",")
    if header[0] != "x" or not all(h.startswith("u@t=") for h in header[1:]):
        raise FracfrontError(f"{path}: not a snapshot CSV (header {header[:2]}...)")
    times = np.array([float(h[len("u@t="):]) for h in header[1:]])
    data = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
    return data[:, 0], times, data[:, 1:].T


def result_from_csv(path, a: Optional[float] = None) -> SimulationResult:
    """Rebuild a minimal result object from a saved CSV (for re-diagnosis)."""
    x, times, states = read_profile_csv(path)
    grid = Grid1D(b=-x[0], n=len(x))
    nl = BistableCubic(a) if a is not None else None
    return SimulationResult(times=times, states=states, grid=grid,
                            params=None, nl=nl,
                            stepper=StepperConfig(), stats={})


# ---------------------------------------------------------------------------
# manifest
# ---------------------------------------------------------------------------

def build_manifest(result: SimulationResult, diagnostics: dict,
                   config: RunConfig) -> dict:
    try:
        c1, c2 = quadrature_coefficients(result.params)
    except FracfrontError:
        c1 = c2 = None  # classical endpoint
    return {
        "version": __version__,
        "seed": config.seed,
        "config": dataclasses.asdict(config),
        "derived": {
            "h": result.grid.h,
            "m": result.grid.m,
            "c1": c1,
            "c2": c2,
            "potential_gap": result.nl.potential_gap(),
        },
        "stats": result.stats,
        "diagnostics": diagnostics,
    }


MANIFEST_REQUIRED_KEYS = ("version", "seed", "config", "derived", "stats",
                          "diagnostics")
MANIFEST_DERIVED_KEYS = ("h", "m", "c1", "c2", "potential_gap")


def write_manifest(result: SimulationResult, diagnostics: dict,
                   config: RunConfig, path) -> None:
    path = Path(path)
    try:
        path.write_text(json.dumps(build_manifest(result, diagnostics, config),
                                   indent=2, sort_keys=True) + "\n")
    except OSError as exc:
        raise FracfrontError(f"cannot write manifest {path}: {exc}") from exc


# ---------------------------------------------------------------------------
# key = value configuration files
# ---------------------------------------------------------------------------

_CONFIG_TYPES = {f.name: f.type for f in dataclasses.fields(RunConfig)}
_BOOL_TRUE = {"1", "true", "yes", "on"}
_BOOL_FALSE = {"0", "false", "no", "off"}


def read_config_file(path) -> dict:
    """Parse a ``key = value`` file into RunConfig keyword arguments.

    Unknown keys are errors (fail loud); '#' starts a comment.
    """
    path = Path(path)
    out = {}
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise OutOfRangeError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _CONFIG_TYPES:
            raise OutOfRangeError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = _parse_value(key, value)
    return out


def _parse_value(key: str, value: str):
    if key == "tail_correction":
        low = value.lower()
        if low in _BOOL_TRUE:
            return True
        if low in _BOOL_FALSE:
            return False
        raise OutOfRangeError(f"{key}: expected a boolean, got {value!r}")
    if key in ("n", "snapshots", "seed"):
        return int(value)
    if key in ("ic", "stepper", "out"):
        return value
    return float(value)
