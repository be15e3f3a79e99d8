"""Initial profiles, traveling-wave measurements, and analytical checks.

Front positions are tracked at the unstable threshold ``a`` by default: that
crossing is the dynamically meaningful interface (it coincides with 0.5 only
in the balanced case).  Speed fits use the last half of the snapshots to
skip the initial transient.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import (
    InsufficientDecayError,
    NoCrossingError,
    OutOfRangeError,
    WindowTooSmallError,
)
from .grids import FractionalParams, Grid1D
from .operators import riesz_feller_symbol
from .reaction import BistableCubic
from .stepping import SimulationResult, StepperConfig, integrate

BOUNDARY_DENSITY_LIMIT = 1e-6   # kernel guard: boundary value vs peak


# ---------------------------------------------------------------------------
# initial conditions
# ---------------------------------------------------------------------------

def chen_ramp(x: np.ndarray) -> np.ndarray:
    """0 below x = -2, linear ramp x/4 + 1/2 on [-2, 2], 1 above x = 2."""
    x = np.asarray(x, dtype=float)
    return np.where(x < -2.0, 0.0, np.where(x > 2.0, 1.0, x / 4.0 + 0.5))


def step_profile(x: np.ndarray, lo: float = 0.49, hi: float = 1.51) -> np.ndarray:
    """lo for x <= 0, hi for x > 0 (left-closed at the jump)."""
    x = np.asarray(x, dtype=float)
    return np.where(x <= 0.0, lo, hi)


def make_ic(variant, grid: Grid1D, lo: float = 0.49, hi: float = 1.51) -> np.ndarray:
    """Sample an initial profile at the grid nodes.

    ``variant`` is "chen", "step", or a callable x -> u.
    """
    if variant == "chen":
        return chen_ramp(grid.x)
    if variant == "step":
        return step_profile(grid.x, lo, hi)
    if callable(variant):
        return np.asarray(variant(grid.x), dtype=float)
    raise OutOfRangeError(f"unknown initial-condition variant {variant!r}")


# ---------------------------------------------------------------------------
# front tracking and wave speed
# ---------------------------------------------------------------------------

def front_position(u: np.ndarray, grid: Grid1D, level: float) -> float:
    """x where the profile crosses ``level``, by linear interpolation.

    If several cells bracket the level, the crossing nearest the origin is
    returned.  Raises ``NoCrossingError`` when the profile never brackets it.
    """
    u = np.asarray(u, dtype=float)
    d = u - level
    bracket = np.nonzero((d[:-1] * d[1:] <= 0) & (u[:-1] != u[1:]))[0]
    if len(bracket) == 0:
        raise NoCrossingError(f"profile never crosses level {level}")
    x = grid.x
    crossings = x[bracket] + (level - u[bracket]) * (
        x[bracket + 1] - x[bracket]) / (u[bracket + 1] - u[bracket])
    return float(crossings[np.argmin(np.abs(crossings))])


@dataclass
class SpeedEstimate:
    speed: float
    intercept: float
    residual: float                  # rms of the linear fit
    front_track: list                # (t, x_front) pairs


def estimate_speed(result: SimulationResult, level: Optional[float] = None,
                   fit_window: float = 0.5) -> SpeedEstimate:
    """Least-squares front speed over the trailing ``fit_window`` fraction."""
    if level is None:
        level = result.nl.a
    k0 = int(math.ceil(len(result.times) * (1.0 - fit_window)))
    k0 = min(k0, len(result.times) - 1)
    ts = result.times[k0:]
    if len(ts) < 4:
        raise OutOfRangeError("speed fit needs at least 4 snapshots in the window")
    fronts = np.array([front_position(result.states[k], result.grid, level)
                       for k in range(k0, len(result.times))])
    design = np.vstack([ts, np.ones_like(ts)]).T
    (slope, intercept), *_ = np.linalg.lstsq(design, fronts, rcond=None)
    resid = fronts - design @ [slope, intercept]
    return SpeedEstimate(
        speed=float(slope), intercept=float(intercept),
        residual=float(np.sqrt(np.mean(resid ** 2))),
        front_track=list(zip(ts.tolist(), fronts.tolist())))


# ---------------------------------------------------------------------------
# profile distance modulo translation
# ---------------------------------------------------------------------------

def _translate(u: np.ndarray, x: np.ndarray, s: float) -> np.ndarray:
    # evaluate u(x - s); np.interp clamps to the end values (flat far field)
    return np.interp(x - s, x, u)


def shift_matched_residual(u1: np.ndarray, u2: np.ndarray,
                           grid: Grid1D) -> tuple[float, float]:
    """Minimal L-inf distance between u2 and translates of u1.

    Scans whole grid cells over shifts in [-b/2, b/2], then refines by
    golden-section search; off-grid values by linear interpolation.
    Returns ``(residual, shift)`` with ``u2 ~ u1(. - shift)``.
    """
    u1 = np.asarray(u1, dtype=float)
    u2 = np.asarray(u2, dtype=float)
    x = grid.x

    def res(s):
        return float(np.max(np.abs(u2 - _translate(u1, x, s))))

    kmax = int(grid.b / 2 / grid.h)
    coarse = np.arange(-kmax, kmax + 1) * grid.h
    vals = [res(s) for s in coarse]
    i = int(np.argmin(vals))
    lo = coarse[max(0, i - 1)]
    hi = coarse[min(len(coarse) - 1, i + 1)]

    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = res(c), res(d)
    for _ in range(80):
        if b - a < 1e-13 * max(1.0, grid.b):
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = res(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = res(d)
    shift = 0.5 * (a + b)
    best = res(shift)
    if vals[i] < best:  # keep the coarse winner on plateaus
        return vals[i], float(coarse[i])
    return best, float(shift)


@dataclass
class ConvergenceReport:
    times: np.ndarray
    residuals: np.ndarray            # shift-matched L-inf per snapshot
    decay_rate: Optional[float]      # reported only when r_squared >= 0.9
    r_squared: float
    fit_points: int


def estimate_decay_rate(result: SimulationResult,
                        reference: Optional[np.ndarray] = None) -> ConvergenceReport:
    """Exponential-decay fit of the shift-matched residual history.

    The residual of each snapshot against ``reference`` (default: the final
    snapshot) is fitted as log r = log K - kappa t over the window where
    r lies in [1e-10, 1e-1].  Raises ``InsufficientDecayError`` when fewer
    than two residuals fall in that window.
    """
    if len(result.times) < 6:
        raise OutOfRangeError("decay fit needs at least 6 snapshots")
    if reference is None:
        reference = result.final
    residuals = np.array([
        shift_matched_residual(state, reference, result.grid)[0]
        for state in result.states])
    mask = (residuals >= 1e-10) & (residuals <= 1e-1)
    if np.count_nonzero(mask) < 2:
        raise InsufficientDecayError(
            "no usable residuals in [1e-10, 1e-1]; "
            "the run may already sit on the steady profile")
    ts = result.times[mask]
    logr = np.log(residuals[mask])
    design = np.vstack([ts, np.ones_like(ts)]).T
    (slope, intercept), *_ = np.linalg.lstsq(design, logr, rcond=None)
    pred = design @ [slope, intercept]
    ss_res = float(np.sum((logr - pred) ** 2))
    ss_tot = float(np.sum((logr - logr.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 0.0
    kappa = -float(slope)
    return ConvergenceReport(
        times=result.times.copy(), residuals=residuals,
        decay_rate=kappa if r2 >= 0.9 else None,
        r_squared=r2, fit_points=int(np.count_nonzero(mask)))


# ---------------------------------------------------------------------------
# order preservation and bounds
# ---------------------------------------------------------------------------

def comparison_test(
    ic_low: np.ndarray,
    ic_high: np.ndarray,
    grid: Grid1D,
    params: FractionalParams,
    nl: BistableCubic,
    cfg: StepperConfig,
    schedule: np.ndarray,
    operator=None,
) -> tuple[bool, float]:
    """Evolve an ordered pair with the same stepper; check order persists.

    Returns ``(ordered, min_gap)`` where ``min_gap`` is the minimum of
    (high - low) over all snapshot nodes and ``ordered`` means it stays
    above -1e-10.
    """
    lo = integrate(ic_low, schedule, cfg, grid, params, nl, operator=operator)
    hi = integrate(ic_high, schedule, cfg, grid, params, nl, operator=operator)
    gap = hi.states - lo.states
    min_gap = float(gap.min())
    return min_gap >= -1e-10, min_gap


def bounds_check(result: SimulationResult) -> tuple[float, float]:
    """(min, max) of the solution over all snapshots."""
    return float(result.states.min()), float(result.states.max())


def smoothstep(y: np.ndarray) -> np.ndarray:
    y = np.clip(y, 0.0, 1.0)
    return y * y * (3.0 - 2.0 * y)


def make_ordered_ic_pair(grid: Grid1D, rng: np.random.Generator,
                         n_bumps_max: int = 3) -> tuple[np.ndarray, np.ndarray]:
    """Random ordered pair: a smoothstep ramp and the ramp plus bumps.

    The high member adds 1-3 nonnegative Gaussian bumps and is clipped to 1
    so both profiles stay in [0, 1].
    """
    x = grid.x
    center = rng.uniform(-grid.b / 6, grid.b / 6)
    width = rng.uniform(2.0, grid.b / 3)
    low = smoothstep((x - center) / width + 0.5)
    bump = np.zeros_like(x)
    for _ in range(int(rng.integers(1, n_bumps_max + 1))):
        amp = rng.uniform(0.01, 0.2)
        ctr = rng.uniform(-2 * grid.b / 3, 2 * grid.b / 3)
        wid = rng.uniform(0.5, grid.b / 6)
        bump += amp * np.exp(-((x - ctr) / wid) ** 2)
    high = np.minimum(low + bump, 1.0)
    return low, high


# ---------------------------------------------------------------------------
# heavy-tailed kernel of the pure diffusion semigroup
# ---------------------------------------------------------------------------

def green_function(params: FractionalParams, t: float, window: float = 200.0,
                   k_modes: int = 2 ** 14) -> tuple[np.ndarray, np.ndarray]:
    """Sample the diffusion kernel by discrete inversion of exp(t*psi).

    Returns ``(x, g)`` on a uniform grid spanning ``[-window/2, window/2)``.
    The kernel is a heavy-tailed probability density (tails ~ |x|^(-1-alpha)),
    so the window must be generous; ``WindowTooSmallError`` is raised when
    the boundary density exceeds 1e-6 of the peak.
    """
    if t <= 0:
        raise OutOfRangeError(f"kernel time must be positive, got {t}")
    dx = window / k_modes
    x = (np.arange(k_modes) - k_modes // 2) * dx
    xi = 2.0 * np.pi * np.fft.fftfreq(k_modes, d=dx)
    ghat = np.exp(t * riesz_feller_symbol(params, xi))
    phase = np.exp(-1j * xi * x[0])
    g = (np.fft.fft(ghat * phase) / window).real
    peak = float(g.max())
    if max(abs(g[0]), abs(g[-1])) > BOUNDARY_DENSITY_LIMIT * peak:
        raise WindowTooSmallError(
            f"boundary density {max(abs(g[0]), abs(g[-1])):.3g} exceeds "
            f"{BOUNDARY_DENSITY_LIMIT:g} of the peak {peak:.3g}; "
            f"enlarge the window")
    return x, g
