"""Ensemble order parameter of the EP transition and revival diagnostics.

For every initial state the time-averaged amplitude ratio

    I(T) = (1/T) * integral_0^T a1(t) / a2(t) dt

is computed; the complex ensemble variance ``D = <I^2> - <I>^2`` is the order
parameter.  It vanishes below the critical coupling, where every state is
driven to the same ratio, and is finite above it.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import find_peaks

from .model import SystemConfig, build_generator
from .propagation import Trajectory, diagonalize, sample_times
from .reduced import ReducedParams, ratio_propagator, reduced_params

log = logging.getLogger(__name__)

MAX_EXCLUDED_FRACTION = 0.1
DEFAULT_POLE_EPS = 1e-6
MODELS = ("hermitian", "reduced")


class InsufficientEnsembleError(RuntimeError):
    def __init__(self, n_valid, n_discarded):
        super().__init__(
            f"only {n_valid} valid ensemble members ({n_discarded} discarded by the pole guard)"
        )
        self.n_valid = n_valid
        self.n_discarded = n_discarded


class NoTransitionDetected(ValueError):
    pass


@dataclass(frozen=True)
class EnsembleSpec:
    n_states: int
    seed: int = 0
    distribution: str = "unit_sphere"

    def __post_init__(self):
        if self.n_states < 2:
            raise ValueError("an ensemble needs at least 2 states")
        if self.distribution != "unit_sphere":
            raise ValueError(f"unknown distribution {self.distribution!r}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class SweepResult:
    coupling: float
    mean_I: complex
    var_D: complex
    abs_var: float
    n_valid: int
    n_discarded: int
    T: float
    seed: int
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


@dataclass(frozen=True)
class RatioIntegral:
    value: complex
    valid: bool
    excluded_fraction: float


def sample_initial_states(spec: EnsembleSpec, dim: int) -> np.ndarray:
    """Oscillator pairs uniform on the unit sphere of C^2; reservoirs empty.

    Returns an ``(n_states, dim)`` complex array.
    """
    if dim < 2:
        raise ValueError("state dimension must be >= 2")
    rng = np.random.default_rng(spec.seed)
    z = rng.standard_normal((spec.n_states, 2)) + 1j * rng.standard_normal((spec.n_states, 2))
    z /= np.linalg.norm(z, axis=1, keepdims=True)
    states = np.zeros((spec.n_states, dim), dtype=complex)
    states[:, :2] = z
    return states


def _ratio_integrals(t, a1, a2, pole_eps):
    """Vectorised trapezoid of ``a1/a2`` over the last axis with the pole guard.

    Samples with ``|a2| < pole_eps * |(a1, a2)|`` are excluded; an interval
    contributes only when both of its end points are included, and the result
    is normalised by the included measure.
    """
    pair = np.sqrt(np.abs(a1) ** 2 + np.abs(a2) ** 2)
    ok = np.abs(a2) >= pole_eps * pair
    with np.errstate(divide="ignore", invalid="ignore"):
        A = np.where(ok, a1 / np.where(ok, a2, 1), 0)
    dt = np.diff(t)
    inc = ok[..., 1:] & ok[..., :-1]
    measure = np.sum(dt * inc, axis=-1)
    total = np.sum(dt * inc * (A[..., 1:] + A[..., :-1]) / 2, axis=-1)
    span = t[-1] - t[0]
    with np.errstate(divide="ignore", invalid="ignore"):
        value = np.where(measure > 0, total / np.where(measure > 0, measure, 1), np.nan)
    excluded = 1 - measure / span
    return value, excluded


def ratio_integral(traj: Trajectory, T: float, pole_eps: float = DEFAULT_POLE_EPS) -> RatioIntegral:
    if not pole_eps > 0:
        raise ValueError("pole_eps must be > 0")
    if T > traj.times[-1] * (1 + 1e-12):
        raise ValueError(f"T={T} exceeds trajectory duration {traj.times[-1]}")
    n = int(np.searchsorted(traj.times, T * (1 + 1e-12), side="right"))
    if n < 2:
        raise ValueError("need at least two samples within [0, T]")
    value, excluded = _ratio_integrals(traj.times[:n], traj.a1[:n], traj.a2[:n], pole_eps)
    valid = bool(np.isfinite(value) and excluded <= MAX_EXCLUDED_FRACTION)
    return RatioIntegral(complex(value), valid, float(excluded))


def _oscillator_block(config, model, times, reduced):
    if model == "hermitian":
        prop = diagonalize(build_generator(config))
        return prop.evolution_block(times, slice(0, 2), slice(0, 2), shift=config.omega0)
    if model == "reduced":
        params = reduced if reduced is not None else reduced_params(config)
        return ratio_propagator(params.with_coupling(config.coupling), times)
    raise ValueError(f"unknown model {model!r}; expected one of {MODELS}")


def ensemble_integrals(
    config: SystemConfig,
    ensemble: EnsembleSpec,
    T: float,
    pole_eps: float = DEFAULT_POLE_EPS,
    model: str = "hermitian",
    dt: float | None = None,
    reduced: ReducedParams | None = None,
    batch: int = 64,
):
    """Per-member ``I(T)`` and excluded fraction, in ensemble order."""
    times = sample_times(T, dt if dt is not None else config.dt_sample)
    U = _oscillator_block(config, model, times, reduced)
    z = sample_initial_states(ensemble, config.dim)[:, :2]
    values = np.empty(ensemble.n_states, dtype=complex)
    excluded = np.empty(ensemble.n_states)
    for lo in range(0, ensemble.n_states, batch):
        a = np.einsum("tij,nj->nit", U, z[lo : lo + batch])
        values[lo : lo + batch], excluded[lo : lo + batch] = _ratio_integrals(
            times, a[:, 0], a[:, 1], pole_eps
        )
    return values, excluded


def order_parameter(
    config: SystemConfig,
    ensemble: EnsembleSpec,
    T: float,
    pole_eps: float = DEFAULT_POLE_EPS,
    model: str = "hermitian",
    dt: float | None = None,
    reduced: ReducedParams | None = None,
) -> SweepResult:
    """Ensemble mean and complex variance of ``I(T)`` at the configured coupling.

    ``reduced`` overrides the golden-rule decay rates for the reduced model.
    """
    values, excluded = ensemble_integrals(config, ensemble, T, pole_eps, model, dt, reduced)
    good = np.isfinite(values) & (excluded <= MAX_EXCLUDED_FRACTION)
    n_valid = int(good.sum())
    n_discarded = ensemble.n_states - n_valid
    if n_valid < 2:
        raise InsufficientEnsembleError(n_valid, n_discarded)
    I = values[good]
    mean = I.mean()
    var = (I * I).mean() - mean * mean
    return SweepResult(
        coupling=config.coupling,
        mean_I=complex(mean),
        var_D=complex(var),
        abs_var=float(abs(var)),
        n_valid=n_valid,
        n_discarded=n_discarded,
        T=float(T),
        seed=ensemble.seed,
    )


def sweep(
    config: SystemConfig,
    omega_grid,
    ensemble: EnsembleSpec,
    T: float,
    pole_eps: float = DEFAULT_POLE_EPS,
    model: str = "hermitian",
    dt: float | None = None,
    reduced: ReducedParams | None = None,
) -> list[SweepResult]:
    """Order parameter at each coupling; the same ensemble is reused at every point."""
    grid = np.asarray(omega_grid, dtype=float)
    if grid.size == 0:
        raise ValueError("omega grid is empty")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("omega grid must be strictly ascending")
    results = []
    for w in grid:
        try:
            res = order_parameter(config.with_coupling(w), ensemble, T, pole_eps, model, dt, reduced)
        except (InsufficientEnsembleError, np.linalg.LinAlgError, RuntimeError, ValueError) as exc:
            log.warning("sweep point coupling=%r failed: %s", float(w), exc)
            n_valid = getattr(exc, "n_valid", 0)
            res = SweepResult(
                float(w), complex(math.nan, math.nan), complex(math.nan, math.nan), math.nan,
                n_valid, ensemble.n_states - n_valid, float(T), ensemble.seed, error=str(exc),
            )
        results.append(res)
    return results


@dataclass(frozen=True)
class TransitionEstimate:
    coupling: float
    uncertainty: float
    slope: float
    log_grid: bool


def _is_log_grid(x) -> bool:
    if np.any(x <= 0) or x.size < 3:
        return False
    lin = np.diff(x)
    lg = np.diff(np.log(x))
    lin_uniform = np.allclose(lin, lin[0], rtol=1e-6)
    log_uniform = np.allclose(lg, lg[0], rtol=1e-6)
    return log_uniform and not lin_uniform


def detect_transition(results, min_points: int = 5, flat_rtol: float = 1e-9) -> TransitionEstimate:
    """Coupling at the steepest rise of ``|D|``.

    On log-spaced grids the slope is taken with respect to ``log(coupling)``.
    The estimate is the midpoint of the steepest interval; its width is the
    reported uncertainty.
    """
    pts = sorted((r for r in results if r.ok and math.isfinite(r.abs_var)), key=lambda r: r.coupling)
    if len(pts) < min_points:
        raise NoTransitionDetected(f"need at least {min_points} valid points, got {len(pts)}")
    x = np.array([r.coupling for r in pts])
    y = np.array([r.abs_var for r in pts])
    if np.ptp(y) <= flat_rtol * max(np.max(np.abs(y)), np.finfo(float).tiny):
        raise NoTransitionDetected("no transition detected: order parameter is flat")
    log_grid = _is_log_grid(x)
    u = np.log(x) if log_grid else x
    slope = np.diff(y) / np.diff(u)
    k = int(np.argmax(slope))
    if slope[k] <= 0:
        raise NoTransitionDetected("no transition detected: order parameter never rises")
    return TransitionEstimate(
        coupling=float((x[k] + x[k + 1]) / 2),
        uncertainty=float(x[k + 1] - x[k]),
        slope=float(slope[k]),
        log_grid=log_grid,
    )


@dataclass
class RevivalReport:
    peaks1: list = field(default_factory=list)
    peaks2: list = field(default_factory=list)
    sync_score: float = 0.0

    def first_revival(self, oscillator: int):
        peaks = self.peaks1 if oscillator == 1 else self.peaks2
        return peaks[0] if peaks else None


def _smooth(x, n):
    if n <= 1:
        return x
    kernel = np.ones(n)
    num = np.convolve(x, kernel, mode="same")
    den = np.convolve(np.ones_like(x), kernel, mode="same")
    return num / den


def _is_flat(env) -> bool:
    return np.ptp(env) <= 1e-9 * max(np.max(np.abs(env)), np.finfo(float).tiny)


def _revival_peaks(t, env, ref, threshold):
    level = threshold * ref
    below = np.nonzero(env < level)[0]
    if below.size == 0:
        return []
    start = below[0]
    idx, _ = find_peaks(env[start:], height=level, prominence=level / 2)
    return [float(t[start + i]) for i in idx]


def revival_diagnostics(
    traj: Trajectory, threshold: float = 0.1, smooth_window: float | None = None
) -> RevivalReport:
    """Revival peak times of ``|a1|`` and ``|a2|`` and their envelope correlation.

    A revival is a local maximum of the smoothed envelope above
    ``threshold * |a(0)|`` occurring after the envelope first collapsed
    below that level.  ``smooth_window`` is a duration (default: 1% of the
    trajectory).
    """
    t = traj.times
    if smooth_window is None:
        smooth_window = t[-1] / 100
    n = max(1, int(round(smooth_window / (t[1] - t[0]))))
    if n % 2 == 0:
        n += 1
    env1 = _smooth(np.abs(traj.a1), n)
    env2 = _smooth(np.abs(traj.a2), n)
    pair0 = math.hypot(abs(traj.a1[0]), abs(traj.a2[0]))
    ref1 = abs(traj.a1[0]) or pair0
    ref2 = abs(traj.a2[0]) or pair0

    # An envelope flat to round-off carries no signal to correlate.
    if _is_flat(env1) or _is_flat(env2):
        score = 0.0
    else:
        score = float(np.corrcoef(env1, env2)[0, 1])
    return RevivalReport(
        _revival_peaks(t, env1, ref1, threshold),
        _revival_peaks(t, env2, ref2, threshold),
        score,
    )
