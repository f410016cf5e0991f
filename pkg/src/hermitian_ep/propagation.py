"""Exact spectral propagation of ``dv/dt = -i M v`` and a fixed-step RK4 cross-check."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import SystemConfig, build_generator


class PropagationError(RuntimeError):
    pass


@dataclass(frozen=True)
class SpectralPropagator:
    """Eigendecomposition ``M = Q diag(eigenvalues) Q^T`` of a real symmetric generator."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.size

    def reconstruct(self) -> np.ndarray:
        Q = self.eigenvectors
        return (Q * self.eigenvalues) @ Q.T

    def evolution_block(self, times, rows=slice(None), cols=slice(None), shift=0.0) -> np.ndarray:
        """Blocks ``exp(-i (M - shift) t)[rows, cols]`` for every t, shape ``(nt, nrows, ncols)``.

        A ``shift`` only multiplies the result by the global phase ``exp(i shift t)``.
        """
        Q = self.eigenvectors
        phases = np.exp(-1j * np.outer(np.atleast_1d(times), self.eigenvalues - shift))
        return np.einsum("ik,tk,jk->tij", Q[rows], phases, Q[cols], optimize=True)


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    """Shape ``(nt, D)`` for full states or ``(nt, 2)`` when reservoirs are dropped."""
    config_hash: str = ""

    def __post_init__(self):
        if self.times.ndim != 1 or self.states.shape[0] != self.times.size:
            raise ValueError("times and states must have matching lengths")
        if self.times.size and self.times[0] != 0:
            raise ValueError("trajectory must start at t = 0")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly increasing")

    @property
    def a1(self) -> np.ndarray:
        return self.states[:, 0]

    @property
    def a2(self) -> np.ndarray:
        return self.states[:, 1]

    @property
    def is_full(self) -> bool:
        return self.states.shape[1] > 2


def diagonalize(M: np.ndarray) -> SpectralPropagator:
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    if not np.array_equal(M, M.T):
        raise ValueError("generator must be exactly symmetric")
    try:
        lam, Q = np.linalg.eigh(M)
    except np.linalg.LinAlgError as exc:
        raise PropagationError(f"eigen-solver failed for dimension {M.shape[0]}: {exc}") from exc
    return SpectralPropagator(lam, Q)


def propagate(prop: SpectralPropagator, initial: np.ndarray, t: float) -> np.ndarray:
    """``Q exp(-i Lambda t) Q^T v(0)``."""
    v0 = np.asarray(initial, dtype=complex)
    if v0.shape != (prop.dim,):
        raise ValueError(f"state dimension {v0.shape} does not match generator dimension {prop.dim}")
    if t < 0:
        raise ValueError("t must be non-negative")
    Q = prop.eigenvectors
    return Q @ (np.exp(-1j * prop.eigenvalues * t) * (Q.T @ v0))


def sample_times(t_max: float, dt_sample: float) -> np.ndarray:
    """``0, dt, 2 dt, ...`` up to ``t_max``, tolerant to round-off at the end point."""
    if not t_max > 0 or not 0 < dt_sample <= t_max:
        raise ValueError("need t_max > 0 and 0 < dt_sample <= t_max")
    n = int(np.floor(t_max / dt_sample * (1 + 1e-12)))
    return dt_sample * np.arange(n + 1)


def sample_trajectory(
    prop: SpectralPropagator,
    initial: np.ndarray,
    t_max: float,
    dt_sample: float,
    keep_reservoirs: bool = True,
    config_hash: str = "",
) -> Trajectory:
    """Sample the exact solution; each state is computed independently from ``initial``."""
    v0 = np.asarray(initial, dtype=complex)
    if v0.shape != (prop.dim,):
        raise ValueError(f"state dimension {v0.shape} does not match generator dimension {prop.dim}")
    t = sample_times(t_max, dt_sample)
    Q = prop.eigenvectors
    rows = Q if keep_reservoirs else Q[:2]
    modal = Q.T @ v0
    states = (np.exp(-1j * np.outer(t, prop.eigenvalues)) * modal) @ rows.T
    return Trajectory(t, states, config_hash)


def _rk4_step(M, v, h):
    k1 = -1j * (M @ v)
    k2 = -1j * (M @ (v + 0.5 * h * k1))
    k3 = -1j * (M @ (v + 0.5 * h * k2))
    k4 = -1j * (M @ (v + h * k3))
    return v + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def integrate_rk(
    config: SystemConfig,
    initial: np.ndarray,
    t_max: float,
    dt_step: float,
    dt_sample: float,
    max_norm_growth: float = 0.01,
) -> Trajectory:
    """Classic fixed-step RK4 integration, sampled on the same grid as ``sample_trajectory``.

    The step is shrunk slightly so that an integer number of steps fits into
    each sampling interval.
    """
    if not dt_step > 0:
        raise ValueError("dt_step must be > 0")
    M = build_generator(config)
    v = np.asarray(initial, dtype=complex).copy()
    if v.shape != (M.shape[0],):
        raise ValueError(f"state dimension {v.shape} does not match generator dimension {M.shape[0]}")
    t = sample_times(t_max, dt_sample)
    n_sub = max(1, int(np.ceil(dt_sample / dt_step - 1e-9)))
    h = dt_sample / n_sub
    norm0 = np.vdot(v, v).real

    states = np.empty((t.size, v.size), dtype=complex)
    states[0] = v
    for i in range(1, t.size):
        for _ in range(n_sub):
            v = _rk4_step(M, v, h)
        norm = np.vdot(v, v).real
        if norm0 > 0 and abs(norm / norm0 - 1) > max_norm_growth:
            raise PropagationError(
                f"norm drifted by {norm / norm0 - 1:.3g} at t={t[i]:.6g}; reduce dt_step (now {h:.3g})"
            )
        states[i] = v
    return Trajectory(t, states, config.digest())
