"""Physical configuration and the real symmetric generator of the closed linear system.

Units: every frequency is measured in units of the bare oscillator frequency
``omega0`` and every time in ``1/omega0``.  The amplitude vector is ordered
``(a1, a2, b_1..b_N1, c_1..c_N2)`` and obeys ``dv/dt = -i M v``.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass, replace

import numpy as np

DEFAULT_MAX_DIM = 2000


class ConfigError(ValueError):
    """Invalid physical configuration."""


@dataclass(frozen=True)
class ReservoirSpec:
    """Equidistant comb of ``n_modes`` oscillators coupled with equal strength.

    ``n_modes = 0`` describes an absent reservoir.
    """

    n_modes: int
    freq_step: float
    coupling: float

    def __post_init__(self):
        if int(self.n_modes) != self.n_modes or self.n_modes < 0:
            raise ConfigError(f"n_modes must be a non-negative integer, got {self.n_modes!r}")
        if not self.freq_step > 0 or not math.isfinite(self.freq_step):
            raise ConfigError(f"freq_step must be finite and > 0, got {self.freq_step!r}")
        if not self.coupling >= 0 or not math.isfinite(self.coupling):
            raise ConfigError(f"coupling must be finite and >= 0, got {self.coupling!r}")


@dataclass(frozen=True)
class SystemConfig:
    omega0: float
    coupling: float
    reservoir1: ReservoirSpec
    reservoir2: ReservoirSpec
    t_max: float
    dt_sample: float

    def __post_init__(self):
        if not self.omega0 > 0:
            raise ConfigError(f"omega0 must be > 0, got {self.omega0!r}")
        if not math.isfinite(self.coupling):
            raise ConfigError(f"coupling must be finite, got {self.coupling!r}")
        if not self.t_max > 0:
            raise ConfigError(f"t_max must be > 0, got {self.t_max!r}")
        if not 0 < self.dt_sample <= self.t_max:
            raise ConfigError(
                f"dt_sample must satisfy 0 < dt_sample <= t_max, got {self.dt_sample!r}"
            )

    @property
    def dim(self) -> int:
        return 2 + self.reservoir1.n_modes + self.reservoir2.n_modes

    def with_coupling(self, coupling: float) -> "SystemConfig":
        return replace(self, coupling=float(coupling))

    def to_dict(self) -> dict:
        return asdict(self)

    def digest(self) -> str:
        """Short stable identifier of the configuration."""
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


def reservoir_frequencies(spec: ReservoirSpec, omega0: float = 1.0) -> np.ndarray:
    """Mode frequencies ``omega0 + step * (k - N/2)`` for ``k = 1..N``."""
    k = np.arange(1, spec.n_modes + 1, dtype=float)
    return omega0 + spec.freq_step * (k - spec.n_modes / 2)


def return_time(spec: ReservoirSpec) -> float:
    """Time after which the comb re-emits energy into its oscillator."""
    return 2 * math.pi / spec.freq_step


def build_generator(config: SystemConfig, max_dim: int = DEFAULT_MAX_DIM) -> np.ndarray:
    """Assemble the real symmetric matrix ``M`` with ``dv/dt = -i M v``."""
    r1, r2 = config.reservoir1, config.reservoir2
    dim = config.dim
    if dim > max_dim:
        raise ConfigError(f"system dimension {dim} exceeds the cap of {max_dim}")

    M = np.zeros((dim, dim))
    M[0, 0] = M[1, 1] = config.omega0
    M[0, 1] = M[1, 0] = config.coupling

    s1 = slice(2, 2 + r1.n_modes)
    s2 = slice(2 + r1.n_modes, dim)
    idx1 = np.arange(2, 2 + r1.n_modes)
    idx2 = np.arange(2 + r1.n_modes, dim)
    M[idx1, idx1] = reservoir_frequencies(r1, config.omega0)
    M[idx2, idx2] = reservoir_frequencies(r2, config.omega0)
    M[0, s1] = M[s1, 0] = r1.coupling
    M[1, s2] = M[s2, 1] = r2.coupling
    return M


def initial_state(config: SystemConfig, a1: complex, a2: complex) -> np.ndarray:
    """Full amplitude vector with the given oscillator amplitudes and empty reservoirs."""
    v = np.zeros(config.dim, dtype=complex)
    v[0], v[1] = a1, a2
    return v
