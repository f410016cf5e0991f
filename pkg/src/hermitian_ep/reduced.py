"""Effective 2x2 non-Hermitian model of the two oscillators.

    d/dt (a1, a2) = G (a1, a2),   G = [[-i w0 - g1, -i W], [-i W, -i w0 - g2]]

with decay rates estimated from the reservoir combs by the golden-rule
expression ``pi g^2 / step``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import ReservoirSpec, SystemConfig

# Relative distance to the EP below which the Jordan-form solution is used.
COALESCENCE_RTOL = 1e-8


@dataclass(frozen=True)
class ReducedParams:
    omega0: float
    coupling: float
    gamma1: float
    gamma2: float

    def __post_init__(self):
        if not (self.gamma1 >= 0 and self.gamma2 >= 0):
            raise ValueError(f"decay rates must be >= 0, got {self.gamma1!r}, {self.gamma2!r}")

    @property
    def half_difference(self) -> float:
        """``(gamma1 - gamma2) / 2``, signed."""
        return (self.gamma1 - self.gamma2) / 2

    @property
    def mean_decay(self) -> float:
        return (self.gamma1 + self.gamma2) / 2

    def with_coupling(self, coupling: float) -> "ReducedParams":
        return ReducedParams(self.omega0, float(coupling), self.gamma1, self.gamma2)


@dataclass(frozen=True)
class EigenPair2x2:
    """Eigenvalues ``lambda1`` (slower decay below the EP) and ``lambda2`` with unit eigenvectors."""

    lambda1: complex
    lambda2: complex
    h1: np.ndarray
    h2: np.ndarray
    coalesced: bool = False


def decay_rate(spec: ReservoirSpec) -> float:
    if spec.n_modes == 0:
        return 0.0
    return math.pi * spec.coupling**2 / spec.freq_step


def reduced_params(config: SystemConfig) -> ReducedParams:
    return ReducedParams(
        config.omega0, config.coupling, decay_rate(config.reservoir1), decay_rate(config.reservoir2)
    )


def ep_coupling(params: ReducedParams) -> float:
    return abs(params.gamma1 - params.gamma2) / 2


def generator(params: ReducedParams) -> np.ndarray:
    w = -1j * params.omega0
    return np.array(
        [[w - params.gamma1, -1j * params.coupling], [-1j * params.coupling, w - params.gamma2]]
    )


def _discriminant_root(params: ReducedParams) -> complex:
    # Principal branch: real and >= 0 below the EP, purely imaginary above it.
    # Factored as sqrt(|a - b|) sqrt(a + b) to avoid underflow and cancellation.
    a, b = abs(params.half_difference), abs(params.coupling)
    r = math.sqrt(abs(a - b)) * math.sqrt(a + b)
    return complex(r, 0.0) if a >= b else complex(0.0, r)


def _is_coalesced(params: ReducedParams) -> bool:
    w_ep = ep_coupling(params)
    scale = max(w_ep, abs(params.coupling))
    return abs(abs(params.coupling) - w_ep) <= COALESCENCE_RTOL * scale


def _traceless(params: ReducedParams) -> np.ndarray:
    """``G - centre I`` built from the parameters, free of cancellation against omega0."""
    h = params.half_difference
    w = params.coupling
    return np.array([[-h, -1j * w], [-1j * w, h]])


def _eigenvector(K: np.ndarray, s: complex) -> np.ndarray:
    # Null vector of the rank-1 matrix K - s I (= G - lambda I), from the better-conditioned row.
    A = K - s * np.eye(2)
    cand = [np.array([-A[0, 1], A[0, 0]]), np.array([-A[1, 1], A[1, 0]])]
    h = max(cand, key=lambda v: np.abs(v).max())
    big = np.abs(h).max()
    if big == 0:
        return None
    h = h / big
    h = h / np.linalg.norm(h)
    # Phase convention: second component real and non-negative.
    ref = 1 if h[1] != 0 else 0
    h = h * np.exp(-1j * np.angle(h[ref]))
    h[ref] = abs(h[ref])
    return h


def eigensystem(params: ReducedParams) -> EigenPair2x2:
    coalesced = _is_coalesced(params)
    s = 0j if coalesced else _discriminant_root(params)
    centre = complex(-params.mean_decay, -params.omega0)
    lam1, lam2 = centre + s, centre - s

    if params.coupling == 0:
        # Decoupled: basis vectors, the slower decaying oscillator first.
        e1, e2 = np.array([1, 0], dtype=complex), np.array([0, 1], dtype=complex)
        lam_a = complex(-params.gamma1, -params.omega0)
        lam_b = complex(-params.gamma2, -params.omega0)
        if params.gamma1 <= params.gamma2:
            return EigenPair2x2(lam_a, lam_b, e1, e2)
        return EigenPair2x2(lam_b, lam_a, e2, e1)

    K = _traceless(params)
    h1 = _eigenvector(K, s)
    h2 = h1.copy() if coalesced else _eigenvector(K, -s)
    return EigenPair2x2(lam1, lam2, h1, h2, coalesced)


def _cosh_sinhc(s: complex, t: np.ndarray):
    """``cosh(s t) e^{-|Re s| t}`` and ``sinh(s t) / s e^{-|Re s| t}``.

    Both are entire in ``s``; the series branch covers the EP (``s -> 0``)
    without dividing by a vanishing ``s``.
    """
    z = s * t
    damp = np.exp(-abs(s.real) * t)
    ep = np.exp(z - abs(s.real) * t)
    em = np.exp(-z - abs(s.real) * t)
    cosh = (ep + em) / 2
    small = np.abs(z) < 1e-3
    with np.errstate(divide="ignore", invalid="ignore"):
        sinhc = np.where(small, 0, (ep - em) / (2 * np.where(small, 1, z))) * t
    z2 = z[small] ** 2
    sinhc[small] = damp[small] * t[small] * (1 + z2 / 6 + z2 * z2 / 120)
    return cosh, sinhc


def ratio_propagator(params: ReducedParams, t: np.ndarray) -> np.ndarray:
    """``exp(G t)`` with the factor ``exp((centre + |Re s|) t)`` removed, shape ``(nt, 2, 2)``.

    Amplitude ratios are unaffected by the dropped scalar, which keeps long
    horizons (hundreds of decay times) free of underflow.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    K = _traceless(params)  # K^2 = s^2 I
    cosh, sinhc = _cosh_sinhc(_discriminant_root(params), t)
    return cosh[:, None, None] * np.eye(2) + sinhc[:, None, None] * K


def solve_reduced(params: ReducedParams, a1_0: complex, a2_0: complex, t):
    """Exact solution ``exp(G t) a(0)``.

    Away from the EP this equals ``c1 h1 exp(lambda1 t) + c2 h2 exp(lambda2 t)``;
    at the EP it reduces to the Jordan form ``exp(lambda t) (a(0) + t K a(0))``.
    It is evaluated as ``exp(centre t) (cosh(s t) + sinh(s t)/s K) a(0)``, which
    needs no eigenvector basis and so stays accurate arbitrarily close to
    coalescence.  ``t`` may be a scalar or an array.
    """
    if a1_0 == 0 and a2_0 == 0:
        raise ValueError("initial amplitudes must not both vanish")
    t_arr = np.asarray(t, dtype=float)
    tt = np.atleast_1d(t_arr).ravel()
    if np.any(tt < 0):
        raise ValueError("t must be non-negative")
    a0 = np.array([a1_0, a2_0], dtype=complex)
    s = _discriminant_root(params)
    centre = complex(-params.mean_decay, -params.omega0)
    # exponent real part -mean_decay + |Re s| <= 0, so no overflow
    scale = np.exp((centre + abs(s.real)) * tt)
    out = (ratio_propagator(params, tt) @ a0) * scale[:, None]
    a1 = out[:, 0].reshape(t_arr.shape)
    a2 = out[:, 1].reshape(t_arr.shape)
    if t_arr.ndim == 0:
        return complex(a1), complex(a2)
    return a1, a2
