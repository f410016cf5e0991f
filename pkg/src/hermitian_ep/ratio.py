"""Riccati dynamics of the amplitude ratio ``A = a1 / a2`` in the reduced model.

In complex form ``dA/dt = (g2 - g1) A + i W A^2 - i W``; split into real and
imaginary parts this is a planar vector field whose fixed points are the
eigenvector ratios of the 2x2 generator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .reduced import ReducedParams, _is_coalesced, ep_coupling

ESCAPE_RADIUS = 1e6


class RatioPoint(NamedTuple):
    re: float
    im: float

    def to_complex(self) -> complex:
        return complex(self.re, self.im)


def riccati_rhs(re, im, params: ReducedParams):
    """Vector field ``(dRe A/dt, dIm A/dt)``; works elementwise on arrays."""
    k = params.gamma2 - params.gamma1
    w = params.coupling
    d_re = k * re - 2 * w * re * im
    d_im = k * im + w * (re * re - im * im) - w
    return d_re, d_im


def riccati_rhs_complex(A, params: ReducedParams):
    return (params.gamma2 - params.gamma1) * A + 1j * params.coupling * A * A - 1j * params.coupling


def jacobian(point: RatioPoint, params: ReducedParams) -> np.ndarray:
    p = (params.gamma2 - params.gamma1) - 2 * params.coupling * point.im
    q = 2 * params.coupling * point.re
    return np.array([[p, -q], [q, p]])


@dataclass(frozen=True)
class FixedPoint:
    point: RatioPoint
    kind: str  # attractor | repeller | center | saddle | degenerate
    jacobian_eigenvalues: tuple


@dataclass(frozen=True)
class FixedPoints:
    regime: str  # below | exceptional | above | decoupled
    points: tuple
    note: str = ""


def _classify(eigs, scale) -> str:
    tol = 1e-12 * scale
    re = [e.real for e in eigs]
    if all(abs(r) <= tol for r in re):
        return "center" if any(abs(e.imag) > tol for e in eigs) else "degenerate"
    if all(r < -tol for r in re):
        return "attractor"
    if all(r > tol for r in re):
        return "repeller"
    return "saddle"


def fixed_points(params: ReducedParams) -> FixedPoints:
    """Both fixed points with their stability.

    ``W = 0`` is reported as the ``decoupled`` regime: the only finite fixed
    point is ``A = 0``; its partner has moved to infinity.
    """
    delta = params.gamma1 - params.gamma2
    w = params.coupling
    scale = max(abs(delta), abs(w), 1e-300)

    def make(re, im):
        pt = RatioPoint(float(re), float(im))
        eigs = tuple(complex(e) for e in np.linalg.eigvals(jacobian(pt, params)))
        return FixedPoint(pt, _classify(eigs, scale), eigs)

    if w == 0:
        return FixedPoints("decoupled", (make(0.0, 0.0),), note="second fixed point at infinity")

    if _is_coalesced(params):
        # Both branches meet on the imaginary axis.
        pt = make(0.0, -delta / (2 * w))
        return FixedPoints("exceptional", (pt, pt))
    if abs(w) < ep_coupling(params):
        root = math.sqrt(delta * delta - 4 * w * w)
        pts = (make(0.0, (-delta + root) / (2 * w)), make(0.0, (-delta - root) / (2 * w)))
        return FixedPoints("below", pts)
    root = math.sqrt(4 * w * w - delta * delta)
    im = -delta / (2 * w)
    pts = (make(root / (2 * w), im), make(-root / (2 * w), im))
    return FixedPoints("above", pts)


def attractor(params: ReducedParams) -> RatioPoint:
    """Stable fixed point below the EP."""
    fps = fixed_points(params)
    for fp in fps.points:
        if fp.kind == "attractor":
            return fp.point
    raise ValueError(f"no attracting fixed point in regime {fps.regime!r}")


def default_step(params: ReducedParams) -> float:
    scale = max(abs(params.gamma1 - params.gamma2), abs(params.coupling), ep_coupling(params))
    if scale == 0:
        raise ValueError("field vanishes identically; no natural time step")
    return 1e-2 / scale


@dataclass
class RatioTrajectory:
    times: np.ndarray
    values: np.ndarray  # complex A(t)
    escaped: bool = False

    @property
    def re(self):
        return self.values.real

    @property
    def im(self):
        return self.values.imag


def _integrate_many(A0, params, t_span, dt, escape_radius, record_every):
    n_steps = max(1, int(math.ceil(t_span / dt - 1e-9)))
    h = t_span / n_steps
    x = np.array(A0.real, dtype=float)
    y = np.array(A0.imag, dtype=float)
    alive = np.ones(x.shape, dtype=bool)
    rec_idx = list(range(0, n_steps + 1, record_every))
    if rec_idx[-1] != n_steps:
        rec_idx.append(n_steps)
    rec = np.empty((len(rec_idx), x.size), dtype=complex)
    rec[0] = x + 1j * y
    r = 1
    for i in range(1, n_steps + 1):
        k1x, k1y = riccati_rhs(x, y, params)
        k2x, k2y = riccati_rhs(x + 0.5 * h * k1x, y + 0.5 * h * k1y, params)
        k3x, k3y = riccati_rhs(x + 0.5 * h * k2x, y + 0.5 * h * k2y, params)
        k4x, k4y = riccati_rhs(x + h * k3x, y + h * k3y, params)
        nx = x + h / 6 * (k1x + 2 * k2x + 2 * k3x + k4x)
        ny = y + h / 6 * (k1y + 2 * k2y + 2 * k3y + k4y)
        out = alive & ~(np.hypot(nx, ny) <= escape_radius)
        alive &= ~out
        x = np.where(alive, nx, x)
        y = np.where(alive, ny, y)
        if i == rec_idx[r]:
            rec[r] = np.where(alive, x + 1j * y, np.nan)
            r += 1
        if not alive.any():
            rec[r:] = np.nan
            break
    times = h * np.array(rec_idx, dtype=float)
    return times, rec, ~alive


def integrate_ratio(
    A0,
    params: ReducedParams,
    t_span: float,
    dt: float | None = None,
    escape_radius: float = ESCAPE_RADIUS,
    record_every: int = 1,
) -> RatioTrajectory:
    """Fixed-step RK4 integration of the planar Riccati field.

    A trajectory leaving ``|A| <= escape_radius`` (near the pole ``a2 = 0``)
    is truncated at the last finite sample and flagged ``escaped``.
    """
    if dt is None:
        dt = default_step(params)
    z0 = complex(*A0) if isinstance(A0, tuple) else complex(A0)
    times, rec, escaped = _integrate_many(np.array([z0]), params, t_span, dt, escape_radius, record_every)
    values = rec[:, 0]
    keep = np.isfinite(values)
    return RatioTrajectory(times[keep], values[keep], bool(escaped[0]))


@dataclass(frozen=True)
class PortraitSpec:
    re_range: tuple = (-3.0, 3.0)
    im_range: tuple = (-3.0, 3.0)
    grid: tuple = (25, 25)
    seeds: tuple = ()
    t_span: float | None = None

    def __post_init__(self):
        for lo, hi in (self.re_range, self.im_range):
            if not lo < hi:
                raise ValueError(f"degenerate interval ({lo}, {hi})")
        if min(self.grid) < 2:
            raise ValueError("grid counts must be >= 2")


@dataclass
class Portrait:
    re: np.ndarray
    im: np.ndarray
    d_re: np.ndarray
    d_im: np.ndarray
    trajectories: list = field(default_factory=list)
    fixed: FixedPoints | None = None


def generate_portrait(spec: PortraitSpec, params: ReducedParams) -> Portrait:
    re = np.linspace(*spec.re_range, spec.grid[0])
    im = np.linspace(*spec.im_range, spec.grid[1])
    X, Y = np.meshgrid(re, im, indexing="xy")
    U, V = riccati_rhs(X, Y, params)
    trajs = []
    if spec.seeds:
        t_span = spec.t_span
        if t_span is None:
            t_span = 50 / max(abs(params.gamma1 - params.gamma2), abs(params.coupling))
        for seed in spec.seeds:
            trajs.append(integrate_ratio(seed, params, t_span, record_every=10))
    return Portrait(X, Y, U, V, trajs, fixed_points(params))
