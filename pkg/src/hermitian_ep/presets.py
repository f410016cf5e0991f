"""Named parameter sets for the reference scenarios.

Each preset is a plain nested dict in the same schema accepted from config
files (see :mod:`hermitian_ep.config`).  All frequencies are in units of
omega0, times in 1/omega0.
"""

from __future__ import annotations

import copy
import math

SQRT2 = math.sqrt(2)
SQRT10 = math.sqrt(10)

# Two 40-mode reservoirs, second comb denser by sqrt(2).
_STEP_40 = 5e-3
_T_R40 = 2 * math.pi / _STEP_40

# Four-mode reservoirs: ten degrees of freedom in total.
_STEP_4 = 5e-2
_T_R4 = 2 * math.pi / _STEP_4


def _res(n, step, g):
    return {"n_modes": n, "freq_step": step, "coupling": g}


def _fig6_system(coupling):
    return {
        "omega0": 1.0,
        "coupling": coupling,
        "reservoir1": _res(40, _STEP_40, 2 * SQRT10 * 1e-3),
        "reservoir2": _res(40, _STEP_40 / SQRT2, SQRT10 * 1e-3),
        "t_max": 4 * _T_R40,
        "dt_sample": _T_R40 / 200,
    }


def _ep_grid(T, model="hermitian", dt=0.5):
    return {
        "T": T,
        "start": 0.1,
        "stop": 3.0,
        "steps": 30,
        "log": False,
        "units": "ep",
        "model": model,
        "pole_eps": 1e-6,
        "dt": dt,
    }


# Portrait scenarios: gamma1 - gamma2 = 0.02, so the EP coupling is 0.01.
_FIG3_REDUCED = {"gamma1": 0.03, "gamma2": 0.01}


def _fig3(multiple):
    return {
        "system": {
            "omega0": 1.0,
            "coupling": multiple * 0.01,
            "reservoir1": _res(0, 1.0, 0.0),
            "reservoir2": _res(0, 1.0, 0.0),
            "t_max": 5000.0,
            "dt_sample": 1.0,
        },
        "reduced": dict(_FIG3_REDUCED),
        "portrait": {
            "re_range": [-3.0, 3.0],
            "im_range": [-3.0, 3.0],
            "grid": [25, 25],
            "seeds": [[0.5, 2.0], [-0.5, 2.0], [1.5, -1.0], [-1.5, -1.0], [0.3, -2.5], [-0.3, -2.5]],
        },
    }


PRESETS = {
    "fig2": {
        "system": {
            "omega0": 1.0,
            "coupling": 1e-4,
            "reservoir1": _res(40, _STEP_40, 1.5e-3),
            "reservoir2": _res(40, _STEP_40 / SQRT2, 1.5e-3),
            "t_max": 3 * SQRT2 * _T_R40,
            "dt_sample": _T_R40 / 200,
        },
        "initial": {"a1": 1.0, "a2": 1.0},
    },
    "fig3a": _fig3(0.7),
    "fig3b": _fig3(1.0),
    "fig3c": _fig3(1.5),
    "fig4": {
        "system": _fig6_system(1e-4),
        "reduced": dict(_FIG3_REDUCED),
        "ensemble": {"n_states": 300, "seed": 20240},
        "sweep": _ep_grid(100 / 0.02, model="reduced"),
    },
    "fig5a": {
        "system": _fig6_system(1e-4),
        "ensemble": {"n_states": 800, "seed": 20240},
        "sweep": _ep_grid(650.0),
    },
    "fig5b": {
        "system": _fig6_system(1e-4),
        "ensemble": {"n_states": 300, "seed": 20240},
        "sweep": _ep_grid(13000.0),
    },
    "fig6a": {
        "system": _fig6_system(1e-4),
        "initial": {"a1": 1.0, "a2": 1.0},
        "diagnostics": {"threshold": 0.1, "smooth_window": _T_R40 / 20},
    },
    "fig6b": {
        "system": _fig6_system(2e-2),
        "initial": {"a1": 1.0, "a2": 1.0},
        "diagnostics": {"threshold": 0.1, "smooth_window": _T_R40 / 20},
    },
    "fig7": {
        "system": {
            "omega0": 1.0,
            "coupling": 1e-3,
            "reservoir1": _res(4, _STEP_4, 2.5e-2),
            "reservoir2": _res(4, _STEP_4, 1.5e-2),
            "t_max": 10 * _T_R4,
            "dt_sample": _T_R4 / 200,
        },
        "initial": {"a1": 1.0, "a2": 1.0},
        "ensemble": {"n_states": 500, "seed": 20240},
        "sweep": _ep_grid(30 * _T_R4),
    },
    # Two cavities, only the first coupled to a finite waveguide.
    "fig8": {
        "system": {
            "omega0": 1.0,
            "coupling": 1e-4,
            "reservoir1": _res(40, _STEP_40, 2 * SQRT10 * 1e-3),
            "reservoir2": _res(0, _STEP_40, 0.0),
            "t_max": 4 * _T_R40,
            "dt_sample": _T_R40 / 200,
        },
        "initial": {"a1": 1.0, "a2": 1.0},
        "ensemble": {"n_states": 300, "seed": 20240},
        "sweep": _ep_grid(10 * _T_R40),
    },
}


def get_preset(name: str) -> dict:
    try:
        return copy.deepcopy(PRESETS[name])
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; available: {', '.join(sorted(PRESETS))}") from None
