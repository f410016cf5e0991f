"""CSV and SVG artifacts.

Every CSV starts with a ``# config: {...}`` comment holding the fully resolved
configuration, so outputs are self-describing.  Floats are written with
``repr`` for exact round-tripping.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

TRAJECTORY_HEADER = ["t", "re_a1", "im_a1", "re_a2", "im_a2", "abs_a1", "abs_a2"]
SWEEP_HEADER = [
    "omega", "abs_D12", "re_D12", "im_D12", "re_meanI", "im_meanI", "n_valid", "n_discarded", "T", "seed",
]
PORTRAIT_HEADER = ["re", "im", "dre_dt", "dim_dt"]
RATIO_TRAJECTORY_HEADER = ["t", "re_A", "im_A", "escaped"]
DIAGNOSTICS_HEADER = ["peak_time", "oscillator"]


def _fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def _write(path, meta: dict, header, rows, extra_comments=()):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        fh.write("# config: " + json.dumps(meta, sort_keys=True) + "\n")
        for line in extra_comments:
            fh.write(f"# {line}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
    return path


def write_trajectory_csv(path, traj, meta: dict, full: bool = False, model: str | None = None):
    """Oscillator amplitudes per sample; ``full`` appends reservoir columns when available."""
    header = list(TRAJECTORY_HEADER)
    states = traj.states
    n_b = n_c = 0
    if full and traj.is_full:
        n_b = meta.get("system", {}).get("reservoir1", {}).get("n_modes", 0)
        n_c = states.shape[1] - 2 - n_b
        for name, n in (("b", n_b), ("c", n_c)):
            for k in range(1, n + 1):
                header += [f"re_{name}{k}", f"im_{name}{k}"]
    if model is not None:
        header.append("model")

    def rows():
        for t, v in zip(traj.times, states):
            a1, a2 = v[0], v[1]
            row = [t, a1.real, a1.imag, a2.real, a2.imag, abs(a1), abs(a2)]
            for x in v[2 : 2 + n_b + n_c]:
                row += [x.real, x.imag]
            if model is not None:
                row.append(model)
            yield row

    return _write(path, meta, header, rows())


def write_sweep_csv(path, results, meta: dict):
    rows = (
        [r.coupling, r.abs_var, r.var_D.real, r.var_D.imag, r.mean_I.real, r.mean_I.imag,
         r.n_valid, r.n_discarded, r.T, r.seed]
        for r in results
    )
    return _write(path, meta, SWEEP_HEADER, rows)


def write_portrait_csv(path, portrait, meta: dict):
    rows = zip(portrait.re.ravel(), portrait.im.ravel(), portrait.d_re.ravel(), portrait.d_im.ravel())
    return _write(path, meta, PORTRAIT_HEADER, rows)


def write_ratio_trajectory_csv(path, traj, meta: dict):
    rows = ([t, a.real, a.imag, traj.escaped] for t, a in zip(traj.times, traj.values))
    return _write(path, meta, RATIO_TRAJECTORY_HEADER, rows)


def write_diagnostics_csv(path, report, meta: dict):
    rows = [[t, 1] for t in report.peaks1] + [[t, 2] for t in report.peaks2]
    return _write(path, meta, DIAGNOSTICS_HEADER, rows, [f"sync_score: {report.sync_score!r}"])


def read_csv(path):
    """Parse one of our CSVs back into ``(meta, header, rows)``."""
    with Path(path).open() as fh:
        first = fh.readline()
        meta = json.loads(first.split(":", 1)[1]) if first.startswith("# config:") else {}
        lines = [ln for ln in fh if not ln.startswith("#")]
    reader = csv.reader(lines)
    header = next(reader)
    return meta, header, [row for row in reader]


# -- SVG ---------------------------------------------------------------------


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    # Fixed ids and no timestamp: identical inputs give identical files.
    plt.rcParams["svg.hashsalt"] = "hermitian-ep"
    return plt


def _save(fig, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, format="svg", metadata={"Date": None})
    fig.clf()
    return path


def plot_trajectory_svg(path, traj, overlay=None, return_times=()):
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(8, 4))
    ax.plot(traj.times, np.abs(traj.a1), color="tab:blue", lw=1, label="|a1|")
    ax.plot(traj.times, np.abs(traj.a2), color="tab:red", lw=1, label="|a2|")
    if overlay is not None:
        ax.plot(overlay.times, np.abs(overlay.a1), "k--", lw=0.8, label="reduced")
        ax.plot(overlay.times, np.abs(overlay.a2), "k--", lw=0.8)
    for tr in return_times:
        ax.axvline(tr, color="gray", ls=":", lw=0.8)
    ax.set_xlabel(r"$t\,\omega_0$")
    ax.set_ylabel("amplitude")
    ax.legend(loc="upper right")
    fig.tight_layout()
    path = _save(fig, path)
    plt.close(fig)
    return path


def plot_sweep_svg(path, results, ep=None):
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 4))
    x = [r.coupling for r in results]
    y = [r.abs_var for r in results]
    ax.plot(x, y, "o-", ms=3)
    if ep is not None:
        ax.axvline(ep, color="k", ls="--", lw=1)
    ax.set_xlabel(r"$\Omega/\omega_0$")
    ax.set_ylabel(r"$|D_{12}(T)|$")
    fig.tight_layout()
    path = _save(fig, path)
    plt.close(fig)
    return path


def plot_portrait_svg(path, portrait):
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(5, 5))
    mag = np.hypot(portrait.d_re, portrait.d_im)
    mag[mag == 0] = 1
    ax.quiver(portrait.re, portrait.im, portrait.d_re / mag, portrait.d_im / mag, angles="xy", color="gray")
    for tr in portrait.trajectories:
        ax.plot(tr.re, tr.im, lw=1)
    if portrait.fixed is not None:
        for fp in portrait.fixed.points:
            ax.plot(fp.point.re, fp.point.im, "ko" if fp.kind == "attractor" else "kx")
    ax.set_xlim(portrait.re.min(), portrait.re.max())
    ax.set_ylim(portrait.im.min(), portrait.im.max())
    ax.set_xlabel("Re A")
    ax.set_ylabel("Im A")
    fig.tight_layout()
    path = _save(fig, path)
    plt.close(fig)
    return path
