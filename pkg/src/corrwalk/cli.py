"""Command-line experiments: figure presets and custom parameter sweeps.

Every preset writes plain data files (CSV by default, JSON on request)
plus a ``manifest.json`` that echoes the full experiment spec and master
seed, which is enough to reproduce every file byte for byte.  Timestamps
live only in the manifest.  Rendering is left to external tools.

Seeding rule: each task (a grid point, a trace, a panel) receives its own
master seed derived as the first 64-bit word of
``SeedSequence(master_seed, spawn_key=(task_id, i, j))``; per-sample
streams inside an ensemble are then split by ``ensemble.sample_seed``.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import sys
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__, disorder, ensemble, observables
from .backend import kernel_backend

THETA0 = np.pi / 4

# task ids for the seed-derivation rule (stable across releases)
TASK_FIG1_CALIBRATION = 1
TASK_FIG1_TRACE = 2
TASK_FIG2 = 3
TASK_FIG3_CURVE = 4
TASK_FIG3_GRID = 5
TASK_FIG4 = 6
TASK_FIG5 = 7
TASK_RUN = 8

TRACE_LENGTH = 300  # steps written per fig1 angle trace

PRESET_DEFAULTS = {
    "fig1": {"t_max": 5000, "samples": 1},
    "fig2": {"t_max": 10_000, "samples": 1},
    "fig3": {"t_max": 500, "samples": 100},
    "fig4": {"t_max": 500, "samples": 100},
    "fig5": {"t_max": 500, "samples": 1},
    "run": {"t_max": 500, "samples": 1},
}


@dataclass(frozen=True)
class ExperimentSpec:
    """Resolved parameters of one CLI invocation."""

    preset: str
    t_max: int
    samples: int
    master_seed: int
    out_dir: Path
    fmt: str = "csv"
    paper_scale: bool = False
    workers: int = 1
    correlations: tuple = ()
    strengths: tuple = ()
    observables: tuple = ("m2", "s_e")
    discard_fraction: float = 0.1

    def __post_init__(self):
        if self.fmt not in ("csv", "json"):
            raise ValueError(f"format must be csv or json, got {self.fmt!r}")
        for c in self.correlations:
            if not -1.0 <= c <= 1.0:
                raise ValueError(f"correlation {c} outside [-1, 1]")
        for r in self.strengths:
            if not 0.0 <= r <= 1.0:
                raise ValueError(f"strength {r} outside [0, 1]")


def _derived_master(seed: int, *key: int) -> int:
    words = np.random.SeedSequence(entropy=seed, spawn_key=key).generate_state(1, np.uint64)
    return int(words[0])


def _progress(message: str) -> None:
    print(message, file=sys.stderr, flush=True)


# ---------------------------------------------------------------------------
# deterministic writers

def _cell(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def write_table(directory: Path, stem: str, columns, rows, fmt: str) -> Path:
    """Write a column/row table as CSV or JSON; returns the path."""
    if fmt == "json":
        path = directory / f"{stem}.json"
        payload = {
            "columns": list(columns),
            "rows": [[(v.item() if isinstance(v, np.generic) else v) for v in row]
                     for row in rows],
        }
        path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        path = directory / f"{stem}.csv"
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(columns)
            for row in rows:
                writer.writerow([_cell(v) for v in row])
    return path


def write_matrix(directory: Path, stem: str, x, times, matrix, fmt: str) -> Path:
    """Dense (time x site) matrix: x-coordinate header row, t first column."""
    columns = ["t"] + [int(v) for v in x]
    rows = [[int(t)] + [float(v) for v in line] for t, line in zip(times, matrix)]
    return write_table(directory, stem, columns, rows, fmt)


def _point_config(spec: ExperimentSpec, task: int, i: int, j: int,
                  correlation: float, r: float, record, t_max: int | None = None,
                  samples: int | None = None, snapshot_times=None) -> ensemble.EnsembleConfig:
    t_max = spec.t_max if t_max is None else t_max
    params = disorder.DisorderParams(
        theta0=THETA0, r=r, correlation=correlation, length=t_max + 1)
    return ensemble.EnsembleConfig(
        t_max=t_max,
        samples=spec.samples if samples is None else samples,
        master_seed=_derived_master(spec.master_seed, task, i, j),
        disorder=params,
        record=tuple(record),
        snapshot_times=snapshot_times,
        workers=spec.workers,
    )


# ---------------------------------------------------------------------------
# presets

def preset_fig1(spec: ExperimentSpec) -> list[Path]:
    """Chain calibration: empirical autocorrelation vs persistence, plus
    two-level angle traces for antipersistent and persistent chains."""
    files = []
    rows = []
    for i, w in enumerate(np.linspace(0.0, 1.0, 21)):
        w = round(float(w), 10)
        seed = np.random.SeedSequence(
            entropy=spec.master_seed, spawn_key=(TASK_FIG1_CALIBRATION, i))
        z = disorder.sample_chain(w, spec.t_max, seed)
        rows.append((w, 2.0 * w - 1.0, disorder.empirical_autocorrelation(z)))
    files.append(write_table(
        spec.out_dir, "calibration",
        ["w", "correlation_theory", "correlation_empirical"], rows, spec.fmt))

    for j, c in enumerate((-0.8, 0.8)):
        seed = np.random.SeedSequence(
            entropy=spec.master_seed, spawn_key=(TASK_FIG1_TRACE, j))
        z = disorder.sample_chain(
            disorder.persistence_from_correlation(c), min(TRACE_LENGTH, spec.t_max), seed)
        seq = disorder.angles_from_chain(z, THETA0, 0.1)
        trace_rows = [(t, int(seq.z[t]), float(seq.theta[t])) for t in range(len(seq))]
        files.append(write_table(
            spec.out_dir, f"trace_C{c:+g}", ["t", "z", "theta"], trace_rows, spec.fmt))
    return files


def preset_fig2(spec: ExperimentSpec) -> list[Path]:
    """Spreading exponent versus chain correlation for several kick strengths."""
    r_values = (0.1, 0.5, 0.9)
    c_grid = [round(float(c), 10) for c in np.linspace(-1.0, 1.0, 11)]
    rows = []
    for i, r in enumerate(r_values):
        for j, c in enumerate(c_grid):
            _progress(f"[fig2] r={r} C={c:+g} ({i * len(c_grid) + j + 1}"
                      f"/{len(r_values) * len(c_grid)})")
            cfg = _point_config(spec, TASK_FIG2, i, j, c, r, record=("m2",))
            alphas = []
            for k in range(cfg.samples):
                series = ensemble.run_single(cfg, k)
                alphas.append(observables.fit_alpha(
                    series.t[1:], series.m2[1:], spec.discard_fraction))
            alphas = np.asarray(alphas)
            sem = float(alphas.std(ddof=1) / np.sqrt(len(alphas))) if len(alphas) > 1 else 0.0
            rows.append((r, c, float(alphas.mean()), sem, cfg.samples,
                         spec.t_max, spec.discard_fraction))
    return [write_table(
        spec.out_dir, "alpha_vs_correlation",
        ["r", "correlation", "alpha_mean", "alpha_sem", "samples", "t_max",
         "discard_fraction"], rows, spec.fmt)]


def preset_fig3(spec: ExperimentSpec) -> list[Path]:
    """Entanglement entropy: growth curves and its dependence on correlation."""
    files = []
    # growth curves for weak disorder, plus the disorder-free baseline
    for i, r in enumerate((0.05, 0.1)):
        for j, c in enumerate((-0.8, 0.8)):
            _progress(f"[fig3] curve r={r} C={c:+g}")
            cfg = _point_config(spec, TASK_FIG3_CURVE, i, j, c, r, record=("s_e",))
            result = ensemble.run_ensemble(cfg)
            rows = list(zip(result.t.tolist(), result.mean["s_e"], result.sem["s_e"]))
            files.append(write_table(
                spec.out_dir, f"se_vs_t_C{c:+g}_r{r:g}", ["t", "mean", "sem"],
                rows, spec.fmt))
    _progress("[fig3] clean baseline r=0")
    cfg = _point_config(spec, TASK_FIG3_CURVE, 9, 0, 1.0, 0.0,
                        record=("s_e",), samples=1)
    baseline = ensemble.run_single(cfg, 0)
    files.append(write_table(
        spec.out_dir, "se_vs_t_clean", ["t", "s_e"],
        list(zip(baseline.t.tolist(), baseline.s_e)), spec.fmt))

    # endpoint entropy across the correlation grid
    n_grid = 21 if spec.paper_scale else 11
    c_grid = [round(float(c), 10) for c in np.linspace(-1.0, 1.0, n_grid)]
    for i, r in enumerate((0.05, 0.1)):
        rows = []
        for j, c in enumerate(c_grid):
            _progress(f"[fig3] grid r={r} C={c:+g} ({j + 1}/{len(c_grid)})")
            cfg = _point_config(spec, TASK_FIG3_GRID, i, j, c, r, record=("s_e",))
            result = ensemble.run_ensemble(cfg)
            rows.append((c, float(result.mean["s_e"][-1]),
                         float(result.sem["s_e"][-1]), cfg.samples))
        files.append(write_table(
            spec.out_dir, f"se_vs_correlation_r{r:g}",
            ["correlation", "mean", "sem", "samples"], rows, spec.fmt))
    return files


def preset_fig4(spec: ExperimentSpec) -> list[Path]:
    """Endpoint entanglement, classical contrast, and interference versus
    kick strength, for moderate-to-strong correlations of both signs."""
    c_values = (-0.8, -0.6, -0.4, 0.4, 0.6, 0.8)
    r_grid = [round(float(r), 10) for r in np.linspace(0.0, 1.0, 11)]
    samples = 500 if spec.paper_scale else spec.samples
    point = {}
    for i, c in enumerate(c_values):
        for j, r in enumerate(r_grid):
            _progress(f"[fig4] C={c:+g} r={r} ({i * len(r_grid) + j + 1}"
                      f"/{len(c_values) * len(r_grid)})")
            cfg = _point_config(spec, TASK_FIG4, i, j, c, r,
                                record=("s_e", "jsd", "i_t"), samples=samples)
            result = ensemble.run_ensemble(cfg)
            point[(c, r)] = {
                name: (float(result.mean[name][-1]), float(result.sem[name][-1]))
                for name in ("s_e", "jsd", "i_t")
            }
    files = []
    for name, stem in (("s_e", "se_vs_r"), ("jsd", "jsd_vs_r"), ("i_t", "interference_vs_r")):
        rows = [(c, r, *point[(c, r)][name], samples)
                for c in c_values for r in r_grid]
        files.append(write_table(
            spec.out_dir, stem, ["correlation", "r", "mean", "sem", "samples"],
            rows, spec.fmt))
    # where does negative correlation out-entangle positive correlation?
    rows = []
    for c in (0.4, 0.6, 0.8):
        for r in r_grid:
            neg_mean, neg_sem = point[(-c, r)]["s_e"]
            pos_mean, pos_sem = point[(c, r)]["s_e"]
            delta = neg_mean - pos_mean
            sem_delta = float(np.hypot(neg_sem, pos_sem))
            rows.append((c, r, neg_mean, pos_mean, delta, sem_delta, delta > 0.0))
    files.append(write_table(
        spec.out_dir, "advantage",
        ["abs_correlation", "r", "se_negative", "se_positive", "delta",
         "sem_delta", "advantage"], rows, spec.fmt))
    return files


def preset_fig5(spec: ExperimentSpec) -> list[Path]:
    """Space-time maps of the normalized up/down imbalance, one realization
    per (strength, correlation) panel."""
    files = []
    for i, r in enumerate((0.05, 0.5)):
        for j, c in enumerate((-0.8, 0.8)):
            _progress(f"[fig5] panel r={r} C={c:+g}")
            cfg = _point_config(spec, TASK_FIG5, i, j, c, r,
                                record=("a",), samples=1)
            series = ensemble.run_single(cfg, 0)
            a = series.a_profiles
            peaks = np.max(np.abs(a), axis=1, keepdims=True)
            normalized = np.divide(a, peaks, out=np.zeros_like(a), where=peaks > 0)
            files.append(write_matrix(
                spec.out_dir, f"asymmetry_C{c:+g}_r{r:g}", series.positions,
                series.profile_times, normalized, spec.fmt))
    return files


def run_custom(spec: ExperimentSpec) -> list[Path]:
    """Sweep an explicit (correlation x strength) grid with chosen observables."""
    if not spec.correlations or not spec.strengths:
        raise ValueError("custom runs need at least one --correlation and one --strength")
    files = []
    for i, c in enumerate(spec.correlations):
        for j, r in enumerate(spec.strengths):
            _progress(f"[run] C={c:+g} r={r:g} "
                      f"({i * len(spec.strengths) + j + 1}"
                      f"/{len(spec.correlations) * len(spec.strengths)})")
            cfg = _point_config(spec, TASK_RUN, i, j, c, r, record=spec.observables)
            result = ensemble.run_ensemble(cfg)
            names = list(result.mean)
            columns = ["t"]
            for name in names:
                columns += [f"{name}_mean", f"{name}_sem"]
            rows = []
            for k, t in enumerate(result.t.tolist()):
                row = [t]
                for name in names:
                    row += [float(result.mean[name][k]), float(result.sem[name][k])]
                rows.append(row)
            files.append(write_table(
                spec.out_dir, f"series_C{c:+g}_r{r:g}", columns, rows, spec.fmt))
    return files


PRESETS = {
    "fig1": preset_fig1,
    "fig2": preset_fig2,
    "fig3": preset_fig3,
    "fig4": preset_fig4,
    "fig5": preset_fig5,
    "run": run_custom,
}


# ---------------------------------------------------------------------------
# argument handling

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="corrwalk",
        description="Quantum walks with Markov-correlated coin disorder: "
                    "experiment presets and custom sweeps.",
    )
    sub = parser.add_subparsers(dest="preset", required=True)
    for name, help_text in (
        ("fig1", "chain calibration and angle traces"),
        ("fig2", "spreading exponent versus correlation"),
        ("fig3", "entanglement entropy versus time and correlation"),
        ("fig4", "entropy, classical contrast, interference versus strength"),
        ("fig5", "space-time asymmetry maps"),
        ("run", "custom (correlation x strength) sweep"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--tmax", dest="t_max", type=int, default=None, help="steps per walk")
        p.add_argument("--samples", type=int, default=None, help="disorder realizations per point")
        p.add_argument("--seed", type=int, default=None, help="master seed (default 12345)")
        p.add_argument("--out", type=str, default=None, help="output directory")
        p.add_argument("--format", dest="fmt", choices=("csv", "json"), default=None)
        p.add_argument("--paper-scale", action="store_true", default=None,
                       help="full-scale settings (long runs)")
        p.add_argument("--workers", type=int, default=None, help="worker processes per ensemble")
        p.add_argument("--config", type=str, default=None,
                       help="JSON file with the same keys as the flags")
        if name == "run":
            p.add_argument("--correlation", type=float, nargs="+", default=None,
                           help="chain correlation values in [-1, 1]")
            p.add_argument("--strength", type=float, nargs="+", default=None,
                           help="kick strengths in [0, 1]")
            p.add_argument("--observables", type=str, default=None,
                           help="comma-separated: m2,s_e,jsd,i_t")
    return parser


def resolve_spec(args: argparse.Namespace) -> ExperimentSpec:
    """Merge flags over config-file values over preset defaults."""
    preset = args.preset
    merged = {
        "t_max": PRESET_DEFAULTS[preset]["t_max"],
        "samples": PRESET_DEFAULTS[preset]["samples"],
        "seed": 12345,
        "out": f"corrwalk_{preset}",
        "fmt": "csv",
        "paper_scale": False,
        "workers": 1,
        "correlation": None,
        "strength": None,
        "observables": "m2,s_e",
    }
    if args.config is not None:
        loaded = json.loads(Path(args.config).read_text())
        if not isinstance(loaded, dict):
            raise ValueError(f"{args.config}: config must be a JSON object")
        unknown = set(loaded) - set(merged)
        if unknown:
            raise ValueError(f"{args.config}: unknown config keys {sorted(unknown)}")
        merged.update(loaded)
    for key in merged:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    if merged["paper_scale"] and preset == "fig2":
        merged["t_max"] = max(merged["t_max"], 500_000)
    observed = merged["observables"]
    if isinstance(observed, str):
        observed = observed.split(",")
    return ExperimentSpec(
        preset=preset,
        t_max=int(merged["t_max"]),
        samples=int(merged["samples"]),
        master_seed=int(merged["seed"]),
        out_dir=Path(merged["out"]),
        fmt=merged["fmt"],
        paper_scale=bool(merged["paper_scale"]),
        workers=int(merged["workers"]),
        correlations=tuple(merged["correlation"] or ()),
        strengths=tuple(merged["strength"] or ()),
        observables=tuple(observed),
    )


def write_manifest(spec: ExperimentSpec, files: list[Path]) -> Path:
    payload = {
        "spec": {**dataclasses.asdict(spec), "out_dir": str(spec.out_dir)},
        "files": sorted(p.name for p in files),
        "seed_rule": "SeedSequence(master_seed, spawn_key=(task_id, i, j)); "
                     "samples split via spawn_key=(sample_index,)",
        "created": datetime.now(timezone.utc).isoformat(),
        "version": __version__,
        "kernel_backend": kernel_backend(),
    }
    path = spec.out_dir / "manifest.json"
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return path


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = resolve_spec(args)
        spec.out_dir.mkdir(parents=True, exist_ok=True)
        files = PRESETS[spec.preset](spec)
        manifest = write_manifest(spec, files)
    except (ValueError, ArithmeticError) as exc:
        print(f"corrwalk: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"corrwalk: I/O error: {exc}", file=sys.stderr)
        return 1
    _progress(f"[{spec.preset}] wrote {len(files)} data files and {manifest}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
