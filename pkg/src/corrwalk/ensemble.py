"""Seeded Monte Carlo ensembles of disordered walks.

Each sample draws its own disorder chain from a per-sample seed derived
from the master seed, evolves a walk, and records the requested
observables; the engine aggregates the series into means and standard
errors.  Samples are independent tasks, so they may run on any number of
worker processes; aggregation always reduces in ascending sample order,
making results bit-identical for every worker count.
"""
from __future__ import annotations

import csv
import dataclasses
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import disorder, lattice, observables


def sample_seed(master_seed: int, sample_index: int) -> np.random.SeedSequence:
    """Per-sample seed: SeedSequence(master_seed, spawn_key=(sample_index,)).

    Spawn keys give collision-free, statistically independent streams for
    distinct indices; a plain sum of seed and index would not.
    """
    return np.random.SeedSequence(entropy=master_seed, spawn_key=(sample_index,))


@dataclass(frozen=True)
class EnsembleConfig:
    """One ensemble: how long, how many samples, what to record.

    ``record`` names scalar observables ("m2", "s_e", "jsd", "i_t") and
    spatial profiles ("p", "a", "j"); profiles are only recorded at
    ``snapshot_times`` (None means every step) and only for single runs.
    ``disorder.length`` must cover t_max, plus one extra angle when
    interference is recorded (its value at step t uses the angle applied
    next).
    """

    t_max: int
    samples: int
    master_seed: int
    disorder: disorder.DisorderParams
    record: tuple = ("m2", "s_e")
    snapshot_times: tuple | None = None
    workers: int = 1

    def __post_init__(self):
        if self.t_max < 1:
            raise ValueError(f"t_max must be >= 1, got {self.t_max}")
        if self.samples < 1:
            raise ValueError(f"samples must be >= 1, got {self.samples}")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")
        object.__setattr__(self, "record", tuple(self.record))
        unknown = (set(self.record) - set(observables.SCALAR_OBSERVABLES)
                   - set(observables.PROFILE_OBSERVABLES))
        if unknown:
            raise ValueError(f"unknown observables: {sorted(unknown)}")
        if self.disorder.length < self.t_max:
            raise ValueError(
                f"disorder length {self.disorder.length} shorter than t_max {self.t_max}")
        needs_extra = "i_t" in self.record or "j" in self.record
        if needs_extra and self.disorder.length < self.t_max + 1:
            raise ValueError(
                "recording interference through the final step needs "
                f"disorder length >= t_max + 1 = {self.t_max + 1}")
        if self.snapshot_times is not None:
            object.__setattr__(
                self, "snapshot_times", tuple(int(t) for t in self.snapshot_times))


@dataclass
class EnsembleResult:
    """Sample-averaged series plus per-sample final values and metadata."""

    config: EnsembleConfig
    t: np.ndarray
    mean: dict[str, np.ndarray]
    sem: dict[str, np.ndarray]
    final_values: dict[str, np.ndarray]
    sample_seeds: tuple

    def to_dict(self) -> dict:
        """JSON-ready dictionary with metadata and arrays."""
        cfg = dataclasses.asdict(self.config)
        cfg["record"] = list(cfg["record"])
        if cfg["snapshot_times"] is not None:
            cfg["snapshot_times"] = list(cfg["snapshot_times"])
        return {
            "config": cfg,
            "sample_seeds": [list(key) for key in self.sample_seeds],
            "t": self.t.tolist(),
            "mean": {k: v.tolist() for k, v in self.mean.items()},
            "sem": {k: v.tolist() for k, v in self.sem.items()},
            "final_values": {k: v.tolist() for k, v in self.final_values.items()},
        }

    def write_json(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n")

    def write_csv(self, directory, stem: str) -> list[Path]:
        """One tidy CSV per observable: columns t, mean, sem."""
        directory = Path(directory)
        paths = []
        for name in self.mean:
            path = directory / f"{stem}_{name}.csv"
            with open(path, "w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(["t", "mean", "sem"])
                for i, t in enumerate(self.t):
                    writer.writerow(
                        [int(t), repr(float(self.mean[name][i])), repr(float(self.sem[name][i]))])
            paths.append(path)
        return paths


def run_single(config: EnsembleConfig, sample_index: int) -> observables.ObservableSeries:
    """Run one disorder realization and record its observable series.

    Deterministic: the chain is drawn from the seed derived from
    (master_seed, sample_index), so identical arguments give bit-identical
    series.  The walk consumes the first t_max angles of the chain.
    """
    if not 0 <= sample_index < config.samples:
        raise ValueError(f"sample_index {sample_index} outside 0..{config.samples - 1}")
    angles = disorder.generate(config.disorder, sample_seed(config.master_seed, sample_index))
    recorder = observables.SeriesRecorder(
        record=config.record, angles=angles, snapshot_times=config.snapshot_times)
    field = lattice.init_state(config.t_max)
    recorder.record_initial(field)
    lattice.evolve(field, angles, recorder, steps=config.t_max)
    return recorder.series()


def _scalar_names(config: EnsembleConfig) -> list[str]:
    return ["norm"] + [n for n in observables.SCALAR_OBSERVABLES if n in config.record]


def run_ensemble(config: EnsembleConfig) -> EnsembleResult:
    """Run all samples and aggregate scalars into means and standard errors.

    The standard error is the sample standard deviation (ddof = 1) over
    sqrt(samples); zero for a single sample.  Results do not depend on
    ``workers``: samples are computed independently and reduced in
    ascending index order.
    """
    if any(name in config.record for name in observables.PROFILE_OBSERVABLES) \
            and config.samples > 1:
        raise ValueError("spatial profiles are recorded per run; use run_single per sample")
    indices = range(config.samples)
    if config.workers == 1:
        series_list = [run_single(config, k) for k in indices]
    else:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            series_list = list(pool.map(run_single, [config] * config.samples, indices))

    t = series_list[0].t
    mean: dict[str, np.ndarray] = {}
    sem: dict[str, np.ndarray] = {}
    final_values: dict[str, np.ndarray] = {}
    for name in _scalar_names(config):
        stacked = np.stack([s.scalars()[name] for s in series_list])
        mean[name] = stacked.mean(axis=0)
        if config.samples > 1:
            sem[name] = stacked.std(axis=0, ddof=1) / np.sqrt(config.samples)
        else:
            sem[name] = np.zeros_like(mean[name])
        final_values[name] = stacked[:, -1].copy()
    seeds = tuple((config.master_seed, k) for k in indices)
    return EnsembleResult(
        config=config, t=t, mean=mean, sem=sem,
        final_values=final_values, sample_seeds=seeds,
    )
