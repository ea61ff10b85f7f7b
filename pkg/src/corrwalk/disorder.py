"""Correlated binary disorder for the coin angle.

A two-state Markov chain z_t in {-1, +1} keeps its state with the
persistence probability w and switches with 1 - w, so its lag-1
autocorrelation is C = 2w - 1.  The coin angle follows the chain:
theta_a = (1 + r) * theta0 while z_t = -1 and theta_b = (1 - r) * theta0
while z_t = +1, giving kick trains of random duration but fixed amplitude.

Randomness comes from numpy's PCG64 generator.  Every sampling function
accepts either an integer seed or a ``numpy.random.SeedSequence``;
ensembles derive per-sample sequences via distinct spawn keys (see
``ensemble.sample_seed``), which is the documented stream-splitting rule.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np


def persistence_from_correlation(correlation: float) -> float:
    """Persistence probability w = (C + 1) / 2 for a target autocorrelation C."""
    if not -1.0 <= correlation <= 1.0:
        raise ValueError(f"correlation must lie in [-1, 1], got {correlation}")
    return (correlation + 1.0) / 2.0


@dataclass(frozen=True)
class DisorderParams:
    """Parameters of the angle disorder.

    theta0       baseline coin angle (radians)
    r            kick strength in [0, 1]; angles alternate between (1 +- r)*theta0
    correlation  target lag-1 autocorrelation C in [-1, 1]
    length       number of chain entries to generate
    """

    theta0: float
    r: float
    correlation: float
    length: int

    def __post_init__(self):
        if not np.isfinite(self.theta0):
            raise ValueError("theta0 must be finite")
        if not 0.0 <= self.r <= 1.0:
            raise ValueError(f"kick strength r must lie in [0, 1], got {self.r}")
        if not -1.0 <= self.correlation <= 1.0:
            raise ValueError(f"correlation must lie in [-1, 1], got {self.correlation}")
        if self.length < 1:
            raise ValueError(f"length must be >= 1, got {self.length}")

    @property
    def persistence(self) -> float:
        return persistence_from_correlation(self.correlation)

    @property
    def theta_a(self) -> float:
        """Angle taken while the chain is at -1."""
        return (1.0 + self.r) * self.theta0

    @property
    def theta_b(self) -> float:
        """Angle taken while the chain is at +1."""
        return (1.0 - self.r) * self.theta0


@dataclass(frozen=True, eq=False)
class AngleSequence:
    """A realized chain z_t and the angle series theta_t driven by it."""

    z: np.ndarray
    theta: np.ndarray

    def __post_init__(self):
        if self.z.shape != self.theta.shape or self.z.ndim != 1:
            raise ValueError("z and theta must be 1-D arrays of equal length")

    def __len__(self) -> int:
        return self.z.shape[0]


def sample_chain(w: float, length: int, seed) -> np.ndarray:
    """Sample the two-state chain: z_0 uniform on {-1, +1}, then persist with w.

    The start is drawn from the stationary distribution, so the chain is
    stationary from the first entry.  Persistence is decided by u < w with
    u uniform on [0, 1), which makes w = 0 (strict alternation) and w = 1
    (constant chain) exact rather than merely almost sure.  Identical
    (w, length, seed) yield bit-identical arrays.
    """
    if not 0.0 <= w <= 1.0:
        raise ValueError(f"persistence probability must lie in [0, 1], got {w}")
    if length < 1:
        raise ValueError(f"length must be >= 1, got {length}")
    rng = np.random.Generator(np.random.PCG64(seed))
    z0 = int(rng.integers(0, 2)) * 2 - 1
    z = np.empty(length, dtype=np.int64)
    z[0] = z0
    if length > 1:
        persist = rng.random(length - 1) < w
        z[1:] = z0 * np.cumprod(np.where(persist, 1, -1))
    return z


def angles_from_chain(z: np.ndarray, theta0: float, r: float) -> AngleSequence:
    """Map a chain to its two-level angle series.

    z = -1 takes theta_a = (1 + r) * theta0 and z = +1 takes
    theta_b = (1 - r) * theta0, exactly (no intermediate values can occur).
    """
    z = np.asarray(z)
    if z.ndim != 1 or z.size == 0:
        raise ValueError("z must be a nonempty 1-D array")
    if not np.all(np.abs(z) == 1):
        raise ValueError("chain entries must be -1 or +1")
    if not 0.0 <= r <= 1.0:
        raise ValueError(f"kick strength r must lie in [0, 1], got {r}")
    theta_a = (1.0 + r) * theta0
    theta_b = (1.0 - r) * theta0
    theta = np.where(z == -1, theta_a, theta_b)
    return AngleSequence(z=z.astype(np.int64), theta=theta)


def generate(params: DisorderParams, seed) -> AngleSequence:
    """Sample a chain for the given parameters and map it to angles."""
    z = sample_chain(params.persistence, params.length, seed)
    return angles_from_chain(z, params.theta0, params.r)


def empirical_autocorrelation(z: np.ndarray) -> float:
    """Mean lag-1 product of the chain: the realized counterpart of 2w - 1.

    For a length-T series this is the average over its T - 1 adjacent
    pairs.  No mean is subtracted; the stationary chain is already
    zero-mean.
    """
    z = np.asarray(z)
    if z.ndim != 1 or z.size < 2:
        raise ValueError("need at least two chain entries")
    return float(np.mean(z[1:] * z[:-1]))


def ingredient_fractions(z: np.ndarray) -> tuple[float, float]:
    """Fractions of chain entries at -1 and at +1 (they sum to one)."""
    z = np.asarray(z)
    if z.ndim != 1 or z.size == 0:
        raise ValueError("z must be a nonempty 1-D array")
    f_a = float(np.mean(z == -1))
    return f_a, 1.0 - f_a


def write_angle_csv(seq: AngleSequence, path) -> None:
    """Write the sequence as CSV with columns t, z, theta (round-trip exact)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "z", "theta"])
        for t in range(len(seq)):
            writer.writerow([t, int(seq.z[t]), repr(float(seq.theta[t]))])


def read_angle_csv(path) -> AngleSequence:
    """Read a sequence written by :func:`write_angle_csv`."""
    rows = Path(path).read_text().splitlines()
    data = list(csv.reader(rows))
    if not data or data[0] != ["t", "z", "theta"]:
        raise ValueError(f"{path}: not an angle-sequence CSV")
    z = np.array([int(row[1]) for row in data[1:]], dtype=np.int64)
    theta = np.array([float(row[2]) for row in data[1:]], dtype=np.float64)
    return AngleSequence(z=z, theta=theta)
