"""Diagnostics of the walk: spreading, entanglement, classical contrast,
interference, and asymmetry.

Scalar conventions: all entropies use base-2 logarithms with 0*log(0) = 0,
so both the coin entanglement entropy and the Jensen-Shannon dissimilarity
live in [0, 1].
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import backend
from .lattice import BoundaryLeakError, SpinorField

TRACE_TOL = 1e-12
PSD_TOL = 1e-12
NORMALIZATION_TOL = 1e-9

SCALAR_OBSERVABLES = ("m2", "s_e", "jsd", "i_t")
PROFILE_OBSERVABLES = ("p", "a", "j")


class NumericDomainError(ArithmeticError):
    """A quantity left its mathematically valid domain beyond round-off."""


# ---------------------------------------------------------------------------
# position distribution and spreading

def probability_distribution(field: SpinorField) -> np.ndarray:
    """Position distribution P(x) = |up(x)|^2 + |down(x)|^2."""
    u, d = field.up, field.down
    return u.real * u.real + u.imag * u.imag + d.real * d.real + d.imag * d.imag


def second_moment(p: np.ndarray, offset: int | None = None) -> float:
    """Mean squared position, sum of x^2 * P(x), in physical coordinates.

    ``offset`` is the array index of x = 0; by default the distribution is
    taken as centred.
    """
    p = np.asarray(p, dtype=np.float64)
    if offset is None:
        offset = (p.shape[0] - 1) // 2
    x = np.arange(p.shape[0], dtype=np.float64) - offset
    return float(np.sum(x * x * p))


def fit_alpha(t, m2, discard_fraction: float = 0.1) -> float:
    """Spreading exponent: least-squares slope of log m2 versus log t.

    Points with t <= discard_fraction * max(t) are dropped as transient.
    At least 10 points must survive, with t >= 1 and m2 > 0.
    """
    t = np.asarray(t, dtype=np.float64)
    m2 = np.asarray(m2, dtype=np.float64)
    if t.ndim != 1 or t.shape != m2.shape:
        raise ValueError("t and m2 must be 1-D arrays of equal length")
    if not 0.0 <= discard_fraction < 1.0:
        raise ValueError(f"discard_fraction must lie in [0, 1), got {discard_fraction}")
    if t.size == 0:
        raise ValueError("empty series")
    keep = t > discard_fraction * np.max(t)
    t, m2 = t[keep], m2[keep]
    if t.size < 10:
        raise ValueError(f"only {t.size} points retained after the transient; need >= 10")
    if np.any(t < 1):
        raise ValueError("retained times must be >= 1")
    if np.any(m2 <= 0):
        raise ValueError("retained second moments must be positive")
    slope = np.polyfit(np.log(t), np.log(m2), 1)[0]
    return float(slope)


# ---------------------------------------------------------------------------
# reduced coin state and entanglement

@dataclass(frozen=True)
class ReducedCoinDensity:
    """The 2x2 coin state after tracing out position:
    [[g_u, g_ud], [conj(g_ud), g_d]].
    """

    g_u: float
    g_d: float
    g_ud: complex

    def __post_init__(self):
        if not -TRACE_TOL <= self.g_u <= 1.0 + TRACE_TOL:
            raise ValueError(f"g_u = {self.g_u} outside [0, 1]")
        if abs(self.g_u + self.g_d - 1.0) > TRACE_TOL:
            raise ValueError(f"trace g_u + g_d = {self.g_u + self.g_d} is not 1")
        if self.g_u * self.g_d - abs(self.g_ud) ** 2 < -PSD_TOL:
            raise ValueError("density is not positive semidefinite: |g_ud|^2 > g_u * g_d")

    def as_matrix(self) -> np.ndarray:
        return np.array(
            [[self.g_u, self.g_ud], [np.conj(self.g_ud), self.g_d]],
            dtype=np.complex128,
        )


def reduced_density(field: SpinorField) -> ReducedCoinDensity:
    """Trace out the position degree of freedom of a normalized field.

    g_u is the summed up-component weight, g_d is stored as 1 - g_u and
    cross-checked against the directly summed down-component weight, and
    g_ud is the site-wise overlap sum of up * conj(down).
    """
    gu, gd, gud = backend.active.gram_kernel(field.up, field.down, 0, len(field) - 1)
    if abs((1.0 - gu) - gd) > TRACE_TOL:
        raise ValueError(
            f"field is not normalized: up weight {gu} and down weight {gd} do not sum to 1"
        )
    return ReducedCoinDensity(g_u=gu, g_d=1.0 - gu, g_ud=gud)


def _coin_entropy(g_u: float, g_d: float, g_ud: complex) -> float:
    # eigenvalues of the 2x2 density in closed form
    disc = 0.25 - g_u * g_d + abs(g_ud) ** 2
    if disc < -PSD_TOL:
        raise NumericDomainError(f"eigenvalue discriminant {disc} is negative: invalid density")
    root = math.sqrt(max(disc, 0.0))
    s = 0.0
    for lam in (0.5 + root, 0.5 - root):
        if lam < -PSD_TOL or lam > 1.0 + PSD_TOL:
            raise NumericDomainError(f"eigenvalue {lam} outside [0, 1]: invalid density")
        lam = min(max(lam, 0.0), 1.0)
        if lam > 0.0:
            s -= lam * math.log2(lam)
    return min(max(s, 0.0), 1.0)


def entanglement_entropy(rho: ReducedCoinDensity) -> float:
    """Von Neumann entropy (base 2) of the reduced coin state.

    Uses the closed-form eigenvalues 1/2 +- sqrt(1/4 - g_u*g_d + |g_ud|^2);
    0 for a separable state, 1 for a maximally entangled coin.  Values are
    clamped to [0, 1] only against round-off at the 1e-12 level.
    """
    return _coin_entropy(rho.g_u, rho.g_d, rho.g_ud)


# ---------------------------------------------------------------------------
# classical contrast

def classical_step(p: np.ndarray) -> np.ndarray:
    """One step of the unbiased classical walk: half left, half right.

    Raises :class:`BoundaryLeakError` if either edge site carries mass,
    since half of it would leave the lattice.
    """
    p = np.asarray(p, dtype=np.float64)
    if p[0] != 0 or p[-1] != 0:
        raise BoundaryLeakError("classical mass at the lattice edge would leave the lattice")
    out = np.zeros_like(p)
    out[1:] = 0.5 * p[:-1]
    out[:-1] += 0.5 * p[1:]
    return out


def shannon_entropy(p: np.ndarray) -> float:
    """Shannon entropy in bits, with empty sites contributing nothing."""
    p = np.asarray(p, dtype=np.float64)
    nz = p[p > 0]
    return float(-np.sum(nz * np.log2(nz)))


def jsd(p: np.ndarray, q: np.ndarray) -> float:
    """Jensen-Shannon dissimilarity between two distributions on one grid.

    Entropy of the midpoint mixture minus the mean entropy, in bits, so
    the result lies in [0, 1]; 0 for identical inputs, 1 for disjoint
    supports.  Inputs must be normalized to within 1e-9.
    """
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.shape != q.shape or p.ndim != 1:
        raise ValueError("distributions must be 1-D arrays on the same grid")
    for name, dist in (("p", p), ("q", q)):
        total = float(np.sum(dist))
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise ValueError(f"{name} is not normalized: sums to {total}")
    value = shannon_entropy(0.5 * (p + q)) - 0.5 * (shannon_entropy(p) + shannon_entropy(q))
    return min(max(value, 0.0), 1.0)


# ---------------------------------------------------------------------------
# interference and asymmetry

def interference_profile(field: SpinorField, theta: float) -> tuple[np.ndarray, float]:
    """Local interference J(x) for the coin angle about to be applied, and
    its absolute sum I over the chain.

    J(x) = sin(2*theta) * Re{ up(x-1)*conj(down(x-1)) - up(x+1)*conj(down(x+1)) },
    with amplitudes beyond the lattice treated as zero.  J is the exact
    correction that the next position distribution adds on top of the
    classical-like transport terms (see
    :func:`reconstruct_next_distribution`).
    """
    cross = (field.up * np.conj(field.down)).real
    j = np.zeros_like(cross)
    j[1:] += cross[:-1]
    j[:-1] -= cross[1:]
    j *= math.sin(2.0 * theta)
    return j, float(np.sum(np.abs(j)))


def reconstruct_next_distribution(field: SpinorField, theta: float) -> np.ndarray:
    """Predict the next position distribution without evolving amplitudes.

    Splits the one-step map into classical-like transport of the component
    probabilities plus the local interference term: the up-component
    weight of site x-1 and the down-component weight of site x+1 arrive
    with weight cos^2(theta), the spin-flipped counterparts with
    sin^2(theta), and J(x) supplies the quantum correction.  Agrees with
    the directly evolved distribution to round-off.
    """
    u, d = field.up, field.down
    pu = u.real * u.real + u.imag * u.imag
    pd = d.real * d.real + d.imag * d.imag
    c2 = math.cos(theta) ** 2
    s2 = math.sin(theta) ** 2
    out = np.zeros_like(pu)
    # inflow from the left neighbour (x-1) and from the right neighbour (x+1)
    out[1:] += c2 * pu[:-1] + s2 * pd[:-1]
    out[:-1] += c2 * pd[1:] + s2 * pu[1:]
    out += interference_profile(field, theta)[0]
    return out


def asymmetry_profile(field: SpinorField) -> tuple[np.ndarray, np.ndarray]:
    """Up-minus-down probability imbalance A(x), raw and normalized.

    The normalized profile divides by max_x |A(x)| so entries lie in
    [-1, 1]; an identically zero profile stays zero.
    """
    u, d = field.up, field.down
    a = u.real * u.real + u.imag * u.imag - (d.real * d.real + d.imag * d.imag)
    peak = float(np.max(np.abs(a)))
    if peak == 0.0:
        return a, np.zeros_like(a)
    return a, a / peak


# ---------------------------------------------------------------------------
# per-step recording

@dataclass
class ObservableSeries:
    """Per-step records of one walk; absent observables are None.

    Scalars are indexed by ``t`` (step 0 is the initial state).  Spatial
    profiles are stored as (time, site) matrices over ``positions`` for
    the recorded ``profile_times``.
    """

    t: np.ndarray
    norm: np.ndarray
    m2: np.ndarray | None = None
    s_e: np.ndarray | None = None
    jsd: np.ndarray | None = None
    i_t: np.ndarray | None = None
    positions: np.ndarray | None = None
    profile_times: np.ndarray | None = None
    p_profiles: np.ndarray | None = None
    a_profiles: np.ndarray | None = None
    j_profiles: np.ndarray | None = None

    def scalars(self) -> dict[str, np.ndarray]:
        """Recorded scalar series by name (norm included)."""
        out = {"norm": self.norm}
        for name in SCALAR_OBSERVABLES:
            value = getattr(self, name)
            if value is not None:
                out[name] = value
        return out


class SeriesRecorder:
    """Accumulates observables during an evolution.

    Call :meth:`record_initial` with the starting field, then hand the
    recorder to ``lattice.evolve``.  When ``jsd`` is recorded, a classical
    walk is co-evolved from the starting distribution, one step per walk
    step.  Interference (``i_t`` or ``j`` profiles) at time t uses the
    angle theta_t about to be applied, so recording it through step T
    requires at least T + 1 angles.

    Reductions run on the light-cone window grown from the initial
    support, which assumes the evolution only widens support by one site
    per step (true of the walk update).
    """

    def __init__(self, record=("m2", "s_e"), angles=None, snapshot_times=None):
        record = tuple(record)
        unknown = set(record) - set(SCALAR_OBSERVABLES) - set(PROFILE_OBSERVABLES)
        if unknown:
            raise ValueError(f"unknown observables: {sorted(unknown)}")
        self.record = record
        self.angles = None if angles is None else np.asarray(
            getattr(angles, "theta", angles), dtype=np.float64)
        if self._needs_angles() and self.angles is None:
            raise ValueError("recording interference requires the angle sequence")
        self.snapshot_times = None if snapshot_times is None else frozenset(
            int(t) for t in snapshot_times)
        self._rows: dict[str, list] = {name: [] for name in ("t", "norm", *record)}
        self._profile_rows: dict[str, list] = {
            name: [] for name in PROFILE_OBSERVABLES if name in record}
        self._profile_times: list[int] = []
        self._positions: np.ndarray | None = None
        self._classical: np.ndarray | None = None
        self._lo = self._hi = None

    def _needs_angles(self) -> bool:
        return "i_t" in self.record or "j" in self.record

    def _theta_at(self, t: int) -> float:
        if t >= self.angles.shape[0]:
            raise ValueError(
                f"recording interference at step {t} needs {t + 1} angles, "
                f"got {self.angles.shape[0]}"
            )
        return float(self.angles[t])

    def record_initial(self, field: SpinorField) -> None:
        """Record the t = 0 row and fix the lattice geometry."""
        support = np.flatnonzero((field.up != 0) | (field.down != 0))
        if support.size == 0:
            raise ValueError("cannot record an identically zero field")
        self._lo, self._hi = int(support[0]), int(support[-1])
        self._positions = field.positions
        if "jsd" in self.record:
            self._classical = probability_distribution(field)
        self._record_row(0, field)

    def __call__(self, t: int, field: SpinorField, theta: float) -> None:
        if self._lo is None:
            raise RuntimeError("record_initial must be called before stepping")
        self._lo = max(self._lo - 1, 0)
        self._hi = min(self._hi + 1, len(field) - 1)
        if self._classical is not None:
            self._classical = classical_step(self._classical)
        self._record_row(t, field)

    def _record_row(self, t: int, field: SpinorField) -> None:
        gu, gd, gud = backend.active.gram_kernel(field.up, field.down, self._lo, self._hi)
        rows = self._rows
        rows["t"].append(t)
        rows["norm"].append(gu + gd)
        if "m2" in rows:
            rows["m2"].append(backend.active.second_moment_kernel(
                field.up, field.down, field.offset, self._lo, self._hi))
        if "s_e" in rows:
            rows["s_e"].append(_coin_entropy(gu, gd, gud))
        p = None
        if "jsd" in rows:
            p = probability_distribution(field)
            rows["jsd"].append(jsd(p, self._classical))
        if "i_t" in rows:
            rows["i_t"].append(interference_profile(field, self._theta_at(t))[1])
        if self._profile_rows and (self.snapshot_times is None or t in self.snapshot_times):
            self._profile_times.append(t)
            if "p" in self._profile_rows:
                self._profile_rows["p"].append(
                    p if p is not None else probability_distribution(field))
            if "a" in self._profile_rows:
                self._profile_rows["a"].append(asymmetry_profile(field)[0])
            if "j" in self._profile_rows:
                self._profile_rows["j"].append(
                    interference_profile(field, self._theta_at(t))[0])

    def series(self) -> ObservableSeries:
        """Assemble the accumulated rows into an :class:`ObservableSeries`."""
        rows = self._rows
        kwargs = {
            "t": np.array(rows["t"], dtype=np.int64),
            "norm": np.array(rows["norm"], dtype=np.float64),
        }
        for name in SCALAR_OBSERVABLES:
            if name in rows:
                kwargs[name] = np.array(rows[name], dtype=np.float64)
        if self._profile_rows:
            kwargs["positions"] = self._positions
            kwargs["profile_times"] = np.array(self._profile_times, dtype=np.int64)
            for name, stack in self._profile_rows.items():
                kwargs[f"{name}_profiles"] = np.array(stack, dtype=np.float64)
        return ObservableSeries(**kwargs)
