"""Two-component walker state on a 1D lattice and its unitary update.

The walker carries a spin-1/2 internal state; one time step rotates the
spin at every site by a real 2x2 coin matrix

    [[cos(theta), sin(theta)],
     [sin(theta), -cos(theta)]]

and then translates the spin-up component one site right and the
spin-down component one site left.  Because a walker launched at the
origin can reach at most site +-t after t steps, a lattice of 2*t_max + 1
sites makes the finite arrays exact (no truncation, no boundary effects).

Amplitudes are never renormalized: any norm drift beyond round-off is a
bug, not something to correct.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import backend

SQRT_HALF = 1.0 / math.sqrt(2.0)


class BoundaryLeakError(ValueError):
    """A nonzero amplitude would be shifted off the lattice edge."""


@dataclass
class SpinorField:
    """Spin-up / spin-down complex amplitudes over the lattice sites.

    Array index ``i`` corresponds to the physical coordinate
    ``x = i - offset``.  Lattice length must be odd and at least 3.
    """

    up: np.ndarray
    down: np.ndarray
    offset: int

    def __post_init__(self):
        self.up = np.ascontiguousarray(self.up, dtype=np.complex128)
        self.down = np.ascontiguousarray(self.down, dtype=np.complex128)
        if self.up.ndim != 1 or self.up.shape != self.down.shape:
            raise ValueError("up and down must be 1-D arrays of equal length")
        n = self.up.shape[0]
        if n < 3 or n % 2 == 0:
            raise ValueError(f"lattice length must be odd and >= 3, got {n}")
        if not 0 <= self.offset < n:
            raise ValueError(f"offset {self.offset} outside lattice of length {n}")

    def __len__(self) -> int:
        return self.up.shape[0]

    @property
    def positions(self) -> np.ndarray:
        """Physical coordinates of the lattice sites."""
        return np.arange(len(self)) - self.offset

    def norm_squared(self) -> float:
        """Total probability carried by the field."""
        gu, gd, _ = backend.active.gram_kernel(self.up, self.down, 0, len(self) - 1)
        return gu + gd

    def copy(self) -> SpinorField:
        return SpinorField(self.up.copy(), self.down.copy(), self.offset)


def init_state(t_max: int) -> SpinorField:
    """Walker at the origin in the balanced spin state (1, i)/sqrt(2).

    The lattice has 2*t_max + 1 sites so that t_max steps never reach the
    boundary.  This initial spin state makes the disorder-free walk spread
    symmetrically.
    """
    if t_max < 1:
        raise ValueError(f"t_max must be >= 1, got {t_max}")
    size = 2 * t_max + 1
    up = np.zeros(size, dtype=np.complex128)
    down = np.zeros(size, dtype=np.complex128)
    up[t_max] = SQRT_HALF
    down[t_max] = SQRT_HALF * 1j
    return SpinorField(up, down, t_max)


def apply_coin(field: SpinorField, theta: float) -> SpinorField:
    """Rotate the spin at every site by the coin matrix for angle theta.

    The matrix is real, symmetric and involutive (its own inverse); any
    real angle is accepted.
    """
    c = math.cos(theta)
    s = math.sin(theta)
    return SpinorField(
        c * field.up + s * field.down,
        s * field.up - c * field.down,
        field.offset,
    )


def apply_shift(field: SpinorField) -> SpinorField:
    """Move the up component one site right and the down component one left.

    Raises :class:`BoundaryLeakError` if either outgoing boundary amplitude
    is nonzero, since that amplitude would leave the lattice.
    """
    if field.up[-1] != 0:
        raise BoundaryLeakError("spin-up amplitude at the right edge would leave the lattice")
    if field.down[0] != 0:
        raise BoundaryLeakError("spin-down amplitude at the left edge would leave the lattice")
    up = np.zeros_like(field.up)
    down = np.zeros_like(field.down)
    up[1:] = field.up[:-1]
    down[:-1] = field.down[1:]
    return SpinorField(up, down, field.offset)


def step(field: SpinorField, theta: float) -> SpinorField:
    """One walk step: coin rotation followed by the conditional shift."""
    return apply_shift(apply_coin(field, theta))


def evolve(field: SpinorField, angles, recorder=None, steps: int | None = None) -> SpinorField:
    """Apply one step per angle, in order, and return the final field.

    ``angles`` is a 1-D array of coin angles (an object with a ``theta``
    attribute, such as a generated angle sequence, is also accepted).
    ``steps`` limits how many angles are consumed (default: all).  After
    each step, ``recorder(t, field, theta)`` is invoked with the 1-based
    step count, the current field, and the angle just applied.  The
    recorder receives a live view; it must copy anything it retains.

    The input field is not modified.  The update runs in place on the
    light-cone support window, so the lattice must keep one free site per
    remaining step on each side; otherwise :class:`BoundaryLeakError` is
    raised before any amplitude is lost.
    """
    theta = np.asarray(getattr(angles, "theta", angles), dtype=np.float64)
    if theta.ndim != 1:
        raise ValueError("angles must be one-dimensional")
    if steps is None:
        steps = theta.shape[0]
    elif steps < 0 or steps > theta.shape[0]:
        raise ValueError(f"steps={steps} exceeds the {theta.shape[0]} available angles")

    out = field.copy()
    if steps == 0:
        return out
    up, down = out.up, out.down
    size = len(out)
    support = np.flatnonzero((up != 0) | (down != 0))
    if support.size == 0:
        lo = hi = out.offset
    else:
        lo, hi = int(support[0]), int(support[-1])

    kernel = backend.active.step_kernel
    for t in range(steps):
        if lo < 1 or hi > size - 2:
            raise BoundaryLeakError(
                f"lattice of {size} sites cannot absorb step {t + 1}: "
                "the support window has reached the boundary"
            )
        kernel(up, down, math.cos(theta[t]), math.sin(theta[t]), lo, hi)
        lo -= 1
        hi += 1
        if recorder is not None:
            recorder(t + 1, out, float(theta[t]))
    return out
