"""Numpy fallback for the per-step kernels.

Same signatures and per-element arithmetic as the compiled module
``_kernels``; reductions use numpy's pairwise summation, so summed
quantities may differ from the compiled backend at the last ulp.
"""
from __future__ import annotations

import numpy as np


def step_kernel(up: np.ndarray, down: np.ndarray, c: float, s: float,
                lo: int, hi: int) -> None:
    """Fused coin+shift applied in place on the support window [lo, hi].

    The new support is [lo-1, hi+1]; the caller guarantees lo >= 1,
    hi <= len(up)-2, and zero amplitudes outside [lo, hi].
    """
    u = up[lo:hi + 1]
    d = down[lo:hi + 1]
    a = c * u + s * d
    b = s * u - c * d
    up[lo + 1:hi + 2] = a
    up[lo] = 0.0
    down[lo - 1:hi] = b
    down[hi] = 0.0


def gram_kernel(up: np.ndarray, down: np.ndarray, lo: int, hi: int):
    """Spin-component norms and overlap over [lo, hi]: (G_u, G_d, G_ud)."""
    u = up[lo:hi + 1]
    d = down[lo:hi + 1]
    gu = float(np.sum(u.real * u.real + u.imag * u.imag))
    gd = float(np.sum(d.real * d.real + d.imag * d.imag))
    # vdot conjugates its first argument: sum of up * conj(down)
    gud = complex(np.vdot(d, u))
    return gu, gd, gud


def second_moment_kernel(up: np.ndarray, down: np.ndarray, offset: int,
                         lo: int, hi: int) -> float:
    """Sum of x^2 * (|up|^2 + |down|^2) over [lo, hi], with x = index - offset."""
    u = up[lo:hi + 1]
    d = down[lo:hi + 1]
    x = np.arange(lo - offset, hi + 1 - offset, dtype=np.float64)
    p = u.real * u.real + u.imag * u.imag + d.real * d.real + d.imag * d.imag
    return float(np.sum(x * x * p))
