"""Cross-checks between the compiled kernels and the numpy fallback.

The walk update itself must agree bit for bit (the extension is compiled
without floating-point contraction); reductions may differ at the last
ulp because numpy sums pairwise.
"""
import math

import numpy as np
import pytest

from corrwalk import backend
from corrwalk.lattice import evolve, init_state

pytestmark = pytest.mark.skipif(
    "compiled" not in backend.available_backends(),
    reason="compiled kernel extension not built",
)


def test_both_backends_listed():
    assert set(backend.available_backends()) == {"compiled", "python"}


def test_use_switches_and_restores():
    initial = backend.kernel_backend()
    with backend.use("python"):
        assert backend.kernel_backend() == "python"
    assert backend.kernel_backend() == initial


def test_unknown_backend_rejected():
    with pytest.raises(ValueError):
        with backend.use("fortran"):
            pass


def test_step_kernels_agree_bitwise():
    rng = np.random.default_rng(10)
    for _ in range(50):
        n = 31
        up = np.zeros(n, np.complex128)
        down = np.zeros(n, np.complex128)
        lo, hi = 5, 25
        up[lo:hi + 1] = rng.normal(size=hi - lo + 1) + 1j * rng.normal(size=hi - lo + 1)
        down[lo:hi + 1] = rng.normal(size=hi - lo + 1) + 1j * rng.normal(size=hi - lo + 1)
        theta = rng.uniform(-7, 7)
        c, s = math.cos(theta), math.sin(theta)
        u1, d1 = up.copy(), down.copy()
        u2, d2 = up.copy(), down.copy()
        backend._compiled.step_kernel(u1, d1, c, s, lo, hi)
        backend._kernels_py.step_kernel(u2, d2, c, s, lo, hi)
        np.testing.assert_array_equal(u1, u2)
        np.testing.assert_array_equal(d1, d2)


def test_reduction_kernels_agree():
    rng = np.random.default_rng(11)
    n = 41
    up = rng.normal(size=n) + 1j * rng.normal(size=n)
    down = rng.normal(size=n) + 1j * rng.normal(size=n)
    scale = np.sqrt(np.sum(np.abs(up) ** 2 + np.abs(down) ** 2))
    up, down = (up / scale).astype(np.complex128), (down / scale).astype(np.complex128)
    for lo, hi in [(0, n - 1), (3, 17), (20, 20)]:
        gu1, gd1, gud1 = backend._compiled.gram_kernel(up, down, lo, hi)
        gu2, gd2, gud2 = backend._kernels_py.gram_kernel(up, down, lo, hi)
        assert gu1 == pytest.approx(gu2, abs=1e-14)
        assert gd1 == pytest.approx(gd2, abs=1e-14)
        assert gud1 == pytest.approx(gud2, abs=1e-14)
        m1 = backend._compiled.second_moment_kernel(up, down, 20, lo, hi)
        m2 = backend._kernels_py.second_moment_kernel(up, down, 20, lo, hi)
        assert m1 == pytest.approx(m2, rel=1e-13, abs=1e-13)


def test_full_evolution_is_backend_independent():
    thetas = np.random.default_rng(12).uniform(0, np.pi / 2, 400)
    with backend.use("compiled"):
        a = evolve(init_state(400), thetas)
    with backend.use("python"):
        b = evolve(init_state(400), thetas)
    np.testing.assert_array_equal(a.up, b.up)
    np.testing.assert_array_equal(a.down, b.down)
