import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from corrwalk.lattice import SpinorField


@pytest.fixture
def rng():
    return np.random.default_rng(987654321)


def random_field(rng, half_width: int, margin: int) -> SpinorField:
    """Normalized random field on 2*(half_width+margin)+1 sites with support
    limited to the central 2*half_width+1 sites, leaving room for `margin`
    steps."""
    size = 2 * (half_width + margin) + 1
    offset = half_width + margin
    up = np.zeros(size, dtype=np.complex128)
    down = np.zeros(size, dtype=np.complex128)
    span = slice(offset - half_width, offset + half_width + 1)
    n = 2 * half_width + 1
    up[span] = rng.normal(size=n) + 1j * rng.normal(size=n)
    down[span] = rng.normal(size=n) + 1j * rng.normal(size=n)
    scale = np.sqrt(np.sum(np.abs(up) ** 2 + np.abs(down) ** 2))
    return SpinorField(up / scale, down / scale, offset)
