# src/rhosocial/tevie/testsuite/benchmark/test_fft_scaling.py
"""Growth of the fast operator's apply time with the grid size."""
import time

import numpy as np
import pytest

from rhosocial.tevie import fastop
from rhosocial.tevie.scene import BackgroundMedium, ContrastMap, Grid2D, make_scene
from rhosocial.tevie.testsuite.utils import requires_budget

REPEATS = 7
MAX_RATIO = 5.5


def _apply_time(n: int, rng) -> float:
    grid = Grid2D(h=0.3, n1=n, n2=n)
    size = grid.n_cells
    contrast = ContrastMap(chi_e=rng.uniform(0.0, 2.0, size), chi_m=rng.uniform(0.0, 1.0, size))
    op = fastop.build_operator(make_scene(BackgroundMedium.normalized(1.0), grid, contrast),
                               workers=1)
    u = rng.standard_normal(3 * size) + 1j * rng.standard_normal(3 * size)
    fastop.apply(op, u)
    best = float('inf')
    for _ in range(REPEATS):
        start = time.perf_counter()
        fastop.apply(op, u)
        best = min(best, time.perf_counter() - start)
    return best


@requires_budget(60)
@pytest.mark.flaky(reruns=3)
def test_apply_time_grows_like_n_log_n(rng):
    small = _apply_time(32, rng)
    large = _apply_time(64, rng)
    assert large / small < MAX_RATIO, f"64x64 took {large:.4f}s, 32x32 took {small:.4f}s"
