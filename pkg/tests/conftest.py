import numpy as np
import pytest

from prytz.geom2d import PlanarPath


def star_polygon(rng, n_lo=4, n_hi=10, r_lo=0.5, r_hi=1.4, center=(0.0, 0.0)):
    """Random star-shaped polygon: simple and positively oriented by construction."""
    while True:
        n = int(rng.integers(n_lo, n_hi))
        ang = np.sort(rng.uniform(0.0, 2.0 * np.pi, n))
        if np.min(np.diff(ang, append=ang[0] + 2.0 * np.pi)) > 1e-2:
            break
    rad = rng.uniform(r_lo, r_hi, n)
    return PlanarPath(np.column_stack([center[0] + rad * np.cos(ang),
                                       center[1] + rad * np.sin(ang)]), closed=True)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
