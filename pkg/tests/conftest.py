import math
import os
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

DATA = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture
def data_dir() -> Path:
    return DATA


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


def random_roots(rng: np.random.Generator, n: int, lo: float = -0.7, hi: float = 1.4) -> tuple[complex, ...]:
    """n + 1 roots with well separated, strictly increasing moduli and random phases."""
    gaps = rng.uniform(0.3, 1.0, size=n + 1)
    s = lo + np.cumsum(gaps) * (hi - lo) / gaps.sum()
    phases = rng.uniform(-math.pi, math.pi, size=n + 1)
    return tuple(complex(np.exp(a + 1j * t)) for a, t in zip(s, phases))
