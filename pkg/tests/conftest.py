import numpy as np
import pytest

import pu6


@pytest.fixture(scope="session")
def std_params() -> pu6.PUParams:
    """(alpha, beta, gamma) = (14, 49, 36), i.e. frequencies (3, 2, 1)."""
    return pu6.PUParams(14.0, 49.0, 36.0)


@pytest.fixture(scope="session")
def std_freqs() -> pu6.FrequencyTriple:
    return pu6.frequency_triple(3.0, 2.0, 1.0)


@pytest.fixture()
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)


def random_param_sets(rng: np.random.Generator, n: int) -> list[pu6.PUParams]:
    """Non-degenerate oscillatory parameter sets with well separated squares."""
    out = []
    while len(out) < n:
        w = np.sort(rng.uniform(0.3, 3.0, size=3))[::-1]
        sq = w * w
        if sq[0] - sq[1] > 0.05 and sq[1] - sq[2] > 0.05:
            out.append(pu6.params_from_frequencies(pu6.frequency_triple(*w)))
    return out


@pytest.fixture()
def param_sets(rng) -> list[pu6.PUParams]:
    return random_param_sets(rng, 20)
