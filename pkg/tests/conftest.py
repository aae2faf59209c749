import numpy as np
import pytest

from momentlab.experiments import default_lab
from momentlab.schemas import load_config

TEST_SEED = 20240611


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(TEST_SEED)))


@pytest.fixture
def lab():
    return default_lab()


@pytest.fixture
def make_config():
    def factory(command, **kwargs):
        return load_config({"command": command, "seed": TEST_SEED, **kwargs})

    return factory
