import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

DATA = Path(__file__).parent / "data"


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture
def np_rng():
    # test-side randomness only; the package never touches numpy's RNG
    return np.random.default_rng(20240611)
