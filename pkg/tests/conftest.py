import numpy as np
import pytest

from fracrd.kernels import warm_up


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    # JIT-compile the hot kernels once so timed tests measure the run, not
    # the compiler.
    warm_up()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
