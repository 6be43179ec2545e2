import sys
from pathlib import Path

import pytest

from edgeclust import kernels

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture(params=kernels.BACKENDS)
def backend(request):
    """Run the test once per kernel backend."""
    previous = kernels.use(request.param)
    yield request.param
    kernels.use(previous)
