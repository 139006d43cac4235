import pytest

from semiconvexity import kernels


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    # jit compilation happens here, outside any timed acceptance region
    kernels.warmup()
