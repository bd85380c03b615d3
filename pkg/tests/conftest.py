import numpy as np
import pytest

from entangleswap import _kernels_py

try:
    from entangleswap import _kernels as _kernels_c
except ImportError:  # pragma: no cover
    _kernels_c = None

KERNEL_MODULES = [_kernels_py] + ([_kernels_c] if _kernels_c is not None else [])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=KERNEL_MODULES, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
def kernel_mod(request):
    return request.param


def random_state(rng, n):
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return v / np.linalg.norm(v)


def random_density(rng, n, rank=None):
    rank = rank or n
    g = rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
