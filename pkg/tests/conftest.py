import numpy as np
import pytest


def random_pure(dim, rng):
    psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return psi / np.linalg.norm(psi)


def random_density(dim, rng, rank=None):
    rank = rank or dim
    a = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def random_hermitian(dim, rng):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return a + a.conj().T


def bell_01_10():
    psi = np.zeros(4, dtype=complex)
    psi[[1, 2]] = 1 / np.sqrt(2)
    return np.outer(psi, psi.conj())


@pytest.fixture
def rng():
    return np.random.default_rng(20081023)


ACCEPTANCE_KEY = pytest.StashKey[dict]()


@pytest.fixture
def acceptance(request):
    """Record one pass/fail line per acceptance criterion."""
    lines = request.config.stash.setdefault(ACCEPTANCE_KEY, {})

    def record(number, passed, detail):
        lines[number] = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}"
        print(lines[number])
        return passed

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE_KEY, {})
    if lines:
        terminalreporter.section("acceptance criteria")
        for number in sorted(lines):
            terminalreporter.write_line(lines[number])
