import numpy as np
import pytest

from qreset.models import entangling_generator, noninteracting_generator, up_up_state

_ACCEPTANCE_LINES: list[tuple[str, bool, str]] = []


@pytest.fixture
def h_ni():
    return noninteracting_generator()


@pytest.fixture
def h_ent():
    return entangling_generator()


@pytest.fixture
def psi0():
    return up_up_state()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def criterion():
    """Record one acceptance line; the terminal summary prints them all."""

    def record(name: str, ok: bool, detail: str = "") -> bool:
        _ACCEPTANCE_LINES.append((name, bool(ok), detail))
        print(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
        return bool(ok)

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in _ACCEPTANCE_LINES:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")


def random_hermitian(rng, dim=4, scale=1.0):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return scale * (a + a.conj().T) / 2


def random_density(rng, dim=4, rank=None):
    rank = rank or dim
    a = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real
