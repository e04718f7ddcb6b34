import numpy as np
import pytest

from entbound.states import Bipartition


def random_hermitian(d, rng, scale=1.0):
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return scale * 0.5 * (z + z.conj().T)


def random_unitary(d, rng):
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_state(part: Bipartition, rng, rank=None):
    k = part.d if rank is None else rank
    g = rng.standard_normal((part.d, k)) + 1j * rng.standard_normal((part.d, k))
    w = g @ g.conj().T
    return w / np.trace(w).real


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


# one (criterion, passed, detail) entry per acceptance check
ACCEPTANCE: list[tuple[int, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k, ok, detail in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
