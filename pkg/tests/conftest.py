import numpy as np
import pytest

from qdynmaps.dynmaps import AMap


def random_complex(rng, shape):
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


def random_hermitian(rng, n):
    x = random_complex(rng, (n, n))
    return x + x.conj().T


def random_tp_amap(rng, d=2, n_kraus=3):
    """A-map of a random CPTP channel, built from normalised Kraus operators."""
    ks = [random_complex(rng, (d, d)) for _ in range(n_kraus)]
    s = sum(k.conj().T @ k for k in ks)
    w, v = np.linalg.eigh(s)
    inv_sqrt = v @ np.diag(w**-0.5) @ v.conj().T
    ks = [k @ inv_sqrt for k in ks]
    return AMap(d, sum(np.kron(k, k.conj()) for k in ks)), ks


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_RESULTS = {}


@pytest.fixture
def criterion(request):
    """Record one acceptance line: call with (number, description, ok)."""

    def record(number, description, ok):
        ACCEPTANCE_RESULTS[number] = (description, bool(ok))
        assert ok, f"criterion {number} failed: {description}"

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        description, ok = ACCEPTANCE_RESULTS[number]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {number}. {description}")
