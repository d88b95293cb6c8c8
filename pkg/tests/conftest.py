import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(2024)


def rand_herm(rng, n):
    Z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (Z + Z.conj().T) / 2


def rand_psd(rng, n, rank=None):
    rank = n if rank is None else rank
    Z = rng.normal(size=(n, rank)) + 1j * rng.normal(size=(n, rank))
    return Z @ Z.conj().T


def rand_unit(rng, n):
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return v / np.linalg.norm(v)


_ACCEPTANCE = []


def _record(number, title, ok, detail=""):
    line = f"[{'PASS' if ok else 'FAIL'}] {number:2d}. {title}" + (f" -- {detail}" if detail else "")
    _ACCEPTANCE.append((number, line))
    print(line)
    assert ok, line


@pytest.fixture
def accept():
    return _record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_ACCEPTANCE):
        terminalreporter.write_line(line)
